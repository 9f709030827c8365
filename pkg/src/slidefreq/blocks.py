"""Exact combinatorics of admissible ell-blocks.

A block is a word of length ``ell`` over the symbols ``1..r``.  It is
admissible when every symbol count lies in ``[ceil(p_lo * ell), floor(p_hi * ell)]``.
All bound arithmetic is done on :class:`fractions.Fraction` so boundary
cases such as ``0.3 * 10`` are decided exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import ConstraintError, InvalidWord, WrongLength

Word = tuple[int, ...]


def to_fraction(value) -> Fraction:
    """Parse a frequency into an exact rational.

    Strings are read as decimals or ``p/q`` ratios.  Floats go through their
    shortest ``repr`` so that ``0.3`` means 3/10, not the nearest binary
    double.
    """
    if isinstance(value, bool):
        raise ConstraintError(f"not a frequency: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ConstraintError(f"not a frequency: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ConstraintError(f"cannot parse frequency {value!r}") from None
    raise ConstraintError(f"unsupported frequency type {type(value).__name__}")


@dataclass(frozen=True)
class FrequencyConstraint:
    """Lower/upper relative-frequency bounds for every sliding ell-window.

    ``target`` is carried for documentation only; when given it must sit
    strictly inside each ``(lower, upper)`` interval.
    """

    r: int
    ell: int
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]
    target: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise ConstraintError(f"alphabet size must be >= 1, got {self.r!r}")
        if not isinstance(self.ell, int) or self.ell < 1:
            raise ConstraintError(f"window length must be >= 1, got {self.ell!r}")
        lower = tuple(to_fraction(x) for x in self.lower)
        upper = tuple(to_fraction(x) for x in self.upper)
        if len(lower) != self.r or len(upper) != self.r:
            raise ConstraintError(
                f"expected {self.r} lower and upper bounds, got {len(lower)} and {len(upper)}"
            )
        for i, (lo, hi) in enumerate(zip(lower, upper), start=1):
            if not 0 <= lo < hi <= 1:
                raise ConstraintError(f"need 0 <= lower < upper <= 1 at symbol {i}: {lo}, {hi}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.target is not None:
            target = tuple(to_fraction(x) for x in self.target)
            if len(target) != self.r:
                raise ConstraintError(f"expected {self.r} target frequencies, got {len(target)}")
            for i, (lo, p, hi) in enumerate(zip(lower, target, upper), start=1):
                if not lo < p < hi:
                    raise ConstraintError(f"target {p} not strictly inside ({lo}, {hi}) at symbol {i}")
            object.__setattr__(self, "target", target)

    @classmethod
    def around(cls, target: Sequence, delta, ell: int) -> "FrequencyConstraint":
        """Bounds ``target -/+ delta``, clipped to [0, 1]."""
        p = [to_fraction(x) for x in target]
        dlt = to_fraction(delta)
        lower = [max(Fraction(0), x - dlt) for x in p]
        upper = [min(Fraction(1), x + dlt) for x in p]
        return cls(len(p), ell, tuple(lower), tuple(upper), tuple(p))

    @classmethod
    def unconstrained(cls, r: int, ell: int) -> "FrequencyConstraint":
        return cls(r, ell, (Fraction(0),) * r, (Fraction(1),) * r)


@dataclass(frozen=True)
class IntegerBounds:
    lo: tuple[int, ...]
    hi: tuple[int, ...]


@dataclass(frozen=True)
class NonEmptyReport:
    """Verdicts of the two non-emptiness conditions for a constraint."""

    bounds: IntegerBounds
    ell: int
    per_symbol: tuple[bool, ...]
    sum_lo: int
    sum_hi: int

    @property
    def per_symbol_ok(self) -> bool:
        return all(self.per_symbol)

    @property
    def failing_symbols(self) -> tuple[int, ...]:
        return tuple(i for i, ok in enumerate(self.per_symbol, start=1) if not ok)

    @property
    def sum_ok(self) -> bool:
        return self.sum_lo <= self.ell <= self.sum_hi

    @property
    def nonempty(self) -> bool:
        return self.per_symbol_ok and self.sum_ok


class Rigidity(enum.Enum):
    EMPTY = "empty"
    # the window count vector is pinned because a sum bound is tight
    PERIODIC_TIGHT_SUM = "forced-periodic (tight sum)"
    # all but one symbol count is pinned
    PERIODIC_ONE_FREE = "forced-periodic (one free symbol)"
    BRANCHING = "branching"

    @property
    def forced_periodic(self) -> bool:
        return self in (Rigidity.PERIODIC_TIGHT_SUM, Rigidity.PERIODIC_ONE_FREE)


@lru_cache(maxsize=None)
def count_bounds(c: FrequencyConstraint) -> IntegerBounds:
    lo = tuple(math.ceil(p * c.ell) for p in c.lower)
    hi = tuple(math.floor(p * c.ell) for p in c.upper)
    return IntegerBounds(lo, hi)


def _check_symbols(w: Sequence[int], r: int) -> None:
    for s in w:
        if not (isinstance(s, int) and 1 <= s <= r):
            raise InvalidWord(f"symbol {s!r} outside 1..{r}")


def symbol_counts(w: Sequence[int], r: int) -> list[int]:
    counts = [0] * r
    for s in w:
        counts[s - 1] += 1
    return counts


def counts_within(counts: Sequence[int], bounds: IntegerBounds) -> bool:
    return all(lo <= k <= hi for k, lo, hi in zip(counts, bounds.lo, bounds.hi))


def is_admissible_block(w: Sequence[int], c: FrequencyConstraint) -> bool:
    if len(w) != c.ell:
        raise WrongLength(f"block has length {len(w)}, expected {c.ell}")
    _check_symbols(w, c.r)
    return counts_within(symbol_counts(w, c.r), count_bounds(c))


def prefix_feasible(counts: Sequence[int], length: int, c: FrequencyConstraint) -> bool:
    """Can a prefix with these symbol counts be completed to an admissible block?

    A completion exists iff some integer vector k with max(lo, counts) <= k <= hi
    sums to ell; the reachable sums form the contiguous range checked here.
    """
    b = count_bounds(c)
    need = 0
    room = 0
    for k, lo, hi in zip(counts, b.lo, b.hi):
        floor_k = max(lo, k)
        if floor_k > hi:
            return False
        need += floor_k
        room += hi
    return need <= c.ell <= room and length <= c.ell


def check_nonempty(c: FrequencyConstraint) -> NonEmptyReport:
    b = count_bounds(c)
    return NonEmptyReport(
        bounds=b,
        ell=c.ell,
        per_symbol=tuple(lo <= hi for lo, hi in zip(b.lo, b.hi)),
        sum_lo=sum(b.lo),
        sum_hi=sum(b.hi),
    )


def classify_rigidity(c: FrequencyConstraint) -> Rigidity:
    report = check_nonempty(c)
    if not report.nonempty:
        return Rigidity.EMPTY
    if report.sum_lo == c.ell or report.sum_hi == c.ell:
        return Rigidity.PERIODIC_TIGHT_SUM
    b = report.bounds
    free = sum(1 for lo, hi in zip(b.lo, b.hi) if lo < hi)
    # strict sums force at least one free symbol
    if free <= 1:
        return Rigidity.PERIODIC_ONE_FREE
    return Rigidity.BRANCHING


def admissible_count_vectors(c: FrequencyConstraint) -> list[tuple[int, ...]]:
    b = count_bounds(c)
    r = c.r
    # suffix sums of lo/hi for pruning the remaining budget
    lo_tail = [0] * (r + 1)
    hi_tail = [0] * (r + 1)
    for i in range(r - 1, -1, -1):
        lo_tail[i] = lo_tail[i + 1] + b.lo[i]
        hi_tail[i] = hi_tail[i + 1] + b.hi[i]

    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, acc: list[int]) -> None:
        if i == r:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for k in range(b.lo[i], b.hi[i] + 1):
            rest = remaining - k
            if lo_tail[i + 1] <= rest <= hi_tail[i + 1]:
                acc.append(k)
                rec(i + 1, rest, acc)
                acc.pop()

    rec(0, c.ell, [])
    return out


def iter_blocks(c: FrequencyConstraint) -> Iterator[Word]:
    """Admissible blocks in lexicographic order (depth-first with budget pruning)."""
    if not check_nonempty(c).nonempty:
        return
    counts = [0] * c.r
    prefix: list[int] = []

    def rec() -> Iterator[Word]:
        if len(prefix) == c.ell:
            yield tuple(prefix)
            return
        for s in range(1, c.r + 1):
            counts[s - 1] += 1
            if prefix_feasible(counts, len(prefix) + 1, c):
                prefix.append(s)
                yield from rec()
                prefix.pop()
            counts[s - 1] -= 1

    yield from rec()


@lru_cache(maxsize=64)
def _blocks_cached(c: FrequencyConstraint) -> tuple[Word, ...]:
    return tuple(iter_blocks(c))


def enumerate_blocks(c: FrequencyConstraint) -> list[Word]:
    return list(_blocks_cached(c))
