"""Joint / generalized spectral radius bounds over a word source.

For a word ``(a_1..a_n)`` the associated product is ``M[a_n] @ ... @ M[a_1]``.
Per length ``n`` we compute

* ``rho_n``         sup of ``||product||**(1/n)``             (upper bound),
* ``rho_hat_n``     sup of ``spectral_radius(product)**(1/n)`` (lower bound),
* ``rho_hat_per_n`` same sup restricted to periodically extendable words.

All words of one length are processed together as a stack of matrices.
Each product is renormalized by its row-sum norm after every factor and
the discarded scale is kept in log space, so long products never overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .blocks import FrequencyConstraint, Rigidity, Word, check_nonempty, classify_rigidity
from .errors import AlphabetMismatch, EmptyConstraint, InvalidMatrix
from .subshift import (
    AllWords,
    ConstrainedWords,
    MarkovWords,
    TransitionGraph,
    WordSource,
    build_graph,
)

CHAIN_SLACK = 1e-9
PRUNE_SLACK = 1e-9


class NormKind(enum.Enum):
    ROWSUM = "rowsum"
    COLSUM = "colsum"
    SPECTRAL = "spectral"


@dataclass(frozen=True, eq=False)
class MatrixSet:
    """``r`` real ``d x d`` matrices stored as an ``(r, d, d)`` array."""

    matrices: np.ndarray

    def __post_init__(self):
        m = _as_stack(self.matrices)
        if m.shape[0] < 1:
            raise InvalidMatrix("need at least one matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def r(self) -> int:
        return self.matrices.shape[0]

    @property
    def d(self) -> int:
        return self.matrices.shape[1]

    def scaled(self, c: float) -> "MatrixSet":
        return MatrixSet(self.matrices * c)

    def product(self, word: Sequence[int]) -> np.ndarray:
        """``M[w_n] @ ... @ M[w_1]`` without renormalization."""
        p = np.eye(self.d)
        for s in word:
            p = self.matrices[s - 1] @ p
        return p

    def log_product(self, word: Sequence[int]) -> tuple[np.ndarray, float]:
        """``(Q, t)`` with the product equal to ``Q * exp(t)``; safe for long words."""
        p, t = np.eye(self.d), 0.0
        for s in word:
            p = self.matrices[s - 1] @ p
            scale = float(np.abs(p).sum(axis=1).max())
            if scale == 0.0:
                return p, -math.inf
            p, t = p / scale, t + math.log(scale)
        return p, t


def _as_stack(m) -> np.ndarray:
    try:
        a = np.array(m, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(str(exc)) from None
    if a.ndim != 3 or a.shape[1] != a.shape[2] or a.shape[1] < 1:
        raise InvalidMatrix(f"expected a stack of square matrices, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise InvalidMatrix("matrix entries must be finite")
    return a


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise InvalidMatrix(f"expected a square matrix, got shape {a.shape}")
    return _as_stack(a[None])


# ---------------------------------------------------------------------------
# stacked primitives


def _spectral_radii(p: np.ndarray) -> np.ndarray:
    """Dominant eigenvalue modulus of each matrix in an ``(N, d, d)`` stack."""
    d = p.shape[-1]
    if len(p) == 0:
        return np.zeros(0)
    if d == 1:
        return np.abs(p[:, 0, 0])
    if d == 2:
        a, b, c, e = p[:, 0, 0], p[:, 0, 1], p[:, 1, 0], p[:, 1, 1]
        half_tr = 0.5 * (a + e)
        disc = (0.5 * (a - e)) ** 2 + b * c
        real = np.abs(half_tr) + np.sqrt(np.maximum(disc, 0.0))
        cplx = np.sqrt(np.maximum(half_tr**2 - disc, 0.0))
        return np.where(disc >= 0, real, cplx)
    return np.abs(np.linalg.eigvals(p)).max(axis=-1)


def _norms(p: np.ndarray, kind: NormKind) -> np.ndarray:
    if len(p) == 0:
        return np.zeros(0)
    if kind is NormKind.ROWSUM:
        return np.abs(p).sum(axis=-1).max(axis=-1)
    if kind is NormKind.COLSUM:
        return np.abs(p).sum(axis=-2).max(axis=-1)
    gram = _left_multiply(np.swapaxes(p, -1, -2), p)
    top = np.linalg.eigvalsh(gram)[:, -1]
    return np.sqrt(np.maximum(top, 0.0))


def _left_multiply(a: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Batched ``a[i] @ p[i]`` with a fixed summation order.

    Each output entry depends only on its own pair of inputs, so results do
    not change with the batch size or position; pruned and exhaustive runs
    therefore agree bit for bit.
    """
    d = p.shape[-1]
    out = a[:, :, 0, None] * p[:, None, 0, :]
    for k in range(1, d):
        out = out + a[:, :, k, None] * p[:, None, k, :]
    return out


def spectral_radius(m) -> float:
    """Modulus of the dominant eigenvalue (closed form for ``d <= 2``)."""
    return float(_spectral_radii(_as_square(m))[0])


def operator_norm(m, kind: NormKind = NormKind.ROWSUM) -> float:
    return float(_norms(_as_square(m), NormKind(kind))[0])


# ---------------------------------------------------------------------------
# level-by-level enumeration


@dataclass
class Level:
    """All surviving words of one length with their renormalized products.

    The true product of row ``i`` is ``prods[i] * exp(log_scale[i])``.
    """

    n: int
    words: np.ndarray
    prods: np.ndarray
    log_scale: np.ndarray

    def __len__(self) -> int:
        return len(self.words)

    def log_values(self, raw: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return (np.log(raw) + self.log_scale) / self.n

    def norm_values(self, kind: NormKind) -> np.ndarray:
        return np.exp(self.log_values(_norms(self.prods, kind)))

    def radius_values(self) -> np.ndarray:
        return np.exp(self.log_values(_spectral_radii(self.prods)))


def _check_alphabet(ms: MatrixSet, src: WordSource) -> None:
    if ms.r != src.alphabet_size:
        raise AlphabetMismatch(f"{ms.r} matrices for an alphabet of size {src.alphabet_size}")


def iter_levels(ms: MatrixSet, src: WordSource, n_max: int, keep=None) -> Iterator[Level]:
    """Yield ``Level`` for ``n = 1..n_max``; words stay in lexicographic order.

    ``keep(level)`` may return a boolean mask of prefixes worth extending.
    Iteration stops early once no words remain.
    """
    _check_alphabet(ms, src)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    aut = src.automaton
    d = ms.d
    states = np.array([aut.start], dtype=np.int64)
    words = np.zeros((1, 0), dtype=np.int64)
    prods = np.eye(d)[None]
    log_scale = np.zeros(1)
    for n in range(1, n_max + 1):
        parent, sym = np.nonzero(aut.delta[states] >= 0)
        states = aut.delta[states[parent], sym]
        words = np.concatenate([words[parent], (sym + 1)[:, None]], axis=1)
        prods = _left_multiply(ms.matrices[sym], prods[parent])
        log_scale = log_scale[parent]
        scale = _norms(prods, NormKind.ROWSUM)
        live = scale > 0
        prods[live] /= scale[live, None, None]
        log_scale = np.where(live, log_scale + np.log(np.where(live, scale, 1.0)), -np.inf)
        level = Level(n, words, prods, log_scale)
        if len(level) == 0:
            return
        yield level
        if keep is not None and n < n_max:
            mask = keep(level)
            states, words, prods, log_scale = states[mask], words[mask], prods[mask], log_scale[mask]


def _argmax(values: np.ndarray, words: np.ndarray) -> tuple[float, Word | None]:
    if len(values) == 0:
        return 0.0, None
    i = int(np.argmax(values))
    return float(values[i]), tuple(int(s) for s in words[i])


# ---------------------------------------------------------------------------
# single-length radii


_QUANTITIES = ("norm", "radius", "radius_per")


def _greedy_word(ms: MatrixSet, src: WordSource, n: int) -> Word | None:
    """Follow the largest row-sum norm at every step (ties: smallest symbol)."""
    aut = src.automaton
    state, word = aut.start, []
    p = np.eye(ms.d)
    for _ in range(n):
        best = None
        for s in range(ms.r):
            nxt = int(aut.delta[state, s])
            if nxt < 0:
                continue
            q = ms.matrices[s] @ p
            nrm = np.abs(q).sum(axis=1).max()
            if best is None or nrm > best[0]:
                best = (nrm, s, nxt, q)
        if best is None:
            return None
        nrm, s, state, p = best
        p = p / nrm if nrm > 0 else p
        word.append(s + 1)
    return tuple(word)


def _word_value(ms: MatrixSet, src: WordSource, word: Word, quantity: str, kind: NormKind) -> float:
    if quantity == "radius_per" and not src.is_periodic(word):
        return 0.0
    q, t = ms.log_product(word)
    raw = _norms(q[None], kind)[0] if quantity == "norm" else _spectral_radii(q[None])[0]
    return _root(raw, t, len(word))


def _root(raw: float, log_scale: float, n: int) -> float:
    if raw <= 0 or log_scale == -math.inf:
        return 0.0
    return math.exp((math.log(raw) + log_scale) / n)


def _sup_at(ms, src, n, quantity, kind=NormKind.ROWSUM, prune=False) -> tuple[float, Word | None]:
    if n < 1:
        raise ValueError("n must be >= 1")
    kind = NormKind(kind)
    keep = None
    if prune:
        keep = _pruner(ms, src, n, quantity, kind)
    last = None
    for level in iter_levels(ms, src, n, keep):
        last = level
    if last is None or last.n != n:
        return 0.0, None
    if quantity == "norm":
        return _argmax(last.norm_values(kind), last.words)
    values = last.radius_values()
    if quantity == "radius_per":
        mask = src.periodic_mask(last.words)
        return _argmax(values[mask], last.words[mask])
    return _argmax(values, last.words)


def _pruner(ms, src, n, quantity, kind):
    """Build a ``keep`` callback that drops prefixes which cannot reach the sup.

    Any completion of a prefix ``P`` by ``k`` more factors satisfies
    ``||S P|| <= ||S|| ||P|| <= (max_s ||M_s||)**k ||P||`` for each
    sub-multiplicative norm, and the spectral radius is below every norm.
    A prefix is dropped only when this bound is below an attained value by
    a relative margin, so ties and the maximizing word always survive.
    """
    kinds = [kind] if quantity == "norm" else list(NormKind)
    word = _greedy_word(ms, src, n)
    if word is None:
        return None
    target = _word_value(ms, src, word, quantity, kind)
    if target <= 0:
        return None
    log_target = math.log(target) + math.log1p(-PRUNE_SLACK)
    log_max = {}
    for k in kinds:
        top = float(_norms(ms.matrices, k).max())
        log_max[k] = math.log(top) if top > 0 else -math.inf

    def keep(level: Level) -> np.ndarray:
        left = n - level.n
        bound = None
        with np.errstate(divide="ignore", invalid="ignore"):
            for k in kinds:
                b = np.log(_norms(level.prods, k)) + level.log_scale + left * log_max[k]
                # left >= 1 here, so an all-zero matrix set gives -inf, never nan
                bound = b if bound is None else np.minimum(bound, b)
        bound = np.where(np.isnan(bound), -np.inf, bound)
        return bound / n >= log_target

    return keep


def rho_n(ms: MatrixSet, src: WordSource, n: int, kind: NormKind = NormKind.ROWSUM, prune: bool = True) -> float:
    """Sup of ``||M[a_n]...M[a_1]||**(1/n)`` over words of length n (0 if none)."""
    return _sup_at(ms, src, n, "norm", kind, prune)[0]


def rho_hat_n(ms: MatrixSet, src: WordSource, n: int, prune: bool = True) -> float:
    return _sup_at(ms, src, n, "radius", prune=prune)[0]


def rho_hat_per_n(ms: MatrixSet, src: WordSource, n: int, prune: bool = True) -> float:
    return _sup_at(ms, src, n, "radius_per", prune=prune)[0]


def sup_with_witness(ms, src, n, quantity="radius_per", kind=NormKind.ROWSUM, prune=True):
    """Like the ``rho_*`` functions but also return the lexicographically least maximizer."""
    if quantity not in _QUANTITIES:
        raise ValueError(f"quantity must be one of {_QUANTITIES}")
    return _sup_at(ms, src, n, quantity, kind, prune)


# ---------------------------------------------------------------------------
# brackets


@dataclass(frozen=True)
class BracketRow:
    n: int
    lower_per: float
    lower: float
    upper: float
    best_lower: float
    best_upper: float

    @property
    def gap(self) -> float:
        return self.best_upper - self.best_lower


@dataclass
class RadiusBracket:
    norm: NormKind
    rows: list[BracketRow] = field(default_factory=list)
    lower_witness: Word | None = None
    upper_witness: Word | None = None

    @property
    def best_lower(self) -> float:
        return self.rows[-1].best_lower if self.rows else 0.0

    @property
    def best_upper(self) -> float:
        return self.rows[-1].best_upper if self.rows else 0.0

    @property
    def gap(self) -> float:
        return self.best_upper - self.best_lower

    @property
    def empty(self) -> bool:
        return not self.rows or self.rows[0].upper == 0.0


def _level_rows(ms, src, n_max, kinds):
    """Per-n sups and witnesses for all quantities, exhaustive; pads with zeros."""
    out = []
    for level in iter_levels(ms, src, n_max):
        radii = level.radius_values()
        mask = src.periodic_mask(level.words)
        per = _argmax(radii[mask], level.words[mask])
        hat = _argmax(radii, level.words)
        ups = {k: _argmax(level.norm_values(k), level.words) for k in kinds}
        out.append((level.n, per, hat, ups))
    for n in range(len(out) + 1, n_max + 1):
        out.append((n, (0.0, None), (0.0, None), {k: (0.0, None) for k in kinds}))
    return out


def bracket(ms: MatrixSet, src: WordSource, n_max: int, kind: NormKind = NormKind.ROWSUM) -> RadiusBracket:
    """Lower/upper bounds for ``n = 1..n_max`` with the running best pair."""
    kind = NormKind(kind)
    out = RadiusBracket(kind)
    best_lo, best_up = -math.inf, math.inf
    for n, per, hat, ups in _level_rows(ms, src, n_max, [kind]):
        up = ups[kind]
        # only periodically extendable words bound the constrained radius from
        # below; rho_hat_n can exceed it when a word has no periodic completion
        if per[0] > best_lo:
            best_lo, out.lower_witness = per
        if up[0] < best_up:
            best_up, out.upper_witness = up
        out.rows.append(BracketRow(n, per[0], hat[0], up[0], best_lo, best_up))
    return out


@dataclass(frozen=True)
class GapRow:
    n: int
    lower_per: float
    lower: float
    upper: dict[NormKind, float]

    @property
    def best_norm_upper(self) -> float:
        return min(self.upper.values())


@dataclass
class GapReport:
    rows: list[GapRow]
    best_lower: float
    best_upper: float
    lower_witness: Word | None
    upper_witness: Word | None
    upper_norm: NormKind | None
    violations: list[str]
    infinite: bool

    @property
    def gap(self) -> float:
        return self.best_upper - self.best_lower

    @property
    def consistent(self) -> bool:
        return not self.violations

    @property
    def empty(self) -> bool:
        return not self.rows or all(v == 0.0 for v in self.rows[0].upper.values())


def verify_berger_wang(ms: MatrixSet, src: WordSource, n_max: int) -> GapReport:
    """Bracket the constrained radius with periodic lower bounds and all three norms.

    ``best_lower`` is the running max of ``rho_hat_per_n``; ``best_upper`` the
    min of ``rho_n`` over n and norms.  Any violation of
    ``rho_hat_per_n <= rho_hat_n <= rho_n`` (slack ``CHAIN_SLACK``) or of
    ``best_lower <= best_upper`` is recorded in ``violations``.
    """
    kinds = list(NormKind)
    rows: list[GapRow] = []
    violations: list[str] = []
    best_lo, lo_word = 0.0, None
    best_up, up_word, up_kind = math.inf, None, None
    infinite = src.is_infinite()
    for n, per, hat, ups in _level_rows(ms, src, n_max, kinds):
        row = GapRow(n, per[0], hat[0], {k: ups[k][0] for k in kinds})
        rows.append(row)
        if row.lower_per > row.lower + CHAIN_SLACK:
            violations.append(f"n={n}: rho_hat_per_n {row.lower_per!r} > rho_hat_n {row.lower!r}")
        for k in kinds:
            if row.lower > row.upper[k] + CHAIN_SLACK:
                violations.append(f"n={n}: rho_hat_n {row.lower!r} > rho_n[{k.value}] {row.upper[k]!r}")
        if per[0] > best_lo:
            best_lo, lo_word = per
        for k in kinds:
            if ups[k][0] < best_up:
                best_up, up_word = ups[k]
                up_kind = k
    if best_up is math.inf:
        best_up = 0.0
    if infinite and best_lo > best_up + CHAIN_SLACK:
        violations.append(f"bracket inverted: lower {best_lo!r} > upper {best_up!r}")
    return GapReport(rows, best_lo, best_up, lo_word, up_word, up_kind, violations, infinite)


# ---------------------------------------------------------------------------
# Markov lift and forced-periodic exact value


@dataclass(frozen=True, eq=False)
class MarkovLift:
    """One-step chain over the block alphabet.

    ``omega[u, v] == 1`` iff the graph has the edge ``u -> v``; that edge
    appends the last symbol of ``v``, so node ``v`` carries ``M[v[-1]]``.
    A lift word ``(v_1..v_n)`` stands for the constrained word ``v_1``
    followed by the last symbols of ``v_2..v_n`` (length ``ell + n - 1``),
    and its product is the product over the last ``n`` of those symbols.
    """

    graph: TransitionGraph
    omega: np.ndarray
    labels: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def source(self) -> MarkovWords:
        # MarkovWords reads omega[next][prev]
        return MarkovWords(tuple(map(tuple, self.omega.T.tolist())))

    def matrices(self, ms: MatrixSet) -> MatrixSet:
        if ms.r != self.graph.constraint.r:
            raise AlphabetMismatch(f"{ms.r} matrices for an alphabet of size {self.graph.constraint.r}")
        return MatrixSet(ms.matrices[np.array(self.labels) - 1])

    def decode(self, lift_word: Sequence[int]) -> Word:
        """Constrained word spelled by a lift word (lift symbols are 1-based node ordinals)."""
        nodes = self.graph.nodes
        first = nodes[lift_word[0] - 1]
        return first + tuple(nodes[v - 1][-1] for v in lift_word[1:])


def build_markov_lift(c: FrequencyConstraint) -> MarkovLift:
    if not check_nonempty(c).nonempty:
        raise EmptyConstraint("constraint admits no block")
    g = build_graph(c)
    return MarkovLift(g, g.adjacency(), tuple(u[-1] for u in g.nodes))


def graph_cycles(g: TransitionGraph) -> list[list[int]]:
    """Cycles of a graph where every node has exactly one successor and one predecessor."""
    seen = [False] * len(g)
    cycles = []
    for start in range(len(g)):
        if seen[start]:
            continue
        cyc, i = [], start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            (i,) = g.successors[i]
        cycles.append(cyc)
    return cycles


def exact_radius_if_forced_periodic(ms: MatrixSet, c: FrequencyConstraint) -> float | None:
    """Exact constrained radius when every admissible sequence is ell-periodic.

    The graph is then a disjoint union of cycles, and the radius is the
    largest ``spectral_radius(cycle product)**(1/cycle length)``.  Returns
    ``None`` for branching constraints.
    """
    rigidity = classify_rigidity(c)
    if rigidity is Rigidity.EMPTY:
        raise EmptyConstraint("constraint admits no block")
    if not rigidity.forced_periodic:
        return None
    if ms.r != c.r:
        raise AlphabetMismatch(f"{ms.r} matrices for an alphabet of size {c.r}")
    g = build_graph(c)
    best = 0.0
    for cyc in graph_cycles(g):
        word = [g.nodes[i][-1] for i in cyc[1:]] + [g.nodes[cyc[0]][-1]]
        q, t = ms.log_product(word)
        best = max(best, _root(float(_spectral_radii(q[None])[0]), t, len(cyc)))
    return best


__all__ = [
    "AllWords",
    "ConstrainedWords",
    "MarkovWords",
    "MatrixSet",
    "NormKind",
    "RadiusBracket",
    "GapReport",
    "MarkovLift",
    "bracket",
    "build_markov_lift",
    "exact_radius_if_forced_periodic",
    "operator_norm",
    "rho_hat_n",
    "rho_hat_per_n",
    "rho_n",
    "spectral_radius",
    "verify_berger_wang",
]
