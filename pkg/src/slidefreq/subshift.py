"""The ell-step Markov chain of admissible blocks, and finite-word sources.

Sequences whose every ell-window is admissible are exactly the walks in a
graph whose nodes are admissible blocks and whose edges append one symbol
(dropping the first).  This module builds that graph and the three word
sources used by the spectral code: all words, words driven by a 0/1
transition matrix, and frequency-constrained words.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence, Union

import numpy as np

from .blocks import (
    FrequencyConstraint,
    Word,
    _check_symbols,
    check_nonempty,
    count_bounds,
    counts_within,
    enumerate_blocks,
    prefix_feasible,
    symbol_counts,
)
from .errors import DeadEnd, EmptyConstraint, UnsupportedLength


@dataclass(frozen=True, eq=False)
class TransitionGraph:
    """Admissible blocks as nodes; ``u -> v`` when ``v == u[1:] + (s,)``.

    ``successors[i]`` lists node ordinals in increasing order, which is also
    increasing order of the appended symbol.
    """

    constraint: FrequencyConstraint
    nodes: tuple[Word, ...]
    successors: tuple[tuple[int, ...], ...]
    node_index: dict[Word, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, succ in enumerate(self.successors) for j in succ]

    @property
    def n_edges(self) -> int:
        return sum(len(s) for s in self.successors)

    def out_degree(self, i: int) -> int:
        return len(self.successors[i])

    @property
    def dead_ends(self) -> tuple[int, ...]:
        """Nodes without successors.

        Rotating an admissible block keeps it admissible, so for these
        constraints the tuple is always empty; it is kept as a sanity flag.
        """
        return tuple(i for i, s in enumerate(self.successors) if not s)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((len(self.nodes), len(self.nodes)), dtype=np.int8)
        for i, j in self.edges:
            a[i, j] = 1
        return a


@lru_cache(maxsize=32)
def build_graph(c: FrequencyConstraint) -> TransitionGraph:
    nodes = tuple(enumerate_blocks(c))
    index = {u: i for i, u in enumerate(nodes)}
    succ = []
    for u in nodes:
        tail = u[1:]
        succ.append(tuple(index[v] for s in range(1, c.r + 1) if (v := tail + (s,)) in index))
    return TransitionGraph(c, nodes, tuple(succ), index)


# ---------------------------------------------------------------------------
# admissibility of finite words


def is_admissible_word(w: Sequence[int], c: FrequencyConstraint) -> bool:
    w = tuple(w)
    _check_symbols(w, c.r)
    if len(w) < c.ell:
        return prefix_feasible(symbol_counts(w, c.r), len(w), c)
    return _all_windows_ok(w, c)


def _all_windows_ok(w: Sequence[int], c: FrequencyConstraint) -> bool:
    b = count_bounds(c)
    counts = symbol_counts(w[: c.ell], c.r)
    if not counts_within(counts, b):
        return False
    for k in range(c.ell, len(w)):
        counts[w[k] - 1] += 1
        counts[w[k - c.ell] - 1] -= 1
        if not counts_within(counts, b):
            return False
    return True


def is_periodically_extendable(w: Sequence[int], c: FrequencyConstraint) -> bool:
    """Does repeating ``w`` forever keep every ell-window admissible?"""
    w = tuple(w)
    if not w:
        raise ValueError("empty word")
    _check_symbols(w, c.r)
    n = len(w)
    cyclic = tuple(w[k % n] for k in range(n + c.ell - 1))
    return _all_windows_ok(cyclic, c)


# ---------------------------------------------------------------------------
# enumeration


def _prefixes(c: FrequencyConstraint, n: int) -> Iterator[Word]:
    counts = [0] * c.r
    prefix: list[int] = []

    def rec() -> Iterator[Word]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for s in range(1, c.r + 1):
            counts[s - 1] += 1
            if prefix_feasible(counts, len(prefix) + 1, c):
                prefix.append(s)
                yield from rec()
                prefix.pop()
            counts[s - 1] -= 1

    if check_nonempty(c).nonempty:
        yield from rec()


def _paths(g: TransitionGraph, steps: int) -> Iterator[Word]:
    def rec(i: int, word: list[int], left: int) -> Iterator[Word]:
        if left == 0:
            yield tuple(word)
            return
        for j in g.successors[i]:
            word.append(g.nodes[j][-1])
            yield from rec(j, word, left - 1)
            word.pop()

    for i, u in enumerate(g.nodes):
        yield from rec(i, list(u), steps)


def enumerate_words(c: FrequencyConstraint, n: int) -> Iterator[Word]:
    """Admissible words of length ``n`` in lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n < c.ell:
        return _prefixes(c, n)
    return _paths(build_graph(c), n - c.ell)


def enumerate_periodic_words(c: FrequencyConstraint, n: int) -> Iterator[Word]:
    return (w for w in enumerate_words(c, n) if is_periodically_extendable(w, c))


def count_words(c: FrequencyConstraint, n: int) -> int:
    """Number of admissible words of length ``n >= ell`` by exact path counting."""
    if n < c.ell:
        raise UnsupportedLength(f"path counting needs n >= ell = {c.ell}, got {n}")
    g = build_graph(c)
    counts = [1] * len(g)
    for _ in range(n - c.ell):
        nxt = [0] * len(g)
        for i, succ in enumerate(g.successors):
            if counts[i]:
                for j in succ:
                    nxt[j] += counts[i]
        counts = nxt
    return sum(counts)


def _allowed_next(word: list[int], c: FrequencyConstraint) -> list[int]:
    b = count_bounds(c)
    out = []
    if len(word) + 1 <= c.ell:
        counts = symbol_counts(word, c.r)
        for s in range(1, c.r + 1):
            counts[s - 1] += 1
            if prefix_feasible(counts, len(word) + 1, c):
                out.append(s)
            counts[s - 1] -= 1
        return out
    counts = symbol_counts(word[len(word) - c.ell + 1 :], c.r)
    for s in range(1, c.r + 1):
        counts[s - 1] += 1
        if counts_within(counts, b):
            out.append(s)
        counts[s - 1] -= 1
    return out


def sample_sequence(c: FrequencyConstraint, n: int, seed: int) -> Word:
    """Random admissible word of length ``n``, reproducible per seed.

    Each step picks uniformly among the admissible next symbols and
    backtracks if it gets stuck.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not check_nonempty(c).nonempty:
        raise EmptyConstraint("constraint admits no block")
    rng = random.Random(seed)
    word: list[int] = []
    stack: list[list[int]] = []
    cands = _allowed_next(word, c)
    while len(word) < n:
        if not cands:
            if not stack:
                raise DeadEnd(f"no admissible word of length {n}")
            word.pop()
            cands = stack.pop()
            continue
        s = cands.pop(rng.randrange(len(cands)))
        stack.append(cands)
        word.append(s)
        cands = _allowed_next(word, c)
    return tuple(word)


# ---------------------------------------------------------------------------
# DOT export


def _label(block: Word) -> str:
    return "".join(str(s) for s in block)


def export_dot(g: TransitionGraph) -> str:
    lines = ["digraph subshift {"]
    for i, u in enumerate(g.nodes):
        lines.append(f'  n{i} [label="{_label(u)}"];')
    for i, j in g.edges:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_NODE_RE = re.compile(r'^\s*(n\d+)\s*\[label="([^"]*)"\];\s*$')
_EDGE_RE = re.compile(r"^\s*(n\d+)\s*->\s*(n\d+);\s*$")


def read_dot(text: str) -> tuple[list[str], list[tuple[str, str]]]:
    """Parse text written by :func:`export_dot` into (labels, labelled edges)."""
    names: dict[str, str] = {}
    edges = []
    for line in text.splitlines():
        if m := _NODE_RE.match(line):
            names[m.group(1)] = m.group(2)
        elif m := _EDGE_RE.match(line):
            edges.append((m.group(1), m.group(2)))
    return list(names.values()), [(names[a], names[b]) for a, b in edges]


# ---------------------------------------------------------------------------
# word sources


@dataclass(frozen=True)
class Automaton:
    """Deterministic prefix automaton; ``delta[state, s-1] == -1`` forbids symbol s."""

    start: int
    delta: np.ndarray


def _automaton_words(aut: Automaton, n: int) -> Iterator[Word]:
    r = aut.delta.shape[1]

    def rec(state: int, word: list[int]) -> Iterator[Word]:
        if len(word) == n:
            yield tuple(word)
            return
        for s in range(r):
            nxt = int(aut.delta[state, s])
            if nxt >= 0:
                word.append(s + 1)
                yield from rec(nxt, word)
                word.pop()

    return rec(aut.start, [])


@dataclass(frozen=True)
class AllWords:
    """Every word over ``1..r``."""

    r: int

    @property
    def alphabet_size(self) -> int:
        return self.r

    @cached_property
    def automaton(self) -> Automaton:
        return Automaton(0, np.zeros((1, self.r), dtype=np.int64))

    def words(self, n: int) -> Iterator[Word]:
        return _automaton_words(self.automaton, n)

    def periodic_mask(self, words: np.ndarray) -> np.ndarray:
        return np.ones(len(words), dtype=bool)

    def is_periodic(self, w: Sequence[int]) -> bool:
        return True

    def is_infinite(self) -> bool:
        return True


@dataclass(frozen=True)
class MarkovWords:
    """Words driven by a 0/1 matrix of allowed transitions.

    Follows the convention where ``omega[b][a] == 1`` lets symbol ``a`` be
    followed by ``b``: a word ``(a_1..a_n)`` is admissible when
    ``omega[a_{j+1}][a_j] == 1`` for all j and the last symbol has some
    successor.  It is periodically extendable when also
    ``omega[a_1][a_n] == 1``.
    """

    omega: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        om = tuple(tuple(int(x) for x in row) for row in np.asarray(self.omega).tolist())
        if not om or any(len(row) != len(om) for row in om):
            raise ValueError("omega must be a non-empty square matrix")
        if any(x not in (0, 1) for row in om for x in row):
            raise ValueError("omega entries must be 0 or 1")
        object.__setattr__(self, "omega", om)

    @property
    def alphabet_size(self) -> int:
        return len(self.omega)

    @cached_property
    def _array(self) -> np.ndarray:
        return np.array(self.omega, dtype=bool)

    @cached_property
    def automaton(self) -> Automaton:
        om = self._array
        r = len(om)
        has_next = om.any(axis=0)
        delta = np.full((r + 1, r), -1, dtype=np.int64)
        for s in range(r):
            if has_next[s]:
                delta[r, s] = s
                for a in range(r):
                    if om[s, a]:
                        delta[a, s] = s
        return Automaton(r, delta)

    def words(self, n: int) -> Iterator[Word]:
        return _automaton_words(self.automaton, n)

    def periodic_mask(self, words: np.ndarray) -> np.ndarray:
        return self._array[words[:, 0] - 1, words[:, -1] - 1]

    def is_periodic(self, w: Sequence[int]) -> bool:
        return bool(self.omega[w[0] - 1][w[-1] - 1])

    def is_infinite(self) -> bool:
        alive = np.ones(self.alphabet_size, dtype=bool)
        while True:
            # a symbol survives if it can move to a surviving symbol
            keep = alive & (self._array & alive[:, None]).any(axis=0)
            if (keep == alive).all():
                return bool(alive.any())
            alive = keep


@lru_cache(maxsize=32)
def _constrained_automaton(c: FrequencyConstraint) -> Automaton:
    blocks = set(enumerate_blocks(c))
    index: dict[Word, int] = {(): 0}
    order: list[Word] = [()]
    rows: list[list[int]] = []
    k = 0
    while k < len(order):
        key = order[k]
        row = [-1] * c.r
        for s in range(1, c.r + 1):
            if len(key) < c.ell:
                nk = key + (s,)
                ok = prefix_feasible(symbol_counts(nk, c.r), len(nk), c)
            else:
                nk = key[1:] + (s,)
                ok = nk in blocks
            if ok:
                if nk not in index:
                    index[nk] = len(order)
                    order.append(nk)
                row[s - 1] = index[nk]
        rows.append(row)
        k += 1
    if not blocks:
        rows = [[-1] * c.r]
    return Automaton(0, np.array(rows, dtype=np.int64))


@dataclass(frozen=True)
class ConstrainedWords:
    """Words all of whose ell-windows are admissible (shorter ones: extendable)."""

    constraint: FrequencyConstraint

    @property
    def alphabet_size(self) -> int:
        return self.constraint.r

    @property
    def automaton(self) -> Automaton:
        return _constrained_automaton(self.constraint)

    def words(self, n: int) -> Iterator[Word]:
        return enumerate_words(self.constraint, n)

    def periodic_mask(self, words: np.ndarray) -> np.ndarray:
        c = self.constraint
        b = count_bounds(c)
        n_words, n = words.shape
        if n_words == 0:
            return np.zeros(0, dtype=bool)
        cyclic = words[:, np.arange(n + c.ell - 1) % n]
        onehot = cyclic[:, :, None] == np.arange(1, c.r + 1)
        cum = np.zeros((n_words, cyclic.shape[1] + 1, c.r), dtype=np.int64)
        np.cumsum(onehot, axis=1, out=cum[:, 1:])
        win = cum[:, c.ell : c.ell + n] - cum[:, :n]
        ok = (win >= np.array(b.lo)) & (win <= np.array(b.hi))
        return ok.all(axis=(1, 2))

    def is_periodic(self, w: Sequence[int]) -> bool:
        return is_periodically_extendable(w, self.constraint)

    def is_infinite(self) -> bool:
        return check_nonempty(self.constraint).nonempty


WordSource = Union[AllWords, MarkovWords, ConstrainedWords]
