import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from conftest import constraints
from slidefreq.blocks import FrequencyConstraint, Rigidity, check_nonempty, classify_rigidity, enumerate_blocks
from slidefreq.errors import EmptyConstraint, UnsupportedLength
from slidefreq.subshift import (
    AllWords,
    ConstrainedWords,
    MarkovWords,
    build_graph,
    count_words,
    enumerate_periodic_words,
    enumerate_words,
    export_dot,
    is_admissible_word,
    is_periodically_extendable,
    read_dot,
    sample_sequence,
)

ALPHA_1 = (2, 1, 2, 3, 3, 3, 2, 3, 3, 1, 2, 1, 2, 3, 1, 3, 2, 3, 3, 3, 2, 1, 2, 2, 1, 3, 3, 1, 3, 3, 2)


def small_grid():
    """Every constraint with r <= 3, ell <= 4 and bounds on a tenths grid, deduped by counts."""
    fracs = [f"{k}/10" for k in range(11)]
    pairs = [(a, b) for a, b in itertools.combinations(fracs, 2)]
    seen = set()
    for r in (1, 2, 3):
        for ell in (1, 2, 3, 4):
            for combo in itertools.product(pairs[::7], repeat=r):
                c = FrequencyConstraint(r, ell, [p[0] for p in combo], [p[1] for p in combo])
                key = (r, ell, str(oracles.bounds(c)))
                if key not in seen:
                    seen.add(key)
                    yield c


GRID = list(small_grid())


def test_graph_two_cycle(balanced):
    g = build_graph(balanced)
    assert g.nodes == ((1, 2), (2, 1))
    assert g.edges == [(0, 1), (1, 0)]


def test_graph_empty(tight):
    g = build_graph(tight)
    assert len(g) == 0 and g.edges == []


def test_graph_r3_ell10(ex1):
    g = build_graph(ex1)
    assert len(g) == 9870
    assert not g.dead_ends


@settings(max_examples=100)
@given(constraints(max_r=3, max_ell=5))
def test_graph_edges_match_brute_force(c):
    g = build_graph(c)
    blocks = oracles.brute_blocks(c)
    assert list(g.nodes) == blocks
    expected = {(u, v) for u in blocks for v in blocks if u[1:] == v[:-1]}
    got = {(g.nodes[i], g.nodes[j]) for i, j in g.edges}
    assert got == expected
    for u, v in got:
        assert oracles.block_ok(u, c) and oracles.block_ok(v, c)


def test_is_admissible_word_examples(ex1, balanced):
    assert is_admissible_word(ALPHA_1[:15], ex1)
    assert is_admissible_word((2, 1, 2), ex1)
    assert not is_admissible_word((1, 1, 1, 1), balanced)


def test_short_word_extension_uses_budget(ex1):
    # five 1s already exceed the upper count 3 for symbol 1
    assert not is_admissible_word((1, 1, 1, 1), ex1)
    assert is_admissible_word((1, 1, 1), ex1)


def test_periodic_extendability_examples(balanced, ex1):
    assert is_periodically_extendable((1, 2), balanced)
    assert not is_periodically_extendable((1, 2, 1), balanced)
    for u in enumerate_blocks(ex1)[::500]:
        assert is_periodically_extendable(u, ex1)


def test_enumerate_words_examples(balanced, ex1):
    assert list(enumerate_words(balanced, 4)) == [(1, 2, 1, 2), (2, 1, 2, 1)]
    assert list(enumerate_words(balanced, 1)) == [(1,), (2,)]
    assert sum(1 for _ in enumerate_words(ex1, 10)) == 9870


def test_enumerate_periodic_examples(balanced):
    assert list(enumerate_periodic_words(balanced, 2)) == [(1, 2), (2, 1)]
    assert list(enumerate_periodic_words(balanced, 3)) == []


@pytest.mark.parametrize("c", GRID[::3])
def test_words_match_brute_force(c):
    for n in range(1, 7):
        words = list(enumerate_words(c, n))
        assert words == oracles.brute_words(c, n)
        per = list(enumerate_periodic_words(c, n))
        assert per == [w for w in words if oracles.periodic_ok(w, c)]


@pytest.mark.parametrize("c", GRID)
def test_periodic_subset_and_path_counts(c):
    for n in range(1, 9):
        words = set(enumerate_words(c, n))
        assert set(enumerate_periodic_words(c, n)) <= words
        if n >= c.ell:
            assert count_words(c, n) == len(words)
    if check_nonempty(c).nonempty:
        assert list(enumerate_periodic_words(c, c.ell)) == enumerate_blocks(c)


def test_count_words_examples(balanced, tight):
    assert count_words(balanced, 4) == 2
    assert count_words(balanced, 2) == 2
    assert count_words(tight, 12) == 0
    with pytest.raises(UnsupportedLength):
        count_words(balanced, 1)


def test_count_words_big_integers():
    c = FrequencyConstraint(2, 1, ("0", "0"), ("1", "1"))
    assert count_words(c, 300) == 2**300


@settings(max_examples=80)
@given(constraints(max_r=3, max_ell=5), st.integers(0, 10_000), st.integers(1, 14))
def test_shift_invariance_and_subadditivity(c, seed, extra):
    assume(check_nonempty(c).nonempty)
    w = sample_sequence(c, c.ell + extra, seed)
    assert is_admissible_word(w, c)
    assert is_admissible_word(w[1:], c)
    for m in range(1, len(w)):
        assert is_admissible_word(w[:m], c)
        assert is_admissible_word(w[m:], c)


@pytest.mark.parametrize("c", GRID)
def test_rigidity_shapes_graph(c):
    kind = classify_rigidity(c)
    g = build_graph(c)
    if kind.forced_periodic:
        assert all(g.out_degree(i) == 1 for i in range(len(g)))
        for i, u in enumerate(g.nodes):
            (j,) = g.successors[i]
            assert g.nodes[j] == u[1:] + u[:1]
    if kind is Rigidity.BRANCHING:
        adj = g.adjacency().astype(bool)
        reach = adj.copy()
        for _ in range(len(g)):
            reach = reach | (reach.astype(int) @ adj.astype(int) > 0)
        assert any(g.out_degree(i) >= 2 and reach[i, i] for i in range(len(g)))


def test_sample_examples(ex1, balanced, tight):
    w = sample_sequence(ex1, 31, seed=1)
    assert len(w) == 31
    assert all(oracles.block_ok(w[k : k + 10], ex1) for k in range(22))
    assert sample_sequence(ex1, 31, seed=1) == w
    assert sample_sequence(balanced, 6, seed=5) in ((1, 2, 1, 2, 1, 2), (2, 1, 2, 1, 2, 1))
    with pytest.raises(EmptyConstraint):
        sample_sequence(tight, 5, seed=0)


def test_sample_reaches_both_words(balanced):
    seen = {sample_sequence(balanced, 4, seed=s) for s in range(20)}
    assert seen == {(1, 2, 1, 2), (2, 1, 2, 1)}


def test_dot_round_trip(balanced, ex1, tight):
    text = export_dot(build_graph(balanced))
    labels, edges = read_dot(text)
    assert labels == ["12", "21"]
    assert edges == [("12", "21"), ("21", "12")]

    assert export_dot(build_graph(tight)) == "digraph subshift {\n}\n"

    c = FrequencyConstraint(3, 3, ("0.3",) * 3, ("0.4",) * 3)
    g = build_graph(c)
    labels, edges = read_dot(export_dot(g))
    assert labels == ["".join(map(str, u)) for u in g.nodes]
    assert set(edges) == {("".join(map(str, g.nodes[i])), "".join(map(str, g.nodes[j]))) for i, j in g.edges}


def test_full_shift_graph():
    g = build_graph(FrequencyConstraint(3, 1, ("0",) * 3, ("1",) * 3))
    assert len(g) == 3 and g.n_edges == 9


# -- word sources ---------------------------------------------------------


@pytest.mark.parametrize(
    "omega",
    [
        [[0, 1], [1, 0]],
        [[1, 0], [0, 1]],
        [[1, 1], [0, 0]],
        [[0, 0, 1], [1, 0, 0], [1, 1, 0]],
        [[1, 0, 0], [1, 0, 0], [0, 1, 0]],
    ],
)
def test_markov_words_match_brute_force(omega):
    src = MarkovWords(omega)
    for n in range(1, 6):
        words = list(src.words(n))
        assert words == oracles.brute_markov_words(omega, n)
        if words:
            mask = src.periodic_mask(np.array(words))
            assert [w for w, ok in zip(words, mask) if ok] == oracles.brute_markov_words(omega, n, periodic=True)


def test_markov_infinite_detection():
    assert MarkovWords([[0, 1], [1, 0]]).is_infinite()
    # 1 -> 2 -> 3 and nothing after 3
    assert not MarkovWords([[0, 0, 0], [1, 0, 0], [0, 1, 0]]).is_infinite()
    assert list(MarkovWords([[0, 0, 0], [1, 0, 0], [0, 1, 0]]).words(3)) == []


def test_markov_rejects_bad_omega():
    with pytest.raises(ValueError):
        MarkovWords([[0, 2], [1, 0]])
    with pytest.raises(ValueError):
        MarkovWords([[0, 1, 1], [1, 0, 1]])


def test_all_words_source():
    assert list(AllWords(2).words(2)) == [(1, 1), (1, 2), (2, 1), (2, 2)]


@pytest.mark.parametrize("c", GRID[::2])
def test_constrained_automaton_language(c):
    src = ConstrainedWords(c)
    from slidefreq.subshift import _automaton_words

    for n in range(1, 7):
        words = list(_automaton_words(src.automaton, n))
        assert words == list(enumerate_words(c, n))
        if words:
            mask = src.periodic_mask(np.array(words))
            assert list(mask) == [is_periodically_extendable(w, c) for w in words]
