from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import constraints
from slidefreq.blocks import (
    FrequencyConstraint,
    Rigidity,
    admissible_count_vectors,
    check_nonempty,
    classify_rigidity,
    count_bounds,
    enumerate_blocks,
    is_admissible_block,
    prefix_feasible,
    symbol_counts,
    to_fraction,
)
from slidefreq.errors import ConstraintError, InvalidWord, WrongLength


def test_count_bounds_r3_ell10(ex1):
    b = count_bounds(ex1)
    assert b.lo == (2, 3, 4)
    assert b.hi == (3, 4, 5)


def test_count_bounds_tight(tight):
    b = count_bounds(tight)
    assert b.lo == (3, 4, 5)
    assert b.hi == (2, 3, 4)


def test_count_bounds_vacuous():
    c = FrequencyConstraint(2, 5, ("0", "0"), ("1", "1"))
    assert count_bounds(c).lo == (0, 0)
    assert count_bounds(c).hi == (5, 5)


@pytest.mark.parametrize(
    "lower, upper, ell, lo, hi",
    [
        # 0.7 * 10 is 7.000000000000001 in binary floating point
        ("0.7", "0.9", 10, 7, 9),
        ("0.1", "0.3", 10, 1, 3),
        ("0.29", "0.3", 10, 3, 3),
        ("1/3", "2/3", 3, 1, 2),
        ("0.6", "0.7", 10, 6, 7),
    ],
)
def test_count_bounds_exact_at_integer_products(lower, upper, ell, lo, hi):
    c = FrequencyConstraint(1, ell, (lower,), (upper,))
    assert count_bounds(c) == type(count_bounds(c))((lo,), (hi,))


def test_float_input_goes_through_decimal_repr():
    assert to_fraction(0.7) == Fraction(7, 10)
    assert to_fraction("13/100") == Fraction(13, 100)


@given(constraints(max_r=4, max_ell=40, max_den=1000))
def test_count_bounds_match_integer_oracle(c):
    lo, hi = oracles.bounds(c)
    assert count_bounds(c).lo == tuple(lo)
    assert count_bounds(c).hi == tuple(hi)


@pytest.mark.parametrize(
    "lower, upper",
    [
        (("0.5", "0"), ("0.4", "1")),
        (("-0.1", "0"), ("0.5", "1")),
        (("0", "0"), ("1.2", "1")),
        (("0",), ("1",)),
    ],
)
def test_invalid_bounds_rejected(lower, upper):
    with pytest.raises(ConstraintError):
        FrequencyConstraint(2, 3, lower, upper)


def test_target_must_be_strictly_inside():
    with pytest.raises(ConstraintError):
        FrequencyConstraint(2, 3, ("0.1", "0.2"), ("0.5", "0.9"), ("0.1", "0.5"))
    c = FrequencyConstraint(2, 3, ("0.1", "0.2"), ("0.5", "0.9"), ("0.3", "0.7"))
    assert c.target == (Fraction(3, 10), Fraction(7, 10))


def test_admissible_block_examples(ex1, mid):
    assert is_admissible_block((2, 1, 2, 3, 3, 3, 2, 3, 3, 1), ex1)
    assert not is_admissible_block((1,) * 10, ex1)
    assert enumerate_blocks(mid) == []
    with pytest.raises(WrongLength):
        is_admissible_block((1, 2), ex1)
    with pytest.raises(InvalidWord):
        is_admissible_block((4,) * 10, ex1)


def test_check_nonempty_examples(ex1, tight, mid):
    rep = check_nonempty(ex1)
    assert rep.nonempty and (rep.sum_lo, rep.sum_hi) == (9, 12)

    rep = check_nonempty(tight)
    assert not rep.nonempty
    assert rep.failing_symbols == (1, 2, 3)

    rep = check_nonempty(mid)
    assert rep.per_symbol_ok
    assert not rep.sum_ok and rep.sum_hi == 9


def test_rigidity_examples(ex1, tight):
    c = FrequencyConstraint(2, 4, ("0.4", "0.4"), ("0.6", "0.6"))
    assert count_bounds(c).lo == (2, 2)
    assert classify_rigidity(c) is Rigidity.PERIODIC_TIGHT_SUM
    assert classify_rigidity(ex1) is Rigidity.BRANCHING
    assert classify_rigidity(tight) is Rigidity.EMPTY


def test_rigidity_one_free_symbol():
    # lo = hi for symbols 1, 2; symbol 3 free in 3..6; sums 6 < 8 < 9
    c = FrequencyConstraint(3, 8, ("0.125", "0.25", "0.375"), ("0.2", "0.3", "0.8"))
    b = count_bounds(c)
    assert b.lo == (1, 2, 3) and b.hi == (1, 2, 6)
    assert classify_rigidity(c) is Rigidity.PERIODIC_ONE_FREE


def test_count_vectors_examples(ex1, mid):
    assert admissible_count_vectors(ex1) == [(2, 3, 5), (2, 4, 4), (3, 3, 4)]
    assert admissible_count_vectors(mid) == []
    assert admissible_count_vectors(FrequencyConstraint(1, 3, ("0",), ("1",))) == [(3,)]


def test_enumerate_blocks_examples(ex1, tight, balanced):
    assert enumerate_blocks(balanced) == [(1, 2), (2, 1)]
    assert enumerate_blocks(tight) == []
    blocks = enumerate_blocks(ex1)
    assert len(blocks) == oracles.multinomial_count(ex1) == 2520 + 3150 + 4200
    assert blocks == sorted(blocks)


@settings(max_examples=150)
@given(constraints(max_r=3, max_ell=6))
def test_enumerate_blocks_matches_brute_force(c):
    assert enumerate_blocks(c) == oracles.brute_blocks(c)


@settings(max_examples=150)
@given(constraints(max_r=4, max_ell=10))
def test_count_vectors_match_box_search(c):
    assert admissible_count_vectors(c) == oracles.brute_count_vectors(c)
    assert check_nonempty(c).nonempty == bool(admissible_count_vectors(c))


@given(constraints(max_r=4, max_ell=10), st.data())
def test_block_admissible_iff_counts_admissible(c, data):
    w = tuple(data.draw(st.lists(st.integers(1, c.r), min_size=c.ell, max_size=c.ell)))
    vectors = set(admissible_count_vectors(c))
    assert is_admissible_block(w, c) == (tuple(symbol_counts(w, c.r)) in vectors)


@settings(max_examples=200)
@given(constraints(max_r=4, max_ell=8))
def test_nonempty_iff_blocks_exist(c):
    assert check_nonempty(c).nonempty == (len(enumerate_blocks(c)) > 0)


@settings(max_examples=200)
@given(constraints(max_r=3, max_ell=6))
def test_rigidity_partition_and_consequences(c):
    kind = classify_rigidity(c)
    assert sum(kind is k for k in Rigidity) == 1
    assert (kind is Rigidity.EMPTY) == (not check_nonempty(c).nonempty)
    blocks = set(oracles.brute_blocks(c))
    # admissible (ell+1)-windows: both ell-subwindows are blocks
    windows = [u + (s,) for u in blocks for s in range(1, c.r + 1) if u[1:] + (s,) in blocks]
    if kind.forced_periodic:
        assert all(w[0] == w[-1] for w in windows)
    if kind is Rigidity.BRANCHING:
        assert any(sum(u[1:] + (s,) in blocks for s in range(1, c.r + 1)) >= 2 for u in blocks)


@given(constraints(max_r=3, max_ell=7), st.data())
def test_prefix_feasible_matches_completion_search(c, data):
    n = data.draw(st.integers(0, c.ell))
    w = tuple(data.draw(st.lists(st.integers(1, c.r), min_size=n, max_size=n)))
    expected = any(oracles.block_ok(w + t, c) for t in oracles.all_words(c.r, c.ell - n))
    assert prefix_feasible(symbol_counts(w, c.r), n, c) == expected


def test_degenerate_r1_and_ell1():
    c = FrequencyConstraint(1, 4, ("0",), ("1",))
    assert enumerate_blocks(c) == [(1, 1, 1, 1)]
    assert classify_rigidity(c) is Rigidity.PERIODIC_TIGHT_SUM
    c = FrequencyConstraint(3, 1, ("0",) * 3, ("1",) * 3)
    assert enumerate_blocks(c) == [(1,), (2,), (3,)]
    assert classify_rigidity(c) is Rigidity.BRANCHING
