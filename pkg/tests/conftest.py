import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from slidefreq import FrequencyConstraint, MatrixSet

sys.path.insert(0, str(Path(__file__).parent))

# enumeration cost varies with caches; budgets are asserted explicitly where they matter
settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

EX1_TARGET = ("0.23", "0.33", "0.44")


def around(delta, ell=10):
    return FrequencyConstraint.around(EX1_TARGET, delta, ell)


@pytest.fixture
def ex1():
    return around("0.1")


@pytest.fixture
def tight():
    return around("0.01")


@pytest.fixture
def mid():
    return around("0.05")


@pytest.fixture
def balanced():
    return FrequencyConstraint(2, 2, ("0.4", "0.4"), ("0.6", "0.6"))


@pytest.fixture
def golden_pair():
    return MatrixSet([[[1, 1], [0, 1]], [[1, 0], [1, 1]]])


@st.composite
def constraints(draw, max_r=3, max_ell=6, max_den=12):
    r = draw(st.integers(1, max_r))
    ell = draw(st.integers(1, max_ell))
    lower, upper = [], []
    for _ in range(r):
        den = draw(st.integers(1, max_den))
        a = draw(st.integers(0, den - 1))
        b = draw(st.integers(a + 1, den))
        lower.append(Fraction(a, den))
        upper.append(Fraction(b, den))
    return FrequencyConstraint(r, ell, tuple(lower), tuple(upper))


def random_matrices(rng, r, d, low=-2.0, high=2.0):
    return MatrixSet(rng.uniform(low, high, size=(r, d, d)))
