import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from painleve_blocks import linalg
from painleve_blocks.exact import ExactScalar
from strategies import rationals


def matvec(m, x):
    return [sum(a * b for a, b in zip(row, x)) for row in m]


@pytest.fixture(params=["flint", "bareiss"])
def which(request):
    old = linalg.backend()
    linalg.backend(request.param)
    yield request.param
    linalg.backend(old)


@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_rational_solve_both_backends(n, rnd):
    m = [[Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        m[i][i] += 40
    b = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(n)]
    old = linalg.backend()
    try:
        for name in ("flint", "bareiss"):
            linalg.backend(name)
            x = linalg.solve(m, b)
            assert matvec(m, x) == b
    finally:
        linalg.backend(old)


def test_singular(which):
    with pytest.raises(linalg.SingularMatrixError):
        linalg.solve([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [1, 1])


def test_generic_field():
    m = [[ExactScalar(1, 1), ExactScalar(0, 0, 1)], [ExactScalar(2), ExactScalar(0, 1)]]
    b = [ExactScalar(1), ExactScalar(0, 0, 0, 1)]
    x = linalg.solve(m, b)
    assert matvec(m, x) == b


def test_shape_check():
    with pytest.raises(ValueError):
        linalg.solve([[1, 2]], [1])
