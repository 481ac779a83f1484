from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fadhm import linalg as la
from fadhm.poly import PolyRing

fr = st.fractions(min_value=-6, max_value=6, max_denominator=3)


def square(n):
    return st.lists(st.lists(fr, min_size=n, max_size=n), min_size=n, max_size=n).map(la.matrix)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 6])
def test_det_matches_leibniz_and_sympy(n):
    rng = np.random.default_rng(n)
    A = la.matrix([[Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(n)]
                   for _ in range(n)])
    d = la.det(A)
    assert d == la.det_leibniz(A)
    assert sympy.Rational(d) == sympy.Matrix(A.tolist()).det()


def test_symbolic_bareiss():
    R = PolyRing([f"a{i}{j}" for i in range(5) for j in range(5)])
    A = np.array(R.gens(), dtype=object).reshape(5, 5)
    assert la.det(A) == la.det_leibniz(A)


@given(square(3), square(3))
def test_trace_cyclic_and_det_multiplicative(A, B):
    assert la.trace(la.mat_mul(A, B)) == la.trace(la.mat_mul(B, A))
    assert la.det(la.mat_mul(A, B)) == la.det(A) * la.det(B)
    assert la.trace(la.commutator(A, B)) == 0


@given(square(3))
def test_inverse(A):
    if la.det(A) == 0:
        with pytest.raises(ZeroDivisionError):
            la.inverse(A)
    else:
        assert la.matrices_equal(la.mat_mul(A, la.inverse(A)), la.identity(3))


@given(st.lists(st.lists(fr, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_and_nullspace(rows):
    A = la.matrix(rows)
    assert la.rank(A) == sympy.Matrix(rows).rank()
    ker = la.nullspace(A)
    assert len(ker) == 4 - la.rank(A)
    for v in ker:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_solve_linear():
    A = la.matrix([[1, 1, 0], [0, 1, 1]])
    sol = la.solve_linear(A, [2, 3])
    assert sol.dimension == 1
    for c in (0, 5, Fraction(-1, 2)):
        x = sol.point([c])
        assert x[0] + x[1] == 2 and x[1] + x[2] == 3
    assert la.solve_linear(la.matrix([[1, 1], [1, 1]]), [1, 2]) is None


def test_shape_errors():
    with pytest.raises(la.ShapeError):
        la.mat_mul(la.zeros(2, 3), la.zeros(2, 3))
    with pytest.raises(la.ShapeError):
        la.det(la.zeros(2, 3))
