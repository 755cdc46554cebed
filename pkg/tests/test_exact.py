from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathtor import exact


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Fraction(sign)
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


def faddeev_leverrier(rows):
    """Characteristic polynomial det(xI - A), coefficients low to high."""
    n = len(rows)
    a = [[Fraction(v) for v in r] for r in rows]
    m = [[Fraction(0)] * n for _ in range(n)]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        m = [[sum(a[i][t] * m[t][j] for t in range(n)) + (coeffs[n - k + 1] if i == j else 0)
              for j in range(n)] for i in range(n)]
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(am[i][i] for i in range(n)) / k
    return coeffs


small_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                       min_size=n, max_size=n))


def test_coercion_rejects_floats():
    with pytest.raises(TypeError):
        exact.q(0.5)
    assert exact.fmt(exact.q("6/4")) == "3/2"
    assert exact.fmt(exact.q(3)) == "3"


def test_rref_and_nullspace():
    a = exact.matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    r, piv = exact.rref(a)
    assert piv == [0, 1]
    assert exact.rank(a) == 2
    ns = exact.nullspace(a)
    assert ns.shape == (1, 3)
    assert not exact.matmul(a, ns.T).any()


@given(small_matrices)
def test_det_matches_leibniz(rows):
    a = exact.matrix(rows)
    assert exact.fraction(exact.det(a)) == leibniz_det(rows)


@given(small_matrices)
def test_charpoly_matches_faddeev_leverrier(rows):
    got = [exact.fraction(c) for c in exact.charpoly(exact.matrix(rows))]
    assert got == faddeev_leverrier(rows)


@given(small_matrices)
def test_inverse_or_singular(rows):
    a = exact.matrix(rows)
    if exact.det(a) == 0:
        with pytest.raises(ZeroDivisionError):
            exact.inverse(a)
    else:
        prod = exact.matmul(a, exact.inverse(a))
        assert (prod == exact.identity(len(rows))).all()


@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_nullspace_is_kernel_of_full_dimension(m, n, data):
    rows = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n),
                              min_size=m, max_size=m))
    a = exact.matrix(rows)
    ns = exact.nullspace(a)
    assert ns.shape[0] == n - exact.rank(a)
    if ns.shape[0]:
        assert not exact.matmul(a, ns.T).any()
        assert exact.rank(ns) == ns.shape[0]


def test_block_det_of_block_diagonal():
    a = exact.matrix([[2, 0, 0], [0, 3, 1], [0, 1, 1]])
    assert exact.block_components(a) == [[0], [1, 2]]
    assert exact.det(a) == 4


def test_matmul_empty_inner_dimension():
    out = exact.matmul(exact.zeros(2, 0), exact.zeros(0, 3))
    assert out.shape == (2, 3) and not out.any()
    assert exact.to_float(exact.zeros(0, 2)).shape == (0, 2)
    assert np.allclose(exact.to_float(exact.matrix([["1/2"]])), [[0.5]])
