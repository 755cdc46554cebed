"""Exact linear algebra over the rationals.

Matrices are numpy arrays of ``dtype=object`` holding ``flint.fmpq``
entries, which keeps slicing and assembly convenient.  The expensive
kernels (products, row reduction, determinants, inverses, characteristic
polynomials) hand the data to FLINT's ``fmpq_mat`` and copy the result
back.  No floating point is used anywhere except in :func:`to_float`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from flint import fmpq, fmpq_mat
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

ZERO = fmpq(0)
ONE = fmpq(1)


def q(x) -> fmpq:
    """Coerce an int, Fraction, fmpq or ``"a/b"`` string to ``fmpq``."""
    if isinstance(x, fmpq):
        return x
    if isinstance(x, float):
        raise TypeError("refusing to coerce a float to an exact rational")
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    num, den = getattr(x, "numerator", x), getattr(x, "denominator", 1)
    return fmpq(int(num), int(den))


def fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    x = q(x)
    return Fraction(int(x.p), int(x.q))


def fmt(x) -> str:
    """Serialize a rational as ``"num/den"`` (or ``"num"`` when integral)."""
    return str(fraction(x))


def matrix(rows: Iterable[Sequence], shape: tuple[int, int] | None = None) -> np.ndarray:
    rows = [[q(v) for v in r] for r in rows]
    if not rows:
        if shape is None:
            raise ValueError("shape required for an empty matrix")
        return zeros(*shape)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        out[i, :] = r
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(ZERO)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def to_flint(a: np.ndarray) -> fmpq_mat:
    m, n = a.shape
    if m == 0 or n == 0:
        return fmpq_mat(m, n)
    return fmpq_mat(m, n, [v if isinstance(v, fmpq) else q(v) for v in a.flat])


def from_flint(f: fmpq_mat) -> np.ndarray:
    m, n = f.nrows(), f.ncols()
    out = np.empty((m, n), dtype=object)
    if m and n:
        out.flat[:] = f.entries()
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m, n = a.shape[0], b.shape[1]
    if a.shape[1] == 0 or m == 0 or n == 0:
        return zeros(m, n)
    return from_flint(to_flint(a) * to_flint(b))


def to_float(a: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return np.zeros(a.shape)
    return np.vectorize(float, otypes=[float])(a)


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form.

    Returns the nonzero rows of the RREF and the list of pivot columns.
    """
    m, n = a.shape
    if m == 0 or n == 0:
        return zeros(0, n), []
    red, rank = to_flint(a).rref()
    r = from_flint(red)[:rank]
    pivots = [int(np.flatnonzero(r[i])[0]) for i in range(rank)]
    return r, pivots


def rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return to_flint(a).rank()


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of the right kernel, one basis vector per row.

    The vector for free column ``f`` has a 1 at ``f`` and zeros at all
    other free columns.
    """
    n_cols = a.shape[1]
    if a.shape[0] == 0:
        return identity(n_cols)
    r, pivots = rref(a)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    out = zeros(len(free), n_cols)
    if free and pivots:
        out[:, pivots] = -r[:, free].T
    for k, f in enumerate(free):
        out[k, f] = ONE
    return out


def row_space_rref(vectors: np.ndarray) -> np.ndarray:
    """Canonical (RREF) basis of the span of the given row vectors."""
    if vectors.shape[0] == 0:
        return vectors
    return rref(vectors)[0]


def block_components(a: np.ndarray) -> list[list[int]]:
    """Index blocks of a square matrix under a simultaneous permutation
    making it block diagonal."""
    n = a.shape[0]
    if n == 0:
        return []
    pattern = csr_matrix(a != 0)
    k, labels = connected_components(pattern, directed=True, connection="weak")
    blocks: list[list[int]] = [[] for _ in range(k)]
    for i, lab in enumerate(labels):
        blocks[lab].append(i)
    return blocks


def det(a: np.ndarray):
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("det of a non-square matrix")
    out = ONE
    for b in block_components(a):
        out *= to_flint(a[np.ix_(b, b)]).det()
    return out


def inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a square matrix; raises ZeroDivisionError when singular."""
    n = a.shape[0]
    out = zeros(n, n)
    for b in block_components(a):
        out[np.ix_(b, b)] = from_flint(to_flint(a[np.ix_(b, b)]).inv())
    return out


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a x = b`` for square invertible ``a``."""
    if a.shape[0] == 0:
        return zeros(0, b.shape[1])
    return from_flint(to_flint(a).solve(to_flint(b)))


def charpoly(a: np.ndarray) -> list:
    """Characteristic polynomial ``det(x I - a)``, coefficients low to high."""
    n = a.shape[0]
    if n == 0:
        return [ONE]
    coeffs = list(to_flint(a).charpoly().coeffs())
    return coeffs + [ZERO] * (n + 1 - len(coeffs))
