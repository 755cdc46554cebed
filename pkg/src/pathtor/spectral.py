"""Hodge Laplacians on the invariant-path complex.

All matrices are expressed in the bases of :class:`ChainComplex`.  A
Laplacian is self-adjoint with respect to the Gram matrix of its degree,
so the symmetric form ``G @ L`` is what the floating eigensolver sees.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np
import scipy.linalg

from . import exact
from .chains import Chain, ChainComplex, InnerProduct
from .errors import NotInOmega, PathtorError

Scale = Mapping[int, Fraction] | None


def _check(cc: ChainComplex, p: int):
    if p == -1 and not cc.augmented:
        raise PathtorError("degree -1 exists only in the augmented complex",
                           "degree_out_of_range")
    if p < cc.low:
        raise PathtorError(f"degree {p} out of range", "degree_out_of_range")


@dataclass(frozen=True)
class _Factored:
    """Rank factorisation ``B = S @ R`` of a boundary matrix.

    ``R`` is the nonzero part of the RREF of ``B`` and ``S`` the pivot
    columns of ``B``.
    """

    s: np.ndarray
    r: np.ndarray
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _factor(b: np.ndarray) -> _Factored:
    if b.size == 0:
        return _Factored(exact.zeros(b.shape[0], 0), exact.zeros(0, b.shape[1]), ())
    r, pivots = exact.rref(b)
    return _Factored(b[:, pivots], r, tuple(pivots))


def factored_boundary(cc: ChainComplex, p: int) -> _Factored:
    cache = cc._factored
    if p not in cache:
        cache[p] = _factor(cc.boundary_matrix(p))
    return cache[p]


def boundary_rank(cc: ChainComplex, p: int) -> int:
    """Rank of the boundary out of degree ``p`` (zero outside the complex)."""
    if p <= cc.low or p > cc.high:
        return 0
    return factored_boundary(cc, p).rank


def adjoint_matrix(cc: ChainComplex, p: int, kind=InnerProduct.STANDARD,
                   scale: Scale = None) -> np.ndarray:
    """Matrix of the adjoint boundary from degree ``p - 1`` to ``p``."""
    b = cc.boundary_matrix(p)
    return exact.matmul(exact.matmul(cc.gram_inverse(p, kind, scale), b.T),
                        cc.gram(p - 1, kind, scale))


def down_laplacian(cc, p, kind=InnerProduct.STANDARD, scale: Scale = None) -> np.ndarray:
    n = cc.dim(p)
    if p <= cc.low or n == 0:
        return exact.zeros(n, n)
    return exact.matmul(adjoint_matrix(cc, p, kind, scale), cc.boundary_matrix(p))


def up_laplacian(cc, p, kind=InnerProduct.STANDARD, scale: Scale = None) -> np.ndarray:
    n = cc.dim(p)
    if p + 1 > cc.high or n == 0:
        return exact.zeros(n, n)
    return exact.matmul(cc.boundary_matrix(p + 1), adjoint_matrix(cc, p + 1, kind, scale))


def laplacian(cc: ChainComplex, p: int, kind=InnerProduct.STANDARD,
              scale: Scale = None) -> np.ndarray:
    """Exact matrix of the Hodge Laplacian in degree ``p``."""
    _check(cc, p)
    kind = InnerProduct.parse(kind)
    return down_laplacian(cc, p, kind, scale) + up_laplacian(cc, p, kind, scale)


def _pdet_factor(cc: ChainComplex, k: int, kind, scale):
    """Product of the positive eigenvalues of the boundary composed with its
    adjoint, for the boundary out of degree ``k``."""
    if k <= cc.low or k > cc.high or boundary_rank(cc, k) == 0:
        return exact.ONE
    f = factored_boundary(cc, k)
    inner = exact.matmul(exact.matmul(f.r, cc.gram_inverse(k, kind, scale)), f.r.T)
    outer = exact.matmul(exact.matmul(f.s.T, cc.gram(k - 1, kind, scale)), f.s)
    return exact.det(inner) * exact.det(outer)


def laplacian_rank(cc: ChainComplex, p: int) -> int:
    return boundary_rank(cc, p) + boundary_rank(cc, p + 1)


def pseudo_determinant(cc: ChainComplex, p: int, kind=InnerProduct.STANDARD,
                       scale: Scale = None, method: str = "factored"):
    """Exact product of the nonzero eigenvalues of the Laplacian in degree ``p``.

    ``method="factored"`` multiplies the pseudo-determinants of the down and
    up parts, each computed as a product of two small determinants.
    ``method="charpoly"`` reads the coefficient of the characteristic
    polynomial selected by the exact rank.  Both return ``fmpq``.
    """
    _check(cc, p)
    kind = InnerProduct.parse(kind)
    if method == "factored":
        return _pdet_factor(cc, p, kind, scale) * _pdet_factor(cc, p + 1, kind, scale)
    if method == "charpoly":
        n = cc.dim(p)
        r = laplacian_rank(cc, p)
        if r == 0:
            return exact.ONE
        coeffs = exact.charpoly(laplacian(cc, p, kind, scale))
        return abs(coeffs[n - r])
    raise ValueError(f"unknown method {method!r}")


def spectrum(cc: ChainComplex, p: int, kind=InnerProduct.STANDARD,
             scale: Scale = None, part: str = "full") -> np.ndarray:
    """Ascending eigenvalues of the Laplacian in degree ``p``.

    The count of zeros is fixed by the exact rank.  ``part`` selects the
    full Laplacian or only its ``"down"`` or ``"up"`` summand.
    """
    _check(cc, p)
    kind = InnerProduct.parse(kind)
    if part == "full":
        lap, rank = laplacian(cc, p, kind, scale), laplacian_rank(cc, p)
    elif part == "down":
        lap, rank = down_laplacian(cc, p, kind, scale), boundary_rank(cc, p)
    elif part == "up":
        lap, rank = up_laplacian(cc, p, kind, scale), boundary_rank(cc, p + 1)
    else:
        raise ValueError(f"unknown part {part!r}")
    g = cc.gram(p, kind, scale)
    # G @ lap is symmetric; average away float noise from the conversion.
    m = exact.to_float(exact.matmul(g, lap))
    m = (m + m.T) / 2
    n = m.shape[0]
    if n == 0:
        return np.zeros(0)
    vals = np.sort(scipy.linalg.eigh(m, exact.to_float(g), eigvals_only=True))
    vals[: n - rank] = 0.0
    return vals


def betti(cc: ChainComplex, p: int) -> int:
    if p < cc.low or p > cc.high:
        return 0
    return cc.dim(p) - boundary_rank(cc, p) - boundary_rank(cc, p + 1)


def bettis(cc: ChainComplex) -> list[int]:
    return [betti(cc, p) for p in cc.degrees]


def euler(cc: ChainComplex, reduced: bool = False) -> int:
    """Alternating sum of dimensions over degrees >= 0, minus one if ``reduced``."""
    chi = sum((-1) ** p * cc.dim(p) for p in cc.degrees if p >= 0)
    return chi - 1 if reduced else chi


def harmonic_basis(cc: ChainComplex, p: int, kind=InnerProduct.STANDARD,
                   scale: Scale = None) -> np.ndarray:
    """Exact basis of the harmonic space, one coordinate vector per row."""
    _check(cc, p)
    n = cc.dim(p)
    if n == 0:
        return exact.zeros(0, 0)
    blocks = []
    if p > cc.low:
        blocks.append(cc.boundary_matrix(p))
    if p + 1 <= cc.high:
        blocks.append(exact.matmul(cc.boundary_matrix(p + 1).T, cc.gram(p, kind, scale)))
    if not blocks:
        return exact.identity(n)
    return exact.nullspace(np.concatenate(blocks, axis=0))


@dataclass(frozen=True)
class HodgeParts:
    exact_part: Chain
    coexact_part: Chain
    harmonic_part: Chain


def hodge_decompose(cc: ChainComplex, u: Chain, kind=InnerProduct.STANDARD,
                    scale: Scale = None) -> HodgeParts:
    """Split ``u`` into a boundary, a coboundary and a harmonic component.

    The three parts are orthogonal for the chosen inner product.
    """
    kind = InnerProduct.parse(kind)
    p = u.degree
    _check(cc, p)
    if p > cc.high:
        if u:
            raise NotInOmega(f"no invariant paths in degree {p}")
        z = Chain.zero(p)
        return HodgeParts(z, z, z)
    x = cc.coordinates(u)
    n = len(x)
    g = cc.gram(p, kind, scale)
    col = x.reshape(n, 1)

    part_b = exact.zeros(n, 1)
    if boundary_rank(cc, p + 1):
        s = factored_boundary(cc, p + 1).s
        sg = exact.matmul(s.T, g)
        part_b = exact.matmul(s, exact.solve(exact.matmul(sg, s), exact.matmul(sg, col)))

    part_c = exact.zeros(n, 1)
    if boundary_rank(cc, p):
        r = factored_boundary(cc, p).r
        gi = cc.gram_inverse(p, kind, scale)
        girt = exact.matmul(gi, r.T)
        part_c = exact.matmul(girt, exact.solve(exact.matmul(r, girt), exact.matmul(r, col)))

    part_h = col - part_b - part_c
    as_chain = lambda v: cc.chain(p, v[:, 0])
    return HodgeParts(as_chain(part_b), as_chain(part_c), as_chain(part_h))


@dataclass(frozen=True)
class SpectralSummary:
    kind: InnerProduct
    degrees: tuple[int, ...]
    dims: tuple[int, ...]
    ranks: tuple[int, ...]
    pdets: tuple  # exact fmpq per degree
    eigenvalues: tuple[np.ndarray, ...]
    betti: tuple[int, ...]

    def multiplicity(self, p: int, value: float, tol: float = 1e-7) -> int:
        vals = self.eigenvalues[self.degrees.index(p)]
        return int(np.sum(np.abs(vals - value) <= tol))


def spectral_summary(cc: ChainComplex, kind=InnerProduct.STANDARD,
                     scale: Scale = None) -> SpectralSummary:
    kind = InnerProduct.parse(kind)
    degrees = tuple(cc.degrees)
    return SpectralSummary(
        kind=kind,
        degrees=degrees,
        dims=tuple(cc.dim(p) for p in degrees),
        ranks=tuple(laplacian_rank(cc, p) for p in degrees),
        pdets=tuple(pseudo_determinant(cc, p, kind, scale) for p in degrees),
        eigenvalues=tuple(spectrum(cc, p, kind, scale) for p in degrees),
        betti=tuple(betti(cc, p) for p in degrees),
    )


def _apply(cc: ChainComplex, matrix: np.ndarray, u: Chain, degree: int) -> Chain:
    x = cc.coordinates(u)
    if matrix.size == 0 or len(x) == 0:
        return Chain.zero(degree)
    y = exact.matmul(matrix, x.reshape(len(x), 1))[:, 0]
    return cc.chain(degree, y)


def apply_adjoint(cc: ChainComplex, u: Chain, kind=InnerProduct.STANDARD,
                  scale: Scale = None) -> Chain:
    """Adjoint boundary of a chain of invariant paths (raises the degree by one)."""
    p = u.degree
    _check(cc, p)
    if p + 1 > cc.high:
        cc.coordinates(u)
        return Chain.zero(p + 1)
    return _apply(cc, adjoint_matrix(cc, p + 1, InnerProduct.parse(kind), scale), u, p + 1)


def apply_laplacian(cc: ChainComplex, u: Chain, kind=InnerProduct.STANDARD,
                    scale: Scale = None) -> Chain:
    p = u.degree
    _check(cc, p)
    if p > cc.high:
        cc.coordinates(u)
        return Chain.zero(p)
    return _apply(cc, laplacian(cc, p, kind, scale), u, p)
