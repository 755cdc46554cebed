"""Reidemeister and analytic torsion of invariant-path complexes, and
closed-form predictions for products, joins and powers."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Mapping

import numpy as np

from . import exact
from .chains import ChainComplex, InnerProduct
from .digraph import Digraph
from .errors import PathtorError, UnsupportedInnerProduct
from .paths import DEFAULT_MAX_LEN, PathComplexDesc, allowed_paths
from .spectral import (Scale, betti, boundary_rank, euler, factored_boundary,
                       harmonic_basis, pseudo_determinant)


def log_rational(x) -> float:
    """Natural log of a positive rational, safe for huge numerators."""
    x = Fraction(exact.fraction(x)) if not isinstance(x, Fraction) else x
    if x <= 0:
        raise ValueError("log of a non-positive number")
    return math.log(x.numerator) - math.log(x.denominator)


def _check_kind(kind: InnerProduct, reduced: bool):
    if reduced and kind is InnerProduct.NORMALIZED:
        raise UnsupportedInnerProduct("reduced torsion uses the standard inner product only")


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class TorsionReport:
    kind: InnerProduct
    reduced: bool
    degrees: tuple[int, ...]
    dims_omega: tuple[int, ...]
    betti: tuple[int, ...]
    D: tuple[Fraction, ...]
    log_T: float
    T_squared: Fraction
    tau_R: float | None
    euler: int
    euler_reduced: int
    n_vertices: int
    truncated: bool

    @property
    def T(self) -> float:
        return math.exp(self.log_T)

    @property
    def r(self) -> tuple[int, ...]:
        return tuple(d - b for d, b in zip(self.dims_omega, self.betti))

    def dim(self, p: int) -> int:
        return self.dims_omega[self.degrees.index(p)] if p in self.degrees else 0

    def betti_at(self, p: int) -> int:
        return self.betti[self.degrees.index(p)] if p in self.degrees else 0

    def to_dict(self) -> dict:
        return {
            "inner": self.kind.value,
            "reduced": self.reduced,
            "degrees": list(self.degrees),
            "dims_omega": list(self.dims_omega),
            "betti": list(self.betti),
            "euler": self.euler,
            "euler_reduced": self.euler_reduced,
            "r": list(self.r),
            "D": [exact.fmt(d) for d in self.D],
            "log_T": self.log_T,
            "T": self.T,
            "T_squared": exact.fmt(self.T_squared),
            "tau_R": self.tau_R,
            "n_vertices": self.n_vertices,
            "truncated": self.truncated,
        }


def analytic_torsion(cc: ChainComplex, kind=InnerProduct.STANDARD, reduced: bool | None = None,
                     scale: Scale = None, seed: int | None = 0) -> TorsionReport:
    """Analytic torsion from exact pseudo-determinants of the Laplacians.

    The reduced torsion is taken when the complex is augmented.  When
    ``seed`` is not None the Reidemeister torsion is computed as well and
    stored in ``tau_R``.
    """
    kind = InnerProduct.parse(kind)
    if reduced is None:
        reduced = cc.augmented
    if reduced and not cc.augmented:
        raise PathtorError("reduced torsion needs the augmented complex", "not_augmented")
    if not reduced and cc.augmented:
        raise PathtorError("plain torsion needs the non-augmented complex", "augmented")
    _check_kind(kind, reduced)
    degrees = tuple(cc.degrees)
    pdets = tuple(exact.fraction(pseudo_determinant(cc, p, kind, scale)) for p in degrees)
    # log T = -1/2 sum (-1)^p p log D_p, so T^2 is an exact rational
    t_sq = Fraction(1)
    for p, d in zip(degrees, pdets):
        if p and d != 1:
            t_sq *= d ** ((-1) ** (p + 1) * p)
    log_t = 0.5 * log_rational(t_sq)
    tau = None if seed is None else math.exp(r_torsion(cc, kind, seed=seed, scale=scale).log_tau)
    chi = euler(cc)
    return TorsionReport(
        kind=kind, reduced=reduced, degrees=degrees,
        dims_omega=tuple(cc.dim(p) for p in degrees),
        betti=tuple(betti(cc, p) for p in degrees),
        D=pdets, log_T=log_t, T_squared=t_sq, tau_R=tau,
        euler=chi, euler_reduced=chi - 1,
        n_vertices=cc.n_vertices, truncated=cc.truncated,
    )


def torsion_report(source: Digraph | PathComplexDesc, kind=InnerProduct.STANDARD,
                   reduced: bool = False, max_len: int = DEFAULT_MAX_LEN,
                   seed: int | None = 0, scale: Scale = None) -> TorsionReport:
    pcd = allowed_paths(source, max_len) if isinstance(source, Digraph) else source
    return analytic_torsion(ChainComplex(pcd, augmented=reduced), kind, reduced, scale, seed)


# ---------------------------------------------------------------- Reidemeister torsion

@dataclass(frozen=True)
class RTorsion:
    log_tau: float
    terms: dict[int, float] = field(default_factory=dict)

    @property
    def tau(self) -> float:
        return math.exp(self.log_tau)


def _random_invertible(n: int, rng: random.Random) -> np.ndarray:
    while True:
        m = exact.matrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], (n, n))
        if n == 0 or exact.det(m) != 0:
            return m


def _orthonormal(vectors: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Columns of ``vectors`` orthonormalised with respect to ``g``."""
    if vectors.shape[1] == 0:
        return vectors
    gram = vectors.T @ g @ vectors
    chol = np.linalg.cholesky(gram)
    return np.linalg.solve(chol, vectors.T).T


def r_torsion(cc: ChainComplex, kind=InnerProduct.STANDARD, seed: int = 0,
              scale: Scale = None) -> RTorsion:
    """Reidemeister torsion from explicit bases.

    In each degree the basis is made of a basis of the boundaries, an
    orthonormal basis of harmonic chains, and lifts of the boundary basis of
    the degree below.  Seed 0 uses pivot columns of the boundary matrices
    and unit-vector lifts; other seeds mix all three parts at random.
    """
    kind = InnerProduct.parse(kind)
    _check_kind(kind, cc.augmented)
    rng = random.Random(seed)
    degrees = list(cc.degrees)
    # bases[p]: columns spanning the boundaries inside degree p
    # lifts[p]: columns in degree p whose boundaries are bases[p - 1]
    bases: dict[int, np.ndarray] = {}
    lifts: dict[int, np.ndarray] = {}
    for p in degrees:
        n = cc.dim(p)
        r = boundary_rank(cc, p)
        if r:
            f = factored_boundary(cc, p)
            lift = exact.zeros(n, r)
            for k, j in enumerate(f.pivots):
                lift[j, k] = exact.ONE
            base = f.s
            if seed:
                mix = _random_invertible(r, rng)
                base = exact.matmul(base, mix)
                lift = exact.matmul(lift, mix)
                cycles = exact.nullspace(cc.boundary_matrix(p)).T
                k = exact.matrix([[rng.randint(-2, 2) for _ in range(r)]
                                  for _ in range(cycles.shape[1])], (cycles.shape[1], r))
                lift = lift + exact.matmul(cycles, k)
            bases[p - 1] = base
            lifts[p] = lift
    terms: dict[int, float] = {}
    log_tau = 0.0
    for p in degrees:
        n = cc.dim(p)
        if n == 0:
            terms[p] = 0.0
            continue
        g_exact = cc.gram(p, kind, scale)
        g = exact.to_float(g_exact)
        harm = exact.to_float(harmonic_basis(cc, p, kind, scale).T)
        harm = _orthonormal(harm, g)
        base = exact.to_float(bases[p]) if p in bases else np.zeros((n, 0))
        if seed and base.shape[1] and harm.shape[1]:
            harm = harm + base @ np.array([[rng.randint(-2, 2) for _ in range(harm.shape[1])]
                                           for _ in range(base.shape[1])], dtype=float)
        lift = exact.to_float(lifts[p]) if p in lifts else np.zeros((n, 0))
        u = np.concatenate([base, harm, lift], axis=1)
        if u.shape != (n, n):
            raise AssertionError(f"basis in degree {p} has shape {u.shape}, expected {(n, n)}")
        sign, logdet = np.linalg.slogdet(u)
        if sign == 0:
            raise ArithmeticError(f"degenerate torsion basis in degree {p}")
        term = logdet + 0.5 * log_rational(exact.det(g_exact))
        terms[p] = term
        log_tau += (-1) ** p * term
    return RTorsion(log_tau, terms)


# ---------------------------------------------------------------- conversions

def _normalization_squared(degrees, r) -> Fraction:
    """Squared factor turning the standard torsion into the normalized one."""
    out = Fraction(1)
    for p, rp in zip(degrees, r):
        if p >= 2 and rp:
            out *= Fraction(factorial(p)) ** ((-1) ** (p + 1) * rp)
    return out


def normalized_squared(report: TorsionReport) -> Fraction:
    """Exact square of the normalized torsion implied by ``report``."""
    if report.reduced:
        raise UnsupportedInnerProduct("the normalized torsion has no reduced form")
    if report.kind is InnerProduct.NORMALIZED:
        return report.T_squared
    return report.T_squared * _normalization_squared(report.degrees, report.r)


def standard_squared(report: TorsionReport) -> Fraction:
    if report.kind is InnerProduct.STANDARD:
        return report.T_squared
    return report.T_squared / _normalization_squared(report.degrees, report.r)


def normalized_from_standard(report: TorsionReport) -> float:
    if report.kind is not InnerProduct.STANDARD or report.reduced:
        raise UnsupportedInnerProduct("expected a non-reduced report with the standard product")
    corr = sum(0.5 * (-1) ** (p + 1) * rp * math.log(factorial(p))
               for p, rp in zip(report.degrees, report.r) if p >= 2)
    return math.exp(report.log_T + corr)


def standard_from_reduced(t_reduced: float, n_vertices: int) -> float:
    if n_vertices < 1:
        raise PathtorError("need at least one vertex", "bad_parameter")
    return math.sqrt(n_vertices) * t_reduced


# ---------------------------------------------------------------- predictions

@dataclass(frozen=True)
class Prediction:
    """Predicted torsion of a composite complex.

    ``squared`` maps ``"T"``, ``"T_normalized"`` or ``"T_reduced"`` to exact
    squares.  ``dims_omega``/``betti`` are indexed by degree.
    """

    squared: dict[str, Fraction]
    dims_omega: dict[int, int]
    betti: dict[int, int]
    n_vertices: int

    def value(self, key: str = "T") -> float:
        return math.exp(self.log(key))

    def log(self, key: str = "T") -> float:
        return 0.5 * log_rational(self.squared[key])

    @property
    def euler(self) -> int:
        return sum((-1) ** p * d for p, d in self.dims_omega.items() if p >= 0)

    def to_dict(self) -> dict:
        out = {"n_vertices": self.n_vertices,
               "dims_omega": [self.dims_omega[p] for p in sorted(self.dims_omega)],
               "betti": [self.betti[p] for p in sorted(self.betti)],
               "euler": self.euler}
        for key in sorted(self.squared):
            out[key] = self.value(key)
            out[key + "_squared"] = exact.fmt(self.squared[key])
        return out


def _as_prediction(r: "TorsionReport | Prediction") -> Prediction:
    if isinstance(r, Prediction):
        return r
    if r.reduced:
        dims = {p: d for p, d in zip(r.degrees, r.dims_omega) if p >= 0}
        bettis = {p: b for p, b in zip(r.degrees, r.betti) if p >= 0}
        if 0 in bettis and r.n_vertices:
            bettis[0] += 1
        t_sq = r.T_squared * r.n_vertices
        return Prediction({"T": t_sq, "T_reduced": r.T_squared}, dims, bettis, r.n_vertices)
    dims = dict(zip(r.degrees, r.dims_omega))
    bettis = dict(zip(r.degrees, r.betti))
    squared = {"T": standard_squared(r), "T_normalized": normalized_squared(r)}
    if r.n_vertices:
        squared["T_reduced"] = squared["T"] / r.n_vertices
    return Prediction(squared, dims, bettis, r.n_vertices)


def _convolve(a: Mapping[int, int], b: Mapping[int, int], shift: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p, x in a.items():
        for q, y in b.items():
            out[p + q + shift] = out.get(p + q + shift, 0) + x * y
    return out


def predict_product(rx: "TorsionReport | Prediction", ry: "TorsionReport | Prediction") -> Prediction:
    """Torsion of a Cartesian product from the torsions of its factors."""
    for r in (rx, ry):
        if isinstance(r, TorsionReport) and r.reduced:
            raise PathtorError("product prediction needs non-reduced reports", "bad_report")
    x, y = _as_prediction(rx), _as_prediction(ry)
    if "T_normalized" not in x.squared or "T_normalized" not in y.squared:
        raise PathtorError("product prediction needs non-reduced data", "bad_report")
    chi_x, chi_y = x.euler, y.euler
    t_norm = x.squared["T_normalized"] ** chi_y * y.squared["T_normalized"] ** chi_x
    t_std = x.squared["T"] ** chi_y * y.squared["T"] ** chi_x
    for p, xp in x.dims_omega.items():
        for q, yq in y.dims_omega.items():
            if p < 1 or q < 1:
                continue
            e = xp * yq - x.betti.get(p, 0) * y.betti.get(q, 0)
            if e:
                t_std *= Fraction(comb(p + q, p)) ** ((-1) ** (p + q) * e)
    n = x.n_vertices * y.n_vertices
    squared = {"T": t_std, "T_normalized": t_norm}
    if n:
        squared["T_reduced"] = t_std / n
    return Prediction(squared, _convolve(x.dims_omega, y.dims_omega, 0),
                      _convolve(x.betti, y.betti, 0), n)


def _reduced_data(p: Prediction) -> tuple[Fraction, int, dict[int, int], dict[int, int]]:
    dims = dict(p.dims_omega)
    dims[-1] = 1
    bettis = dict(p.betti)
    if p.n_vertices:
        bettis[0] = bettis.get(0, 0) - 1
        bettis[-1] = 0
    else:
        bettis[-1] = 1
    return p.squared["T"] / p.n_vertices, p.euler - 1, dims, bettis


def predict_join(rx: "TorsionReport | Prediction", ry: "TorsionReport | Prediction") -> Prediction:
    """Torsion of a join from the (reduced or plain) standard torsions of its factors."""
    for r in (rx, ry):
        if isinstance(r, TorsionReport) and r.kind is not InnerProduct.STANDARD:
            raise UnsupportedInnerProduct("join prediction uses the standard product")
        if r.n_vertices < 1:
            raise PathtorError("join prediction needs nonempty factors", "bad_report")
    x, y = _as_prediction(rx), _as_prediction(ry)
    tx, cx, dx, bx = _reduced_data(x)
    ty, cy, dy, by = _reduced_data(y)
    t_red = tx ** (-cy) * ty ** (-cx)
    n = x.n_vertices + y.n_vertices
    dims = {p: d for p, d in _convolve(dx, dy, 1).items() if p >= 0}
    reduced_betti = _convolve(bx, by, 1)
    bettis = {p: b for p, b in reduced_betti.items() if p >= 0}
    bettis[0] = bettis.get(0, 0) + 1
    return Prediction({"T": t_red * n, "T_reduced": t_red}, dims, bettis, n)


def predict_power(r: TorsionReport, n: int, mode: str = "box") -> Prediction:
    """Torsion of the ``n``-th box or join power.

    For box powers the normalized value follows the closed form
    ``n chi^(n-1) log T'``; the standard value is obtained by iterating the
    product prediction.  Join powers use ``n (-chi_reduced)^(n-1)`` on the
    reduced torsion.
    """
    if n < 1:
        raise PathtorError("power must be at least 1", "bad_parameter")
    base = _as_prediction(r)
    if mode == "box":
        out = base
        for _ in range(n - 1):
            out = predict_product(out, base)
        chi = base.euler
        exponent = n * chi ** (n - 1)
        closed = base.squared["T_normalized"] ** exponent
        if closed != out.squared["T_normalized"]:
            raise AssertionError("iterated product disagrees with the closed form")
        return out
    if mode == "join":
        if isinstance(r, TorsionReport) and r.kind is not InnerProduct.STANDARD:
            raise UnsupportedInnerProduct("join powers use the standard product")
        t_red, chi_red, _, _ = _reduced_data(base)
        t_red_n = t_red ** (n * (-chi_red) ** (n - 1))
        out = base
        for _ in range(n - 1):
            out = predict_join(out, base)
        nv = n * base.n_vertices
        return Prediction({"T": t_red_n * nv, "T_reduced": t_red_n}, out.dims_omega,
                          out.betti, nv)
    raise PathtorError(f"unknown power mode {mode!r}", "bad_parameter")
