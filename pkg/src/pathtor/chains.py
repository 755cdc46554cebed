"""Chains of regular paths, the boundary operator, and the complex of
boundary-invariant paths."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from flint import fmpq

from . import exact
from .errors import NotInOmega, PathtorError, UnsupportedInnerProduct
from .paths import EMPTY_PATH, Path, PathComplexDesc, is_regular


class InnerProduct(enum.Enum):
    STANDARD = "standard"
    NORMALIZED = "normalized"

    @classmethod
    def parse(cls, value: "InnerProduct | str") -> "InnerProduct":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise PathtorError(f"unknown inner product {value!r}",
                               "unsupported_inner_product") from None


def weight(kind: InnerProduct, p: int) -> Fraction:
    """Per-degree weight of the inner product: 1, or 1/p! when normalized."""
    if kind is InnerProduct.STANDARD:
        return Fraction(1)
    if p < 0:
        raise UnsupportedInnerProduct("the normalized inner product is not defined "
                                      "on the degree -1 (empty path) component")
    return Fraction(1, factorial(p))


# ---------------------------------------------------------------- chains

def _coef(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("chain coefficients must be exact rationals")
    return Fraction(x) if not isinstance(x, Fraction) else x


@dataclass(frozen=True, eq=False)
class Chain:
    """Finite rational combination of regular elementary paths of one degree."""

    degree: int
    coeffs: Mapping[Path, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < -1:
            raise ValueError("degree must be >= -1")
        clean: dict[Path, Fraction] = {}
        for path, c in self.coeffs.items():
            path = tuple(int(v) for v in path)
            if len(path) != self.degree + 1:
                raise ValueError(f"path {path} does not have degree {self.degree}")
            if not is_regular(path):
                raise ValueError(f"path {path} is not regular")
            c = _coef(c)
            if c:
                clean[path] = clean.get(path, Fraction(0)) + c
        object.__setattr__(self, "coeffs", {k: v for k, v in sorted(clean.items()) if v})

    @classmethod
    def path(cls, verts: Sequence[int], coef=1) -> "Chain":
        return cls(len(verts) - 1, {tuple(verts): coef})

    @classmethod
    def empty(cls) -> "Chain":
        """The empty path ``e`` spanning degree -1."""
        return cls(-1, {EMPTY_PATH: 1})

    @classmethod
    def zero(cls, degree: int) -> "Chain":
        return cls(degree, {})

    def items(self):
        return self.coeffs.items()

    def __iter__(self) -> Iterator[Path]:
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, path) -> Fraction:
        return self.coeffs.get(tuple(path), Fraction(0))

    def _check(self, other: "Chain"):
        if not isinstance(other, Chain):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"cannot add chains of degrees {self.degree} and {other.degree}")

    def __add__(self, other: "Chain") -> "Chain":
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Chain(self.degree, out)

    def __neg__(self) -> "Chain":
        return Chain(self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, scalar) -> "Chain":
        s = _coef(scalar)
        return Chain(self.degree, {k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"Chain({self.degree}, 0)"
        terms = " + ".join(f"{c}*e{list(p)}" for p, c in self.coeffs.items())
        return f"Chain({self.degree}, {terms})"


def _faces(path: Path, augmented: bool) -> Iterator[tuple[Path, int]]:
    p = len(path) - 1
    if p == 0:
        if augmented:
            yield EMPTY_PATH, 1
        return
    for q in range(p + 1):
        if 0 < q < p and path[q - 1] == path[q + 1]:
            continue
        yield path[:q] + path[q + 1:], (-1) ** q


def boundary(c: Chain, augmented: bool = False) -> Chain:
    """Alternating sum of faces; irregular faces are dropped.

    In augmented mode a vertex has boundary ``e``.
    """
    if c.degree < 0:
        raise PathtorError("the boundary is defined for degree >= 0", "degree_out_of_range")
    out: dict[Path, Fraction] = {}
    for path, coef in c.items():
        for face, sign in _faces(path, augmented):
            out[face] = out.get(face, Fraction(0)) + sign * coef
    return Chain(c.degree - 1, out)


def inner_product(u: Chain, v: Chain, kind: InnerProduct | str = InnerProduct.STANDARD) -> Fraction:
    kind = InnerProduct.parse(kind)
    if u.degree != v.degree:
        if kind is InnerProduct.NORMALIZED and -1 in (u.degree, v.degree):
            weight(kind, -1)
        return Fraction(0)
    w = weight(kind, u.degree)
    small, big = (u, v) if len(u) <= len(v) else (v, u)
    return w * sum((c * big[k] for k, c in small.items()), Fraction(0))


# ---------------------------------------------------------------- products of chains

def staircases(x: Sequence[int], y: Sequence[int]) -> list[tuple[tuple[tuple[int, int], ...], int]]:
    """Step-like paths over the grid ``x`` times ``y`` with their elevations.

    A path goes from ``(x[0], y[0])`` to ``(x[-1], y[-1])`` moving one index
    at a time; the elevation counts lattice cells under the staircase, i.e.
    each step along ``x`` adds the current ``y`` index.
    """
    p, q = len(x) - 1, len(y) - 1
    if p < 0 or q < 0:
        raise ValueError("staircases need paths of degree >= 0")
    out = []
    for rights in combinations(range(p + q), p):
        rights = set(rights)
        i = j = elevation = 0
        z = [(x[0], y[0])]
        for step in range(p + q):
            if step in rights:
                i += 1
                elevation += j
            else:
                j += 1
            z.append((x[i], y[j]))
        out.append((tuple(z), elevation))
    return out


def cross_product(u: Chain, v: Chain, n_right: int) -> Chain:
    """Cross product into the Cartesian product digraph.

    Grid vertex ``(a, b)`` is encoded as ``a * n_right + b``, matching
    :func:`pathtor.digraph.cartesian_product`.
    """
    if u.degree < 0 or v.degree < 0:
        raise ValueError("cross product needs degrees >= 0")
    out: dict[Path, Fraction] = {}
    for x, cx in u.items():
        for y, cy in v.items():
            c = cx * cy
            for z, elevation in staircases(x, y):
                key = tuple(a * n_right + b for a, b in z)
                out[key] = out.get(key, Fraction(0)) + (-c if elevation % 2 else c)
    return Chain(u.degree + v.degree, out)


def join_chains(u: Chain, v: Chain, n_left: int) -> Chain:
    """Concatenation of paths; vertices of the right factor are shifted by ``n_left``."""
    out: dict[Path, Fraction] = {}
    for x, cx in u.items():
        for y, cy in v.items():
            key = x + tuple(n_left + b for b in y)
            out[key] = out.get(key, Fraction(0)) + cx * cy
    return Chain(u.degree + v.degree + 1, out)


# ---------------------------------------------------------------- the complex

class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class OmegaLevel:
    """Basis of one degree, as sparse rows over the allowed paths of that degree.

    The rows are in reduced row-echelon form; ``pivots[i]`` is the leading
    column of row ``i``.
    """

    degree: int
    rows: list[dict[int, fmpq]]
    pivots: list[int]
    n_allowed: int

    @property
    def dim(self) -> int:
        return len(self.rows)

    def dense(self) -> np.ndarray:
        out = exact.zeros(self.dim, self.n_allowed)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                out[i, j] = v
        return out


def _omega_level(pcd: PathComplexDesc, p: int) -> OmegaLevel:
    paths = pcd.level(p)
    n = len(paths)
    if p <= 1:
        return OmegaLevel(p, [{j: exact.ONE} for j in range(n)], list(range(n)), n)
    # Outer faces are allowed by closure, so only inner faces can leave the complex.
    bad_faces: list[list[tuple[Path, int]]] = []
    face_owner: dict[Path, int] = {}
    uf = _UnionFind(n)
    for j, path in enumerate(paths):
        bad = []
        for qi in range(1, p):
            if path[qi - 1] == path[qi + 1]:
                continue
            face = path[:qi] + path[qi + 1:]
            if pcd.position(face) is None:
                bad.append((face, (-1) ** qi))
                if face in face_owner:
                    uf.union(j, face_owner[face])
                else:
                    face_owner[face] = j
        bad_faces.append(bad)
    blocks: dict[int, list[int]] = {}
    for j in range(n):
        blocks.setdefault(uf.find(j), []).append(j)
    rows: list[dict[int, fmpq]] = []
    for cols in blocks.values():
        if len(cols) == 1 and not bad_faces[cols[0]]:
            rows.append({cols[0]: exact.ONE})
            continue
        face_index: dict[Path, int] = {}
        for j in cols:
            for face, _ in bad_faces[j]:
                face_index.setdefault(face, len(face_index))
        m = exact.zeros(len(face_index), len(cols))
        for k, j in enumerate(cols):
            for face, sign in bad_faces[j]:
                m[face_index[face], k] += sign
        kernel = exact.row_space_rref(exact.nullspace(m))
        for r in range(kernel.shape[0]):
            rows.append({cols[k]: kernel[r, k] for k in np.nonzero(kernel[r])[0]})
    rows.sort(key=min)
    return OmegaLevel(p, rows, [min(r) for r in rows], n)


class ChainComplex:
    """The complex of boundary-invariant paths of a path complex.

    Degrees run from 0 (or -1 when ``augmented``) to ``pcd.n_max``.  Per
    degree it stores an exact basis of the invariant paths and the matrix
    of the boundary in those bases; Gram matrices are built on demand.
    """

    def __init__(self, pcd: PathComplexDesc, augmented: bool = False):
        if not pcd.check_closure():
            raise PathtorError("path complex is not closed under dropping end vertices",
                               "invalid_complex")
        self.pcd = pcd
        self.augmented = augmented
        self.low = -1 if augmented else 0
        self.high = pcd.n_max
        self._levels: dict[int, OmegaLevel] = {}
        self._boundaries: dict[int, np.ndarray] = {}
        self._grams: dict[tuple, np.ndarray] = {}
        self._gram_inverses: dict[tuple, np.ndarray] = {}
        self._factored: dict = {}

    @property
    def truncated(self) -> bool:
        return self.pcd.truncated

    @property
    def n_vertices(self) -> int:
        return self.pcd.n_vertices

    @property
    def degrees(self) -> range:
        return range(self.low, self.high + 1)

    def level(self, p: int) -> OmegaLevel:
        if p not in self._levels:
            if p < self.low or p > self.high:
                self._check_degree(p)
            if p == -1:
                self._levels[p] = OmegaLevel(-1, [{0: exact.ONE}], [0], 1)
            else:
                self._levels[p] = _omega_level(self.pcd, p)
        return self._levels[p]

    def _check_degree(self, p: int):
        if p < -1:
            raise PathtorError(f"degree {p} out of range", "degree_out_of_range")
        if p == -1 and not self.augmented:
            raise PathtorError("degree -1 exists only in the augmented complex",
                               "degree_out_of_range")

    def dim(self, p: int) -> int:
        """Dimension of the invariant paths; zero outside the stored range."""
        if p < self.low or p > self.high:
            return 0
        return self.level(p).dim

    def dims(self) -> list[int]:
        return [self.dim(p) for p in self.degrees]

    def omega_basis(self, p: int) -> list[Chain]:
        self._check_degree(p)
        if p > self.high:
            return []
        lev = self.level(p)
        paths = self.pcd.level(p)
        return [Chain(p, {paths[j]: exact.fraction(v) for j, v in row.items()})
                for row in lev.rows]

    def boundary_matrix(self, p: int) -> np.ndarray:
        """Matrix of the boundary from degree ``p`` to ``p - 1``, columns are images."""
        if p in self._boundaries:
            return self._boundaries[p]
        n_src, n_dst = self.dim(p), self.dim(p - 1)
        out = exact.zeros(n_dst, n_src)
        if n_src and n_dst:
            src = self.level(p)
            dst = self.level(p - 1)
            paths = self.pcd.level(p)
            below = self.pcd._positions[p]
            pivot_row = {c: i for i, c in enumerate(dst.pivots)}
            for j, row in enumerate(src.rows):
                image: dict[int, fmpq] = {}
                for col, v in row.items():
                    for face, sign in _faces(paths[col], self.augmented):
                        k = below.get(face)
                        if k is None:
                            continue
                        image[k] = image.get(k, exact.ZERO) + (v if sign > 0 else -v)
                for k, v in image.items():
                    if v and k in pivot_row:
                        out[pivot_row[k], j] = v
        self._boundaries[p] = out
        return out

    def gram(self, p: int, kind: InnerProduct | str = InnerProduct.STANDARD,
             scale: Mapping[int, Fraction] | None = None) -> np.ndarray:
        """Gram matrix of the degree-``p`` basis.

        ``scale`` optionally multiplies the inner product in degree ``p`` by
        ``scale[p]``.
        """
        kind = InnerProduct.parse(kind)
        c = exact.q(scale.get(p, 1)) if scale else exact.ONE
        key = (p, kind, c)
        if key in self._grams:
            return self._grams[key]
        n = self.dim(p)
        w = exact.q(weight(kind, p)) * c
        out = exact.zeros(n, n)
        if n:
            by_col: dict[int, list[tuple[int, fmpq]]] = {}
            for i, row in enumerate(self.level(p).rows):
                for col, v in row.items():
                    by_col.setdefault(col, []).append((i, v))
            for entries in by_col.values():
                for a, va in entries:
                    for b, vb in entries:
                        out[a, b] += va * vb
            out = out * w
        self._grams[key] = out
        return out

    def gram_inverse(self, p: int, kind=InnerProduct.STANDARD, scale=None) -> np.ndarray:
        kind = InnerProduct.parse(kind)
        c = exact.q(scale.get(p, 1)) if scale else exact.ONE
        key = (p, kind, c)
        if key not in self._gram_inverses:
            self._gram_inverses[key] = exact.inverse(self.gram(p, kind, scale))
        return self._gram_inverses[key]

    def coordinates(self, c: Chain) -> np.ndarray:
        """Coordinates of ``c`` in the invariant-path basis; raises if ``c`` is outside."""
        p = c.degree
        self._check_degree(p)
        n = self.dim(p)
        if not c:
            return exact.zeros(n, 1)[:, 0]
        if p > self.high:
            raise NotInOmega(f"no invariant paths in degree {p}")
        lev = self.level(p)
        vec: dict[int, fmpq] = {}
        for path, v in c.items():
            k = self.pcd.position(path)
            if k is None:
                raise NotInOmega(f"path {list(path)} is not allowed")
            vec[k] = exact.q(v)
        coords = exact.zeros(n, 1)[:, 0]
        residual = dict(vec)
        for i, (row, piv) in enumerate(zip(lev.rows, lev.pivots)):
            a = residual.get(piv, exact.ZERO)
            coords[i] = a
            if a:
                for col, v in row.items():
                    residual[col] = residual.get(col, exact.ZERO) - a * v
        if any(residual.values()):
            raise NotInOmega("chain is not boundary-invariant")
        return coords

    def contains(self, c: Chain) -> bool:
        try:
            self.coordinates(c)
        except NotInOmega:
            return False
        return True

    def chain(self, p: int, coords: Iterable) -> Chain:
        """Chain with the given coordinates in the degree-``p`` basis."""
        coords = list(coords)
        if len(coords) != self.dim(p):
            raise ValueError("coordinate vector has the wrong length")
        paths = self.pcd.level(p) if p <= self.high else ()
        out: dict[Path, Fraction] = {}
        lev = self.level(p) if coords else None
        for a, row in zip(coords, lev.rows if lev else []):
            a = exact.q(a)
            if not a:
                continue
            for col, v in row.items():
                out[paths[col]] = out.get(paths[col], Fraction(0)) + exact.fraction(a * v)
        return Chain(p, out)


def omega_basis(pcd: PathComplexDesc, p: int, augmented: bool = False) -> list[Chain]:
    """Reduced row-echelon basis of the boundary-invariant ``p``-paths."""
    if p < -1 or p > pcd.n_max:
        raise PathtorError(f"degree {p} out of range -1..{pcd.n_max}", "degree_out_of_range")
    return ChainComplex(pcd, augmented).omega_basis(p)
