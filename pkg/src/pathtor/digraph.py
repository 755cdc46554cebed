"""Finite digraphs: parsing, generators, Cartesian product and join.

Vertices are identified by position; labels only matter for I/O.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import DigraphParseError, InvalidDigraph, PathtorError


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[str, ...]
    arrows: frozenset[tuple[int, int]]

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise InvalidDigraph("duplicate vertex labels", "duplicate_vertex")
        for a, b in self.arrows:
            if not (0 <= a < n and 0 <= b < n):
                raise InvalidDigraph(f"arrow ({a}, {b}) has an endpoint out of range",
                                     "unknown_vertex")
            if a == b:
                raise InvalidDigraph(f"self-loop at {self.vertices[a]!r}", "self_loop")

    @classmethod
    def from_arrows(cls, n: int, arrows: Iterable[tuple[int, int]],
                    labels: Iterable[str] | None = None) -> "Digraph":
        labels = tuple(str(i) for i in range(n)) if labels is None else tuple(labels)
        return cls(labels, frozenset((int(a), int(b)) for a, b in arrows))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @cached_property
    def arrow_list(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.arrows))

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.vertices]
        for a, b in self.arrow_list:
            out[a].append(b)
        return tuple(tuple(o) for o in out)

    def has_arrow(self, a: int, b: int) -> bool:
        return (a, b) in self.arrows

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidDigraph(f"unknown vertex {label!r}", "unknown_vertex") from None

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def relabeled(self, labels: Iterable[str] | None = None) -> "Digraph":
        """Same arrows, new labels (default ``"0"``, ``"1"``, ...)."""
        return Digraph.from_arrows(self.n_vertices, self.arrows, labels)

    def induced(self, indices: Iterable[int]) -> "Digraph":
        idx = list(indices)
        pos = {v: k for k, v in enumerate(idx)}
        arrows = [(pos[a], pos[b]) for a, b in self.arrows if a in pos and b in pos]
        return Digraph.from_arrows(len(idx), arrows, [self.vertices[i] for i in idx])

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [[self.vertices[a], self.vertices[b]] for a, b in self.arrow_list],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_edge_list(self) -> str:
        lines = []
        touched = {v for arrow in self.arrows for v in arrow}
        for i, v in enumerate(self.vertices):
            if i not in touched:
                lines.append(v)
        for a, b in self.arrow_list:
            lines.append(f"{self.vertices[a]} -> {self.vertices[b]}")
        return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------- parsing

def parse_digraph(text: str) -> Digraph:
    """Parse a digraph from JSON or edge-list text.

    JSON is recognised by a leading ``{``.  Otherwise the text is an edge
    list: one ``a -> b`` per line, bare labels declare isolated vertices,
    blank lines and ``#`` comments are ignored.
    """
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_edge_list(text)


def _build(labels: list[str], arrows: list[tuple[str, str, int | None]]) -> Digraph:
    index = {v: i for i, v in enumerate(labels)}
    seen: set[tuple[int, int]] = set()
    for a, b, line in arrows:
        if a not in index or b not in index:
            missing = a if a not in index else b
            raise DigraphParseError(f"unknown vertex {missing!r}", line,
                                    1 if line is not None else None, "unknown_vertex")
        arrow = (index[a], index[b])
        if arrow[0] == arrow[1]:
            raise DigraphParseError(f"self-loop at {a!r}", line,
                                    1 if line is not None else None, "self_loop")
        if arrow in seen:
            raise DigraphParseError(f"duplicate arrow {a!r} -> {b!r}", line,
                                    1 if line is not None else None, "duplicate_arrow")
        seen.add(arrow)
    return Digraph(tuple(labels), frozenset(seen))


def _parse_json(text: str) -> Digraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DigraphParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "vertices" not in data:
        raise DigraphParseError('expected an object with a "vertices" list')
    vertices = data["vertices"]
    arrows = data.get("arrows", [])
    if not isinstance(vertices, list) or not isinstance(arrows, list):
        raise DigraphParseError('"vertices" and "arrows" must be lists')
    labels = [str(v) for v in vertices]
    if len(set(labels)) != len(labels):
        raise DigraphParseError("duplicate vertex labels", code="duplicate_vertex")
    pairs = []
    for arrow in arrows:
        if not isinstance(arrow, list) or len(arrow) != 2:
            raise DigraphParseError(f"arrow {arrow!r} is not a pair")
        pairs.append((str(arrow[0]), str(arrow[1]), None))
    return _build(labels, pairs)


def _parse_edge_list(text: str) -> Digraph:
    labels: list[str] = []
    known: set[str] = set()
    arrows: list[tuple[str, str, int | None]] = []

    def declare(label: str):
        if label not in known:
            known.add(label)
            labels.append(label)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "->" not in line:
            label = line.strip()
            if any(ch.isspace() for ch in label):
                col = raw.index(label) + next(i for i, ch in enumerate(label) if ch.isspace()) + 1
                raise DigraphParseError("whitespace inside a vertex label", lineno, col)
            declare(label)
            continue
        left, _, right = line.partition("->")
        a, b = left.strip(), right.strip()
        if not a:
            raise DigraphParseError("missing source vertex", lineno, 1)
        if not b or "->" in right:
            col = len(left) + 3
            msg = "missing target vertex" if not b else "expected a single 'a -> b'"
            raise DigraphParseError(msg, lineno, col)
        for label, offset in ((a, 0), (b, len(left) + 2)):
            if any(ch.isspace() for ch in label):
                raise DigraphParseError("whitespace inside a vertex label", lineno, offset + 1)
        declare(a)
        declare(b)
        arrows.append((a, b, lineno))
    return _build(labels, arrows)


# ---------------------------------------------------------------- products

def _escape(label: str, specials: str) -> str:
    out = label.replace("\\", "\\\\")
    for ch in specials:
        out = out.replace(ch, "\\" + ch)
    return out


def product_index(x: int, y: int, n_right: int) -> int:
    """Position of the vertex ``(x, y)`` in ``cartesian_product(X, Y)``."""
    return x * n_right + y


def cartesian_product(x: Digraph, y: Digraph) -> Digraph:
    ny = y.n_vertices
    labels = [f"{_escape(a, '|')}|{_escape(b, '|')}" for a in x.vertices for b in y.vertices]
    arrows = set()
    for a, a2 in x.arrows:
        for b in range(ny):
            arrows.add((product_index(a, b, ny), product_index(a2, b, ny)))
    for a in range(x.n_vertices):
        for b, b2 in y.arrows:
            arrows.add((product_index(a, b, ny), product_index(a, b2, ny)))
    return Digraph(tuple(labels), frozenset(arrows))


def join_digraph(x: Digraph, y: Digraph) -> Digraph:
    nx = x.n_vertices
    labels = [f"L:{v}" for v in x.vertices] + [f"R:{v}" for v in y.vertices]
    arrows = set(x.arrows)
    arrows.update((a + nx, b + nx) for a, b in y.arrows)
    arrows.update((a, nx + b) for a in range(nx) for b in range(y.n_vertices))
    return Digraph(tuple(labels), frozenset(arrows))


def box_power(x: Digraph, n: int) -> Digraph:
    if n < 1:
        raise PathtorError("power must be at least 1", "bad_parameter")
    out = x
    for _ in range(n - 1):
        out = cartesian_product(out, x)
    return out


def join_power(x: Digraph, n: int) -> Digraph:
    if n < 1:
        raise PathtorError("power must be at least 1", "bad_parameter")
    out = x
    for _ in range(n - 1):
        out = join_digraph(out, x)
    return out.relabeled() if n > 1 else out


# ---------------------------------------------------------------- generators

def _orientation(word: str | None, length: int) -> list[int]:
    if word is None:
        return [1] * length
    word = word.replace("−", "-")
    if len(word) != length or any(c not in "+-" for c in word):
        raise PathtorError(f"orientation word must be {length} characters from '+-'",
                           "bad_parameter")
    return [1 if c == "+" else -1 for c in word]


def line(m: int, word: str | None = None) -> Digraph:
    if m < 1:
        raise PathtorError("line needs m >= 1", "bad_parameter")
    sigma = _orientation(word, m - 1)
    arrows = [(i, i + 1) if s > 0 else (i + 1, i) for i, s in enumerate(sigma)]
    return Digraph.from_arrows(m, arrows)


def cycle(m: int, word: str | None = None) -> Digraph:
    if m < 3:
        raise PathtorError("cycle needs m >= 3", "bad_parameter")
    sigma = _orientation(word, m)
    arrows = [(i, (i + 1) % m) if s > 0 else ((i + 1) % m, i) for i, s in enumerate(sigma)]
    return Digraph.from_arrows(m, arrows)


POINT = Digraph(("0",), frozenset())
TWO_POINTS = Digraph(("0", "1"), frozenset())
INTERVAL = Digraph(("0", "1"), frozenset({(0, 1)}))
TRIANGLE = Digraph.from_arrows(3, [(0, 1), (1, 2), (0, 2)])
SQUARE = Digraph.from_arrows(4, [(0, 1), (0, 2), (1, 3), (2, 3)])

_ARITY = {
    "point": (0, 0), "two_points": (0, 0), "interval": (0, 0),
    "triangle": (0, 0), "square": (0, 0),
    "line": (1, 2), "cycle": (1, 2),
    "simplex": (1, 1), "cube": (1, 1), "sphere": (1, 1),
}


def builtin(name: str, *params) -> Digraph:
    """Named example digraphs.

    ``line``/``cycle`` take ``m`` and an optional orientation word (all
    ``+`` by default); ``simplex(n)``, ``cube(n)`` and ``sphere(n)`` are the
    n-th join power of a point, box power of the interval and join power
    of two points.
    """
    if name not in _ARITY:
        raise PathtorError(f"unknown builtin {name!r}; choose from {sorted(_ARITY)}",
                           "unknown_builtin")
    lo, hi = _ARITY[name]
    if not lo <= len(params) <= hi:
        raise PathtorError(f"{name} takes {lo}..{hi} parameters, got {len(params)}",
                           "bad_parameter")
    if name in ("line", "cycle", "simplex", "cube", "sphere"):
        try:
            n = int(params[0])
        except ValueError:
            raise PathtorError(f"{name}: expected an integer, got {params[0]!r}",
                               "bad_parameter") from None
    if name == "point":
        return POINT
    if name == "two_points":
        return TWO_POINTS
    if name == "interval":
        return INTERVAL
    if name == "triangle":
        return TRIANGLE
    if name == "square":
        return SQUARE
    if name == "line":
        return line(n, params[1] if len(params) > 1 else None)
    if name == "cycle":
        return cycle(n, params[1] if len(params) > 1 else None)
    if name == "simplex":
        return join_power(POINT, n)
    if name == "sphere":
        return join_power(TWO_POINTS, n)
    return box_power(INTERVAL, n)


def random_digraph(n: int, p: float, rng: random.Random, acyclic: bool = False) -> Digraph:
    """Erdos-Renyi style digraph; every ordered pair is an arrow with probability ``p``.

    With ``acyclic=True`` only pairs compatible with a random total order are
    used, so the result has no directed cycles.
    """
    if acyclic:
        order = list(range(n))
        rng.shuffle(order)
        arrows = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)
                  if rng.random() < p]
    else:
        arrows = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p]
    return Digraph.from_arrows(n, arrows)
