"""Allowed elementary paths of digraphs and simplicial complexes."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .digraph import Digraph
from .errors import PathtorError

Path = tuple[int, ...]
EMPTY_PATH: Path = ()

DEFAULT_MAX_LEN = 16


def is_regular(path: Sequence[int]) -> bool:
    return all(a != b for a, b in zip(path, path[1:]))


@dataclass(frozen=True)
class PathComplexDesc:
    """Levels of allowed paths, ``levels[n + 1]`` holding the n-paths.

    ``n_max`` is the highest level stored.  ``truncated`` is set when allowed
    paths longer than ``n_max`` exist but were not enumerated.
    """

    n_max: int
    levels: tuple[tuple[Path, ...], ...]
    truncated: bool = False

    def __post_init__(self):
        if len(self.levels) != self.n_max + 2:
            raise ValueError("levels must cover degrees -1..n_max")
        if self.levels[0] != (EMPTY_PATH,):
            raise PathtorError("level -1 must hold exactly the empty path", "invalid_complex")
        for n, level in enumerate(self.levels[1:]):
            for path in level:
                if len(path) != n + 1 or not is_regular(path):
                    raise PathtorError(f"{path} is not a regular {n}-path", "invalid_complex")
            if list(level) != sorted(set(level)):
                raise PathtorError(f"level {n} is not sorted or has duplicates",
                                   "invalid_complex")

    def level(self, n: int) -> tuple[Path, ...]:
        if n < -1:
            raise PathtorError(f"degree {n} out of range", "degree_out_of_range")
        if n > self.n_max:
            return ()
        return self.levels[n + 1]

    @cached_property
    def _positions(self) -> tuple[dict[Path, int], ...]:
        return tuple({path: i for i, path in enumerate(level)} for level in self.levels)

    def position(self, path: Path) -> int | None:
        n = len(path) - 1
        if n > self.n_max:
            return None
        return self._positions[n + 1].get(path)

    def __contains__(self, path) -> bool:
        return self.position(tuple(path)) is not None

    @property
    def n_vertices(self) -> int:
        return len(self.level(0)) if self.n_max >= 0 else 0

    def sizes(self) -> list[int]:
        return [len(level) for level in self.levels]

    def check_closure(self) -> bool:
        """True when dropping the first or last vertex of any path stays allowed."""
        for n in range(1, self.n_max + 1):
            below = self._positions[n]
            for path in self.level(n):
                if path[1:] not in below or path[:-1] not in below:
                    return False
        return True


def allowed_paths(graph: Digraph, max_len: int = DEFAULT_MAX_LEN) -> PathComplexDesc:
    """All arrow-chains of ``graph`` with at most ``max_len`` arrows.

    Enumeration stops at the first empty level.
    """
    if max_len < 0:
        raise PathtorError("max_len must be non-negative", "bad_parameter")
    out = graph.out_neighbors
    levels: list[tuple[Path, ...]] = [(EMPTY_PATH,)]
    current = [(v,) for v in range(graph.n_vertices)]
    n = 0
    while current:
        levels.append(tuple(current))
        if n == max_len:
            break
        current = [p + (w,) for p in current for w in out[p[-1]]]
        n += 1
    top = len(levels) - 2
    truncated = bool(top == max_len and any(out[p[-1]] for p in levels[-1]))
    return PathComplexDesc(top, tuple(levels), truncated)


def simplicial_path_complex(simplices: Iterable[Iterable[int]]) -> PathComplexDesc:
    """Path complex of increasing vertex sequences of a simplicial complex.

    Every face of every given simplex is added.
    """
    simplices = [tuple(sorted(set(s))) for s in simplices]
    simplices = [s for s in simplices if s]
    if not simplices:
        raise PathtorError("a simplicial complex needs at least one simplex", "bad_parameter")
    faces: set[Path] = set()
    for s in simplices:
        for k in range(1, len(s) + 1):
            faces.update(combinations(s, k))
    top = max(len(s) for s in simplices) - 1
    levels = [(EMPTY_PATH,)]
    for n in range(top + 1):
        levels.append(tuple(sorted(f for f in faces if len(f) == n + 1)))
    return PathComplexDesc(top, tuple(levels), False)


def natural_dimension(pcd: PathComplexDesc) -> int | None:
    """Largest degree with allowed paths, or None if the enumeration was truncated."""
    if pcd.truncated:
        return None
    for n in range(pcd.n_max, -1, -1):
        if pcd.level(n):
            return n
    return -1
