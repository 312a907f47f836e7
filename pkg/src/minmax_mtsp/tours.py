"""Paths, tours, solutions, and their cost / feasibility semantics.

Node indexing everywhere: depot = 0, cities = 1..n-1.  A path is a
permutation of the city indices (it never contains the depot); a tour is a
depot-anchored closed walk ``(0, c_1, .., c_k, 0)``; a solution is one tour
per agent whose interiors partition the cities.  The objective of a
solution is the maximum tour cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path as FsPath
from typing import Optional, Sequence, TextIO, Union

import numpy as np

from .instance import Instance


class ValidationError(ValueError):
    pass


PathLike = Sequence[int]

EMPTY_TOUR_NODES = (0, 0)


def check_path(n: int, order: PathLike) -> np.ndarray:
    """Validate that ``order`` is a permutation of 1..n-1; return it as an
    int64 array."""
    arr = np.asarray(order, dtype=np.int64)
    if arr.ndim != 1 or arr.shape[0] != n - 1:
        raise ValidationError(f"path must list all {n - 1} cities, got shape {arr.shape}")
    if arr.min() < 1 or arr.max() >= n:
        bad = arr[(arr < 1) | (arr >= n)][0]
        raise ValidationError(f"path contains out-of-range index {bad}")
    counts = np.bincount(arr, minlength=n)
    if (counts[1:] != 1).any():
        dup = int(np.flatnonzero(counts > 1)[0])
        raise ValidationError(f"path repeats city {dup}")
    return arr


@dataclass(frozen=True)
class Tour:
    nodes: tuple[int, ...]

    def interior(self) -> tuple[int, ...]:
        return self.nodes[1:-1]


@dataclass(frozen=True)
class Solution:
    tours: tuple[Tour, ...]
    objective: float


@dataclass(frozen=True)
class Violation:
    constraint: str  # one of: structure, endpoints, interior-depot, repeat, range, coverage, disjointness
    index: Optional[int]
    message: str

    def __str__(self) -> str:
        return self.message


def tour_cost(inst: Instance, tour: Tour) -> float:
    """Sum of consecutive Euclidean edge lengths; 0 for the empty tour (0, 0)."""
    nodes = np.asarray(tour.nodes, dtype=np.int64)
    if nodes.min(initial=0) < 0 or nodes.max(initial=0) >= inst.n:
        raise ValidationError(f"tour contains out-of-range index in {tour.nodes}")
    pts = inst.coords()[nodes]
    seg = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
    return float(seg.sum())


def validate(inst: Instance, sol: Solution) -> Optional[Violation]:
    """Check the coverage / disjointness / no-repeat constraints plus tour
    endpoint structure.  Returns None when valid, else the first violation."""
    if len(sol.tours) != inst.m:
        return Violation("structure", None,
                         f"solution has {len(sol.tours)} tours for m={inst.m} agents")
    seen = np.zeros(inst.n, dtype=np.int64)
    for ti, tour in enumerate(sol.tours):
        nodes = tour.nodes
        if len(nodes) < 2 or nodes[0] != 0 or nodes[-1] != 0:
            return Violation("endpoints", ti,
                             f"tour {ti} must start and end at the depot, got {nodes}")
        for v in tour.interior():
            if v == 0:
                return Violation("interior-depot", ti,
                                 f"tour {ti} visits the depot mid-tour")
            if not (1 <= v < inst.n):
                return Violation("range", ti,
                                 f"tour {ti} contains out-of-range index {v}")
            seen[v] += 1
    for c in range(1, inst.n):
        if seen[c] > 1:
            return Violation("disjointness", c, f"city {c} appears in more than one tour")
    for c in range(1, inst.n):
        if seen[c] == 0:
            return Violation("coverage", c, f"city {c} is not visited by any tour")
    return None


def require_valid(inst: Instance, sol: Solution) -> None:
    v = validate(inst, sol)
    if v is not None:
        raise ValidationError(str(v))


def objective(inst: Instance, sol: Solution) -> float:
    """Maximum tour cost over the solution's tours; raises ValidationError
    on an invalid solution."""
    require_valid(inst, sol)
    return max(tour_cost(inst, t) for t in sol.tours)


def path_to_single_tour(path: PathLike) -> Tour:
    return Tour((0, *(int(v) for v in path), 0))


def solution_from_tours(inst: Instance, tours: Sequence[Tour]) -> Solution:
    padded = list(tours) + [Tour(EMPTY_TOUR_NODES)] * (inst.m - len(tours))
    sol = Solution(tuple(padded), 0.0)
    require_valid(inst, sol)
    obj = max(tour_cost(inst, t) for t in sol.tours)
    return Solution(sol.tours, obj)


Sink = Union[str, FsPath, TextIO]


def write_solution(sol: Solution, sink: Sink) -> None:
    """Text format: line 1 the objective, then one line per tour listing
    node indices (starting and ending with 0)."""
    if isinstance(sink, (str, FsPath)):
        with open(sink, "w", encoding="utf-8", newline="\n") as f:
            write_solution(sol, f)
        return
    sink.write(format(sol.objective, ".17g") + "\n")
    for tour in sol.tours:
        sink.write(" ".join(str(v) for v in tour.nodes) + "\n")


def read_solution(source: Sink) -> Solution:
    if isinstance(source, (str, FsPath)):
        with open(source, "r", encoding="utf-8") as f:
            return read_solution(f)
    lines = [ln for ln in source.read().split("\n") if ln.strip()]
    if not lines:
        raise ValidationError("empty solution file")
    obj = float(lines[0])
    tours = tuple(Tour(tuple(int(tok) for tok in ln.split())) for ln in lines[1:])
    return Solution(tours, obj)
