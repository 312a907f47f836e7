"""Problem instances: a depot, cities on the unit square, and an agent count.

Four coordinate distributions are supported.  Their exact parameters are
fixed, documented constants (see the module constants below), and every
draw comes from a single SplitMix64 stream so an instance is a pure
function of (kind, n, m, seed).

On-disk format (extension ``.mtsp``, UTF-8, LF): line 1 is ``n m``; lines
2..n+1 are ``x y`` as decimal reals with 17 significant digits (exact
float64 round-trip); the first point is the depot.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path as FsPath
from typing import TextIO, Union

import numpy as np

from .rng import SplitMix64

# Fixed distribution parameters.  The mutation shapes follow the usual
# out-of-distribution routing benchmarks; the constants are frozen here so
# regenerated sets are comparable across runs and implementations.
GAUSSIAN_COMPONENTS = 3
GAUSSIAN_SIGMA = 0.07
GAUSSIAN_CENTER_LO = 0.2
GAUSSIAN_CENTER_HI = 0.8
ROTATION_THETA_LO = math.pi / 2
ROTATION_THETA_HI = math.pi
EXPLOSION_RADIUS = 0.3


class ParseError(ValueError):
    """Malformed instance text; ``line`` is the 1-based offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Point:
    x: float
    y: float


def distance(a: Point, b: Point) -> float:
    """Euclidean distance.  All modules measure length through np.hypot so
    scalar and vectorized code rounds identically."""
    return float(np.hypot(a.x - b.x, a.y - b.y))


@dataclass(frozen=True)
class Instance:
    """Node 0 is the depot; cities are 1..n-1 in list order."""

    depot: Point
    cities: tuple[Point, ...]
    m: int

    def __post_init__(self):
        if len(self.cities) < 1:
            raise ValueError("instance needs at least one city (n >= 2)")
        if self.m < 1:
            raise ValueError("agent count m must be >= 1")
        for p in (self.depot, *self.cities):
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise ValueError(f"non-finite coordinate {p}")

    @property
    def n(self) -> int:
        return len(self.cities) + 1

    def coords(self) -> np.ndarray:
        """(n, 2) float64 array, row 0 the depot (cached; treat as read-only)."""
        cached = _COORDS_CACHE.get(id(self))
        if cached is not None and cached[0] is self:
            return cached[1]
        out = np.empty((self.n, 2), dtype=np.float64)
        out[0] = (self.depot.x, self.depot.y)
        for i, c in enumerate(self.cities, start=1):
            out[i] = (c.x, c.y)
        out.flags.writeable = False
        _COORDS_CACHE[id(self)] = (self, out)
        if len(_COORDS_CACHE) > 256:
            _COORDS_CACHE.pop(next(iter(_COORDS_CACHE)))
        return out

    def with_m(self, m: int) -> "Instance":
        return replace(self, m=m)


# Small keep-alive cache for coords(); keyed by object identity since
# Instance is immutable.  Bounded so long-running loops cannot leak.
_COORDS_CACHE: dict[int, tuple["Instance", np.ndarray]] = {}


class DistributionKind(str, Enum):
    UNIFORM = "uniform"
    ROTATION = "rotation"
    GAUSSIAN = "gaussian"
    EXPLOSION = "explosion"


def _uniform_points(rng: SplitMix64, count: int) -> list[tuple[float, float]]:
    # Draw order: x then y per point, depot first.
    return [(rng.random(), rng.random()) for _ in range(count)]


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


def generate(kind: DistributionKind, n: int, m: int, seed: int) -> Instance:
    """Deterministically generate an instance with n nodes (depot + n-1
    cities) and m agents.

    All coordinates are clamped to the unit square.  The depot is drawn by
    the same process as the cities and is always the first generated point.
    Draw sequences (one SplitMix64 stream seeded with ``seed``):

    * uniform: x, y per point.
    * rotation: theta ~ U[pi/2, pi] once, then uniform points; each point is
      rotated about the square center (0.5, 0.5) by angle theta * r, where r
      is the point's distance from the center.
    * gaussian: 3 component centers ~ U[0.2, 0.8]^2 (x, y each), then per
      point: component index ~ below(3), x and y ~ N(center, 0.07); points
      falling outside the unit square are rejected and redrawn (component
      index included).
    * explosion: epicenter x, y ~ U[0,1]^2, then uniform points; a point
      within 0.3 of the epicenter is pushed radially outward to distance
      0.3 + d/2 (d its original distance; a point exactly on the epicenter
      moves along +x).
    """
    kind = DistributionKind(kind)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rng = SplitMix64(seed)

    if kind is DistributionKind.UNIFORM:
        pts = _uniform_points(rng, n)
    elif kind is DistributionKind.ROTATION:
        theta = rng.uniform(ROTATION_THETA_LO, ROTATION_THETA_HI)
        pts = []
        for x, y in _uniform_points(rng, n):
            vx, vy = x - 0.5, y - 0.5
            r = math.hypot(vx, vy)
            a = theta * r
            ca, sa = math.cos(a), math.sin(a)
            pts.append((_clamp01(0.5 + ca * vx - sa * vy),
                        _clamp01(0.5 + sa * vx + ca * vy)))
    elif kind is DistributionKind.GAUSSIAN:
        centers = [(rng.uniform(GAUSSIAN_CENTER_LO, GAUSSIAN_CENTER_HI),
                    rng.uniform(GAUSSIAN_CENTER_LO, GAUSSIAN_CENTER_HI))
                   for _ in range(GAUSSIAN_COMPONENTS)]
        pts = []
        while len(pts) < n:
            cx, cy = centers[rng.below(GAUSSIAN_COMPONENTS)]
            x = cx + GAUSSIAN_SIGMA * rng.normal()
            y = cy + GAUSSIAN_SIGMA * rng.normal()
            if 0.0 <= x <= 1.0 and 0.0 <= y <= 1.0:
                pts.append((x, y))
    else:  # EXPLOSION
        ex, ey = rng.random(), rng.random()
        pts = []
        for x, y in _uniform_points(rng, n):
            d = math.hypot(x - ex, y - ey)
            if d < EXPLOSION_RADIUS:
                if d == 0.0:
                    ux, uy = 1.0, 0.0
                else:
                    ux, uy = (x - ex) / d, (y - ey) / d
                push = EXPLOSION_RADIUS + d / 2.0
                x, y = _clamp01(ex + push * ux), _clamp01(ey + push * uy)
            pts.append((x, y))

    return Instance(depot=Point(*pts[0]),
                    cities=tuple(Point(*p) for p in pts[1:]),
                    m=m)


Source = Union[str, FsPath, TextIO]


def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_instance(inst: Instance, sink: Source) -> None:
    if isinstance(sink, (str, FsPath)):
        with open(sink, "w", encoding="utf-8", newline="\n") as f:
            write_instance(inst, f)
        return
    sink.write(f"{inst.n} {inst.m}\n")
    for x, y in inst.coords():
        sink.write(f"{_fmt(x)} {_fmt(y)}\n")


def read_instance(source: Source) -> Instance:
    """Parse an ``.mtsp`` file; malformed input raises ParseError naming the
    offending line."""
    if isinstance(source, (str, FsPath)):
        with open(source, "r", encoding="utf-8") as f:
            return read_instance(f)
    lines = source.read().split("\n")
    # allow a single trailing newline
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(1, "empty instance file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(1, f"expected header 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(1, f"non-integer header fields {lines[0]!r}") from None
    if n < 2 or m < 1:
        raise ParseError(1, f"invalid sizes n={n} m={m} (need n >= 2, m >= 1)")
    if len(lines) - 1 != n:
        raise ParseError(min(len(lines) + 1, n + 1),
                         f"expected {n} coordinate lines, found {len(lines) - 1}")
    pts = []
    for idx in range(1, n + 1):
        toks = lines[idx].split()
        if len(toks) != 2:
            raise ParseError(idx + 1, f"expected 'x y', got {lines[idx]!r}")
        try:
            x, y = float(toks[0]), float(toks[1])
        except ValueError:
            raise ParseError(idx + 1, f"non-numeric coordinate in {lines[idx]!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(idx + 1, f"non-finite coordinate in {lines[idx]!r}")
        pts.append(Point(x, y))
    return Instance(depot=pts[0], cities=tuple(pts[1:]), m=m)


def instance_to_text(inst: Instance) -> str:
    buf = io.StringIO()
    write_instance(inst, buf)
    return buf.getvalue()
