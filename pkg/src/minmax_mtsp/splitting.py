"""Optimal contiguous splitting of a city path into depot-anchored tours.

The decision problem "can the path be covered, in order, by at most m
tours each of cost <= c" is answered by a greedy scan in which every agent
extends its tour as long as the closed-tour cost stays within the
threshold (``greedy_check``).  Feasibility is monotone in the threshold,
so bisection between 0 and the single-tour cost of the whole path finds a
cost within ``epsilon`` of the true optimum (``optimal_split``).

Two exact oracles back the fast path in tests: a dynamic program over all
contiguous splits (``oracle_split_dp``) and, for tiny paths, exhaustive
enumeration of split-point subsets (``oracle_decision_enum``).

Segment costs are evaluated through one shared prefix-sum formula,

    segcost(i, j) = ddep[i] + (pref[j] - pref[i]) + ddep[j],

where ddep[t] is the city-to-depot distance and pref[t] the accumulated
path length.  Every routine in this module (and the batched trainer path)
uses this exact expression, so floating-point ties resolve identically
across the greedy check, the bisection, and both oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .instance import Instance
from .tours import PathLike, Tour, Solution, check_path, solution_from_tours


@dataclass(frozen=True)
class SplitConfig:
    """Bisection control: absolute cost tolerance and an iteration cap that
    guards against non-progress when epsilon is below float resolution."""

    epsilon: float = 1e-6
    max_iterations: int = 200

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass(frozen=True)
class SplitPlan:
    """Contiguous split of a path of length L = n-1 into m' tours.

    ``split_points`` are 1-based segment start positions with a trailing
    sentinel: (1, p_1, .., p_{m'-1}, L+1).  Segment i covers path positions
    [split_points[i], split_points[i+1        ] - 1].  ``realized_cost`` is the
    maximum segment tour cost, evaluated with the shared prefix-sum formula.
    """

    split_points: tuple[int, ...]
    realized_cost: float

    @property
    def num_segments(self) -> int:
        return len(self.split_points) - 1

    def segments(self) -> list[tuple[int, int]]:
        """0-based inclusive (start, end) pairs over path positions."""
        pts = self.split_points
        return [(pts[i] - 1, pts[i + 1] - 2) for i in range(len(pts) - 1)]

    def to_solution(self, inst: Instance, path: PathLike) -> Solution:
        arr = check_path(inst.n, path)
        tours = [Tour((0, *(int(v) for v in arr[s:e + 1]), 0))
                 for s, e in self.segments()]
        return solution_from_tours(inst, tours)


def _geometry(inst: Instance, path: PathLike) -> tuple[np.ndarray, np.ndarray]:
    """(ddep, pref) arrays for a validated path.

    ddep[t]: depot distance of the t-th path city; pref[t]: path length
    accumulated left to right up to position t (pref[0] = 0).
    """
    arr = check_path(inst.n, path)
    coords = inst.coords()
    pts = coords[arr]
    ddep = np.hypot(pts[:, 0] - coords[0, 0], pts[:, 1] - coords[0, 1])
    step = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
    pref = np.empty(len(arr), dtype=np.float64)
    pref[0] = 0.0
    np.cumsum(step, out=pref[1:])
    return ddep, pref


def _segcost(ddep: np.ndarray, pref: np.ndarray, i: int, j: int) -> float:
    return ddep[i] + (pref[j] - pref[i]) + ddep[j]


def path_upper_bound(inst: Instance, path: PathLike) -> float:
    """Cost of the whole path as one closed tour, via the shared formula.

    This is the always-feasible bisection upper bound: one agent can take
    everything.
    """
    ddep, pref = _geometry(inst, path)
    return float(_segcost(ddep, pref, 0, len(ddep) - 1))


def greedy_check(inst: Instance, m: int, path: PathLike, c_m: float) -> bool:
    """Can <= m agents cover the path in order with every tour cost <= c_m?

    Each agent keeps extending its tour while the closed-tour cost stays
    within the threshold (boundary equality accepted); otherwise the next
    agent starts at the current city.  Fails when a fresh single-city tour
    already exceeds the threshold or the agents run out.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    ddep, pref = _geometry(inst, path)
    L = len(ddep)
    used = 1
    start = 0
    for t in range(L):
        if _segcost(ddep, pref, start, t) <= c_m:
            continue
        # open a new tour at city t
        used += 1
        if used > m or _segcost(ddep, pref, t, t) > c_m:
            return False
        start = t
    return True


def recover_plan(inst: Instance, m: int, path: PathLike, c_m: float) -> Optional[SplitPlan]:
    """Replay the greedy scan at a threshold and record tour boundaries.

    Returns the greedy plan when the threshold is feasible (its realized
    cost is then <= c_m), or None when it is not.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    ddep, pref = _geometry(inst, path)
    L = len(ddep)
    starts = [0]
    start = 0
    for t in range(L):
        if _segcost(ddep, pref, start, t) <= c_m:
            continue
        if len(starts) >= m:
            return None
        if _segcost(ddep, pref, t, t) > c_m:
            return None
        starts.append(t)
        start = t
    ends = starts[1:] + [L]
    worst = max(_segcost(ddep, pref, s, e - 1) for s, e in zip(starts, ends))
    points = tuple(s + 1 for s in starts) + (L + 1,)
    return SplitPlan(points, float(worst))


def _monotone_tail(ddep: np.ndarray, pref: np.ndarray) -> np.ndarray:
    """Non-decreasing copy of g[t] = pref[t] + ddep[t].

    g is non-decreasing in exact arithmetic (triangle inequality); rounding
    can introduce one-ulp dips, which a running maximum removes so that
    binary searches stay valid.
    """
    return np.maximum.accumulate(pref + ddep)


def _greedy_points_fast(ddep: np.ndarray, pref: np.ndarray, gmon: np.ndarray,
                        m: int, c_m: float) -> Optional[list[int]]:
    """Greedy segment starts via binary search instead of a linear scan.

    For a segment starting at s, the extension condition
    segcost(s, t) <= c_m is equivalent to g[t] <= c_m - ddep[s] + pref[s]
    with g non-decreasing, so the furthest end is found with searchsorted.
    Mathematically identical to the scan; used inside the bisection where
    the scan's O(n) per probe would dominate at large n.
    """
    L = len(ddep)
    starts = [0]
    s = 0
    while True:
        limit = c_m - ddep[s] + pref[s]
        t_end = int(np.searchsorted(gmon, limit, side="right")) - 1
        if t_end < s:
            return None  # the single city at s already exceeds the threshold
        if t_end >= L - 1:
            return starts
        if len(starts) >= m:
            return None
        s = t_end + 1
        starts.append(s)


def optimal_split(inst: Instance, m: int, path: PathLike,
                  cfg: SplitConfig = SplitConfig()) -> SplitPlan:
    """Minimum-max-cost contiguous split of ``path`` into at most m tours.

    Bisects the feasibility threshold between 0 and the single-tour cost of
    the path, keeping the upper bound on the feasible side, then recovers
    the greedy plan at that bound.  The realized cost is recomputed from
    the returned segments, so it is exact for the plan and lies within
    cfg.epsilon of the true optimum.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    ddep, pref = _geometry(inst, path)
    L = len(ddep)
    if m == 1 or L == 1:
        top = float(_segcost(ddep, pref, 0, L - 1))
        return SplitPlan((1, L + 1), top)
    gmon = _monotone_tail(ddep, pref)
    hi = float(_segcost(ddep, pref, 0, L - 1))
    lo = 0.0
    iters = 0
    while hi - lo > cfg.epsilon and iters < cfg.max_iterations:
        mid = (lo + hi) / 2.0
        if _greedy_points_fast(ddep, pref, gmon, m, mid) is not None:
            hi = mid
        else:
            lo = mid
        iters += 1
    starts = _greedy_points_fast(ddep, pref, gmon, m, hi)
    if starts is None:
        # One-ulp rounding pathology at the initial bound; nudge upward.
        bump = hi
        while starts is None:
            bump = np.nextafter(bump * (1.0 + 1e-12) + 1e-300, np.inf)
            starts = _greedy_points_fast(ddep, pref, gmon, m, bump)
    ends = starts[1:] + [L]
    worst = max(_segcost(ddep, pref, s, e - 1) for s, e in zip(starts, ends))
    points = tuple(s + 1 for s in starts) + (L + 1,)
    return SplitPlan(points, float(worst))


def oracle_split_dp(inst: Instance, m: int, path: PathLike) -> SplitPlan:
    """Exactly optimal split by dynamic programming (testing oracle).

    f[a][j] = best max-cost covering path positions 0..j with at most a
    segments = min over i of max(f[a-1][i-1], segcost(i, j)).  Quadratic
    memory; intended for paths up to a few hundred cities.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    ddep, pref = _geometry(inst, path)
    L = len(ddep)
    # S[i, j] bitwise-matches the scalar segcost expression.
    S = ddep[:, None] + (pref[None, :] - pref[:, None]) + ddep[None, :]
    m_eff = min(m, L)
    f = np.empty((m_eff + 1, L), dtype=np.float64)
    f[0] = np.inf
    f[1] = S[0]
    parent = np.zeros((m_eff + 1, L), dtype=np.int64)
    invalid = np.arange(L)[None, :] < np.arange(1, L)[:, None]  # j < i
    for a in range(2, m_eff + 1):
        # candidate[i, j] = max(f[a-1][i-1], S[i, j]) for segment start i >= 1
        cand = np.maximum(f[a - 1, :-1][:, None], S[1:, :])
        cand[invalid] = np.inf
        best_i = np.argmin(cand, axis=0)
        best = cand[best_i, np.arange(L)]
        keep = f[a - 1] <= best  # fewer segments already as good
        f[a] = np.where(keep, f[a - 1], best)
        parent[a] = np.where(keep, -1, best_i + 1)
    # reconstruct
    starts = []
    a, j = m_eff, L - 1
    while a >= 1:
        if a == 1:
            starts.append(0)
            break
        p = parent[a, j]
        if p == -1:
            a -= 1
            continue
        starts.append(int(p))
        j = int(p) - 1
        a -= 1
    starts.reverse()
    ends = starts[1:] + [L]
    worst = max(_segcost(ddep, pref, s, e - 1) for s, e in zip(starts, ends))
    points = tuple(s + 1 for s in starts) + (L + 1,)
    return SplitPlan(points, float(worst))


def oracle_decision_enum(inst: Instance, m: int, path: PathLike, c_m: float) -> bool:
    """Exhaustive decision oracle: does ANY contiguous split into <= m
    segments keep every tour cost <= c_m?  Combinatorial; n <= ~12."""
    if m < 1:
        raise ValueError("m must be >= 1")
    ddep, pref = _geometry(inst, path)
    L = len(ddep)
    positions = range(1, L)
    for k in range(0, min(m, L)):
        for cut in itertools.combinations(positions, k):
            starts = (0,) + cut
            ends = cut + (L,)
            if all(_segcost(ddep, pref, s, e - 1) <= c_m
                   for s, e in zip(starts, ends)):
                return True
    return False


def enumerate_feasible_plans(inst: Instance, m: int, path: PathLike,
                             c_m: float) -> list[tuple[int, ...]]:
    """All feasible split-start tuples (0-based) at a threshold; test helper
    for the greedy-dominance property."""
    ddep, pref = _geometry(inst, path)
    L = len(ddep)
    out = []
    for k in range(0, min(m, L)):
        for cut in itertools.combinations(range(1, L), k):
            starts = (0,) + cut
            ends = cut + (L,)
            if all(_segcost(ddep, pref, s, e - 1) <= c_m
                   for s, e in zip(starts, ends)):
                out.append(starts)
    return out


def split_costs_batch(coords: np.ndarray, ms: np.ndarray, paths: np.ndarray,
                      cfg: SplitConfig = SplitConfig()) -> np.ndarray:
    """Vectorized ``optimal_split(...).realized_cost`` over a batch.

    ``coords`` is (B, n, 2) with row 0 the depot, ``ms`` (B,) agent counts,
    ``paths`` (B, n-1) city permutations.  Runs the same bisection in
    lock-step across rows (masked updates reproduce each row's scalar
    iteration sequence), so results are bitwise equal to calling
    ``optimal_split`` per row.  Used as the training reward.
    """
    B, L = paths.shape
    ms = np.asarray(ms, dtype=np.int64)
    rows = np.arange(B)
    pts = coords[rows[:, None], paths]            # (B, L, 2)
    depot = coords[:, 0, :]                       # (B, 2)
    ddep = np.hypot(pts[:, :, 0] - depot[:, 0:1], pts[:, :, 1] - depot[:, 1:2])
    step = np.hypot(np.diff(pts[:, :, 0], axis=1), np.diff(pts[:, :, 1], axis=1))
    pref = np.zeros((B, L), dtype=np.float64)
    np.cumsum(step, axis=1, out=pref[:, 1:])
    gmon = np.maximum.accumulate(pref + ddep, axis=1)

    def seg(s_idx: np.ndarray, e_idx: np.ndarray, sel: np.ndarray) -> np.ndarray:
        a = ddep[sel, s_idx]
        return a + (pref[sel, e_idx] - pref[sel, s_idx]) + ddep[sel, e_idx]

    def greedy_batch(c: np.ndarray, track_cost: bool):
        """Feasibility per row; optionally the max segment cost of the plan."""
        feas = np.ones(B, dtype=bool)
        done = np.zeros(B, dtype=bool)
        s = np.zeros(B, dtype=np.int64)
        used = np.ones(B, dtype=np.int64)
        worst = np.zeros(B, dtype=np.float64) if track_cost else None
        while True:
            act = ~done & feas
            if not act.any():
                break
            idx = np.flatnonzero(act)
            limit = c[idx] - ddep[idx, s[idx]] + pref[idx, s[idx]]
            # vectorized searchsorted(gmon[row], limit, side='right')
            lo = np.zeros(len(idx), dtype=np.int64)
            hi2 = np.full(len(idx), L, dtype=np.int64)
            while True:
                open_rows = lo < hi2
                if not open_rows.any():
                    break
                midp = (lo + hi2) // 2
                le = gmon[idx, np.minimum(midp, L - 1)] <= limit
                take = open_rows & le
                lo = np.where(take, midp + 1, lo)
                hi2 = np.where(open_rows & ~le, midp, hi2)
            t_end = lo - 1
            bad = t_end < s[idx]
            feas[idx[bad]] = False
            good = ~bad
            gi = idx[good]
            ge = t_end[good]
            if track_cost:
                cst = seg(s[gi], np.minimum(ge, L - 1), gi)
                np.maximum.at(worst, gi, cst)
            finished = ge >= L - 1
            done[gi[finished]] = True
            cont = gi[~finished]
            over = used[cont] >= ms[cont]
            feas[cont[over]] = False
            go = cont[~over]
            s[go] = ge[~finished][~over] + 1
            used[go] += 1
        return feas, worst

    hi = ddep[:, 0] + (pref[:, L - 1] - pref[:, 0]) + ddep[:, L - 1]
    lo_b = np.zeros(B, dtype=np.float64)
    trivial = (ms == 1) | (L == 1)
    active = ~trivial
    iters = 0
    while iters < cfg.max_iterations:
        live = active & (hi - lo_b > cfg.epsilon)
        if not live.any():
            break
        mid = (lo_b + hi) / 2.0
        probe = np.where(live, mid, hi)
        feas, _ = greedy_batch(probe, track_cost=False)
        hi = np.where(live & feas, mid, hi)
        lo_b = np.where(live & ~feas, mid, lo_b)
        iters += 1
    out = np.empty(B, dtype=np.float64)
    if trivial.any():
        ti = np.flatnonzero(trivial)
        out[ti] = seg(np.zeros(len(ti), dtype=np.int64),
                      np.full(len(ti), L - 1, dtype=np.int64), ti)
    if active.any():
        feas, worst = greedy_batch(hi, track_cost=True)
        stuck = active & ~feas
        if stuck.any():
            # same one-ulp pathology fallback as the scalar routine
            for b in np.flatnonzero(stuck):
                inst_b = _instance_from_coords(coords[b], int(ms[b]))
                out[b] = optimal_split(inst_b, int(ms[b]), paths[b], cfg).realized_cost
            active &= feas
        ai = np.flatnonzero(active)
        out[ai] = worst[ai]
    return out


def _instance_from_coords(coords: np.ndarray, m: int) -> Instance:
    from .instance import Instance as _I, Point as _P
    return _I(depot=_P(float(coords[0, 0]), float(coords[0, 1])),
              cities=tuple(_P(float(x), float(y)) for x, y in coords[1:]),
              m=m)
