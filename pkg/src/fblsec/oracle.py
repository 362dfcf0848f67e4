"""Brute-force references: exhaustive grid search over integer blocklengths and
a geometric power grid (with local refinement), and an integer golden-section
maximizer for unimodal objectives.  These are the benchmarks every solver
claim is validated against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .core import Scenario
from .multi_eve import linkset_for

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_M_CHUNK = 512


@dataclass(frozen=True)
class GridSpec:
    """Search grid: all integer blocklengths in m_range, p_points geometric
    power levels on (p_min, p_cap], and refine_rounds local zoom passes (the
    log-width of the power window shrinks five-fold per pass, centered on the
    incumbent)."""

    m_range: Optional[Tuple[int, int]] = None
    p_points: int = 1000
    refine_rounds: int = 3
    p_min: Optional[float] = None

    def __post_init__(self):
        if self.p_points < 1:
            raise ValueError("p_points must be at least 1")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be nonnegative")
        if self.p_min is not None and not self.p_min > 0.0:
            raise ValueError("p_min must be positive")


def exhaustive_min_lfp(scenario: Scenario, grid: GridSpec | None = None
                       ) -> Tuple[int, float, float]:
    """Global minimum of the actual LFP over the grid: returns (m, p, value).

    Ties break to the lexicographically smallest (m, p).  Enlarging the grid to
    a superset never increases the returned minimum.
    """
    grid = grid or GridSpec()
    links = linkset_for(scenario)
    m_lo, m_hi = grid.m_range if grid.m_range else (1, scenario.m_cap)
    if not (1 <= m_lo <= m_hi <= scenario.m_cap):
        raise ValueError("m_range must be an integer interval inside [1, m_cap]")
    p_min = grid.p_min if grid.p_min is not None else scenario.p_cap * 1e-4
    p_lo, p_hi = p_min, scenario.p_cap

    best_val, best_m, best_p = math.inf, None, None
    for _round in range(grid.refine_rounds + 1):
        if grid.p_points == 1:
            ps = np.array([p_hi])
        else:
            ps = np.geomspace(p_lo, p_hi, grid.p_points)
        for start in range(m_lo, m_hi + 1, _M_CHUNK):
            stop = min(start + _M_CHUNK - 1, m_hi)
            ms = np.arange(start, stop + 1, dtype=float)[:, None]
            vals = links.lfp(ms, ps[None, :])
            i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
            cand = (float(vals[i, j]), int(ms[i, 0]), float(ps[j]))
            if cand[0] < best_val or (
                cand[0] == best_val and (cand[1], cand[2]) < (best_m, best_p)
            ):
                best_val, best_m, best_p = cand
        # zoom the power window around the incumbent
        width = (p_hi / p_lo) ** (1.0 / 10.0)
        p_lo = max(p_min, best_p / width)
        p_hi = min(scenario.p_cap, best_p * width)
    return best_m, best_p, best_val


def golden_section_max(f: Callable[[int], float], lo: int, hi: int
                       ) -> Tuple[int, float]:
    """Integer argmax of a unimodal function on [lo, hi] by golden-section
    bracketing with a final exhaustive sweep of the residual bracket.

    Plateaus resolve to the smallest index.  On non-unimodal input the result
    is a local maximum.
    """
    if lo > hi:
        raise ValueError("empty interval")
    cache = {}

    def fv(x: int) -> float:
        if x not in cache:
            cache[x] = float(f(x))
        return cache[x]

    a, b = int(lo), int(hi)
    while b - a > 3:
        span = b - a
        c = b - int(round(_INVPHI * span))
        d = a + int(round(_INVPHI * span))
        if c >= d:
            c = a + span // 3
            d = b - span // 3
            if c >= d:
                break
        if fv(c) >= fv(d):
            b = d
        else:
            a = c
    best_x, best_v = a, fv(a)
    for x in range(a + 1, b + 1):
        v = fv(x)
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v
