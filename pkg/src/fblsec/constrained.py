"""Blocklength allocation under explicit reliability and security thresholds,
the fixed-leakage baseline, and the statistical-CSI expectation of the LFP.

With power fixed, the error probability falls and the leakage rises in the
blocklength, so each threshold cuts one end of an integer feasibility
interval.  Inside that interval the LFP is convex in the blocklength and the
effective secrecy throughput is quasi-concave, so integer golden-section
search recovers the exact optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .core import (
    Resources,
    Scenario,
    fbl_error,
    fbl_error_over_gains,
    lfp_at,
    lfp_from_errors,
    snr,
)
from .errors import InfeasibleError
from .oracle import golden_section_max

_M_CHUNK = 512


# ---------------------------------------------------------------------------
# thresholds and fading descriptions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Thresholds:
    """Leakage cap and reliability cap; both at most one half, which is the
    premise of the convexity results used by the searches below."""

    delta_max: float
    eps_b_max: float

    def __post_init__(self):
        for name, v in (("delta_max", self.delta_max), ("eps_b_max", self.eps_b_max)):
            if not 0.0 < v <= 0.5:
                raise ValueError(f"{name} must lie in (0, 0.5], got {v}")


@dataclass(frozen=True)
class ExponentialGain:
    """Eavesdropper gain fading with an exponential law (Rayleigh magnitude).
    mean = None defers to the channel's mean_gain."""

    mean: Optional[float] = None


@dataclass(frozen=True)
class PointMassGain:
    """Degenerate fading pinned at one gain; the zero-variance sanity limit.
    value = None defers to the channel's mean_gain."""

    value: Optional[float] = None


@dataclass(frozen=True)
class MonteCarlo:
    """Seeded draw-average estimator; the seed is mandatory so every run of a
    configuration reproduces byte-identical results."""

    samples: int = 5000
    seed: Optional[int] = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.seed is None:
            raise ValueError("a Monte Carlo seed is required for reproducibility")


@dataclass(frozen=True)
class GaussQuadrature:
    """Deterministic estimator: Gauss-Legendre nodes applied to the
    inverse-CDF transform of the gain distribution."""

    nodes: int = 64

    def __post_init__(self):
        if self.nodes < 2:
            raise ValueError("at least two quadrature nodes are required")


@dataclass(frozen=True)
class FadingSpec:
    distribution: Union[ExponentialGain, PointMassGain] = field(
        default_factory=ExponentialGain
    )
    estimator: Union[MonteCarlo, GaussQuadrature] = field(
        default_factory=GaussQuadrature
    )


# ---------------------------------------------------------------------------
# feasible interval and searches at fixed power
# ---------------------------------------------------------------------------

def _eps_b_at(scenario: Scenario, p: float, m: float) -> float:
    return fbl_error(snr(scenario.bob, p), scenario.d, m)


def _delta_at(scenario: Scenario, p: float, m: float) -> float:
    return 1.0 - fbl_error(snr(scenario.single_eve, p), scenario.d, m)


def _smallest_m_with(pred, lo: int, hi: int) -> Optional[int]:
    """Smallest integer in [lo, hi] satisfying a predicate that is monotone
    false-then-true in m; None if even hi fails."""
    if not pred(hi):
        return None
    if pred(lo):
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _largest_m_with(pred, lo: int, hi: int) -> Optional[int]:
    """Largest integer in [lo, hi] satisfying a predicate that is monotone
    true-then-false in m; None if even lo fails."""
    if not pred(lo):
        return None
    if pred(hi):
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def feasible_m_interval(scenario: Scenario, p: float, th: Thresholds
                        ) -> Optional[Tuple[int, int]]:
    """Integer blocklengths meeting both thresholds at fixed power, or None.

    Reliability cuts from below (error falls with m), leakage cuts from above
    (leakage rises with m)."""
    if not p > 0.0:
        raise ValueError("power must be positive")
    m_lo = _smallest_m_with(
        lambda m: _eps_b_at(scenario, p, float(m)) <= th.eps_b_max, 1, scenario.m_cap
    )
    m_hi = _largest_m_with(
        lambda m: _delta_at(scenario, p, float(m)) <= th.delta_max, 1, scenario.m_cap
    )
    if m_lo is None or m_hi is None or m_lo > m_hi:
        return None
    return m_lo, m_hi


def _lfp_at_m(scenario: Scenario, p: float, m: int) -> float:
    v, _ = lfp_at(scenario, Resources(float(m), p))
    return v


def solve_blocklength(scenario: Scenario, p: float, th: Thresholds
                      ) -> Tuple[int, float]:
    """Minimize the LFP over the feasible blocklength interval by unimodal
    integer search (the LFP is convex in the blocklength there)."""
    interval = feasible_m_interval(scenario, p, th)
    if interval is None:
        raise InfeasibleError("no blocklength satisfies both thresholds")
    m_lo, m_hi = interval
    m_star, neg = golden_section_max(
        lambda m: -_lfp_at_m(scenario, p, m), m_lo, m_hi
    )
    return m_star, -neg


def maximize_throughput(scenario: Scenario, p: float, th: Thresholds
                        ) -> Tuple[int, float]:
    """Maximize the effective secrecy throughput (d/m) * (1 - LFP) over the
    feasible interval; the objective is quasi-concave in the blocklength."""
    interval = feasible_m_interval(scenario, p, th)
    if interval is None:
        raise InfeasibleError("no blocklength satisfies both thresholds")
    m_lo, m_hi = interval

    def tau(m: int) -> float:
        return scenario.d / m * (1.0 - _lfp_at_m(scenario, p, m))

    return golden_section_max(tau, m_lo, m_hi)


# ---------------------------------------------------------------------------
# fixed-leakage baseline over the full box
# ---------------------------------------------------------------------------

def solve_fixed_leakage(scenario: Scenario, delta_cap: float,
                        p_points: int = 400, refine_rounds: int = 3,
                        p_min: Optional[float] = None
                        ) -> Tuple[int, float, float]:
    """Minimize Bob's error probability subject to a hard leakage cap over the
    resource box; returns (m, p, achieved LFP).

    Equivalent to pure reliability maximization once the leakage budget is
    pinned; the achieved LFP is reported for comparison against the joint
    optimum."""
    if not 0.0 < delta_cap <= 0.5:
        raise ValueError(f"delta_cap must lie in (0, 0.5], got {delta_cap}")
    eve = scenario.single_eve
    p_min = p_min if p_min is not None else scenario.p_cap * 1e-6
    p_lo, p_hi = p_min, scenario.p_cap
    best: Optional[Tuple[float, int, float]] = None

    for _round in range(refine_rounds + 1):
        ps = np.geomspace(p_lo, p_hi, p_points)
        for start in range(1, scenario.m_cap + 1, _M_CHUNK):
            stop = min(start + _M_CHUNK - 1, scenario.m_cap)
            ms = np.arange(start, stop + 1, dtype=float)[:, None]
            eps_e = fbl_error(snr(eve, ps[None, :]), scenario.d, ms)
            eps_b = fbl_error(snr(scenario.bob, ps[None, :]), scenario.d, ms)
            feasible = (1.0 - eps_e) <= delta_cap
            masked = np.where(feasible, eps_b, np.inf)
            i, j = np.unravel_index(int(np.argmin(masked)), masked.shape)
            if np.isfinite(masked[i, j]):
                cand = (float(masked[i, j]), int(ms[i, 0]), float(ps[j]))
                if best is None or cand[0] < best[0] or (
                    cand[0] == best[0] and (cand[1], cand[2]) < (best[1], best[2])
                ):
                    best = cand
        if best is None:
            raise InfeasibleError("the leakage cap is violated everywhere in the box")
        width = (p_hi / p_lo) ** (1.0 / 10.0)
        p_lo = max(p_min, best[2] / width)
        p_hi = min(scenario.p_cap, best[2] * width)

    _, m_star, p_star = best
    v, _ = lfp_at(scenario, Resources(float(m_star), p_star))
    return m_star, p_star, v


# ---------------------------------------------------------------------------
# statistical CSI
# ---------------------------------------------------------------------------

def _eve_mean_gain(scenario: Scenario, fading: FadingSpec) -> float:
    dist = fading.distribution
    pinned = dist.mean if isinstance(dist, ExponentialGain) else dist.value
    if pinned is not None:
        return float(pinned)
    mean = scenario.single_eve.mean_gain
    if mean is None:
        raise ValueError(
            "statistical CSI needs a mean gain: set the eavesdropper channel's "
            "mean_gain or pin one in the fading distribution"
        )
    return float(mean)


def _decode_transition(scenario: Scenario, res: Resources) -> Tuple[float, float]:
    """Gain at which the eavesdropper's capacity meets the rate, and the gain
    half-width over which the decoding exponent sweeps +-8 around it."""
    eve = scenario.single_eve
    r = scenario.d / res.m
    if r > 300.0:
        return math.inf, math.inf
    gamma_star = 2.0 ** r - 1.0
    k = res.p / eve.noise_power
    z_star = gamma_star / k
    t = gamma_star * gamma_star + 2.0 * gamma_star
    d_omega_d_gamma = math.sqrt(res.m) * t ** -1.5 * (
        t - math.log1p(gamma_star) + r * math.log(2.0)
    )
    slope = d_omega_d_gamma * k
    if slope <= 0.0 or not math.isfinite(slope):
        return z_star, math.inf
    return z_star, 8.0 / slope


def expected_eps_e(scenario: Scenario, res: Resources, fading: FadingSpec) -> float:
    """Expectation of the eavesdropper's decoding error over the gain fading.

    The quadrature estimator integrates Gauss-Legendre panels split at the
    decode transition (where the error swings between its extremes), with the
    exponential density folded in explicitly; this stays accurate even when
    the transition lies many mean-gains into the tail."""
    eve = scenario.single_eve
    xi = _eve_mean_gain(scenario, fading)
    dist = fading.distribution
    est = fading.estimator

    if isinstance(dist, PointMassGain):
        return float(
            fbl_error_over_gains(np.array([xi]), eve.noise_power, res.p,
                                 scenario.d, res.m)[0]
        )
    if isinstance(est, GaussQuadrature):
        z_hi = 45.0 * xi
        z_star, half = _decode_transition(scenario, res)
        cuts = [0.0]
        if math.isfinite(z_star) and 0.0 < z_star < z_hi:
            lo = max(0.0, z_star - 2.0 * half)
            hi = min(z_hi, z_star + 2.0 * half)
            for c in (lo, hi):
                if 0.0 < c < z_hi:
                    cuts.append(c)
        cuts.append(z_hi)
        cuts = sorted(set(cuts))
        x, w = np.polynomial.legendre.leggauss(est.nodes)
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            z = 0.5 * (b - a) * x + 0.5 * (a + b)
            wz = 0.5 * (b - a) * w
            vals = fbl_error_over_gains(z, eve.noise_power, res.p,
                                        scenario.d, res.m)
            total += float(np.sum(wz * vals * np.exp(-z / xi) / xi))
        # the probability mass beyond 45 mean gains is below 3e-20
        return total
    rng = np.random.default_rng(est.seed)
    z = rng.exponential(xi, size=est.samples)
    vals = fbl_error_over_gains(z, eve.noise_power, res.p, scenario.d, res.m)
    return float(np.mean(vals))


def expected_lfp(scenario: Scenario, res: Resources, fading: FadingSpec) -> float:
    """Expected LFP under statistical eavesdropper CSI.  Bob's link is treated
    as known, so the expectation acts on the leakage side alone (the LFP is
    affine in the eavesdropper's error probability)."""
    eps_b = _eps_b_at(scenario, res.p, res.m)
    e_eps_e = expected_eps_e(scenario, res, fading)
    return float(lfp_from_errors(eps_b, e_eps_e))


def feasible_m_interval_statistical(scenario: Scenario, p: float, th: Thresholds,
                                    fading: FadingSpec
                                    ) -> Optional[Tuple[int, int]]:
    """Feasible blocklengths when the leakage constraint holds in expectation
    over the eavesdropper fading."""
    if not p > 0.0:
        raise ValueError("power must be positive")
    m_lo = _smallest_m_with(
        lambda m: _eps_b_at(scenario, p, float(m)) <= th.eps_b_max, 1, scenario.m_cap
    )

    def delta_ok(m: int) -> bool:
        e = expected_eps_e(scenario, Resources(float(m), p), fading)
        return (1.0 - e) <= th.delta_max

    m_hi = _largest_m_with(delta_ok, 1, scenario.m_cap)
    if m_lo is None or m_hi is None or m_lo > m_hi:
        return None
    return m_lo, m_hi


def solve_blocklength_statistical(scenario: Scenario, p: float, th: Thresholds,
                                  fading: FadingSpec) -> Tuple[int, float]:
    """Minimize the expected LFP over the statistically feasible interval by
    unimodal integer search."""
    interval = feasible_m_interval_statistical(scenario, p, th, fading)
    if interval is None:
        raise InfeasibleError("no blocklength satisfies both thresholds in expectation")
    m_lo, m_hi = interval

    def objective(m: int) -> float:
        return -expected_lfp(scenario, Resources(float(m), p), fading)

    m_star, neg = golden_section_max(objective, m_lo, m_hi)
    return m_star, -neg
