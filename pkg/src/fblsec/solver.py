"""Iterative successive-approximation solver: minimize the leakage-failure
probability over (blocklength, power) by repeatedly building the anchored
exponential surrogate, minimizing it inside the resource box, and re-anchoring
at the minimizer.

The achieved LFP is non-increasing across rounds because each surrogate
dominates the true objective and touches it at the anchor; the inner step only
has to not increase the surrogate.  The inner minimizer seeds a damped Newton
barrier polish with a coarse log-grid scan, which keeps it reliable even where
the surrogate's leakage term bends the valley (it is not globally convex).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .bounds import TermSpec, build_composite_terms, composite_value
from .convexity import (
    omega_gradient_mgamma,
    omega_hessian_mgamma,
    rate_threshold_sweep_max,
)
from .core import (
    LN2,
    ChannelSpec,
    ReliabilityPair,
    Resources,
    Scenario,
    lfp_from_errors,
    q,
)
from .errors import InfeasibleError

_P_FLOOR_FACTOR = 1e-12
_EXP_CLAMP = 709.0


# ---------------------------------------------------------------------------
# configuration and result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the iterative solver.

    init = None selects the documented default start: m0 = packet size and the
    power at which the strongest eavesdropper's capacity equals the start rate
    (leakage one half), which keeps every surrogate term responsive.  A start
    at saturated SNR (for example p_cap / 2 at the reference caps) flattens
    the leakage bound to machine precision and strands the iteration.
    """

    mu_th: float = 1e-8
    max_iter: int = 100
    inner_tol: float = 1e-9
    init: Optional[Resources] = None
    m_min: float = 1.0
    seed_grid: int = 48


@dataclass(frozen=True)
class IterationRecord:
    k: int
    m: float
    p: float
    eps_hat: float
    eps_actual: float


@dataclass
class SolveTrace:
    m0: float
    p0: float
    eps0: float
    iterations: List[IterationRecord] = field(default_factory=list)
    converged: bool = False
    rounds_used: int = 0


@dataclass(frozen=True)
class AllocationResult:
    m_star: int
    p_star: float
    eps_lf: float
    pair: ReliabilityPair
    trace: SolveTrace


# ---------------------------------------------------------------------------
# link sets: everything the iteration needs to evaluate a scenario
# ---------------------------------------------------------------------------

class LinkSet:
    """Bob plus N eavesdropper links of one scenario, with vectorized exponent
    and LFP evaluation.  Index 0 is Bob."""

    def __init__(self, d: int, bob: ChannelSpec, eves: Sequence[ChannelSpec],
                 m_cap: int, p_cap: float):
        self.d = d
        self.m_cap = int(m_cap)
        self.p_cap = float(p_cap)
        self.channels: Tuple[ChannelSpec, ...] = (bob,) + tuple(eves)
        self.k = np.array([c.gain / c.noise_power for c in self.channels])
        if np.any(self.k <= 0.0):
            raise InfeasibleError("every link needs a positive gain to noise ratio")

    @property
    def n_eves(self) -> int:
        return len(self.channels) - 1

    def omega_link(self, idx: int, m, p):
        g = self.k[idx] * np.asarray(p, dtype=float)
        v = 1.0 - (1.0 + g) ** -2
        return np.sqrt(np.asarray(m, dtype=float) / v) * (
            np.log2(1.0 + g) - self.d / np.asarray(m, dtype=float)
        ) * LN2

    def omegas(self, m, p) -> list:
        return [self.omega_link(i, m, p) for i in range(len(self.channels))]

    def errors(self, m, p) -> list:
        return [np.clip(q(w), 0.0, 1.0) for w in self.omegas(m, p)]

    def lfp(self, m, p):
        """Actual LFP: passive combination across all eavesdropper links
        (a single link reduces to the two-node formula)."""
        errs = self.errors(m, p)
        prod = errs[1]
        for e in errs[2:]:
            prod = prod * e
        return lfp_from_errors(errs[0], prod)

    def pair(self, m: float, p: float) -> ReliabilityPair:
        errs = self.errors(m, p)
        prod = float(np.prod(errs[1:]))
        return ReliabilityPair(eps_b=float(errs[0]), eps_e=prod)


def linkset_single(scenario: Scenario) -> LinkSet:
    return LinkSet(scenario.d, scenario.bob, (scenario.single_eve,),
                   scenario.m_cap, scenario.p_cap)


# ---------------------------------------------------------------------------
# differentiable surrogate
# ---------------------------------------------------------------------------

class SurrogateModel:
    """The anchored composite surrogate with analytic gradient and Hessian in
    (m, p), plus the exponent lower bounds that keep every error-probability
    factor at or below one."""

    def __init__(self, links: LinkSet, m_hat: float, p_hat: float):
        self.links = links
        self.m_hat = float(m_hat)
        self.p_hat = float(p_hat)
        whats = [float(links.omega_link(i, m_hat, p_hat))
                 for i in range(len(links.channels))]
        self.omega_hats = whats
        self.terms: List[TermSpec] = build_composite_terms(whats[0], whats[1:])
        self.anchor_value = self.value(m_hat, p_hat)
        self.omega_floors = self._exponent_floors()

    def _exponent_floors(self) -> List[Tuple[int, float]]:
        """Per link, the exponent below which its error bound would exceed 1.
        Links whose bound has degraded to a near-constant carry no floor."""
        floors = {}
        for term in self.terms:
            for fs in term.factors:
                if fs.sign >= 0:
                    continue
                cf = fs.coeffs
                if cf.a < 1e-100 or cf.c >= 1.0:
                    continue
                w_min = (cf.log_b - math.log1p(-cf.c)) / cf.a
                w_anchor = self.omega_hats[fs.link]
                margin = 1e-9 * (1.0 + abs(w_anchor))
                w_min = min(w_min, w_anchor - margin)
                floors[fs.link] = max(floors.get(fs.link, -math.inf), w_min)
        return sorted(floors.items())

    def value(self, m, p):
        return composite_value(self.terms, self.links.omegas(m, p))

    def feasible(self, m: float, p: float) -> bool:
        for link, w_min in self.omega_floors:
            if self.links.omega_link(link, m, p) < w_min:
                return False
        return True

    def value_grad_hess(self, m: float, p: float):
        links = self.links
        n = len(links.channels)
        w = np.empty(n)
        grads = np.empty((n, 2))
        hessians = np.empty((n, 2, 2))
        for i in range(n):
            gamma = links.k[i] * p
            w[i] = links.omega_link(i, m, p)
            d_m, d_g = omega_gradient_mgamma(gamma, links.d, m)
            grads[i] = (d_m, d_g * links.k[i])
            h = omega_hessian_mgamma(gamma, links.d, m)
            ki = links.k[i]
            hessians[i] = h * np.array([[1.0, ki], [ki, ki * ki]])

        total_f = 0.0
        total_g = np.zeros(2)
        total_h = np.zeros((2, 2))
        for term in self.terms:
            kf = len(term.factors)
            s = 0.0
            u = np.zeros(2)
            h_s = np.zeros((2, 2))
            for fs in term.factors:
                cf = fs.coeffs
                expo = cf.log_b + (cf.a * w[fs.link] if fs.sign > 0 else -cf.a * w[fs.link])
                e = math.exp(min(expo, _EXP_CLAMP))
                val = e + cf.c
                d1 = (cf.a if fs.sign > 0 else -cf.a) * e
                d2 = cf.a * cf.a * e
                s += val / fs.f_hat
                u += (d1 / fs.f_hat) * grads[fs.link]
                h_s += (d2 / fs.f_hat) * np.outer(grads[fs.link], grads[fs.link])
                h_s += (d1 / fs.f_hat) * hessians[fs.link]
            s /= kf
            u /= kf
            h_s /= kf
            sk1 = s ** (kf - 1)
            total_f += term.coef * sk1 * s
            total_g += term.coef * kf * sk1 * u
            if kf > 1:
                total_h += term.coef * kf * (
                    (kf - 1) * s ** (kf - 2) * np.outer(u, u) + sk1 * h_s
                )
            else:
                total_h += term.coef * h_s
        return total_f, total_g, total_h

    def constraint_slacks(self, m: float, p: float):
        """Slack of each exponent floor at (m, p), cheapest form."""
        return [float(self.links.omega_link(link, m, p)) - w_min
                for link, w_min in self.omega_floors]

    def constraint_slacks_grads(self, m: float, p: float):
        """(slack, gradient, Hessian) of each exponent floor at (m, p)."""
        out = []
        for link, w_min in self.omega_floors:
            gamma = self.links.k[link] * p
            w = float(self.links.omega_link(link, m, p))
            d_m, d_g = omega_gradient_mgamma(gamma, self.links.d, m)
            grad = np.array([d_m, d_g * self.links.k[link]])
            h = omega_hessian_mgamma(gamma, self.links.d, m)
            kl = self.links.k[link]
            hess = h * np.array([[1.0, kl], [kl, kl * kl]])
            out.append((w - w_min, grad, hess))
        return out


# ---------------------------------------------------------------------------
# inner minimization: grid seed + damped Newton on a log barrier
# ---------------------------------------------------------------------------

def _resource_box(links: LinkSet, m_min: float) -> Tuple[float, float, float, float]:
    """Box for the relaxed problem.  The blocklength cap additionally respects
    the concavity region (rate at least the threshold sweep maximum), which at
    practical packet sizes is looser than the hard cap."""
    gamma_max = float(np.max(links.k) * links.p_cap)
    thr = rate_threshold_sweep_max(max(gamma_max, 1e-3))
    m_hi = float(links.m_cap)
    if thr > 0.0:
        m_hi = min(m_hi, links.d / thr)
    m_lo = max(1.0, m_min)
    if m_hi < m_lo:
        m_hi = float(links.m_cap)
    p_lo = links.p_cap * _P_FLOOR_FACTOR
    return m_lo, m_hi, p_lo, links.p_cap


def _eig2(h: np.ndarray):
    a, b, c = h[0, 0], h[0, 1], h[1, 1]
    tr = a + c
    disc = math.sqrt(max((a - c) ** 2 + 4.0 * b * b, 0.0))
    return 0.5 * (tr - disc), 0.5 * (tr + disc)


def _solve_convexified(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    lo, hi = _eig2(h)
    ridge = 0.0
    floor = max(abs(hi), 1.0) * 1e-12
    if lo < floor:
        ridge = floor - lo
    hh = h + ridge * np.eye(2)
    det = hh[0, 0] * hh[1, 1] - hh[0, 1] * hh[1, 0]
    if det <= 0.0 or not np.isfinite(det):
        return -g / max(abs(hi), 1.0)
    inv = np.array([[hh[1, 1], -hh[0, 1]], [-hh[1, 0], hh[0, 0]]]) / det
    return -inv @ g


def _masked_values(model: SurrogateModel, ms: np.ndarray, ps: np.ndarray):
    with np.errstate(over="ignore", invalid="ignore"):
        vals = model.value(ms, ps)
        for link, w_min in model.omega_floors:
            w = model.links.omega_link(link, ms, ps)
            vals = np.where(w >= w_min, vals, np.inf)
    return np.where(np.isfinite(vals), vals, np.inf)


def minimize_surrogate(model: SurrogateModel, box, cfg: SolverConfig):
    """Minimize the surrogate over the box subject to the exponent floors.

    The surrogate's valley is long and nearly flat, so a coarse feasible scan
    seeds a sequence of shrinking local zooms that slide along the valley;
    a damped Newton barrier polish then drives the KKT residual down.
    Returns (m, p, value, kkt_residual); the returned point never has a larger
    surrogate value than the anchor.
    """
    m_lo, m_hi, p_lo, p_hi = box

    # ---- coarse feasible seed (vectorized scan plus the anchor)
    ms = np.geomspace(m_lo, m_hi, cfg.seed_grid)[:, None]
    ps = np.geomspace(max(p_lo, p_hi * 1e-8), p_hi, cfg.seed_grid)[None, :]
    vals = _masked_values(model, ms, ps)
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    best = (float(ms[i, 0]), float(ps[0, j]), float(vals[i, j]))
    anchor = (model.m_hat, model.p_hat, model.anchor_value)
    if anchor[2] <= best[2]:
        best = anchor
    if not np.isfinite(best[2]):
        raise InfeasibleError("no feasible point for the surrogate inside the box")

    # ---- local zoom: shrinking log-space windows around the incumbent
    half_width = math.log(4.0)
    n_loc = 25
    for _zoom in range(45):
        m_c, p_c, _ = best
        offsets = np.exp(np.linspace(-half_width, half_width, n_loc))
        mloc = np.clip(m_c * offsets, m_lo, m_hi)[:, None]
        ploc = np.clip(p_c * offsets, max(p_lo, p_hi * 1e-10), p_hi)[None, :]
        vloc = _masked_values(model, mloc, ploc)
        i, j = np.unravel_index(int(np.argmin(vloc)), vloc.shape)
        cand = (float(mloc[i, 0]), float(ploc[0, j]), float(vloc[i, j]))
        if cand[2] < best[2]:
            best = cand
        moved_to_edge = i in (0, n_loc - 1) or j in (0, n_loc - 1)
        if not moved_to_edge:
            half_width *= 0.5
        if half_width < 1e-8:
            break

    # ---- interior start for the barrier
    shrink = 1.0 - 1e-9
    x = np.array([
        min(max(best[0], m_lo / shrink), m_hi * shrink),
        min(max(best[1], p_lo / shrink), p_hi * shrink),
    ])

    def barrier_parts(xv):
        """Slack, gradient, and (for curved constraints) Hessian of every
        barrier term; None when the box is violated, so curved constraints and
        the model are only evaluated at valid allocations."""
        m, p = xv
        slacks = [(m - m_lo, np.array([1.0, 0.0]), None),
                  (m_hi - m, np.array([-1.0, 0.0]), None),
                  (p - p_lo, np.array([0.0, 1.0]), None),
                  (p_hi - p, np.array([0.0, -1.0]), None)]
        if any(s <= 0.0 for s, _, _ in slacks):
            return None
        slacks += model.constraint_slacks_grads(m, p)
        return slacks

    def slack_values(xv):
        """Just the slack magnitudes; None when the box is violated."""
        m, p = xv
        box_slacks = [m - m_lo, m_hi - m, p - p_lo, p_hi - p]
        if any(s <= 0.0 for s in box_slacks):
            return None
        return box_slacks + model.constraint_slacks(m, p)

    def strictly_feasible(xv):
        slacks = slack_values(xv)
        return slacks is not None and all(s > 0.0 for s in slacks)

    if not strictly_feasible(x):
        x = np.array([min(max(model.m_hat, m_lo / shrink), m_hi * shrink),
                      min(max(model.p_hat, p_lo / shrink), p_hi * shrink)])
    f_scale = max(abs(best[2]), 1e-12)
    # the zoom already sits at the minimizer, so the barrier can start tight
    t = 1e4 / f_scale
    best_val = model.value(float(x[0]), float(x[1]))
    best_x = x.copy()
    kkt = math.inf

    def psi_at(xv, ti):
        slacks = slack_values(xv)
        if slacks is None or any(s <= 0.0 for s in slacks):
            return math.inf
        fv = model.value(float(xv[0]), float(xv[1]))
        if not np.isfinite(fv):
            return math.inf
        out = ti * fv
        for s in slacks:
            out -= math.log(s)
        return out

    n_con = 4 + len(model.omega_floors)
    for _stage in range(4):
        for _step in range(25):
            m, p = float(x[0]), float(x[1])
            f, g, h = model.value_grad_hess(m, p)
            psi_g = t * g
            psi_h = t * h
            for s, sg, sh in barrier_parts(x):
                psi_g -= sg / s
                psi_h += np.outer(sg, sg) / (s * s)
                if sh is not None:
                    psi_h -= sh / s
            dx = _solve_convexified(psi_h, psi_g)
            decrement = -float(psi_g @ dx)
            if not np.isfinite(decrement) or decrement <= 1e-13 * max(t * f_scale, 1.0):
                break
            psi0 = psi_at(x, t)
            alpha = 1.0
            accepted = False
            for _bt in range(40):
                cand = x + alpha * dx
                if psi_at(cand, t) <= psi0 - 1e-4 * alpha * decrement:
                    x = cand
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                break
        # KKT residual with barrier multipliers 1 / (t * slack)
        m, p = float(x[0]), float(x[1])
        f, g, h = model.value_grad_hess(m, p)
        resid = g.copy()
        for s, sg, _ in barrier_parts(x):
            resid -= sg / (t * s)
        kkt = float(np.linalg.norm(resid))
        val = model.value(m, p)
        if val < best_val:
            best_val = val
            best_x = x.copy()
        if kkt <= cfg.inner_tol and n_con / t <= 1e-12 * f_scale:
            break
        t *= 1e4

    if best_val > anchor[2]:
        return model.m_hat, model.p_hat, anchor[2], kkt
    return float(best_x[0]), float(best_x[1]), float(best_val), kkt


# ---------------------------------------------------------------------------
# the iteration
# ---------------------------------------------------------------------------

def default_init(links: LinkSet, box) -> Tuple[float, float]:
    """Documented default start: blocklength equal to the packet size and the
    power putting the strongest eavesdropper at capacity-equals-rate (leakage
    one half), clipped into the box."""
    m_lo, m_hi, p_lo, p_hi = box
    m0 = min(max(float(links.d), m_lo), m_hi)
    k_eve = float(np.max(links.k[1:]))
    p_knee = (2.0 ** (links.d / m0) - 1.0) / k_eve
    p0 = min(max(p_knee, p_lo * 10.0), p_hi)
    return m0, p0


def run_iteration(links: LinkSet, cfg: SolverConfig) -> AllocationResult:
    """Algorithm core shared by the single-, super-, and passive-eavesdropper
    solvers."""
    box = _resource_box(links, cfg.m_min)
    m_lo, m_hi, p_lo, p_hi = box
    if cfg.init is not None:
        m0, p0 = float(cfg.init.m), float(cfg.init.p)
        if not (m_lo <= m0 <= m_hi and p_lo < p0 <= p_hi):
            raise InfeasibleError(
                f"initial allocation ({m0}, {p0}) lies outside the resource box"
            )
    else:
        m0, p0 = default_init(links, box)

    eps_prev = float(links.lfp(m0, p0))
    trace = SolveTrace(m0=m0, p0=p0, eps0=eps_prev)
    m_k, p_k = m0, p0

    for k in range(1, cfg.max_iter + 1):
        model = SurrogateModel(links, m_k, p_k)
        m_next, p_next, f_hat, _kkt = minimize_surrogate(model, box, cfg)
        eps_next = float(links.lfp(m_next, p_next))
        if eps_next > eps_prev:
            # numerically no descent available: stay at the anchor and stop
            m_next, p_next, eps_next = m_k, p_k, eps_prev
            f_hat = model.anchor_value
        trace.iterations.append(
            IterationRecord(k=k, m=m_next, p=p_next, eps_hat=float(f_hat),
                            eps_actual=eps_next)
        )
        trace.rounds_used = k
        gap = abs(eps_prev - eps_next)
        m_k, p_k = m_next, p_next
        eps_prev = eps_next
        if gap <= cfg.mu_th:
            trace.converged = True
            break

    m_star = _round_blocklength(links, m_k, p_k)
    pair = links.pair(float(m_star), p_k)
    eps_star = lfp_from_errors(pair.eps_b, pair.eps_e)
    return AllocationResult(m_star=m_star, p_star=p_k, eps_lf=float(eps_star),
                            pair=pair, trace=trace)


def _round_blocklength(links: LinkSet, m_relaxed: float, p_star: float) -> int:
    lo = int(math.floor(m_relaxed))
    hi = int(math.ceil(m_relaxed))
    candidates = sorted({c for c in (lo, hi) if 1 <= c <= links.m_cap})
    if not candidates:
        candidates = [min(max(lo, 1), links.m_cap)]
    best = candidates[0]
    best_val = float(links.lfp(float(candidates[0]), p_star))
    for c in candidates[1:]:
        v = float(links.lfp(float(c), p_star))
        if v < best_val:
            best, best_val = c, v
    return best


# ---------------------------------------------------------------------------
# public single-eavesdropper surface
# ---------------------------------------------------------------------------

def solve_joint(scenario: Scenario, cfg: SolverConfig | None = None) -> AllocationResult:
    """Minimize the LFP of a single-eavesdropper scenario over blocklength and
    power with the iterative surrogate method."""
    cfg = cfg or SolverConfig()
    links = linkset_single(scenario)
    return run_iteration(links, cfg)


def inner_minimize(scenario: Scenario, lp, cfg: SolverConfig | None = None):
    """One inner solve: minimize the surrogate anchored at the given local
    point over the resource box.  Returns (m_opt, p_opt)."""
    cfg = cfg or SolverConfig()
    links = linkset_single(scenario)
    model = SurrogateModel(links, lp.m_hat, lp.p_hat)
    box = _resource_box(links, cfg.m_min)
    m_opt, p_opt, _val, _kkt = minimize_surrogate(model, box, cfg)
    return m_opt, p_opt


def round_blocklength(m_relaxed: float, p_star: float, scenario: Scenario) -> int:
    """Choose the integer neighbor of a relaxed blocklength with the smaller
    achieved LFP (ties to the smaller blocklength)."""
    if m_relaxed < 1.0:
        raise ValueError("relaxed blocklength must be at least 1")
    links = linkset_single(scenario)
    return _round_blocklength(links, m_relaxed, p_star)
