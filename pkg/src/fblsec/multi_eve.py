"""Leakage-failure probability with several eavesdroppers.

Two collusion models: passive (independent decoders; the packet leaks unless
every eavesdropper fails) and super (perfect signal sharing, modeled as one
eavesdropper whose gain is the sum).  The passive surrogate telescopes the
joint-failure complement into nonnegative products before bounding each one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .bounds import build_composite_terms, composite_value
from .core import (
    ChannelSpec,
    EveModel,
    Resources,
    Scenario,
    fbl_error,
    lfp_from_errors,
    omega,
    snr,
)
from .solver import AllocationResult, LinkSet, SolverConfig, run_iteration


@dataclass(frozen=True)
class EveSet:
    """The eavesdropper side of a scenario: gains, a shared noise floor, and
    the collusion model."""

    gains: Tuple[float, ...]
    noise_power: float
    model: EveModel

    def __post_init__(self):
        object.__setattr__(self, "gains", tuple(float(g) for g in self.gains))
        if len(self.gains) < 1:
            raise ValueError("at least one eavesdropper is required")
        if any(g < 0.0 for g in self.gains):
            raise ValueError("gains must be nonnegative")
        if not self.noise_power > 0.0:
            raise ValueError("noise_power must be positive")

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "EveSet":
        noises = {e.noise_power for e in scenario.eves}
        if len(noises) != 1:
            raise ValueError("eavesdroppers must share one noise power")
        return cls(tuple(e.gain for e in scenario.eves), noises.pop(),
                   scenario.eve_model)


def super_gain(eves: EveSet) -> ChannelSpec:
    """Collapse colluding eavesdroppers into one with the summed gain."""
    return ChannelSpec(gain=float(sum(eves.gains)), noise_power=eves.noise_power)


def telescope_leakage(eps_e: Sequence[float]) -> float:
    """1 - prod(eps) expanded as sum_n (1 - eps_n) * prod_{i > n} eps_i
    (sentinel factor 1 past the end); every summand is nonnegative."""
    eps = [float(e) for e in eps_e]
    if any(not 0.0 <= e <= 1.0 for e in eps):
        raise ValueError("error probabilities must lie in [0, 1]")
    total = 0.0
    tail = 1.0
    for e in reversed(eps):
        total += (1.0 - e) * tail
        tail *= e
    return total


def lfp_passive(scenario: Scenario, res: Resources) -> float:
    """LFP with independent eavesdroppers: Bob fails, or at least one
    eavesdropper decodes."""
    gb = snr(scenario.bob, res.p)
    eps_b = fbl_error(gb, scenario.d, res.m)
    prod = 1.0
    for eve in scenario.eves:
        prod *= fbl_error(snr(eve, res.p), scenario.d, res.m)
    return float(lfp_from_errors(eps_b, prod))


@dataclass(frozen=True)
class PassiveAnchor:
    """Anchor allocation of the passive surrogate with the per-link exponents
    it induces."""

    m_hat: float
    p_hat: float
    omega_b_hat: float
    omega_e_hats: Tuple[float, ...]


def passive_anchor(scenario: Scenario, res: Resources) -> PassiveAnchor:
    wb = omega(snr(scenario.bob, res.p), scenario.d, res.m)
    wes = tuple(
        float(omega(snr(e, res.p), scenario.d, res.m)) for e in scenario.eves
    )
    return PassiveAnchor(res.m, res.p, float(wb), wes)


def approx_lfp_passive(m: float, p: float, scenario: Scenario,
                       anchor) -> float:
    """Anchored surrogate of the passive-eavesdropper LFP: each telescoped
    product term is replaced by its ratio-weighted power mean with every factor
    bounded by an anchored exponential.  Upper-bounds lfp_passive everywhere
    and matches it at the anchor.

    The anchor may be a PassiveAnchor or any object with m_hat / p_hat fields
    (a single-eavesdropper LocalPoint included); exponents are derived from
    the anchor allocation.
    """
    m_hat, p_hat = float(anchor.m_hat), float(anchor.p_hat)
    wb_hat = omega(snr(scenario.bob, p_hat), scenario.d, m_hat)
    we_hats = [
        float(omega(snr(e, p_hat), scenario.d, m_hat)) for e in scenario.eves
    ]
    terms = build_composite_terms(float(wb_hat), we_hats)
    wb = omega(snr(scenario.bob, p), scenario.d, m)
    wes = [omega(snr(e, p), scenario.d, m) for e in scenario.eves]
    return composite_value(terms, [wb] + wes)


def linkset_for(scenario: Scenario) -> LinkSet:
    """Link set realizing the scenario's eavesdropper model: the super model
    collapses to one summed-gain link, the passive model keeps all links."""
    if scenario.eve_model is EveModel.SUPER and len(scenario.eves) > 1:
        combined = super_gain(EveSet.from_scenario(scenario))
        return LinkSet(scenario.d, scenario.bob, (combined,),
                       scenario.m_cap, scenario.p_cap)
    return LinkSet(scenario.d, scenario.bob, scenario.eves,
                   scenario.m_cap, scenario.p_cap)


def scenario_lfp(scenario: Scenario, res: Resources) -> float:
    """Actual LFP of any scenario under its own eavesdropper model."""
    links = linkset_for(scenario)
    return float(links.lfp(res.m, res.p))


def solve_multi(scenario: Scenario, cfg: SolverConfig | None = None) -> AllocationResult:
    """Minimize the LFP of a multi-eavesdropper scenario.  Colluding
    eavesdroppers are solved on the aggregated link; passive ones run the
    iteration on the telescoped surrogate."""
    cfg = cfg or SolverConfig()
    return run_iteration(linkset_for(scenario), cfg)
