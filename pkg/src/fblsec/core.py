"""Finite-blocklength primitives: SNR, capacity, dispersion, the Gaussian tail
function and its inverse, the decoding exponent, per-link error probabilities,
and the leakage-failure probability that combines them.

All probability outputs are clamped to [0, 1].  Functions accept numpy arrays
wherever that is natural; scalar floats come back for scalar inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import erfc

from .errors import DegenerateChannelError

LN2 = math.log(2.0)
_SQRT2 = math.sqrt(2.0)
_TAIL_CLAMP = 38.0


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChannelSpec:
    """One link's gain statistics and noise floor.

    gain is the squared channel magnitude (dimensionless), noise_power is in
    watts.  mean_gain is only consulted when the gain is treated as a random
    fade (statistical CSI); it is the mean of the gain distribution.
    """

    gain: float
    noise_power: float
    mean_gain: Optional[float] = None

    def __post_init__(self):
        if not self.gain >= 0.0:
            raise ValueError(f"gain must be >= 0, got {self.gain}")
        if not self.noise_power > 0.0:
            raise ValueError(f"noise_power must be > 0, got {self.noise_power}")
        if self.mean_gain is not None and not self.mean_gain > 0.0:
            raise ValueError(f"mean_gain must be > 0, got {self.mean_gain}")


@dataclass(frozen=True)
class Resources:
    """A candidate allocation: blocklength m (channel uses) and power p (watts).

    m is a positive real while relaxed inside solvers and a positive integer
    in final allocations.
    """

    m: float
    p: float

    def __post_init__(self):
        if not self.m > 0.0:
            raise ValueError(f"blocklength must be > 0, got {self.m}")
        if not self.p >= 0.0:
            raise ValueError(f"power must be >= 0, got {self.p}")


class EveModel(enum.Enum):
    """How multiple eavesdroppers combine: independent decoders or MRC collusion."""

    PASSIVE = "passive"
    SUPER = "super"


@dataclass(frozen=True)
class Scenario:
    """A transmission setup: packet size, Bob's link, the eavesdropper links,
    how the eavesdroppers combine, and the resource caps."""

    d: int
    bob: ChannelSpec
    eves: Tuple[ChannelSpec, ...]
    eve_model: EveModel = EveModel.PASSIVE
    m_cap: int = 3000
    p_cap: float = 10.0

    def __post_init__(self):
        if not (isinstance(self.d, (int, np.integer)) and self.d >= 1):
            raise ValueError(f"packet size d must be a positive integer, got {self.d}")
        object.__setattr__(self, "eves", tuple(self.eves))
        if len(self.eves) < 1:
            raise ValueError("at least one eavesdropper channel is required")
        if not (isinstance(self.m_cap, (int, np.integer)) and self.m_cap >= 1):
            raise ValueError(f"m_cap must be a positive integer, got {self.m_cap}")
        if not self.p_cap > 0.0:
            raise ValueError(f"p_cap must be > 0, got {self.p_cap}")

    @property
    def single_eve(self) -> ChannelSpec:
        if len(self.eves) != 1:
            raise ValueError(
                "scenario has multiple eavesdroppers; use the multi_eve module"
            )
        return self.eves[0]

    def with_updates(self, **kwargs) -> "Scenario":
        """Return a copy with the given fields replaced."""
        fields = {
            "d": self.d,
            "bob": self.bob,
            "eves": self.eves,
            "eve_model": self.eve_model,
            "m_cap": self.m_cap,
            "p_cap": self.p_cap,
        }
        fields.update(kwargs)
        return Scenario(**fields)


@dataclass(frozen=True)
class ReliabilityPair:
    """Bob's decoding error probability and Eve's decoding error probability."""

    eps_b: float
    eps_e: float

    def __post_init__(self):
        for name, v in (("eps_b", self.eps_b), ("eps_e", self.eps_e)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def delta(self) -> float:
        """Leakage probability: the chance the eavesdropper decodes the packet."""
        return 1.0 - self.eps_e


# ---------------------------------------------------------------------------
# elementary quantities
# ---------------------------------------------------------------------------

def snr(ch: ChannelSpec, p: float):
    """Received SNR for transmit power p over the given link."""
    p = np.asarray(p, dtype=float) if np.ndim(p) else float(p)
    if np.any(np.asarray(p) < 0.0):
        raise ValueError("power must be >= 0")
    return p * ch.gain / ch.noise_power


def capacity(gamma):
    """Shannon capacity log2(1 + gamma) in bits per channel use."""
    return np.log2(1.0 + np.asarray(gamma, dtype=float)) if np.ndim(gamma) else math.log2(1.0 + gamma)


def dispersion(gamma):
    """Channel dispersion 1 - (1 + gamma)^-2; lies in [0, 1)."""
    g = np.asarray(gamma, dtype=float)
    out = 1.0 - (1.0 + g) ** -2
    return out if np.ndim(gamma) else float(out)


def q(x):
    """Gaussian tail probability Q(x), via the complementary error function.

    Tails beyond |x| = 38 are clamped to exactly 0 or 1.
    """
    xv = np.asarray(x, dtype=float)
    with np.errstate(under="ignore"):
        out = 0.5 * erfc(xv / _SQRT2)
    out = np.where(xv > _TAIL_CLAMP, 0.0, out)
    out = np.where(xv < -_TAIL_CLAMP, 1.0, out)
    return out if np.ndim(x) else float(out)


def _q_derivative(x):
    return -math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def q_inv(y: float) -> float:
    """Inverse of q on (0, 1), by bisection bracketed on [0, 40] followed by
    Newton polish, with the y > 1/2 branch reduced through q(-x) = 1 - q(x).

    Accurate to about 1e-13 in the argument where y carries that much
    information; for y within ~1e-9 of 1 the double representation of y
    itself limits the recoverable argument to ~1e-8.
    """
    if not 0.0 < y < 1.0:
        raise ValueError(f"q_inv requires y in (0, 1), got {y}")
    if y == 0.5:
        return 0.0
    if y > 0.5:
        return -_q_inv_lower(1.0 - y)
    return _q_inv_lower(y)


def _q_inv_lower(u: float) -> float:
    """Inverse of q restricted to arguments >= 0 (u <= 1/2)."""
    lo, hi = 0.0, 40.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if q(mid) > u:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(8):
        fx = q(x) - u
        dfx = _q_derivative(x)
        if dfx == 0.0:
            break
        step = fx / dfx
        x_new = x - step
        if not 0.0 <= x_new <= 40.0:
            break
        x = x_new
        if abs(step) < 1e-15 * max(1.0, abs(x)):
            break
    return x


def omega(gamma, d, m):
    """Decoding exponent sqrt(m / V) * (C - d/m) * ln 2.

    Its sign matches the sign of the capacity margin C(gamma) - d/m.
    Raises DegenerateChannelError at gamma = 0 where the dispersion vanishes.
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g <= 0.0):
        raise DegenerateChannelError("omega requires gamma > 0 (dispersion vanishes at 0)")
    mv = np.asarray(m, dtype=float)
    if np.any(mv <= 0.0):
        raise ValueError("blocklength must be > 0")
    v = 1.0 - (1.0 + g) ** -2
    out = np.sqrt(mv / v) * (np.log2(1.0 + g) - d / mv) * LN2
    return out if (np.ndim(gamma) or np.ndim(m)) else float(out)


def fbl_error(gamma, d, m):
    """Decoding error probability of a length-m code carrying d bits at SNR gamma."""
    w = omega(gamma, d, m)
    out = np.clip(q(w), 0.0, 1.0)
    return out if np.ndim(out) else float(out)


def lfp(pair: ReliabilityPair) -> float:
    """Leakage-failure probability: Bob fails to decode or Eve succeeds."""
    return lfp_from_errors(pair.eps_b, pair.eps_e)


def lfp_from_errors(eps_b, eps_e):
    """Vector-friendly form of the leakage-failure combination
    1 - (1 - eps_b) * eps_e."""
    return 1.0 - (1.0 - eps_b) * eps_e


def lfp_at(scenario: Scenario, res: Resources) -> Tuple[float, ReliabilityPair]:
    """Evaluate the LFP of a single-eavesdropper scenario at an allocation."""
    eve = scenario.single_eve
    gb = snr(scenario.bob, res.p)
    ge = snr(eve, res.p)
    eps_b = fbl_error(gb, scenario.d, res.m)
    eps_e = fbl_error(ge, scenario.d, res.m)
    pair = ReliabilityPair(eps_b=eps_b, eps_e=eps_e)
    return lfp(pair), pair


def max_rate(gamma: float, m: float, eps_bar: float) -> float:
    """Largest rate supportable at blocklength m with target error eps_bar.

    The dispersion penalty is scaled so that fbl_error(gamma, m * max_rate, m)
    returns eps_bar again.
    """
    if not 0.0 < eps_bar < 1.0:
        raise ValueError(f"target error must lie in (0, 1), got {eps_bar}")
    if gamma <= 0.0:
        raise DegenerateChannelError("max_rate requires gamma > 0")
    return capacity(gamma) - math.sqrt(dispersion(gamma) / m) * q_inv(eps_bar) / LN2


def secrecy_rate(gamma_b: float, gamma_e: float, m: float,
                 eps_b: float, delta: float) -> float:
    """Secrecy rate achievable with Bob error eps_b and leakage delta.

    Bob's term is the rate his link supports at error eps_b; Eve's term is the
    randomization rate that caps her decoding probability at delta.  Both
    dispersion penalties use the same bits scaling as fbl_error, so feeding the
    error pair induced by an actual allocation back in recovers a zero margin.
    """
    for name, v in (("eps_b", eps_b), ("delta", delta)):
        if not 0.0 < v < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {v}")
    cs = capacity(gamma_b) - capacity(gamma_e)
    pen_b = math.sqrt(dispersion(gamma_b) / m) * q_inv(eps_b) / LN2
    pen_e = math.sqrt(dispersion(gamma_e) / m) * q_inv(delta) / LN2
    return cs - pen_b - pen_e


def fbl_error_over_gains(gains, noise_power: float, p: float, d: int, m):
    """fbl_error evaluated across an array of channel gains, with the zero-gain
    limit (error probability 1) filled in for vanishing entries.

    Used by the fading expectation, where gain draws can be arbitrarily small.
    """
    z = np.asarray(gains, dtype=float)
    out = np.ones(np.broadcast_shapes(z.shape, np.shape(m)), dtype=float)
    pos = np.broadcast_to(z > 1e-300, out.shape)
    g = np.broadcast_to(z * p / noise_power, out.shape)[pos]
    mv = np.broadcast_to(np.asarray(m, dtype=float), out.shape)[pos]
    v = 1.0 - (1.0 + g) ** -2
    w = np.sqrt(mv / v) * (np.log2(1.0 + g) - d / mv) * LN2
    out[pos] = np.clip(q(w), 0.0, 1.0)
    return out


def scale_gains(scenario: Scenario, which: str, value: float) -> Scenario:
    """Copy a scenario with one gain field ('bob' or 'eve:<index>') replaced."""
    if which == "bob":
        return scenario.with_updates(
            bob=ChannelSpec(value, scenario.bob.noise_power, scenario.bob.mean_gain)
        )
    if which.startswith("eve:"):
        idx = int(which.split(":", 1)[1])
        eves = list(scenario.eves)
        old = eves[idx]
        eves[idx] = ChannelSpec(value, old.noise_power, old.mean_gain)
        return scenario.with_updates(eves=tuple(eves))
    raise ValueError(f"unknown gain selector {which!r}")
