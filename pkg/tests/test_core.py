import math

import numpy as np
import pytest

from fblsec.core import (
    ChannelSpec,
    ReliabilityPair,
    Resources,
    capacity,
    dispersion,
    fbl_error,
    lfp,
    lfp_at,
    max_rate,
    omega,
    q,
    q_inv,
    secrecy_rate,
    snr,
)
from fblsec.errors import DegenerateChannelError

from conftest import make_scenario

# Frozen values computed with a 50-digit complementary-error-function oracle.
Q_AT_5_5556 = 1.3832988504416734706e-8
OMEGA_15_320_100 = 5.556039702576919852
FBL_15_320_100 = 1.3798206376398127755e-8
Q_AT_1 = 0.1586552539314570514148


def test_snr_arithmetic():
    assert snr(ChannelSpec(1.5, 0.1), 1.0) == pytest.approx(15.0, rel=1e-15)
    assert snr(ChannelSpec(1.0, 0.1), 0.0) == 0.0
    assert snr(ChannelSpec(1.0, 0.1), 10.0) == pytest.approx(100.0, rel=1e-15)
    with pytest.raises(ValueError):
        snr(ChannelSpec(1.0, 0.1), -1.0)


def test_capacity_values():
    assert capacity(0.0) == 0.0
    assert capacity(1.0) == pytest.approx(1.0, rel=1e-15)
    assert capacity(3.0) == pytest.approx(2.0, rel=1e-15)


def test_dispersion_values():
    assert dispersion(0.0) == 0.0
    assert dispersion(1.0) == pytest.approx(0.75, rel=1e-15)
    assert dispersion(1e9) == pytest.approx(1.0, abs=1e-12)
    g = np.linspace(0.01, 50, 100)
    v = dispersion(g)
    assert np.all((v >= 0) & (v < 1))


def test_q_basics():
    assert q(0.0) == 0.5
    assert q(5.5556) == pytest.approx(Q_AT_5_5556, rel=1e-13)
    xs = np.linspace(-8, 8, 2001)
    assert np.max(np.abs(q(xs) + q(-xs) - 1.0)) < 1e-14
    assert q(39.0) == 0.0
    assert q(-39.0) == 1.0
    assert np.all(np.diff(q(xs)) <= 0)
    # strictly decreasing wherever adjacent values are resolvable in doubles
    mid = np.linspace(-6, 6, 1201)
    assert np.all(np.diff(q(mid)) < 0)


def test_q_inv_round_trips():
    assert q_inv(0.5) == 0.0
    assert q_inv(q(2.0)) == pytest.approx(2.0, abs=1e-12)
    assert q_inv(Q_AT_1) == pytest.approx(1.0, abs=1e-12)
    # identity in the argument, on the range where the double representation
    # of q(x) still carries 1e-12 of argument information (saturation toward
    # y = 1 flattens q to ~1e-8 plateaus beyond x ~ -4.3)
    for x in np.linspace(-4, 6, 51):
        assert q_inv(q(x)) == pytest.approx(x, abs=1e-12)
    for x in np.linspace(-6, -4, 9):
        assert q_inv(q(x)) == pytest.approx(x, abs=1e-7)
    # value-side round trip is well posed everywhere
    for y in [1e-12, 1e-6, 0.3, 0.9, 1 - 1e-9]:
        assert q(q_inv(y)) == pytest.approx(y, abs=1e-12)
    with pytest.raises(ValueError):
        q_inv(0.0)
    with pytest.raises(ValueError):
        q_inv(1.0)


def test_omega_values():
    # rate equal to capacity: exponent vanishes
    g = 3.0
    m = 200.0
    d = int(capacity(g) * m)
    assert omega(g, d, m) == pytest.approx(0.0, abs=1e-12)
    assert omega(15.0, 320, 100.0) == pytest.approx(OMEGA_15_320_100, rel=1e-14)
    # growing blocklength at fixed positive margin pushes the exponent up
    w1 = omega(15.0, 320, 1000.0)
    w2 = omega(15.0, 320, 4000.0)
    assert w2 > w1 > OMEGA_15_320_100
    with pytest.raises(DegenerateChannelError):
        omega(0.0, 320, 100.0)


def test_fbl_error_against_oracle():
    assert fbl_error(15.0, 320, 100.0) == pytest.approx(FBL_15_320_100, rel=1e-12)
    # rate equal to capacity gives a coin flip
    g = 3.0
    m = 200.0
    assert fbl_error(g, int(2 * m), m) == pytest.approx(0.5, abs=1e-12)
    # rate far above capacity: certain failure (oracle value is 1 - 3e-69)
    assert fbl_error(15.0, 320, 40.0) == 1.0


def test_lfp_combinations():
    assert lfp(ReliabilityPair(0.0, 0.0)) == 1.0
    assert lfp(ReliabilityPair(0.0, 1.0)) == 0.0
    assert lfp(ReliabilityPair(0.5, 0.5)) == 0.75
    assert ReliabilityPair(0.2, 0.7).delta == pytest.approx(0.3)
    with pytest.raises(ValueError):
        ReliabilityPair(-0.1, 0.5)


def test_lfp_at_symmetric_channels():
    sc = make_scenario(z_b=1.0, z_e=1.0)
    val, pair = lfp_at(sc, Resources(m=400, p=0.1))
    assert pair.eps_b == pytest.approx(pair.eps_e, rel=1e-15)
    assert val == pytest.approx(lfp(pair), rel=1e-15)


def test_lfp_at_large_resources_leakage_dominates(default_scenario):
    sc = default_scenario
    val, pair = lfp_at(sc, Resources(m=sc.m_cap, p=sc.p_cap))
    # both links decode with certainty: everything leaks
    assert pair.eps_b < 1e-300
    assert pair.delta == pytest.approx(1.0, abs=1e-300)
    assert val == 1.0


def test_lfp_at_oracle_value(default_scenario):
    # at (m=500, p=1) both error probabilities underflow; the oracle LFP is
    # 1 - 4.5e-594 which rounds to exactly 1.0 in double precision
    val, _ = lfp_at(default_scenario, Resources(m=500, p=1.0))
    assert val == 1.0


def test_lfp_at_rejects_multi_eve():
    sc = make_scenario(eve_gains=[1.0, 0.5])
    with pytest.raises(ValueError, match="multi"):
        lfp_at(sc, Resources(m=100, p=1.0))


def test_max_rate_contract():
    assert max_rate(3.0, 500, 0.5) == pytest.approx(capacity(3.0), rel=1e-12)
    assert max_rate(3.0, 10 ** 9, 1e-5) == pytest.approx(capacity(3.0), abs=1e-3)
    # round trip through the error model
    g, m, eps = 15.0, 200.0, 1e-5
    r = max_rate(g, m, eps)
    assert fbl_error(g, m * r, m) == pytest.approx(eps, abs=1e-9)
    with pytest.raises(ValueError):
        max_rate(3.0, 100, 0.0)


def test_secrecy_rate_trivial_cases():
    assert secrecy_rate(3.0, 1.0, 100, 0.5, 0.5) == pytest.approx(
        capacity(3.0) - capacity(1.0), rel=1e-12
    )
    # symmetric channels and equal probabilities: only the penalties remain
    g, m, eps = 2.0, 150.0, 0.1
    expected = -2.0 * math.sqrt(dispersion(g) / m) * q_inv(eps) / math.log(2.0)
    assert secrecy_rate(g, g, m, eps, eps) == pytest.approx(expected, rel=1e-12)


def test_secrecy_rate_consistency_identity(rng):
    """The error pair induced by an allocation has zero secrecy margin, with
    each side's rate term individually recovering the transmission rate."""
    for _ in range(1000):
        gb = rng.uniform(0.5, 60.0)
        ge = rng.uniform(0.1, gb)
        d = int(rng.integers(16, 1024))
        # keep both exponents where q and the 1 - eps_e complement still
        # resolve the argument to the tested tolerance
        for _ in range(50):
            m = rng.uniform(d / 8, 4000.0)
            wb = omega(gb, d, m)
            we = omega(ge, d, m)
            if -4.0 < wb < 8.0 and -4.0 < we < 5.5:
                break
        else:
            continue
        eps_b = fbl_error(gb, d, m)
        eps_e = fbl_error(ge, d, m)
        r = d / m
        rb = max_rate(gb, m, eps_b)
        assert rb == pytest.approx(r, abs=1e-9)
        rs = secrecy_rate(gb, ge, m, eps_b, 1.0 - eps_e)
        assert rs == pytest.approx(0.0, abs=1e-9)


def test_fbl_error_always_a_probability(rng):
    """No NaN and no excursion outside [0, 1] across wild random inputs."""
    for _ in range(5000):
        g = 10.0 ** rng.uniform(-8, 4)
        d = int(rng.integers(1, 2049))
        m = 10.0 ** rng.uniform(0, 5)
        v = fbl_error(g, d, m)
        assert 0.0 <= v <= 1.0
        assert not math.isnan(v)


def test_monotonicity_in_resources(rng):
    """Error probability strictly decreases in blocklength and power;
    leakage correspondingly increases."""
    violations = 0
    for _ in range(10_000):
        z = rng.uniform(0.05, 5.0)
        s2 = rng.uniform(0.01, 1.0)
        p = rng.uniform(1e-3, 10.0)
        d = int(rng.integers(8, 1025))
        m = rng.uniform(max(8.0, d / 8), 4000.0)
        g = p * z / s2
        e0 = fbl_error(g, d, m)
        if not 1e-300 < e0 < 1.0 - 1e-16:
            continue
        e_m = fbl_error(g, d, m * 1.01)
        e_p = fbl_error((p * 1.01) * z / s2, d, m)
        if not (e_m < e0 and e_p < e0):
            violations += 1
    assert violations == 0


def test_scenario_validation():
    with pytest.raises(ValueError):
        make_scenario(d=0)
    with pytest.raises(ValueError):
        ChannelSpec(-1.0, 0.1)
    with pytest.raises(ValueError):
        ChannelSpec(1.0, 0.0)
    with pytest.raises(ValueError):
        Resources(m=0.0, p=1.0)
