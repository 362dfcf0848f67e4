import math

import numpy as np
import pytest

from fblsec.bounds import (
    am_gm_upper,
    approx_lfp,
    build_composite_terms,
    composite_value,
    exp_bound_coeffs,
    local_point,
    one_minus_q_upper,
    q_upper,
)
from fblsec.core import Resources, lfp_at, q
from fblsec.errors import DegenerateLocalPointError

# hazard rate phi/Q at +6, frozen from a 50-digit oracle
HAZARD_AT_6 = 6.158482604544598917278


def test_am_gm_equality_at_anchor():
    assert am_gm_upper([2.0, 8.0], [2.0, 8.0]) == pytest.approx(16.0, rel=1e-14)


def test_am_gm_dominance_simple():
    assert am_gm_upper([4.0, 4.0], [2.0, 8.0]) == pytest.approx(25.0, rel=1e-14)
    assert 25.0 >= 16.0


def test_am_gm_single_factor():
    for fh in [0.3, 1.0, 7.5]:
        assert am_gm_upper([4.2], [fh]) == pytest.approx(4.2, rel=1e-14)


def test_am_gm_random_dominance(rng):
    for _ in range(10_000):
        n = int(rng.integers(1, 6))
        f = rng.uniform(1e-6, 10.0, size=n)
        fh = rng.uniform(1e-6, 10.0, size=n)
        bound = am_gm_upper(f, fh)
        assert bound >= np.prod(f) * (1.0 - 1e-12)
        assert am_gm_upper(fh, fh) == pytest.approx(np.prod(fh), rel=1e-12)


def test_am_gm_rejects_nonpositive():
    with pytest.raises(ValueError):
        am_gm_upper([1.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        am_gm_upper([1.0], [1.0, 2.0])


def test_exp_bound_coeffs_at_zero():
    cf = exp_bound_coeffs(0.0)
    assert cf.a == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-14)
    assert cf.b == pytest.approx(0.5, rel=1e-14)
    assert cf.c == pytest.approx(0.0, abs=1e-15)


def test_exp_bound_anchor_identity():
    for wh in [-3.0, -1.0, 1.0, 3.0]:
        cf = exp_bound_coeffs(wh)
        assert cf.b * math.exp(-cf.a * wh) + cf.c == pytest.approx(q(wh), abs=1e-12)
        assert q_upper(wh, cf) == pytest.approx(q(wh), abs=1e-12)


def test_exp_bound_large_anchor_no_overflow():
    cf = exp_bound_coeffs(6.0)
    assert cf.a == pytest.approx(HAZARD_AT_6, rel=1e-13)
    assert math.isfinite(cf.log_b)
    assert q_upper(6.0, cf) == pytest.approx(q(6.0), rel=1e-12)
    # far saturated anchors degrade to a constant bound instead of overflowing
    cf_deep = exp_bound_coeffs(60.0)
    assert math.isfinite(cf_deep.a)
    assert q_upper(60.0, cf_deep) == pytest.approx(q(60.0), abs=1e-15)
    cf_neg = exp_bound_coeffs(-60.0)
    assert q_upper(-60.0, cf_neg) == pytest.approx(1.0, abs=1e-12)


def test_q_upper_dominates_everywhere(rng):
    anchors = np.linspace(-6.0, 6.0, 101)
    omegas = np.linspace(-10.0, 10.0, 1001)
    for wh in anchors:
        cf = exp_bound_coeffs(float(wh))
        vals = q_upper(omegas, cf)
        assert np.all(vals >= q(omegas) - 1e-12)
        assert q_upper(float(wh), cf) == pytest.approx(q(float(wh)), abs=1e-9)


def test_q_upper_limit_constant_nonnegative():
    for wh in np.linspace(-6, 6, 25):
        cf = exp_bound_coeffs(float(wh))
        assert cf.c >= -1e-12
        # the bound's large-omega limit dominates Q(inf) = 0
        assert q_upper(80.0, cf) >= -1e-12


def test_one_minus_q_upper_symmetry_and_dominance():
    omegas = np.linspace(-10.0, 10.0, 1001)
    for wh in np.linspace(-6.0, 6.0, 101):
        cf_neg = exp_bound_coeffs(float(-wh))
        vals = one_minus_q_upper(omegas, cf_neg)
        assert np.all(vals >= (1.0 - q(omegas)) - 1e-12)
        # anchored tightness at w = wh
        assert one_minus_q_upper(float(wh), cf_neg) == pytest.approx(
            1.0 - q(float(wh)), abs=1e-9
        )
        # mirror identity with the plain upper bound
        sample = np.array([-2.5, 0.0, 1.75])
        np.testing.assert_allclose(
            one_minus_q_upper(sample, cf_neg),
            q_upper(-sample, cf_neg),
            rtol=0.0, atol=1e-14,
        )


def test_approx_lfp_tight_at_anchor(default_scenario):
    res = Resources(m=320.0, p=0.1)
    lp = local_point(default_scenario, res)
    actual, _ = lfp_at(default_scenario, res)
    assert approx_lfp(res.m, res.p, default_scenario, lp) == pytest.approx(
        actual, abs=1e-9
    )


def test_approx_lfp_dominates(default_scenario, rng):
    lp = local_point(default_scenario, Resources(m=320.0, p=0.1))
    for _ in range(1000):
        m = rng.uniform(50.0, 3000.0)
        p = rng.uniform(1e-3, 10.0)
        actual, _ = lfp_at(default_scenario, Resources(m=m, p=p))
        assert approx_lfp(m, p, default_scenario, lp) >= actual - 1e-12


def test_surrogate_convex_in_exponent_space(default_scenario, rng):
    """As a function of the two decoding exponents the surrogate is a sum of
    convex exponential compositions: midpoints never beat chord averages."""
    from fblsec.bounds import build_composite_terms, composite_value

    lp = local_point(default_scenario, Resources(m=320.0, p=0.1))
    terms = build_composite_terms(lp.omega_b_hat, [lp.omega_e_hat])
    for _ in range(2000):
        wb1, wb2 = rng.uniform(-2.0, 10.0, size=2)
        we1, we2 = rng.uniform(-6.0, 4.0, size=2)
        f1 = composite_value(terms, [wb1, we1])
        f2 = composite_value(terms, [wb2, we2])
        fm = composite_value(terms, [0.5 * (wb1 + wb2), 0.5 * (we1 + we2)])
        if not (np.isfinite(f1) and np.isfinite(f2)):
            continue
        assert fm <= 0.5 * (f1 + f2) + 1e-9 * max(1.0, abs(f1) + abs(f2))


def test_reliability_term_convex_in_resources(default_scenario, rng):
    """The error-product term composes decreasing convex exponentials with the
    jointly concave exponents, so it is convex in (m, p) wherever the rate
    clears the concavity threshold.  (The full surrogate is not: its leakage
    term rises with the eavesdropper exponent, and the exact Hessian picks up
    a small negative eigenvalue along the valley.)"""
    from fblsec.bounds import build_composite_terms, composite_value
    from fblsec.core import omega, snr
    from fblsec.convexity import rate_threshold_sweep_max

    sc = default_scenario
    lp = local_point(sc, Resources(m=320.0, p=0.1))
    terms = build_composite_terms(lp.omega_b_hat, [lp.omega_e_hat])
    reliability = [terms[0]]
    thr = rate_threshold_sweep_max(150.0)
    m_cap = sc.d / thr

    def value(m, p):
        wb = omega(snr(sc.bob, p), sc.d, m)
        we = omega(snr(sc.single_eve, p), sc.d, m)
        return composite_value(reliability, [wb, we])

    checked = 0
    while checked < 500:
        m1, m2 = rng.uniform(60.0, min(3000.0, m_cap), size=2)
        p1, p2 = rng.uniform(0.01, 10.0, size=2)
        f1, f2 = value(m1, p1), value(m2, p2)
        if not (np.isfinite(f1) and np.isfinite(f2)):
            continue
        fm = value(0.5 * (m1 + m2), 0.5 * (p1 + p2))
        assert fm <= 0.5 * (f1 + f2) + 1e-9 * max(1.0, abs(f1) + abs(f2))
        checked += 1


def test_approx_lfp_rejects_degenerate_local_point(default_scenario):
    lp = local_point(default_scenario, Resources(m=320.0, p=0.1))
    bad = type(lp)(lp.m_hat, lp.p_hat, 0.0, lp.eps_e_hat,
                   lp.omega_b_hat, lp.omega_e_hat)
    with pytest.raises(DegenerateLocalPointError):
        approx_lfp(300.0, 0.1, default_scenario, bad)


def test_local_point_floors_saturated_probabilities(default_scenario):
    # huge resources: both raw probabilities underflow; the anchor keeps them
    # strictly inside (0, 1)
    lp = local_point(default_scenario, Resources(m=3000.0, p=10.0))
    assert 0.0 < lp.eps_b_hat < 1.0
    assert 0.0 < lp.eps_e_hat < 1.0


def test_composite_terms_reduce_to_pair_formula(default_scenario):
    """For one eavesdropper the composite equals the two-factor product bound
    plus the leakage bound, written with the anchored ratio weights."""
    res = Resources(m=400.0, p=0.08)
    lp = local_point(default_scenario, res)
    terms = build_composite_terms(lp.omega_b_hat, [lp.omega_e_hat])
    assert len(terms) == 2
    assert len(terms[0].factors) == 2
    assert len(terms[1].factors) == 1
    from fblsec.core import omega, snr

    m, p = 500.0, 0.1
    wb = omega(snr(default_scenario.bob, p), default_scenario.d, m)
    we = omega(snr(default_scenario.single_eve, p), default_scenario.d, m)
    val = composite_value(terms, [wb, we])
    eb_hat = q_upper(wb, terms[0].factors[0].coeffs)
    ee_hat = q_upper(we, terms[0].factors[1].coeffs)
    d_hat = one_minus_q_upper(we, terms[1].factors[0].coeffs)
    manual = (lp.eps_e_hat / (4.0 * lp.eps_b_hat)) * (
        eb_hat + lp.eps_b_hat / lp.eps_e_hat * ee_hat
    ) ** 2 + d_hat
    assert val == pytest.approx(manual, rel=1e-12)
