import numpy as np
import pytest

from fblsec.core import ChannelSpec, EveModel, Scenario


def make_scenario(d=320, z_b=1.5, z_e=1.0, noise=0.1, m_cap=3000, p_cap=10.0,
                  eve_gains=None, eve_model=EveModel.PASSIVE, mean_gain=None):
    """Normalized reference setup used across the test suite."""
    gains = [z_e] if eve_gains is None else list(eve_gains)
    eves = tuple(ChannelSpec(g, noise, mean_gain) for g in gains)
    return Scenario(d=d, bob=ChannelSpec(z_b, noise), eves=eves,
                    eve_model=eve_model, m_cap=m_cap, p_cap=p_cap)


def feasible_threshold_cases(count, seed=42, min_width=3):
    """Deterministic stream of (scenario, power, thresholds) triples whose
    feasible blocklength window is non-empty and at least min_width wide."""
    from fblsec.constrained import Thresholds, feasible_m_interval

    rng = np.random.default_rng(seed)
    cases = []
    while len(cases) < count:
        z_b = rng.uniform(2.0, 8.0)
        d = int(rng.integers(120, 700))
        p = rng.uniform(0.05, 1.0)
        thr = 10.0 ** rng.uniform(-4.0, -1.3)
        sc = make_scenario(d=d, z_b=z_b)
        th = Thresholds(delta_max=thr, eps_b_max=thr)
        interval = feasible_m_interval(sc, p, th)
        if interval and interval[1] - interval[0] + 1 >= min_width:
            cases.append((sc, p, th, interval))
    return cases


@pytest.fixture
def default_scenario():
    return make_scenario()


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
