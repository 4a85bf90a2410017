import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fxtheli.envelope import Envelope, EnvelopeConfig, Family, sample

FAMILIES = list(Family)


@st.composite
def configs(draw, family=None):
    fam = draw(st.sampled_from(FAMILIES)) if family is None else family
    delta = draw(st.floats(0.02, 1.0))
    dbar = draw(st.floats(0.02, 1.0))
    cfg = EnvelopeConfig(
        fam, draw(st.floats(0.2, 5.0)), delta, dbar,
        delta * draw(st.floats(0.05, 0.9)), dbar * draw(st.floats(0.05, 0.9)),
        *(draw(st.floats(0.2, 3.0)) for _ in range(4)),
        e1_0=draw(st.floats(-1.0, 1.0)))
    try:
        Envelope(cfg)
    except ValueError:
        assume(False)
    return cfg


@pytest.mark.parametrize("kw", [
    dict(Ts=0.0), dict(delta=0.0), dict(e_inf=0.06), dict(e_inf_bar=0.05),
    dict(family="csch", b_l=0.0), dict(family="sech", a_u=-1.0),
])
def test_invalid_config(kw):
    with pytest.raises(ValueError):
        EnvelopeConfig(**kw)


def test_unknown_family():
    with pytest.raises(ValueError):
        EnvelopeConfig(family="gauss")


def test_exp_midpoint():
    e10, d, einf, Ts = -0.3316, 0.05, 0.03, 1.2
    cfg = EnvelopeConfig("exp", Ts, d, d, einf, einf, e1_0=e10)
    expected = (e10 - d + einf) * 0.5 * math.exp(1 - 2) - einf
    assert sample(Ts / 2, cfg).k_l == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("fam", FAMILIES)
def test_after_deadline_exact(fam):
    cfg = EnvelopeConfig(fam, e1_0=-0.33)
    for t in (cfg.Ts, cfg.Ts + 1e-9, 10.0):
        s = sample(t, cfg)
        assert (s.k_l, s.k_u, s.k_l_dot, s.k_u_dot) == (-cfg.e_inf, cfg.e_inf_bar, 0.0, 0.0)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        sample(-1e-3, EnvelopeConfig())


@given(configs())
def test_endpoints(cfg):
    env = Envelope(cfg)
    s0 = env(0.0)
    assert abs(s0.k_l - (cfg.e1_0 - cfg.delta)) <= 1e-12
    assert abs(s0.k_u - (cfg.e1_0 + cfg.delta_bar)) <= 1e-12
    s1 = env(cfg.Ts - 1e-9)
    assert abs(s1.k_l + cfg.e_inf) <= 1e-6
    assert abs(s1.k_u - cfg.e_inf_bar) <= 1e-6


@given(configs())
def test_ordering(cfg):
    env = Envelope(cfg)
    for t in np.linspace(0.0, cfg.Ts * 1.2, 400):
        s = env(t)
        assert s.k_l < s.k_u


@given(configs())
def test_derivative_matches_finite_difference(cfg):
    env = Envelope(cfg)
    for frac in (0.05, 0.2, 0.4, 0.6, 0.8):
        t = frac * cfg.Ts
        h = 1e-6 * cfg.Ts
        s = env(t)
        fd_l = (env(t + h).k_l - env(t - h).k_l) / (2 * h)
        fd_u = (env(t + h).k_u - env(t - h).k_u) / (2 * h)
        scale = abs(cfg.e1_0) + cfg.delta + cfg.delta_bar
        assert fd_l == pytest.approx(s.k_l_dot, rel=1e-6, abs=1e-7 * scale / cfg.Ts)
        assert fd_u == pytest.approx(s.k_u_dot, rel=1e-6, abs=1e-7 * scale / cfg.Ts)


@pytest.mark.parametrize("fam", FAMILIES)
def test_rate_vanishes_at_deadline(fam):
    cfg = EnvelopeConfig(fam, e1_0=-0.33)
    env = Envelope(cfg)
    rates = [abs(env(cfg.Ts - h).k_l_dot) for h in (1e-2, 1e-3, 1e-4)]
    assert rates[0] > rates[1] > rates[2] or rates[2] == 0.0
    assert rates[2] < 1e-3


@pytest.mark.parametrize("fam", FAMILIES)
def test_no_overflow_near_deadline(fam):
    cfg = EnvelopeConfig(fam, e1_0=0.5, delta=1.0, delta_bar=1.0, a_l=3.0, a_u=3.0)
    env = Envelope(cfg)
    for h in np.logspace(-15, -1, 50):
        s = env(cfg.Ts - h)
        assert all(math.isfinite(v) for v in (s.k_l, s.k_u, s.k_l_dot, s.k_u_dot))


def test_crossing_shapes_rejected():
    cfg = EnvelopeConfig("sech", 1.0, 0.25, 0.125, 0.125, 0.0625, 1.0, 1.0, 0.5, 1.0, e1_0=-1.0)
    with pytest.raises(ValueError, match="cross"):
        Envelope(cfg)


@given(configs(family=Family.COTH))
def test_shared_shape_never_crosses(cfg):
    from dataclasses import replace
    cfg = replace(cfg, a_u=cfg.a_l, b_u=cfg.b_l)
    env = Envelope(cfg)
    assert all(env(t).k_l < env(t).k_u for t in np.linspace(0, cfg.Ts, 200))
