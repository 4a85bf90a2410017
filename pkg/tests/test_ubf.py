import math
import pickle

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fxtheli.envelope import EnvelopeSample
from fxtheli.powmath import OddRational, pow_oo
from fxtheli.ubf import EnvelopeViolation, UbfConfig, Variant, transform, transform_raw

odd = st.sampled_from([1, 3, 5, 7])
exps = st.builds(lambda a, b: f"{a}/{b}", odd, odd)


@st.composite
def interior(draw):
    variant = draw(st.sampled_from(list(Variant)))
    cfg = UbfConfig(draw(st.floats(0.1, 2)), draw(st.floats(0.1, 2)), draw(exps), draw(exps), variant)
    k_l = draw(st.floats(-1.0, 0.0))
    k_u = k_l + draw(st.floats(0.05, 1.0))
    e1 = k_l + (k_u - k_l) * draw(st.floats(0.05, 0.95))
    kd = (draw(st.floats(-1, 1)), draw(st.floats(-1, 1)))
    return cfg, e1, k_l, k_u, kd


def _eq29(e1, k_l, k_u, cfg):
    return cfg.c1 / pow_oo(k_l - e1, cfg.m) + cfg.c2 / pow_oo(k_u - e1, cfg.n)


def _eq30(e1, k_l, k_u, cfg):
    a = pow_oo(k_l - e1, cfg.m)
    b = pow_oo(k_u - e1, cfg.n)
    return (a * e1 + cfg.c1) / (2 * a) + (b * e1 + cfg.c2) / (2 * b)


def test_config_validation():
    with pytest.raises(ValueError):
        UbfConfig(0.0, 1.0, variant="barrier")
    with pytest.raises(ValueError):
        UbfConfig(-0.1, 1.0, variant="unified")
    with pytest.raises(ValueError):
        UbfConfig(m="2/3")
    assert UbfConfig(0.0, 0.0, variant="unified").unconstrained


def test_symmetric_zero():
    cfg = UbfConfig(0.7, 0.7, "3/5", "3/5", "barrier")
    assert transform(0.0, EnvelopeSample(-0.4, 0.4, 0, 0), cfg).z1 == pytest.approx(0.0, abs=1e-15)


def test_barrier_example():
    cfg = UbfConfig(1.0, 1.0, "1", "1", "barrier")
    assert transform(0.5, EnvelopeSample(-1, 1, 0, 0), cfg).z1 == pytest.approx(4 / 3, rel=1e-15)


@given(st.floats(-100, 100))
def test_unified_identity(e1):
    out = transform(e1, EnvelopeSample(-1, 1, 0.3, -0.3), UbfConfig(0.0, 0.0, variant="unified"))
    assert (out.z1, out.eta1, out.eta2) == (e1, 1.0, 0.0)


@given(interior())
def test_matches_closed_forms(case):
    cfg, e1, k_l, k_u, _ = case
    z, *_ = transform_raw(e1, k_l, k_u, 0, 0, cfg)
    if cfg.variant is Variant.BARRIER:
        assert z == pytest.approx(_eq29(e1, k_l, k_u, cfg), rel=1e-12)
    elif cfg.variant is Variant.UNIFIED:
        assert z == pytest.approx(_eq30(e1, k_l, k_u, cfg), rel=1e-12, abs=1e-12)
    else:
        assert z == pytest.approx(0.5 * math.log((e1 - k_l) / (k_u - e1)), rel=1e-12, abs=1e-14)


@given(interior())
def test_jacobians(case):
    cfg, e1, k_l, k_u, (kld, kud) = case
    z, eta1, eta2 = transform_raw(e1, k_l, k_u, kld, kud, cfg)
    assert eta1 > 0
    h = 1e-6 * (k_u - k_l)
    fd1 = (transform_raw(e1 + h, k_l, k_u, 0, 0, cfg)[0]
           - transform_raw(e1 - h, k_l, k_u, 0, 0, cfg)[0]) / (2 * h)
    assert fd1 == pytest.approx(eta1, rel=1e-5)
    ht = 1e-6
    fd2 = (transform_raw(e1, k_l + kld * ht, k_u + kud * ht, 0, 0, cfg)[0]
           - transform_raw(e1, k_l - kld * ht, k_u - kud * ht, 0, 0, cfg)[0]) / (2 * ht)
    assert fd2 == pytest.approx(eta2, rel=1e-5, abs=1e-5 * eta1)


@given(interior(), st.floats(-0.5, 0.5))
def test_chain_rule_along_path(case, slope):
    cfg, e1, k_l, k_u, (kld, kud) = case
    # e1(t) = e1 + slope*t with linearly moving bounds, evaluated at t = 0
    _, eta1, eta2 = transform_raw(e1, k_l, k_u, kld, kud, cfg)
    h = 1e-7
    zp = transform_raw(e1 + slope * h, k_l + kld * h, k_u + kud * h, 0, 0, cfg)[0]
    zm = transform_raw(e1 - slope * h, k_l - kld * h, k_u - kud * h, 0, 0, cfg)[0]
    assert (zp - zm) / (2 * h) == pytest.approx(eta1 * slope + eta2, rel=1e-4, abs=1e-4 * eta1)


@given(interior(), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_monotone_in_e1(case, a, b):
    cfg, _, k_l, k_u, _ = case
    assume(abs(a - b) > 1e-6)
    lo, hi = sorted((a, b))
    span = k_u - k_l
    ea = k_l + span * (0.01 + 0.98 * lo)
    eb = k_l + span * (0.01 + 0.98 * hi)
    assert transform_raw(ea, k_l, k_u, 0, 0, cfg)[0] < transform_raw(eb, k_l, k_u, 0, 0, cfg)[0]


@pytest.mark.parametrize("variant", ["barrier", "unified"])
def test_blow_up(variant):
    cfg = UbfConfig(0.2, 0.2, "1/7", "1/7", variant)
    k_l, k_u = -0.3, 0.2
    d = 1e-9 * (k_u - k_l)
    # z ~ c·d^(-1/7) at this distance is only ~2e1; m = n = 1 reaches the 1e6 scale
    stiff = UbfConfig(0.2, 0.2, "1", "1", variant)
    assert transform_raw(k_u - d, k_l, k_u, 0, 0, stiff)[0] > 1e6
    assert transform_raw(k_l + d, k_l, k_u, 0, 0, stiff)[0] < -1e6
    assert transform_raw(k_u - d, k_l, k_u, 0, 0, cfg)[0] > transform_raw(0.0, k_l, k_u, 0, 0, cfg)[0]
    assert transform_raw(k_l + d, k_l, k_u, 0, 0, cfg)[0] < transform_raw(0.0, k_l, k_u, 0, 0, cfg)[0]


@pytest.mark.parametrize("e1", [-1.0, 1.0, -0.3, 0.2, 0.2 - 1e-13])
def test_violation(e1):
    with pytest.raises(EnvelopeViolation) as info:
        transform(e1, EnvelopeSample(-0.3, 0.2, 0, 0), UbfConfig(), t=0.7)
    assert info.value.t == 0.7
    assert "t=0.7" in str(info.value)


def test_violation_pickles():
    exc = EnvelopeViolation(0.5, -0.1, 0.1, 2.0)
    back = pickle.loads(pickle.dumps(exc))
    assert (back.e1, back.k_l, back.k_u, back.t) == (0.5, -0.1, 0.1, 2.0)
