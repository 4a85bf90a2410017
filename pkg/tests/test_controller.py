import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fxtheli.controller import (ControllerState, Gains, InvariantError, adaptive_deriv,
                                compensator_derivs, control_law, differentiator_derivs,
                                elevation_controller, step_outputs, virtual_law)
from fxtheli.envelope import Envelope, EnvelopeConfig
from fxtheli.plant import PlantParams, reference
from fxtheli.sim import rk4_step
from fxtheli.ubf import UbfConfig, transform_raw

G = Gains()
P = PlantParams()


def test_gain_validation():
    with pytest.raises(ValueError):
        Gains(p="1/3")
    with pytest.raises(ValueError):
        Gains(q="3/5")
    with pytest.raises(ValueError):
        Gains(k11=0.0)
    with pytest.raises(ValueError):
        ControllerState(omega_hat=-1.0)


class TestVirtualLaw:
    def test_zero_error(self):
        assert virtual_law(0.0, 1.7, 0.0, 0.42, G) == 0.42

    def test_feedforward_only(self):
        assert virtual_law(0.0, 2.0, 0.2, 0.42, G) == pytest.approx(0.42 - 0.1, rel=1e-15)

    def test_generic(self):
        w, p, q = 0.5, 0.6, 5 / 3
        W = w ** (2 + 2 * p)
        rad = math.sqrt((W + 0.01 + 0.01) / ((W + 0.01) * (W + 0.01)))
        expected = 0.0 - (1.5 * w ** q + 1.0 * w ** (1 + 2 * p) * rad)
        assert virtual_law(w, 1.0, 0.0, 0.0, G) == pytest.approx(expected, rel=1e-13)

    def test_eta1_must_be_positive(self):
        with pytest.raises(InvariantError):
            virtual_law(0.1, 0.0, 0.0, 0.0, G)

    def test_non_singular_through_zero(self):
        w = np.linspace(-10, 10, 20001)
        a = np.array([virtual_law(x, 1.0, 0.0, 0.0, G) for x in w])
        assert np.all(np.isfinite(a))
        # continuity: no jumps on the fine grid
        assert np.max(np.abs(np.diff(a))) < 0.1

    @given(st.floats(-10, 10), st.floats(0.1, 10))
    def test_odd(self, w, eta1):
        assert virtual_law(-w, eta1, 0.0, 0.0, G) == pytest.approx(-virtual_law(w, eta1, 0.0, 0.0, G),
                                                                   rel=1e-14, abs=1e-300)


class TestControlLaw:
    def test_horizontal_zero_input(self):
        assert control_law(0.0, 0.0, math.pi / 2, 0.0, 1.0, 3.0, G, P) == pytest.approx(0.0, abs=1e-15)

    def test_gravity_compensation(self):
        assert control_law(0.0, 0.0, 0.0, 0.0, 1.0, 3.0, G, P) == pytest.approx(P.g * P.m_e, rel=1e-14)

    def test_generic(self):
        z1, w2, x1, x1fd, eta1, om = 0.3, -0.2, 0.1, 0.05, 2.0, 0.4
        rad = math.sqrt((0.04 + 0.02) / ((0.04 + 0.01) * (0.04 + 0.01)))
        acc = (-2 * -(0.2 ** 0.6) - 6 * -(0.2 ** (5 / 3)) + 9.81 * 0.094 * 0.66 * math.cos(x1)
               + x1fd - eta1 * z1 - om * w2 * rad)
        assert control_law(z1, w2, x1, x1fd, eta1, om, G, P) == pytest.approx(acc * 1.0 / 0.66, rel=1e-13)

    @given(st.floats(-5, 5))
    def test_feedback_odd_in_w2(self, w2):
        base = control_law(0.0, 0.0, 0.3, 0.0, 1.0, 2.0, G, P)
        up = control_law(0.0, w2, 0.3, 0.0, 1.0, 2.0, G, P) - base
        dn = control_law(0.0, -w2, 0.3, 0.0, 1.0, 2.0, G, P) - base
        assert up == pytest.approx(-dn, rel=1e-12, abs=1e-12)


class TestDifferentiator:
    def test_equilibrium(self):
        assert differentiator_derivs(0.3, 0.0, 0.3, G) == (0.0, 0.0)

    def test_unit_error(self):
        g = replace(G, k1f=1.0, k2f=1.0, mu_f=1.0)
        assert differentiator_derivs(1.0, 0.0, 0.0, g) == pytest.approx((-2.0, -4.0), rel=1e-15)
        assert differentiator_derivs(-1.0, 0.0, 0.0, g) == pytest.approx((2.0, 4.0), rel=1e-15)

    def test_tracks_derivative_of_sine(self):
        f = lambda t, y: list(differentiator_derivs(y[0], y[1], math.sin(t), G))
        y, dt, worst = [0.0, 0.0], 1e-4, 0.0
        for i in range(1, 30001):
            y = rk4_step(f, (i - 1) * dt, y, dt)
            t = i * dt
            if t >= 1.0:
                worst = max(worst, abs(y[1] - math.cos(t)))
        assert worst <= 1e-2


class TestCompensator:
    def test_rest(self):
        assert compensator_derivs(0.0, 0.0, 1.3, 0.2, 0.2, G) == (0.0, 0.0)

    def test_unit_zeta1(self):
        assert compensator_derivs(1.0, 0.0, 0.0, 0.0, 0.0, G) == pytest.approx((-2.5, 0.0))

    def test_generic(self):
        z1, z2, eta, x1f, a1 = 0.4, -0.3, 1.7, 0.2, 0.05
        d1 = -(0.4 ** 0.6) - 1.5 * 0.4 ** (5 / 3) + eta * (x1f - a1) + eta * z2
        d2 = 2 * 0.3 ** 0.6 + 6 * 0.3 ** (5 / 3) - eta * z1
        assert compensator_derivs(z1, z2, eta, x1f, a1, G) == pytest.approx((d1, d2), rel=1e-13)


class TestAdaptive:
    def test_rest(self):
        assert adaptive_deriv(0.0, 0.0, G) == 0.0

    def test_leakage(self):
        assert adaptive_deriv(0.0, 1.0, G) == pytest.approx(-0.2, rel=1e-15)

    def test_large_w2_asymptote(self):
        w2, om = 1e4, 2.0
        expected = w2 - 0.1 * om - 0.1 * om ** (5 / 3)
        assert adaptive_deriv(w2, om, G) == pytest.approx(expected, rel=1e-4)


def _ctrl(e1_0):
    env = Envelope(EnvelopeConfig(e1_0=e1_0))
    return elevation_controller(G, UbfConfig(), env, reference, P)


class TestStepOutputs:
    x1_0 = -2 * math.pi / 15

    def test_initial_error(self):
        e1_0 = self.x1_0 - reference(0.0)[0]
        # x1(0) − x1d(0) = −2π/15 + π/18
        assert e1_0 == pytest.approx(-7 * math.pi / 90, rel=1e-14)
        out = step_outputs(0.0, self.x1_0, 0.0, ControllerState(), _ctrl(e1_0))
        assert out.e1 == pytest.approx(-0.244346, abs=1e-6)

    def test_w1_equals_z1_at_start(self):
        e1_0 = self.x1_0 - reference(0.0)[0]
        ctrl = _ctrl(e1_0)
        cs = ctrl.initial_state(self.x1_0, 0.0)
        out = step_outputs(0.0, self.x1_0, 0.0, cs, ctrl)
        env = Envelope(EnvelopeConfig(e1_0=e1_0))(0.0)
        z1 = transform_raw(e1_0, env.k_l, env.k_u, env.k_l_dot, env.k_u_dot, UbfConfig())[0]
        assert out.w1 == z1 == out.z1
        assert out.sigma_f == 0.0

    def test_deterministic(self):
        e1_0 = self.x1_0 - reference(0.0)[0]
        ctrl = _ctrl(e1_0)
        cs = ControllerState(0.1, -0.2, 0.01, 0.02, 0.3)
        env = Envelope(EnvelopeConfig(e1_0=e1_0))(0.4)
        x1 = reference(0.4)[0] + 0.5 * (env.k_l + env.k_u)
        a = step_outputs(0.4, x1, 0.5, cs, ctrl)
        b = step_outputs(0.4, x1, 0.5, cs, ctrl)
        assert a == b
