"""Adaptive fixed-time backstepping control of one rotational channel.

Signal flow per evaluation (all pure given the augmented state and time)::

    reference → funnel → e1 → barrier (z1, η1, η2) → w1 = z1 − ζ1 → α1
    → differentiator (x1f, x2f) → w2 = x2 − x1f − ζ2 → ū1
    → compensator (ζ1, ζ2) and adaptive estimate Ω̂d

The differentiator plus compensator replace the analytic derivative of the
virtual law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable, Optional

from .envelope import EnvelopeSample
from .plant import PlantParams
from .powmath import OddRational, sig
from .ubf import UbfConfig, transform_raw

__all__ = [
    "Gains",
    "ControllerState",
    "ControlOutput",
    "virtual_law",
    "control_law",
    "differentiator_derivs",
    "compensator_derivs",
    "adaptive_deriv",
    "smooth_ratio",
    "ChannelController",
    "ConstantEnvelope",
    "InvariantError",
    "step_outputs",
    "elevation_controller",
]


class InvariantError(RuntimeError):
    """Internal invariant broken during a control evaluation (e.g. η1 <= 0)."""


@dataclass(frozen=True)
class Gains:
    k11: float = 1.0
    k12: float = 1.5
    k21: float = 2.0
    k22: float = 6.0
    p: OddRational = OddRational(3, 5)
    q: OddRational = OddRational(5, 3)
    delta1: float = 0.1
    delta2: float = 0.1
    eps1: float = 0.1
    eps2: float = 0.1
    lam1: float = 1.0
    lam2: float = 0.1
    lam3: float = 0.1
    k1f: float = 4.0
    k2f: float = 8.0
    mu_f: float = 1.0
    omega_max: float = 1e3

    def __post_init__(self):
        object.__setattr__(self, "p", OddRational.parse(self.p))
        object.__setattr__(self, "q", OddRational.parse(self.q))
        if not 0.5 < self.p.value < 1.0:
            raise ValueError(f"p must lie in (1/2, 1), got {self.p}")
        if not self.q.value > 1.0:
            raise ValueError(f"q must exceed 1, got {self.q}")
        for f in fields(self):
            if f.name in ("p", "q"):
                continue
            v = getattr(self, f.name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"gain {f.name} must be finite and > 0, got {v}")


@dataclass
class ControllerState:
    x1f: float = 0.0
    x2f: float = 0.0
    zeta1: float = 0.0
    zeta2: float = 0.0
    omega_hat: float = 0.0

    def __post_init__(self):
        if self.omega_hat < 0.0:
            raise ValueError("omega_hat must be >= 0")


@dataclass(frozen=True)
class ControlOutput:
    alpha1: float
    u1bar: float
    w1: float
    w2: float
    z1: float
    sigma_f: float
    e1: float
    eta1: float
    eta2: float
    k_l: float
    k_u: float


def smooth_ratio(w2: float, delta: float, eps: float) -> float:
    """``sqrt((w²+δ²+ε²)/((w²+ε²)(w²+δ²)))``; times ``w²`` it approximates ``|w|``."""
    return math.sqrt((w2 + delta * delta + eps * eps) / ((w2 + eps * eps) * (w2 + delta * delta)))


def virtual_law(w1: float, eta1: float, eta2: float, x1d_dot: float, g: Gains) -> float:
    """Non-singular virtual rate command α1.

    The ``k11`` term behaves like ``sig(w1)^p`` for large ``|w1|`` but stays
    smooth through ``w1 = 0``.
    """
    if not eta1 > 0.0:
        raise InvariantError(f"eta1 must be positive, got {eta1}")
    p = g.p.value
    W = abs(w1) ** (2.0 + 2.0 * p)
    smooth = sig(w1, 1.0 + 2.0 * p) * smooth_ratio(W, g.delta1, g.eps1)
    return x1d_dot - (eta2 + g.k12 * sig(w1, g.q.value) + g.k11 * smooth) / eta1


def control_law(z1: float, w2: float, x1: float, x1f_dot: float, eta1: float,
                omega_hat: float, g: Gains, pp: PlantParams) -> float:
    """Elevation input ū1 with gravity compensation and adaptive damping.

    The coupling term is ``−η1·z1 = −η1·(w1 + ζ1)``: it cancels both the
    ``η1·w1·w2`` cross term and the ``η1·ζ1`` injected into ``ẇ2`` by the
    compensator. Using ``−η1·w1`` alone leaves the two η1-rate oscillators
    (w and ζ) in resonance, which diverges for stiff barriers.
    """
    adaptive = omega_hat * w2 * smooth_ratio(w2 * w2, g.delta2, g.eps2)
    acc = (-g.k21 * sig(w2, g.p.value) - g.k22 * sig(w2, g.q.value)
           + pp.gravity_elev(x1) + x1f_dot - eta1 * z1 - adaptive)
    return acc / pp.b_elev


def _phi(sigma_f: float, mu_f: float) -> tuple[float, float]:
    s1 = sig(sigma_f, 0.5) + mu_f * sig(sigma_f, 1.5)
    sgn = (sigma_f > 0.0) - (sigma_f < 0.0)
    s2 = 0.5 * sgn + 2.0 * mu_f * sigma_f + 1.5 * mu_f * mu_f * sig(sigma_f, 2.0)
    return s1, s2


def differentiator_derivs(x1f: float, x2f: float, alpha1: float, g: Gains) -> tuple[float, float]:
    """Fixed-time differentiator driven by ``σf = x1f − α1`` (sgn(0) = 0)."""
    phi1, phi2 = _phi(x1f - alpha1, g.mu_f)
    return -g.k1f * phi1 + x2f, -g.k2f * phi2


def compensator_derivs(zeta1: float, zeta2: float, eta1: float, x1f: float, alpha1: float,
                       g: Gains) -> tuple[float, float]:
    p, q = g.p.value, g.q.value
    d1 = -g.k11 * sig(zeta1, p) - g.k12 * sig(zeta1, q) + eta1 * (x1f - alpha1) + eta1 * zeta2
    d2 = -g.k21 * sig(zeta2, p) - g.k22 * sig(zeta2, q) - eta1 * zeta1
    return d1, d2


def adaptive_deriv(w2: float, omega_hat: float, g: Gains) -> float:
    """Rate of the disturbance-bound estimate Ω̂d (leakage via λ2, λ3)."""
    ww = w2 * w2
    return g.lam1 * (ww * smooth_ratio(ww, g.delta2, g.eps2)
                     - g.lam2 * omega_hat - g.lam3 * sig(omega_hat, g.q.value))


class ConstantEnvelope:
    """Fixed wide bounds, used to run the controller without a funnel."""

    def __init__(self, k_l: float = -10.0, k_u: float = 10.0):
        if not k_l < k_u:
            raise ValueError("need k_l < k_u")
        self._s = EnvelopeSample(k_l, k_u, 0.0, 0.0)

    def __call__(self, t: float) -> EnvelopeSample:
        return self._s


class ChannelController:
    """One channel ``ẋa = xb``, ``ẋb = b·u − G(xa) + d`` under the full control stack.

    Parameters
    ----------
    gains : Gains
    ubf : UbfConfig
    envelope : callable
        ``t -> EnvelopeSample``.
    reference : callable
        ``t -> (x_d, ẋ_d, ẍ_d)``.
    b : float
        Input gain of the channel.
    gravity : callable, optional
        ``G(xa)``; zero when omitted.
    """

    def __init__(self, gains: Gains, ubf: UbfConfig, envelope: Callable[[float], EnvelopeSample],
                 reference: Callable[[float], tuple], b: float,
                 gravity: Optional[Callable[[float], float]] = None):
        self.gains = gains
        self.ubf = ubf
        self.envelope = envelope
        self.reference = reference
        self.b = b
        self.gravity = gravity
        g = gains
        # hot-loop constants
        self._p = g.p.value
        self._q = g.q.value
        self._p_num = 1.0 + 2.0 * self._p
        self._p_rad = 2.0 + 2.0 * self._p

    def initial_state(self, xa0: float, xb0: float = 0.0, t0: float = 0.0) -> ControllerState:
        """Zero compensators and estimate; differentiator started on α1(t0)."""
        cs = ControllerState()
        out, _ = self.evaluate(t0, xa0, xb0, cs.zeta1, cs.zeta2, 0.0, 0.0, 0.0, alpha_only=True)
        cs.x1f = out
        return cs

    def evaluate(self, t, xa, xb, zeta1, zeta2, x1f, x2f, omega, alpha_only=False):
        """Return ``(u, (ζ̇1, ζ̇2, ẋ1f, ẋ2f, Ω̂̇))``, or ``(α1, None)`` with ``alpha_only``."""
        g = self.gains
        p, q = self._p, self._q
        xd, xd_dot, _ = self.reference(t)
        env = self.envelope(t)
        e1 = xa - xd
        z1, eta1, eta2 = transform_raw(e1, env.k_l, env.k_u, env.k_l_dot, env.k_u_dot, self.ubf, t)
        if not eta1 > 0.0:
            raise InvariantError(f"eta1 = {eta1} at t = {t}")
        w1 = z1 - zeta1
        aw1 = abs(w1)
        W = aw1 ** self._p_rad
        d1s, e1s = g.delta1 * g.delta1, g.eps1 * g.eps1
        smooth = sig(w1, self._p_num) * math.sqrt((W + d1s + e1s) / ((W + e1s) * (W + d1s)))
        alpha1 = xd_dot - (eta2 + g.k12 * sig(w1, q) + g.k11 * smooth) / eta1
        if alpha_only:
            return alpha1, None

        sigma_f = x1f - alpha1
        phi1, phi2 = _phi(sigma_f, g.mu_f)
        x1f_dot = -g.k1f * phi1 + x2f
        x2f_dot = -g.k2f * phi2

        w2 = xb - x1f - zeta2
        ww = w2 * w2
        d2s, e2s = g.delta2 * g.delta2, g.eps2 * g.eps2
        rad2 = math.sqrt((ww + d2s + e2s) / ((ww + e2s) * (ww + d2s)))
        grav = self.gravity(xa) if self.gravity is not None else 0.0
        acc = (-g.k21 * sig(w2, p) - g.k22 * sig(w2, q) + grav + x1f_dot
               - eta1 * z1 - omega * w2 * rad2)
        u = acc / self.b

        zeta1_dot = -g.k11 * sig(zeta1, p) - g.k12 * sig(zeta1, q) + eta1 * sigma_f + eta1 * zeta2
        zeta2_dot = -g.k21 * sig(zeta2, p) - g.k22 * sig(zeta2, q) - eta1 * zeta1
        omega_dot = g.lam1 * (ww * rad2 - g.lam2 * omega - g.lam3 * sig(omega, q))
        return u, (zeta1_dot, zeta2_dot, x1f_dot, x2f_dot, omega_dot)

    def outputs(self, t, xa, xb, cs: ControllerState) -> ControlOutput:
        """All control signals at one instant (for logging)."""
        xd, xd_dot, _ = self.reference(t)
        env = self.envelope(t)
        e1 = xa - xd
        z1, eta1, eta2 = transform_raw(e1, env.k_l, env.k_u, env.k_l_dot, env.k_u_dot, self.ubf, t)
        u, _ = self.evaluate(t, xa, xb, cs.zeta1, cs.zeta2, cs.x1f, cs.x2f, cs.omega_hat)
        alpha1, _ = self.evaluate(t, xa, xb, cs.zeta1, cs.zeta2, cs.x1f, cs.x2f, cs.omega_hat,
                                  alpha_only=True)
        w1 = z1 - cs.zeta1
        w2 = xb - cs.x1f - cs.zeta2
        return ControlOutput(alpha1, u, w1, w2, z1, cs.x1f - alpha1, e1, eta1, eta2,
                             env.k_l, env.k_u)


def step_outputs(t: float, x1: float, x2: float, cs: ControllerState,
                 ctrl: ChannelController) -> ControlOutput:
    """Pure evaluation of every control signal from state, controller state and time."""
    return ctrl.outputs(t, x1, x2, cs)


def elevation_controller(gains: Gains, ubf: UbfConfig, envelope, reference,
                         pp: PlantParams) -> ChannelController:
    return ChannelController(gains, ubf, envelope, reference, pp.b_elev, pp.gravity_elev)

