"""Prescribed performance functions (error funnels) reaching steady width at ``Ts``.

Four families share the same endpoints: ``K_l(0) = e1(0) − Δ``,
``K_u(0) = e1(0) + Δ̄`` and ``(K_l, K_u) = (−e∞, ē∞)`` for ``t >= Ts``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = ["Family", "EnvelopeConfig", "EnvelopeSample", "Envelope", "sample"]


class Family(str, enum.Enum):
    EXP = "exp"
    SECH = "sech"
    CSCH = "csch"
    COTH = "coth"


@dataclass(frozen=True)
class EnvelopeConfig:
    family: Family = Family.EXP
    Ts: float = 1.2
    delta: float = 0.05
    delta_bar: float = 0.05
    e_inf: float = 0.01
    e_inf_bar: float = 0.01
    a_l: float = 1.0
    b_l: float = 1.0
    a_u: float = 1.0
    b_u: float = 1.0
    e1_0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not self.Ts > 0.0:
            raise ValueError("Ts must be > 0")
        for name in ("delta", "delta_bar", "e_inf", "e_inf_bar"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0")
        if not self.e_inf < self.delta:
            raise ValueError(f"e_inf ({self.e_inf}) must be smaller than delta ({self.delta})")
        if not self.e_inf_bar < self.delta_bar:
            raise ValueError(
                f"e_inf_bar ({self.e_inf_bar}) must be smaller than delta_bar ({self.delta_bar})")
        if self.family is not Family.EXP:
            for name in ("a_l", "b_l", "a_u", "b_u"):
                if not getattr(self, name) > 0.0:
                    raise ValueError(f"{name} must be > 0 for family {self.family.value}")
        if not math.isfinite(self.e1_0):
            raise ValueError("e1_0 must be finite")


@dataclass(frozen=True)
class EnvelopeSample:
    k_l: float
    k_u: float
    k_l_dot: float
    k_u_dot: float


# Shape functions h(s) on s = a·t/(Ts−t) + b, divided by h(b) so that the
# value at t = 0 is exactly 1. Written with exp(-s) so large s never overflows.

def _sech(s):
    e = math.exp(-s)
    return 2.0 * e / (1.0 + e * e)


def _sech_d(s):
    e = math.exp(-s)
    e2 = e * e
    # -sech*tanh
    return -2.0 * e / (1.0 + e2) * (1.0 - e2) / (1.0 + e2)


def _csch(s):
    e = math.exp(-s)
    return 2.0 * e / (1.0 - e * e)


def _csch_d(s):
    e = math.exp(-s)
    e2 = e * e
    # -csch*coth
    return -2.0 * e / (1.0 - e2) * (1.0 + e2) / (1.0 - e2)


def _cothm1(s):
    e2 = math.exp(-2.0 * s)
    return 2.0 * e2 / (1.0 - e2)


def _cothm1_d(s):
    # -csch^2
    c = _csch(s)
    return -c * c


_SHAPES = {
    Family.SECH: (_sech, _sech_d),
    Family.CSCH: (_csch, _csch_d),
    Family.COTH: (_cothm1, _cothm1_d),
}


class Envelope:
    """Callable funnel built once from an :class:`EnvelopeConfig`."""

    def __init__(self, cfg: EnvelopeConfig):
        self.cfg = cfg
        self.Ts = cfg.Ts
        # amplitudes of the decaying parts
        self.amp_l = cfg.e1_0 - cfg.delta + cfg.e_inf
        self.amp_u = cfg.e1_0 + cfg.delta_bar - cfg.e_inf_bar
        if cfg.family is not Family.EXP:
            h, _ = _SHAPES[cfg.family]
            self.c_l = h(cfg.b_l)
            self.c_u = h(cfg.b_u)
            if (cfg.a_l, cfg.b_l) != (cfg.a_u, cfg.b_u):
                self._check_ordering()

    def _check_ordering(self, n: int = 4096):
        # with a shared shape the width is a positive combination; otherwise
        # the two bounds decay at different rates and may cross
        for i in range(n):
            s = self(self.Ts * i / n)
            if not s.k_l < s.k_u:
                raise ValueError(f"funnel bounds cross at t = {self.Ts * i / n:.6g} s; "
                                 "use matching shape parameters or a smaller |e1_0|")

    def _shape(self, t, a, b, c):
        Ts = self.Ts
        if self.cfg.family is Family.EXP:
            r = Ts - t
            E = math.exp(1.0 - Ts / r)
            return r / Ts * E, -E / Ts - E / r
        h, hd = _SHAPES[self.cfg.family]
        r = Ts - t
        s = a * t / r + b
        ds = a * Ts / (r * r)
        # underflow of hd(s)*ds near Ts is fine; guard the inf*0 case
        val = h(s) / c
        slope = hd(s) / c
        der = slope * ds if slope != 0.0 else 0.0
        if not math.isfinite(der):
            der = 0.0
        return val, der

    def __call__(self, t: float) -> EnvelopeSample:
        cfg = self.cfg
        if t < 0.0:
            raise ValueError("envelope sampled at negative time")
        if t >= self.Ts:
            return EnvelopeSample(-cfg.e_inf, cfg.e_inf_bar, 0.0, 0.0)
        if cfg.family is Family.EXP:
            f, fd = self._shape(t, 0.0, 0.0, 1.0)
            gl, gld = f, fd
            gu, gud = f, fd
        else:
            gl, gld = self._shape(t, cfg.a_l, cfg.b_l, self.c_l)
            gu, gud = self._shape(t, cfg.a_u, cfg.b_u, self.c_u)
        return EnvelopeSample(
            self.amp_l * gl - cfg.e_inf,
            self.amp_u * gu + cfg.e_inf_bar,
            self.amp_l * gld,
            self.amp_u * gud,
        )


def sample(t: float, cfg: EnvelopeConfig) -> EnvelopeSample:
    """Evaluate the funnel bounds and their rates at time ``t``."""
    return Envelope(cfg)(t)
