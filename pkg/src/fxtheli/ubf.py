"""Barrier transforms mapping the funnel-constrained error to an unconstrained one.

Every variant returns ``z1`` together with ``eta1 = ∂z1/∂e1`` and
``eta2 = ∂z1/∂K_l·K̇_l + ∂z1/∂K_u·K̇_u`` so that ``ż1 = eta1·ė1 + eta2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .envelope import EnvelopeSample
from .powmath import OddRational

__all__ = [
    "Variant",
    "UbfConfig",
    "UbfOutput",
    "EnvelopeViolation",
    "transform",
    "transform_raw",
    "GUARD_REL",
]

GUARD_REL = 1e-12


class Variant(str, enum.Enum):
    BARRIER = "barrier"   # c1/(K_l−e1)^m + c2/(K_u−e1)^n
    UNIFIED = "unified"   # e1 + half the barrier; identity when c1 = c2 = 0
    LOG = "log"           # classical ½·ln((e1−K_l)/(K_u−e1)), comparison only


class EnvelopeViolation(RuntimeError):
    """The tracking error left (or touched) the open funnel."""

    def __init__(self, e1, k_l, k_u, t=None):
        self.e1, self.k_l, self.k_u, self.t = e1, k_l, k_u, t
        where = f" at t={t:.6g} s" if t is not None else ""
        super().__init__(f"envelope violation{where}: e1={e1:.6g} not in ({k_l:.6g}, {k_u:.6g})")

    def __reduce__(self):
        return self.__class__, (self.e1, self.k_l, self.k_u, self.t)


@dataclass(frozen=True)
class UbfConfig:
    c1: float = 0.2
    c2: float = 0.2
    m: OddRational = OddRational(1, 7)
    n: OddRational = OddRational(1, 7)
    variant: Variant = Variant.BARRIER

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "m", OddRational.parse(self.m))
        object.__setattr__(self, "n", OddRational.parse(self.n))
        if self.c1 < 0.0 or self.c2 < 0.0:
            raise ValueError("barrier weights must be >= 0")
        if self.variant is Variant.BARRIER and not (self.c1 > 0.0 and self.c2 > 0.0):
            raise ValueError("barrier variant requires c1 > 0 and c2 > 0")

    @property
    def unconstrained(self) -> bool:
        return self.variant is Variant.UNIFIED and self.c1 == 0.0 and self.c2 == 0.0


@dataclass(frozen=True)
class UbfOutput:
    z1: float
    eta1: float
    eta2: float


def _barrier(e1, k_l, k_u, k_l_dot, k_u_dot, c1, c2, m, n):
    a = k_l - e1  # < 0 inside the funnel
    b = k_u - e1  # > 0
    abs_a = -a
    # sig(a)^(-m) = -|a|^(-m); |a|^(-m-1) is even in a
    pa = abs_a ** (-m)
    pb = b ** (-n)
    z = -c1 * pa + c2 * pb
    dz_da = -m * c1 * pa / abs_a
    dz_db = -n * c2 * pb / b
    return z, -(dz_da + dz_db), dz_da * k_l_dot + dz_db * k_u_dot


def transform_raw(e1: float, k_l: float, k_u: float, k_l_dot: float, k_u_dot: float,
                  cfg: UbfConfig, t: Optional[float] = None) -> tuple[float, float, float]:
    """Tuple-returning core of :func:`transform` for the integrator hot loop."""
    variant = cfg.variant
    if variant is Variant.UNIFIED and cfg.c1 == 0.0 and cfg.c2 == 0.0:
        return e1, 1.0, 0.0
    margin = GUARD_REL * (k_u - k_l)
    if not (k_l + margin < e1 < k_u - margin):
        raise EnvelopeViolation(e1, k_l, k_u, t)
    if variant is Variant.LOG:
        a = e1 - k_l
        b = k_u - e1
        z = 0.5 * (math.log(a) - math.log(b))
        return z, 0.5 / a + 0.5 / b, -0.5 * k_l_dot / a - 0.5 * k_u_dot / b
    z, eta1, eta2 = _barrier(e1, k_l, k_u, k_l_dot, k_u_dot,
                             cfg.c1, cfg.c2, cfg.m.value, cfg.n.value)
    if variant is Variant.BARRIER:
        return z, eta1, eta2
    return e1 + 0.5 * z, 1.0 + 0.5 * eta1, 0.5 * eta2


def transform(e1: float, env: EnvelopeSample, cfg: UbfConfig,
              t: Optional[float] = None) -> UbfOutput:
    """Map the tracking error ``e1`` through the configured barrier.

    Raises
    ------
    EnvelopeViolation
        If ``e1`` is outside, or within ``1e-12·(K_u−K_l)`` of, the funnel.
    """
    z, eta1, eta2 = transform_raw(e1, env.k_l, env.k_u, env.k_l_dot, env.k_u_dot, cfg, t)
    return UbfOutput(z, eta1, eta2)
