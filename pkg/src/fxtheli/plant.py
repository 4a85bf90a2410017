"""3-DOF helicopter dynamics, elevation reference and sinusoidal disturbance."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

__all__ = [
    "PlantParams",
    "HeliState",
    "DisturbanceSpec",
    "derivs",
    "reference",
    "disturbance",
]


@dataclass(frozen=True)
class PlantParams:
    """Physical constants of the helicopter.

    The defaults are a desk-scale placeholder set, not measured data of any
    particular rig. Override them from the scenario file.
    """

    L_a: float = 0.66      # arm length [m]
    J_alpha: float = 1.0   # elevation inertia [kg m^2]
    m_e: float = 0.094     # effective mass [kg]
    g: float = 9.81        # gravity [m/s^2]
    L_h: float = 0.177     # pitch arm [m]
    J_beta: float = 0.044  # pitch inertia [kg m^2]

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"PlantParams.{f.name} must be finite and > 0, got {v}")

    @property
    def b_elev(self) -> float:
        """Input gain of the elevation channel, ``L_a/J_alpha``."""
        return self.L_a / self.J_alpha

    @property
    def b_pitch(self) -> float:
        return self.L_h / self.J_beta

    def gravity_elev(self, x1: float) -> float:
        """Gravity term ``(g/J_alpha)·m_e·L_a·cos(x1)`` subtracted from the elevation acceleration."""
        return self.g / self.J_alpha * self.m_e * self.L_a * math.cos(x1)


@dataclass(frozen=True)
class HeliState:
    x1: float = 0.0  # elevation [rad]
    x2: float = 0.0  # elevation rate [rad/s]
    x3: float = 0.0  # pitch [rad]
    x4: float = 0.0  # pitch rate [rad/s]

    def __post_init__(self):
        for v in self.as_tuple():
            if not math.isfinite(v):
                raise ValueError(f"HeliState entries must be finite, got {self}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.x3, self.x4)


@dataclass(frozen=True)
class DisturbanceSpec:
    amplitude: float = 0.3   # [rad/s^2]
    frequency: float = 2.0   # [rad/s]
    phase: float = 0.0      # [rad]
    bound: float = 0.3      # known upper bound on |d1| [rad/s^2]

    def __post_init__(self):
        if not self.bound > 0.0:
            raise ValueError("disturbance bound must be > 0")
        if abs(self.amplitude) > self.bound:
            raise ValueError("disturbance bound must be >= |amplitude|")


def derivs(s: HeliState, u1bar: float, u2bar: float, d1: float, d2: float,
           p: PlantParams) -> HeliState:
    """Right-hand side of the 4-state helicopter model."""
    for v in (u1bar, u2bar, d1, d2):
        if not math.isfinite(v):
            raise ValueError("non-finite input to plant derivs")
    return HeliState(
        s.x2,
        p.b_elev * u1bar - p.gravity_elev(s.x1) + d1,
        s.x4,
        p.b_pitch * u2bar + d2,
    )


_REF_AMP = math.pi / 18.0
_REF_W = 0.3 * math.pi


def reference(t: float) -> tuple[float, float, float]:
    """Elevation command ``(π/18)·sin(0.3πt − π/2)`` and its two derivatives."""
    ph = _REF_W * t - 0.5 * math.pi
    s, c = math.sin(ph), math.cos(ph)
    return _REF_AMP * s, _REF_AMP * _REF_W * c, -_REF_AMP * _REF_W * _REF_W * s


def disturbance(t: float, spec: DisturbanceSpec) -> float:
    return spec.amplitude * math.sin(spec.frequency * t + spec.phase)
