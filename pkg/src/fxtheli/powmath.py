"""Numeric kernel: odd-ratio powers, gamma, and smoothed |x| surrogates.

The surrogates approximate ``|w|`` from below with a bounded deficit. They
replace discontinuous sign/abs terms in the control and adaptive laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

__all__ = [
    "OddRational",
    "pow_oo",
    "sig",
    "gamma_fn",
    "smooth_abs_l7",
    "smooth_abs_l8a",
    "smooth_abs_l8b",
    "young_rhs",
    "young_lhs",
    "power_mean_bounds",
    "L8A_DEFICIT_CONSTANT",
]

# Deficit constant of the rational surrogate, stated without derivation.
L8A_DEFICIT_CONSTANT = 0.2576


@dataclass(frozen=True)
class OddRational:
    """Positive rational exponent ``num/den`` with both parts odd.

    Odd numerator and denominator make ``x**(num/den)`` real and
    sign-preserving for negative ``x``.
    """

    num: int
    den: int = 1

    def __post_init__(self):
        if not (isinstance(self.num, int) and isinstance(self.den, int)):
            raise TypeError("num and den must be integers")
        if self.num <= 0 or self.den <= 0:
            raise ValueError(f"odd rational must be positive, got {self.num}/{self.den}")
        if self.num % 2 == 0 or self.den % 2 == 0:
            raise ValueError(f"num and den must both be odd, got {self.num}/{self.den}")

    @classmethod
    def parse(cls, text: Union[str, int, "OddRational"]) -> "OddRational":
        """Parse ``"3/5"``, ``"1"`` or an int. The fraction is not reduced."""
        if isinstance(text, OddRational):
            return text
        if isinstance(text, int) and not isinstance(text, bool):
            return cls(text, 1)
        if not isinstance(text, str):
            raise TypeError(f"expected 'num/den' string, got {type(text).__name__}")
        parts = text.strip().split("/")
        if len(parts) == 1:
            return cls(int(parts[0]), 1)
        if len(parts) == 2:
            return cls(int(parts[0]), int(parts[1]))
        raise ValueError(f"malformed rational {text!r}")

    @property
    def value(self) -> float:
        return self.num / self.den

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def _exponent(r) -> float:
    return r.value if isinstance(r, OddRational) else float(r)


def pow_oo(x: float, r) -> float:
    """Sign-preserving power ``sgn(x)*|x|**r``.

    ``r`` may be an :class:`OddRational` or a plain float; negative exponents
    are allowed (they blow up at zero, as the barrier terms do).
    """
    if not math.isfinite(x):
        raise FloatingPointError(f"non-finite base {x!r}")
    if x == 0.0:
        return 0.0
    e = _exponent(r)
    if x > 0.0:
        return math.exp(e * math.log(x))
    return -math.exp(e * math.log(-x))


def sig(x: float, r: float) -> float:
    """Alias of :func:`pow_oo` for float exponents, without the finiteness check."""
    if x > 0.0:
        return x ** r
    if x < 0.0:
        return -((-x) ** r)
    return 0.0


# Lanczos approximation, g = 7, n = 9 (about 15 significant digits).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(z: float) -> float:
    """Gamma function for real ``z > 0``.

    Uses the Lanczos series for ``z >= 0.5`` and the reflection formula
    below that.
    """
    if not math.isfinite(z):
        raise FloatingPointError(f"non-finite argument {z!r}")
    if z <= 0.0:
        raise ValueError(f"gamma_fn requires z > 0, got {z}")
    if z < 0.5:
        return math.pi / (math.sin(math.pi * z) * gamma_fn(1.0 - z))
    z -= 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # t**(z+0.5) split in two to delay overflow for large z
    half = t ** (0.5 * (z + 0.5))
    return math.sqrt(2.0 * math.pi) * half * math.exp(-t) * half * acc


def smooth_abs_l7(w: float, delta: float, eps: float) -> float:
    """``w**2 * sqrt((w²+δ²+ε²)/((w²+ε²)(w²+δ²)))``.

    Satisfies ``0 <= |w| - value < ε·δ/sqrt(ε²+δ²)``.
    """
    if delta <= 0.0 or eps <= 0.0:
        raise ValueError("delta and eps must be positive")
    w2 = w * w
    d2 = delta * delta
    e2 = eps * eps
    return w2 * math.sqrt((w2 + d2 + e2) / ((w2 + e2) * (w2 + d2)))


def smooth_abs_l8a(v: float, delta_v: float) -> float:
    """``v**2 * sqrt((v²+δ²)/(v⁴+v²δ²+δ⁴))``; deficit below ``0.2576·δ``."""
    if delta_v <= 0.0:
        raise ValueError("delta_v must be positive")
    v2 = v * v
    d2 = delta_v * delta_v
    return v2 * math.sqrt((v2 + d2) / (v2 * v2 + v2 * d2 + d2 * d2))


def smooth_abs_l8b(v: float, delta_v: float) -> float:
    """``(2/π)·v·atan(v/δ)``; deficit below ``2δ/π``."""
    if delta_v <= 0.0:
        raise ValueError("delta_v must be positive")
    return (2.0 / math.pi) * v * math.atan(v / delta_v)


def young_rhs(psi1: float, psi2: float, gamma1: float, gamma2: float) -> float:
    """Right side of Young's inequality for ``|ψ1|^γ1 |ψ2|^γ2``."""
    if gamma1 <= 0.0 or gamma2 <= 0.0:
        raise ValueError("exponents must be positive")
    s = gamma1 + gamma2
    return gamma1 / s * abs(psi1) ** s + gamma2 / s * abs(psi2) ** s


def young_lhs(psi1: float, psi2: float, gamma1: float, gamma2: float) -> float:
    return abs(psi1) ** gamma1 * abs(psi2) ** gamma2


def power_mean_bounds(chi: Sequence[float], h: float) -> tuple[float, float, float]:
    """Return ``((Σ|χ|)^h, Σ|χ|^h, s^(1-h)(Σ|χ|)^h)`` for ``0 < h <= 1``.

    For such ``h`` the three values are non-decreasing.
    """
    if not 0.0 < h <= 1.0:
        raise ValueError("h must lie in (0, 1]")
    s = len(chi)
    if s == 0:
        raise ValueError("need at least one element")
    total = sum(abs(c) for c in chi)
    lower = total ** h
    middle = sum(abs(c) ** h for c in chi)
    upper = s ** (1.0 - h) * lower
    return lower, middle, upper
