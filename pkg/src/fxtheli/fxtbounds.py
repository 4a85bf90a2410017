"""Settling-time bounds for ``V̇ <= −μ1·V^p − μ2·V^q + μ3`` and a brute-force oracle.

All bounds estimate the time for ``V`` to reach the residual set
``V <= min{(μ3/((1−τ)μ1))^(1/p), (μ3/((1−τ)μ2))^(1/q)}`` from any initial
value. The oracle integrates the worst case (equality) directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from scipy import integrate

from .powmath import gamma_fn

__all__ = [
    "BoundProblem",
    "PreconditionError",
    "HorizonExceeded",
    "QuadratureError",
    "residual_bound",
    "t1_bound",
    "t1_bound_reflection",
    "t2_classical",
    "t_lemma2",
    "i_a",
    "lemma3_order",
    "t_lemma3",
    "i_ef",
    "t_lemma4",
    "settle_oracle",
]

Number = Union[float, Fraction]


class PreconditionError(ValueError):
    """A bound was requested for a problem outside its exponent family."""


class HorizonExceeded(RuntimeError):
    pass


class QuadratureError(ArithmeticError):
    pass


def _as_number(x) -> Number:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    return float(x)


@dataclass(frozen=True)
class BoundProblem:
    """Coefficients of the comparison inequality.

    ``p`` and ``q`` may be floats or :class:`~fractions.Fraction`; the
    rational-exponent bound needs exact fractions (strings like ``"3/5"``
    are accepted).
    """

    mu1: float
    mu2: float
    mu3: float
    p: Number
    q: Number
    tau: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "p", _as_number(self.p))
        object.__setattr__(self, "q", _as_number(self.q))
        if not (self.mu1 > 0.0 and self.mu2 > 0.0):
            raise ValueError("mu1 and mu2 must be > 0")
        if not (self.mu3 >= 0.0 and math.isfinite(self.mu3)):
            raise ValueError("mu3 must be finite and >= 0")
        if not 0.0 < float(self.p) < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not float(self.q) > 1.0:
            raise ValueError(f"q must exceed 1, got {self.q}")
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")

    @property
    def pf(self) -> float:
        return float(self.p)

    @property
    def qf(self) -> float:
        return float(self.q)

    @property
    def l(self) -> float:
        """``(1−p)/(q−p)``, always in (0, 1)."""
        return (1.0 - self.pf) / (self.qf - self.pf)


def residual_bound(bp: BoundProblem) -> float:
    if bp.mu3 == 0.0:
        return 0.0
    r1 = (bp.mu3 / ((1.0 - bp.tau) * bp.mu1)) ** (1.0 / bp.pf)
    r2 = (bp.mu3 / ((1.0 - bp.tau) * bp.mu2)) ** (1.0 / bp.qf)
    return min(r1, r2)


def _radii(bp):
    r1 = (bp.mu3 / ((1.0 - bp.tau) * bp.mu1)) ** (1.0 / bp.pf)
    r2 = (bp.mu3 / ((1.0 - bp.tau) * bp.mu2)) ** (1.0 / bp.qf)
    return r1, r2


def t1_bound(bp: BoundProblem) -> float:
    """Gamma-function settling bound, independent of the initial value."""
    p, q, mu1, mu2, tau = bp.pf, bp.qf, bp.mu1, bp.mu2, bp.tau
    l = bp.l
    gg = gamma_fn(l) * gamma_fn((q - 1.0) / (q - p))
    a = gg / (mu1 * (q - p)) * (mu1 / (tau * mu2)) ** l
    b = gg / (tau * mu1 * (q - p)) * (tau * mu1 / mu2) ** l
    return max(a, b)


def t1_bound_reflection(bp: BoundProblem) -> float:
    """Same bound as :func:`t1_bound` through ``Γ(l)Γ(1−l) = π/sin(lπ)``."""
    p, q, mu1, mu2, tau = bp.pf, bp.qf, bp.mu1, bp.mu2, bp.tau
    l = bp.l
    c = math.pi / ((q - p) * math.sin(l * math.pi))
    return max(c / mu1 * (mu1 / (tau * mu2)) ** l, c / (tau * mu1) * (tau * mu1 / mu2) ** l)


def t2_classical(bp: BoundProblem) -> float:
    return 1.0 / (bp.tau * bp.mu1 * (1.0 - bp.pf)) + 1.0 / (bp.tau * bp.mu2 * (bp.qf - 1.0))


def t_lemma2(bp: BoundProblem) -> float:
    """Arctangent bound for ``p + q = 2``; ``μ3 = 0`` gives the limit ``T̄·π/2``."""
    p, q, mu1, mu2, mu3, tau = bp.pf, bp.qf, bp.mu1, bp.mu2, bp.mu3, bp.tau
    if abs(p + q - 2.0) > 1e-9:
        raise PreconditionError(f"needs p + q = 2, got {p + q}")
    tbar = 1.0 / ((1.0 - p) * math.sqrt(tau * mu1 * mu2))
    x1 = math.sqrt(mu2 / (tau * mu1)) * (mu3 / ((1.0 - tau) * mu1)) ** ((1.0 - p) / p)
    x2 = math.sqrt(tau * mu2 / mu1) * (mu3 / ((1.0 - tau) * mu2)) ** ((1.0 - p) / (2.0 - p))
    return tbar * max(0.5 * math.pi - math.atan(x1), 0.5 * math.pi - math.atan(x2))


def i_a(x: float, a: int) -> float:
    """Antiderivative of ``1/(1 + x^a)`` by partial fractions (``I_a(0)`` is not 0 in general)."""
    if int(a) != a or a < 2:
        raise ValueError(f"a must be an integer >= 2, got {a}")
    a = int(a)
    if x < 0.0:
        raise ValueError("i_a is defined for x >= 0")
    k_t = a % 2
    total = k_t / a * math.log(x + 1.0) if k_t else 0.0
    for k in range(1, a // 2 + 1):
        phi = math.pi / a * (2 * k - 1)
        s, c = math.sin(phi), math.cos(phi)
        total += 2.0 / a * s * math.atan((x - c) / s)
        total -= 1.0 / a * c * math.log(x * x - 2.0 * x * c + 1.0)
    return total


def lemma3_order(bp: BoundProblem, tol: float = 1e-9) -> int:
    """The integer ``a >= 2`` with ``(a−1)p + q = a``, or raise."""
    a = (bp.qf - bp.pf) / (1.0 - bp.pf)
    ai = round(a)
    if ai < 2 or abs((ai - 1) * bp.pf + bp.qf - ai) > tol:
        raise PreconditionError(f"no integer a >= 2 with (a-1)p + q = a (got a = {a:.6g})")
    return ai


def t_lemma3(bp: BoundProblem, a: Optional[int] = None) -> float:
    p, q, mu1, mu2, mu3, tau = bp.pf, bp.qf, bp.mu1, bp.mu2, bp.mu3, bp.tau
    if a is None:
        a = lemma3_order(bp)
    elif abs((a - 1) * p + q - a) > 1e-9:
        raise PreconditionError(f"(a-1)p + q = {(a - 1) * p + q} != a = {a}")
    full = math.pi / (a * math.sin(math.pi / a))
    i0 = i_a(0.0, a)
    tb3 = (tau * mu1 / mu2) ** (1.0 / a) / ((1.0 - p) * tau * mu1)
    tb4 = (mu1 / (tau * mu2)) ** (1.0 / a) / ((1.0 - p) * mu1)
    x3 = (mu2 / (tau * mu1)) ** (1.0 / a) * (mu3 / ((1.0 - tau) * mu1)) ** ((1.0 - p) / p)
    x4 = (tau * mu2 / mu1) ** (1.0 / a) * (mu3 / ((1.0 - tau) * mu2)) ** ((1.0 - p) / q)
    t3 = tb3 * (full - i_a(x3, a) + i0)
    t4 = tb4 * (full - i_a(x4, a) + i0)
    return max(t3, t4)


def _rational_pair(x: Number, name: str) -> tuple[int, int]:
    """Return ``(numerator, denominator)`` of an exact rational exponent."""
    if isinstance(x, Fraction):
        return x.numerator, x.denominator
    f = Fraction(x).limit_denominator(10_000)
    if abs(float(f) - x) > 1e-12:
        raise PreconditionError(f"{name} = {x} is not a small rational")
    return f.numerator, f.denominator


def _ef_integrand_factory(bp: BoundProblem):
    p2, p1 = _rational_pair(bp.p, "p")
    q2, q1 = _rational_pair(bp.q, "q")
    n = p1 * q1
    lo = n - 1 - p2 * q1        # >= 0 since p1 > p2
    hi = p1 * q2 - p2 * q1      # > 0 since q > p
    mu1, mu2 = bp.mu1, bp.mu2

    # n x^(n-1) / (mu1 x^(p2 q1) + mu2 x^(p1 q2)), divided through by x^(p2 q1)
    def f(x):
        if x == 0.0:
            return n / mu1 if lo == 0 else 0.0
        return n * x ** lo / (mu1 + mu2 * x ** hi)

    return f, (p1, p2, q1, q2)


def _quad_segmented(f, x0: float, x1: float) -> float:
    """∫ f over [x0, x1] on log-spaced segments (the integrand is a decaying power for large x)."""
    if x0 == x1:
        return 0.0
    sign = 1.0
    if x1 < x0:
        x0, x1, sign = x1, x0, -1.0
    edges = [x0]
    nxt = max(x0, 1.0) if x0 < 1.0 else x0 * 10.0
    while nxt < x1:
        if nxt > edges[-1]:
            edges.append(nxt)
        nxt *= 10.0
    edges.append(x1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err, info = integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200,
                                        full_output=True)[:3]
        if err > 1e-8 * max(1.0, abs(val)):
            raise QuadratureError(
                f"quadrature on [{lo:.6g}, {hi:.6g}] did not converge: value {val}, error {err}, "
                f"{info.get('neval', '?')} evaluations")
        total += val
    return sign * total


def i_ef(x: float, bp: BoundProblem) -> float:
    """Antiderivative of ``p1q1·x^(p1q1−1)/(μ1·x^(p2q1) + μ2·x^(p1q2))`` with ``i_ef(1) = 0``.

    Evaluated by adaptive quadrature; the substitution ``V = x^(p1q1)`` maps it
    onto ``∫ dV/(μ1 V^p + μ2 V^q)``.
    """
    if x < 0.0 or not math.isfinite(x):
        raise ValueError("i_ef is defined for finite x >= 0")
    f, _ = _ef_integrand_factory(bp)
    return _quad_segmented(f, 1.0, x)


def t_lemma4(bp: BoundProblem) -> float:
    p, q, mu1, mu2, mu3, tau = bp.pf, bp.qf, bp.mu1, bp.mu2, bp.mu3, bp.tau
    f, (p1, p2, q1, q2) = _ef_integrand_factory(bp)
    l = bp.l
    c_t = math.pi / math.sin(l * math.pi)
    x5 = (mu3 / ((1.0 - tau) * mu1)) ** (1.0 / (p2 * q1))
    x6 = (mu3 / ((1.0 - tau) * mu2)) ** (1.0 / (p1 * q2))
    # I_ef(x) - I_ef(0) as a single integral from 0
    t5 = c_t / (tau * mu1 * (q - p)) * (tau * mu1 / mu2) ** l - _quad_segmented(f, 0.0, x5)
    t6 = c_t / (mu1 * (q - p)) * (mu1 / (tau * mu2)) ** l - _quad_segmented(f, 0.0, x6)
    return max(t5, t6)


SETTLED_V = 1e-12


def settle_oracle(bp: BoundProblem, v0: float, horizon: float = 1e6,
                  tol: float = 1e-9) -> tuple[float, float]:
    """Time for ``V̇ = −μ1V^p − μ2V^q + μ3`` to first reach the residual set from ``v0``.

    The scalar flow is monotone above the residual set, so time is integrated
    as a function of ``s = ln V`` (``dt/ds = −V/V̇``) with RK4, doubling the
    number of steps until two successive estimates agree to ``tol`` seconds.
    This sidesteps the stiffness of the time-domain ODE at large ``V``.

    Returns
    -------
    (t_settle, v_final)
    """
    if not v0 > 0.0:
        raise ValueError("v0 must be > 0")
    target = residual_bound(bp) if bp.mu3 > 0.0 else SETTLED_V
    if v0 <= target:
        return 0.0, v0
    mu1, mu2, mu3, p, q = bp.mu1, bp.mu2, bp.mu3, bp.pf, bp.qf

    def dtds(s):
        v = math.exp(s)
        return v / (mu1 * v ** p + mu2 * v ** q - mu3)

    s0, s1 = math.log(v0), math.log(target)
    n = 64
    prev = None
    while True:
        h = (s0 - s1) / n
        t = 0.0
        s = s1
        f_lo = dtds(s)
        for _ in range(n):
            f_mid = dtds(s + 0.5 * h)
            f_hi = dtds(s + h)
            # RK4 with no t-dependence on the right-hand side
            t += h / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
            s += h
            f_lo = f_hi
        if t > horizon:
            raise HorizonExceeded(f"settling time {t:.6g} s exceeds horizon {horizon:.6g} s")
        if prev is not None and abs(t - prev) < tol:
            return t, target
        if n > 2 ** 20:
            raise QuadratureError("oracle did not converge")
        prev = t
        n *= 2
