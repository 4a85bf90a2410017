"""Randomized property sweeps behind ``fxtheli selfcheck``.

Each check draws its own instances from a seeded generator and reports the
number of violations; none of them touch the simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from . import fxtbounds as fb
from .envelope import Envelope, EnvelopeConfig, Family
from .powmath import (L8A_DEFICIT_CONSTANT, gamma_fn, power_mean_bounds, smooth_abs_l7,
                      smooth_abs_l8a, smooth_abs_l8b, young_lhs, young_rhs)
from .ubf import UbfConfig, Variant, transform_raw


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _young(rng, n):
    bad = 0
    for _ in range(n):
        p1, p2 = rng.uniform(-5, 5, 2)
        g1, g2 = rng.uniform(0.05, 4, 2)
        rhs = young_rhs(p1, p2, g1, g2)
        if young_lhs(p1, p2, g1, g2) > rhs + 1e-12 * max(1.0, rhs):
            bad += 1
    return bad


def _power_mean(rng, n):
    bad = 0
    for _ in range(n):
        chi = rng.uniform(-10, 10, rng.integers(1, 8))
        h = rng.uniform(1e-3, 1.0)
        lo, mid, hi = power_mean_bounds(chi, h)
        tol = 1e-12 * max(1.0, hi)
        if not (lo <= mid + tol and mid <= hi + tol):
            bad += 1
    return bad


def _surrogates(rng, n):
    bad = 0
    for _ in range(n):
        w = rng.normal() * 10 ** rng.uniform(-4, 4)
        d, e = 10 ** rng.uniform(-3, 2, 2)
        # |w| − f(w) cancels to within a few ulps of |w|
        tol = 1e-12 * max(1.0, abs(w))
        gap = abs(w) - smooth_abs_l7(w, d, e)
        if not (-tol <= gap < e * d / math.hypot(e, d) + tol):
            bad += 1
        gap = abs(w) - smooth_abs_l8a(w, d)
        if not (-tol <= gap < L8A_DEFICIT_CONSTANT * d + tol):
            bad += 1
        gap = abs(w) - smooth_abs_l8b(w, d)
        if not (-tol <= gap < 2.0 / math.pi * d + tol):
            bad += 1
    return bad


def _gamma_reflection(rng, n):
    bad = 0
    for l in rng.uniform(1e-3, 1 - 1e-3, n):
        exact = math.pi / math.sin(l * math.pi)
        if abs(gamma_fn(l) * gamma_fn(1 - l) - exact) > 1e-9 * exact:
            bad += 1
    return bad


def _bound_ordering(rng, n):
    bad = 0
    for _ in range(n):
        bp = fb.BoundProblem(rng.uniform(0.1, 10), rng.uniform(0.1, 10), 0.0,
                             rng.uniform(0.1, 0.9), rng.uniform(1.1, 3.0), 0.5)
        t1, t2 = fb.t1_bound(bp), fb.t2_classical(bp)
        if abs(t1 - fb.t1_bound_reflection(bp)) > 1e-9 * t1:
            bad += 1
        for v0 in (1.0, 1e3, 1e6):
            if not fb.settle_oracle(bp, v0)[0] <= t1 <= t2 + 1e-9:
                bad += 1
    return bad


def _ubf_jacobian(rng, n):
    bad = 0
    for _ in range(n):
        variant = (Variant.BARRIER, Variant.UNIFIED, Variant.LOG)[rng.integers(0, 3)]
        m = (1, 3, 5)[rng.integers(0, 3)], (1, 3, 5, 7)[rng.integers(0, 4)]
        cfg = UbfConfig(rng.uniform(0.1, 2), rng.uniform(0.1, 2), f"{m[0]}/{m[1]}",
                        f"{m[1]}/{m[0]}", variant)
        k_l = rng.uniform(-1, 0)
        k_u = k_l + rng.uniform(0.05, 1)
        e1 = k_l + (k_u - k_l) * rng.uniform(0.05, 0.95)
        kd = rng.uniform(-1, 1, 2)
        z, eta1, eta2 = transform_raw(e1, k_l, k_u, kd[0], kd[1], cfg)
        h = 1e-6 * (k_u - k_l)
        fd1 = (transform_raw(e1 + h, k_l, k_u, 0, 0, cfg)[0]
               - transform_raw(e1 - h, k_l, k_u, 0, 0, cfg)[0]) / (2 * h)
        ht = 1e-6
        fd2 = (transform_raw(e1, k_l + kd[0] * ht, k_u + kd[1] * ht, 0, 0, cfg)[0]
               - transform_raw(e1, k_l - kd[0] * ht, k_u - kd[1] * ht, 0, 0, cfg)[0]) / (2 * ht)
        if not eta1 > 0:
            bad += 1
        if abs(fd1 - eta1) > 1e-5 * abs(eta1) or abs(fd2 - eta2) > 1e-5 * max(abs(eta2), 1e-3):
            bad += 1
    return bad


def _endpoints(rng, n):
    bad = 0
    for _ in range(n):
        fam = list(Family)[rng.integers(0, 4)]
        delta, dbar = rng.uniform(0.02, 1, 2)
        cfg = EnvelopeConfig(fam, rng.uniform(0.2, 5), delta, dbar, delta * rng.uniform(0.05, 0.9),
                             dbar * rng.uniform(0.05, 0.9), *rng.uniform(0.2, 3, 4),
                             e1_0=rng.uniform(-1, 1))
        try:
            env = Envelope(cfg)
        except ValueError:
            continue  # crossing funnel, rejected at construction
        s0 = env(0.0)
        if abs(s0.k_l - (cfg.e1_0 - delta)) > 1e-12 or abs(s0.k_u - (cfg.e1_0 + dbar)) > 1e-12:
            bad += 1
        s1 = env(cfg.Ts - 1e-9)
        if abs(s1.k_l + cfg.e_inf) > 1e-6 or abs(s1.k_u - cfg.e_inf_bar) > 1e-6:
            bad += 1
    return bad


CHECKS: List[tuple[str, Callable, int]] = [
    ("young_inequality", _young, 10_000),
    ("power_mean_inequality", _power_mean, 10_000),
    ("smooth_abs_deficits", _surrogates, 10_000),
    ("gamma_reflection", _gamma_reflection, 1_000),
    ("bound_ordering_oracle<=T1<=T2", _bound_ordering, 200),
    ("ubf_jacobians", _ubf_jacobian, 1_000),
    ("envelope_endpoints", _endpoints, 1_000),
]


def run_all(seed: int = 0, scale: float = 1.0) -> List[CheckResult]:
    """Run every check; ``scale`` shrinks the draw counts for quick runs."""
    out = []
    for i, (name, fn, n) in enumerate(CHECKS):
        rng = np.random.default_rng([seed, i])
        count = max(1, int(n * scale))
        bad = fn(rng, count)
        out.append(CheckResult(name, bad == 0, f"{bad} violations in {count} draws"))
    return out
