"""Closed-loop fixed-step simulation of the elevation channel and run metrics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .controller import ChannelController, ConstantEnvelope, ControllerState, Gains
from .envelope import Envelope, EnvelopeConfig
from .plant import DisturbanceSpec, HeliState, PlantParams, reference
from .ubf import EnvelopeViolation, UbfConfig, Variant

__all__ = [
    "Baseline",
    "Scenario",
    "Trajectory",
    "Metrics",
    "NumericFailure",
    "rk4_step",
    "build_closed_loop",
    "run",
    "compute_metrics",
    "run_many",
    "SERIES",
]


class Baseline(str, enum.Enum):
    NONE = "none"                    # the full method
    CLASSICAL_UBF = "classical_ubf"  # same loop, log-ratio barrier
    NO_PF = "no_pf"                  # same loop, constant ±10 rad bounds
    CFB = "cfb"                      # plain backstepping, no funnel, no adaptation


class NumericFailure(FloatingPointError):
    def __init__(self, msg, t=None):
        self.msg, self.t = msg, t
        super().__init__(msg if t is None else f"{msg} (t={t:.6g} s)")

    def __reduce__(self):
        return self.__class__, (self.msg, self.t)


@dataclass(frozen=True)
class Scenario:
    """Everything needed for one reproducible run.

    ``envelope.e1_0`` is overwritten from ``x0`` and the reference at t = 0.
    """

    plant: PlantParams = PlantParams()
    disturbance: DisturbanceSpec = DisturbanceSpec()
    envelope: EnvelopeConfig = EnvelopeConfig()
    ubf: UbfConfig = UbfConfig()
    gains: Gains = Gains()
    x0: HeliState = HeliState(-2.0 * math.pi / 15.0, 0.0, 0.0, 0.0)
    dt: float = 1e-4
    t_end: float = 10.0
    baseline: Baseline = Baseline.NONE
    record_every: int = 1
    pitch_control: bool = False
    name: str = "scenario"

    def __post_init__(self):
        object.__setattr__(self, "baseline", Baseline(self.baseline))
        if not 1e-5 <= self.dt <= 1e-2:
            raise ValueError(f"dt must lie in [1e-5, 1e-2], got {self.dt}")
        if not self.t_end > self.envelope.Ts:
            raise ValueError("t_end must exceed the funnel deadline Ts")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        e1_0 = self.x0.x1 - reference(0.0)[0]
        if self.envelope.e1_0 != e1_0:
            object.__setattr__(self, "envelope", replace(self.envelope, e1_0=e1_0))
        env0 = Envelope(self.envelope)(0.0)
        if not env0.k_l < e1_0 < env0.k_u:
            raise ValueError("initial error is not inside the funnel")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


SERIES = ("t", "x1", "x2", "x3", "x4", "x1d", "e1", "z1", "w1", "w2", "alpha1", "u1",
          "omega_hat", "zeta1", "zeta2", "x1f", "x2f", "k_l", "k_u")


@dataclass
class Trajectory:
    """Uniformly sampled series, one numpy array per name in :data:`SERIES`."""

    data: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["data"][name]
        except KeyError:
            raise AttributeError(name) from None

    def __len__(self):
        return len(self.data["t"]) if self.data else 0

    def to_csv(self, path) -> None:
        cols = [self.data[k] for k in SERIES]
        np.savetxt(path, np.column_stack(cols), delimiter=",", header=",".join(SERIES),
                   comments="", fmt="%.10g")


@dataclass(frozen=True)
class Metrics:
    envelope_violations: int
    max_abs_error_after_Ts: float
    overshoot: float
    convergence_time: float
    control_energy: float
    peak_input: float
    final_e1: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def rk4_step(f: Callable[[float, list], list], t: float, y: Sequence[float], dt: float) -> list:
    """Classical 4-stage Runge-Kutta step for a list-valued ODE."""
    k1 = f(t, y)
    h2 = 0.5 * dt
    k2 = f(t + h2, [a + h2 * b for a, b in zip(y, k1)])
    k3 = f(t + h2, [a + h2 * b for a, b in zip(y, k2)])
    k4 = f(t + dt, [a + dt * b for a, b in zip(y, k3)])
    h6 = dt / 6.0
    return [a + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]


class _CfbController:
    """Plain backstepping, ``α1 = ẋ1d − k11·e1``, analytic ``α̇1``, gravity cancelled."""

    def __init__(self, gains: Gains, pp: PlantParams):
        self.k1 = gains.k11
        self.k2 = gains.k21
        self.pp = pp

    def evaluate(self, t, x1, x2):
        xd, xd_dot, xd_ddot = reference(t)
        e1 = x1 - xd
        alpha1 = xd_dot - self.k1 * e1
        alpha1_dot = xd_ddot - self.k1 * (x2 - xd_dot)
        e2 = x2 - alpha1
        acc = -self.k2 * e2 - e1 + alpha1_dot + self.pp.gravity_elev(x1)
        return e1, alpha1, e2, acc / self.pp.b_elev


class ClosedLoop:
    """Right-hand side of the augmented state and the per-sample logger.

    Layout: ``[x1, x2, x3, x4, ζ1, ζ2, x1f, x2f, Ω̂d]`` plus five pitch
    controller states when ``pitch_control`` is on.
    """

    def __init__(self, sc: Scenario):
        self.sc = sc
        pp = sc.plant
        self.pp = pp
        self.nominal = Envelope(sc.envelope)
        self.dist = sc.disturbance
        self.cfb = None
        ubf = sc.ubf
        env = self.nominal
        if sc.baseline is Baseline.CLASSICAL_UBF:
            ubf = replace(ubf, variant=Variant.LOG)
        elif sc.baseline is Baseline.NO_PF:
            env = ConstantEnvelope(-10.0, 10.0)
        if sc.baseline is Baseline.CFB:
            self.cfb = _CfbController(sc.gains, pp)
            self.ctrl = None
        else:
            self.ctrl = ChannelController(sc.gains, ubf, env, reference, pp.b_elev, pp.gravity_elev)
        self.pitch = None
        if sc.pitch_control:
            pitch_env = Envelope(replace(sc.envelope, e1_0=sc.x0.x3))
            self.pitch = ChannelController(sc.gains, sc.ubf, pitch_env, _zero_reference, pp.b_pitch)

    def initial(self) -> list:
        x0 = self.sc.x0
        y = [x0.x1, x0.x2, x0.x3, x0.x4, 0.0, 0.0, 0.0, 0.0, 0.0]
        if self.ctrl is not None:
            cs = self.ctrl.initial_state(x0.x1, x0.x2)
            y[4:9] = [cs.zeta1, cs.zeta2, cs.x1f, cs.x2f, cs.omega_hat]
        if self.pitch is not None:
            cs = self.pitch.initial_state(x0.x3, x0.x4)
            y += [cs.zeta1, cs.zeta2, cs.x1f, cs.x2f, cs.omega_hat]
        return y

    def rhs(self, t: float, y: list) -> list:
        pp = self.pp
        x1, x2, x3, x4 = y[0], y[1], y[2], y[3]
        d1 = self.dist.amplitude * math.sin(self.dist.frequency * t + self.dist.phase)
        if self.ctrl is not None:
            u1, cdot = self.ctrl.evaluate(t, x1, x2, y[4], y[5], y[6], y[7], y[8])
        else:
            u1 = self.cfb.evaluate(t, x1, x2)[3]
            cdot = (0.0, 0.0, 0.0, 0.0, 0.0)
        out = [x2, pp.b_elev * u1 - pp.gravity_elev(x1) + d1, x4, 0.0, *cdot]
        if self.pitch is not None:
            u2, pdot = self.pitch.evaluate(t, x3, x4, y[9], y[10], y[11], y[12], y[13])
            out[3] = pp.b_pitch * u2
            out.extend(pdot)
        return out

    def project(self, y: list) -> None:
        om_max = self.sc.gains.omega_max
        for i in (8, 13):
            if i < len(y):
                y[i] = min(max(y[i], 0.0), om_max)

    def log_row(self, t: float, y: list) -> tuple:
        x1, x2 = y[0], y[1]
        env = self.nominal(t)
        xd = reference(t)[0]
        e1 = x1 - xd
        if self.ctrl is not None:
            cs = ControllerState(y[6], y[7], y[4], y[5], y[8])
            o = self.ctrl.outputs(t, x1, x2, cs)
            z1, w1, w2, alpha1, u1 = o.z1, o.w1, o.w2, o.alpha1, o.u1bar
        else:
            e1c, alpha1, e2, u1 = self.cfb.evaluate(t, x1, x2)
            z1, w1, w2 = e1c, e1c, e2
        return (t, x1, x2, y[2], y[3], xd, e1, z1, w1, w2, alpha1, u1,
                y[8], y[4], y[5], y[6], y[7], env.k_l, env.k_u)


def _zero_reference(t):
    return 0.0, 0.0, 0.0


def build_closed_loop(sc: Scenario) -> ClosedLoop:
    return ClosedLoop(sc)


def _pack(rows) -> Trajectory:
    arr = np.asarray(rows, dtype=float).reshape(-1, len(SERIES))
    return Trajectory({k: arr[:, i].copy() for i, k in enumerate(SERIES)})


def run(sc: Scenario, progress: Optional[Callable[[float], None]] = None) -> Trajectory:
    """Integrate the scenario from 0 to ``t_end`` with fixed-step RK4.

    Raises
    ------
    EnvelopeViolation
        The error left the funnel (only for baselines that enforce it).
        The partial trajectory is attached as ``exc.trajectory``.
    NumericFailure
        A non-finite state appeared.
    """
    loop = ClosedLoop(sc)
    y = loop.initial()
    dt = sc.dt
    n = sc.n_steps
    rows = [loop.log_row(0.0, y)]
    rhs = loop.rhs
    t = 0.0
    for i in range(1, n + 1):
        try:
            y = rk4_step(rhs, t, y, dt)
        except EnvelopeViolation as exc:
            exc.trajectory = _pack(rows)
            raise
        except (OverflowError, ZeroDivisionError, FloatingPointError) as exc:
            raise NumericFailure(f"integration failed: {exc}", t) from exc
        t = i * dt
        if not all(math.isfinite(v) for v in y):
            raise NumericFailure("non-finite state", t)
        loop.project(y)
        if i % sc.record_every == 0 or i == n:
            try:
                rows.append(loop.log_row(t, y))
            except EnvelopeViolation as exc:
                exc.trajectory = _pack(rows)
                raise
        if progress is not None and i % 10000 == 0:
            progress(t)
    return _pack(rows)


def compute_metrics(tr: Trajectory, sc: Scenario) -> Metrics:
    t = tr.t
    e1 = tr.e1
    viol = int(np.count_nonzero((e1 <= tr.k_l) | (e1 >= tr.k_u)))
    after = t >= sc.envelope.Ts
    max_after = float(np.max(np.abs(e1[after]))) if np.any(after) else float("nan")

    # overshoot: excursion past zero on the side opposite the initial error
    s0 = -math.copysign(1.0, e1[0]) if e1[0] != 0.0 else 0.0
    overshoot = 0.0
    if s0 != 0.0:
        crossed = np.nonzero(e1 * s0 >= 0.0)[0]
        if crossed.size:
            overshoot = float(max(0.0, np.max(e1[crossed[0]:] * s0)))

    band = sc.envelope.e_inf_bar
    outside = np.nonzero(np.abs(e1) > band)[0]
    if outside.size == 0:
        conv = float(t[0])
    elif outside[-1] + 1 < len(t):
        conv = float(t[outside[-1] + 1])
    else:
        conv = float("inf")

    u = tr.u1
    energy = float(np.trapezoid(u * u, t)) if hasattr(np, "trapezoid") else float(np.trapz(u * u, t))
    return Metrics(viol, max_after, overshoot, conv, energy, float(np.max(np.abs(u))),
                   float(e1[-1]))


def _run_one(sc: Scenario):
    try:
        tr = run(sc)
        return sc.name, tr, None
    except (EnvelopeViolation, NumericFailure) as exc:
        return sc.name, getattr(exc, "trajectory", None), exc


def run_many(scenarios: Sequence[Scenario], jobs: int = 1) -> dict:
    """Run independent scenarios, optionally in worker processes.

    Returns ``{name: (trajectory_or_None, exception_or_None)}``; names must be
    unique.
    """
    names = [sc.name for sc in scenarios]
    if len(set(names)) != len(names):
        raise ValueError("scenario names must be unique")
    if jobs <= 1:
        results = [_run_one(sc) for sc in scenarios]
    else:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, scenarios))
    return {name: (tr, err) for name, tr, err in results}
