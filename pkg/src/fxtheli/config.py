"""Scenario files: strict JSON with sections plant/disturbance/envelope/ubf/gains/sim.

Every field must be present; keys starting with ``_`` are comments and
ignored. Rational exponents are written as ``"num/den"`` strings.
"""

from __future__ import annotations

import json
from dataclasses import fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Union

from .controller import Gains
from .envelope import EnvelopeConfig
from .plant import DisturbanceSpec, HeliState, PlantParams
from .sim import Scenario
from .ubf import UbfConfig

__all__ = ["ConfigError", "load_scenario", "scenario_from_dict", "scenario_to_dict",
           "save_scenario", "builtin_path", "with_overrides", "BUILTIN"]

BUILTIN = ("sim1", "sim2")


class ConfigError(ValueError):
    pass


_SIM_KEYS = ("x0", "dt", "t_end", "baseline", "record_every", "pitch_control")


def _strip(d: dict) -> dict:
    return {k: v for k, v in d.items() if not k.startswith("_")}


def _section(raw: dict, name: str, cls, skip=()) -> Any:
    if name not in raw:
        raise ConfigError(f"missing section '{name}'")
    sec = raw[name]
    if not isinstance(sec, dict):
        raise ConfigError(f"section '{name}' must be an object")
    sec = _strip(sec)
    names = [f.name for f in fields(cls) if f.name not in skip]
    for n in names:
        if n not in sec:
            raise ConfigError(f"missing field '{name}.{n}'")
    extra = set(sec) - set(names)
    if extra:
        raise ConfigError(f"unknown field(s) in '{name}': {', '.join(sorted(extra))}")
    try:
        return cls(**sec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid section '{name}': {exc}") from exc


def scenario_from_dict(raw: dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ConfigError("scenario must be a JSON object")
    plant = _section(raw, "plant", PlantParams)
    dist = _section(raw, "disturbance", DisturbanceSpec)
    env = _section(raw, "envelope", EnvelopeConfig, skip=("e1_0",))
    ubf = _section(raw, "ubf", UbfConfig)
    gains = _section(raw, "gains", Gains)
    if "sim" not in raw:
        raise ConfigError("missing section 'sim'")
    sim = _strip(raw["sim"])
    for k in _SIM_KEYS:
        if k not in sim:
            raise ConfigError(f"missing field 'sim.{k}'")
    extra = set(sim) - set(_SIM_KEYS)
    if extra:
        raise ConfigError(f"unknown field(s) in 'sim': {', '.join(sorted(extra))}")
    x0 = sim["x0"]
    if not (isinstance(x0, list) and len(x0) == 4):
        raise ConfigError("field 'sim.x0' must be a list of 4 numbers")
    try:
        return Scenario(
            plant=plant, disturbance=dist, envelope=env, ubf=ubf, gains=gains,
            x0=HeliState(*map(float, x0)), dt=float(sim["dt"]), t_end=float(sim["t_end"]),
            baseline=sim["baseline"], record_every=int(sim["record_every"]),
            pitch_control=bool(sim["pitch_control"]), name=str(raw.get("name", "scenario")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid scenario: {exc}") from exc


def _plain(obj, skip=()):
    out = {}
    for f in fields(obj):
        if f.name in skip:
            continue
        v = getattr(obj, f.name)
        if hasattr(v, "num") and hasattr(v, "den"):
            v = str(v)
        elif hasattr(v, "value") and isinstance(getattr(v, "value"), str):
            v = v.value
        out[f.name] = v
    return out


def scenario_to_dict(sc: Scenario) -> dict:
    """Inverse of :func:`scenario_from_dict` (the effective config)."""
    return {
        "name": sc.name,
        "plant": _plain(sc.plant),
        "disturbance": _plain(sc.disturbance),
        "envelope": _plain(sc.envelope, skip=("e1_0",)),
        "ubf": _plain(sc.ubf),
        "gains": _plain(sc.gains),
        "sim": {
            "x0": list(sc.x0.as_tuple()),
            "dt": sc.dt,
            "t_end": sc.t_end,
            "baseline": sc.baseline.value,
            "record_every": sc.record_every,
            "pitch_control": sc.pitch_control,
        },
    }


def builtin_path(name: str):
    return resources.files("fxtheli").joinpath("scenarios", f"{name}.json")


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Load a scenario file, or a builtin by name (``"sim1"``, ``"sim2"``)."""
    if str(path) in BUILTIN:
        text = builtin_path(str(path)).read_text()
        origin = str(path)
    else:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc}") from exc
        origin = str(p)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{origin}: JSON parse error at line {exc.lineno}, column {exc.colno}: "
                          f"{exc.msg}") from exc
    try:
        return scenario_from_dict(raw)
    except ConfigError as exc:
        raise ConfigError(f"{origin}: {exc}") from exc


def save_scenario(sc: Scenario, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(sc), indent=2) + "\n")


def with_overrides(sc: Scenario, dt=None, t_end=None) -> Scenario:
    kw = {}
    if dt is not None:
        kw["dt"] = dt
    if t_end is not None:
        kw["t_end"] = t_end
    return replace(sc, **kw) if kw else sc
