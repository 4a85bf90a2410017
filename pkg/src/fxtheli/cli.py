"""Command line front end.

Exit codes: 0 pass, 1 usage or config error, 2 envelope violation,
3 numeric failure (or a failed self-check).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Sequence

from . import fxtbounds as fb
from .config import ConfigError, load_scenario, save_scenario, with_overrides
from .powmath import OddRational
from .sim import Baseline, Metrics, NumericFailure, Scenario, compute_metrics, run, run_many
from .ubf import EnvelopeViolation, Variant

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    scenario_id: str
    metrics: Optional[Metrics]
    flags: dict = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.flags.values())

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _flags(m: Metrics, sc: Scenario, enforce_funnel: bool) -> dict:
    if not enforce_funnel:
        return {}
    band = max(sc.envelope.e_inf, sc.envelope.e_inf_bar)
    return {
        "zero_envelope_violations": m.envelope_violations == 0,
        "error_within_band_after_Ts": m.max_abs_error_after_Ts <= band,
        "overshoot_within_band": m.overshoot <= band,
    }


def _report(sc: Scenario, tr, err, out_dir: Optional[Path]) -> RunReport:
    enforce = sc.baseline in (Baseline.NONE, Baseline.CLASSICAL_UBF)
    outputs = []
    if out_dir is not None and tr is not None and len(tr):
        path = out_dir / f"{sc.name}.csv"
        tr.to_csv(path)
        outputs.append(str(path))
    if err is not None:
        return RunReport(sc.name, None, {"zero_envelope_violations": False}, outputs, str(err))
    m = compute_metrics(tr, sc)
    return RunReport(sc.name, m, _flags(m, sc, enforce), outputs)


def _write_report(rep, out_dir: Path, name: str) -> Path:
    path = out_dir / name
    payload = [r.as_dict() for r in rep] if isinstance(rep, list) else rep.as_dict()
    path.write_text(json.dumps(payload, indent=2, default=str) + "\n")
    return path


def _exit_for(reports: Sequence[RunReport], errors: Sequence) -> int:
    if any(isinstance(e, NumericFailure) for e in errors):
        return EXIT_NUMERIC
    if any(isinstance(e, EnvelopeViolation) for e in errors) or not all(r.passed for r in reports):
        return EXIT_VIOLATION
    return EXIT_OK


def _load(args) -> Scenario:
    sc = load_scenario(args.config)
    return with_overrides(sc, dt=args.dt, t_end=args.t_end)


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args) -> int:
    sc = _load(args)
    out = _out(args)
    save_scenario(sc, out / f"{sc.name}.effective.json")
    res = run_many([sc])[sc.name]
    rep = _report(sc, res[0], res[1], out)
    rep.outputs.append(str(_write_report(rep, out, f"{sc.name}.report.json")))
    _print_reports([rep])
    return _exit_for([rep], [res[1]] if res[1] else [])


def parse_exponents(text: str) -> List[OddRational]:
    items = [s for s in (text or "").split(",") if s.strip()]
    if not items:
        raise UsageError("empty exponent list")
    try:
        return [OddRational.parse(s) for s in items]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad exponent list {text!r}: {exc}") from exc


def sweep_scenarios(base: Scenario, exponents: Sequence[OddRational]) -> List[Scenario]:
    """One scenario per ``m = n`` value plus the log-barrier baseline."""
    out = []
    for r in exponents:
        ubf = replace(base.ubf, m=r, n=r)
        out.append(replace(base, ubf=ubf, baseline=Baseline.NONE,
                           name=f"{base.name}_m{r.num}_{r.den}"))
    out.append(replace(base, baseline=Baseline.CLASSICAL_UBF, name=f"{base.name}_classical_ubf"))
    return out


def cmd_sweep_ubf(args) -> int:
    exps = parse_exponents(args.exponents)
    base = _load(args)
    out = _out(args)
    scs = sweep_scenarios(base, exps)
    results = run_many(scs, jobs=args.jobs)
    reports, errors = [], []
    for sc in scs:
        tr, err = results[sc.name]
        reports.append(_report(sc, tr, err, out))
        if err is not None:
            errors.append(err)
    table = out / f"{base.name}_ubf_sweep.csv"
    with open(table, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario", "variant", "m", "n", "envelope_violations", "control_energy",
                    "peak_input", "max_abs_error_after_Ts", "overshoot", "passed"])
        for sc, rep in zip(scs, reports):
            variant = Variant.LOG.value if sc.baseline is Baseline.CLASSICAL_UBF else sc.ubf.variant.value
            m = rep.metrics
            w.writerow([sc.name, variant, str(sc.ubf.m), str(sc.ubf.n),
                        m.envelope_violations if m else "", m.control_energy if m else "",
                        m.peak_input if m else "", m.max_abs_error_after_Ts if m else "",
                        m.overshoot if m else "", rep.passed])
    _write_report(reports, out, f"{base.name}_ubf_sweep.report.json")
    _print_reports(reports)
    print(f"table: {table}")
    return _exit_for(reports, errors)


def cmd_compare(args) -> int:
    base = _load(args)
    out = _out(args)
    scs = [replace(base, baseline=b, name=f"{base.name}_{b.value}")
           for b in (Baseline.NONE, Baseline.NO_PF, Baseline.CFB)]
    results = run_many(scs, jobs=args.jobs)
    reports = []
    for sc in scs:
        tr, err = results[sc.name]
        reports.append(_report(sc, tr, err, out))
    table = out / f"{base.name}_compare.csv"
    with open(table, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario", "baseline", "envelope_violations", "max_abs_error_after_Ts",
                    "overshoot", "convergence_time", "control_energy", "peak_input"])
        for sc, rep in zip(scs, reports):
            m = rep.metrics
            w.writerow([sc.name, sc.baseline.value] + (
                [m.envelope_violations, m.max_abs_error_after_Ts, m.overshoot,
                 m.convergence_time, m.control_energy, m.peak_input] if m else [""] * 6))
    _write_report(reports, out, f"{base.name}_compare.report.json")
    _print_reports(reports)
    print(f"table: {table}")
    # only the full method is held to the funnel
    err = results[scs[0].name][1]
    return _exit_for(reports[:1], [err] if err else [])


BOUND_COLUMNS = ["mu1", "mu2", "mu3", "p", "q", "tau"]


def _parse_bound_row(values: Sequence[str]) -> fb.BoundProblem:
    if len(values) != 6:
        raise ValueError(f"expected 6 values (mu1,mu2,mu3,p,q,tau), got {len(values)}")
    mu1, mu2, mu3 = (float(v) for v in values[:3])
    return fb.BoundProblem(mu1, mu2, mu3, values[3].strip(), values[4].strip(), float(values[5]))


def bounds_table(rows: Sequence[Sequence[str]], v0_grid: Sequence[float]) -> List[dict]:
    """One dict per input row; lemma columns are blank when preconditions fail."""
    table = []
    for raw in rows:
        rec = dict(zip(BOUND_COLUMNS, [str(v).strip() for v in raw]))
        try:
            bp = _parse_bound_row([str(v) for v in raw])
        except (ValueError, ZeroDivisionError) as exc:
            rec["error"] = str(exc)
            table.append(rec)
            continue
        rec["residual"] = fb.residual_bound(bp)
        for v0 in v0_grid:
            try:
                rec[f"oracle_v0={v0:g}"] = fb.settle_oracle(bp, v0)[0]
            except (fb.HorizonExceeded, fb.QuadratureError) as exc:
                rec[f"oracle_v0={v0:g}"] = ""
                rec["error"] = str(exc)
        rec["T1"] = fb.t1_bound(bp)
        rec["T2"] = fb.t2_classical(bp)
        for name, fn in (("lemma2", fb.t_lemma2), ("lemma3", fb.t_lemma3), ("lemma4", fb.t_lemma4)):
            try:
                rec[name] = fn(bp)
            except (fb.PreconditionError, fb.QuadratureError):
                rec[name] = ""
        table.append(rec)
    return table


DEFAULT_BOUND_ROWS = [
    ["1", "1", "0", "1/2", "3/2", "0.5"],
    ["1", "1", "0.5", "1/2", "3/2", "0.5"],
    ["2", "1", "0.1", "3/5", "9/5", "0.5"],
    ["1", "2", "0.2", "3/5", "5/3", "0.5"],
]


def cmd_bounds(args) -> int:
    rows = [r.split(",") for r in (args.params or [])]
    if args.params_file:
        with open(args.params_file, newline="") as fh:
            for r in csv.reader(fh):
                if not r or r[0].strip().startswith("#") or r[0].strip() == "mu1":
                    continue
                rows.append(r)
    if not rows:
        rows = DEFAULT_BOUND_ROWS
    grid = [float(v) for v in args.v0.split(",")]
    table = bounds_table(rows, grid)
    cols = BOUND_COLUMNS + ["residual"] + [f"oracle_v0={v:g}" for v in grid] + \
        ["T1", "T2", "lemma2", "lemma3", "lemma4", "error"]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=cols, restval="")
        w.writeheader()
        for rec in table:
            w.writerow({k: (f"{v:.10g}" if isinstance(v, float) else v) for k, v in rec.items()})
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .checks import run_all

    results = run_all(seed=args.seed, scale=args.scale)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


def _print_reports(reports: Sequence[RunReport]) -> None:
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        if r.metrics is None:
            print(f"{status}  {r.scenario_id}: {r.error}")
            continue
        m = r.metrics
        print(f"{status}  {r.scenario_id}: violations={m.envelope_violations} "
              f"max|e1|(t>=Ts)={m.max_abs_error_after_Ts:.3g} overshoot={m.overshoot:.3g} "
              f"energy={m.control_energy:.4g} peak|u|={m.peak_input:.4g}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fxtheli", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def sim_args(p):
        p.add_argument("--config", default="sim2",
                       help="scenario JSON file, or builtin 'sim1'/'sim2' (default: sim2)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--dt", type=float, default=None, help="override integration step [s]")
        p.add_argument("--t-end", type=float, default=None, help="override horizon [s]")
        p.add_argument("--seed", type=int, default=0, help="unused by deterministic runs")

    p = sub.add_parser("run", help="run one scenario")
    sim_args(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep-ubf", help="sweep m = n and compare with the log barrier")
    sim_args(p)
    p.set_defaults(config="sim1")
    p.add_argument("--exponents", default="1,1/3,1/5,1/7")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep_ubf)

    p = sub.add_parser("compare", help="full method vs. no funnel vs. plain backstepping")
    sim_args(p)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bounds", help="settling-time bound table as CSV")
    p.add_argument("--params", action="append",
                   help="mu1,mu2,mu3,p,q,tau (p, q may be 'a/b'); repeatable")
    p.add_argument("--params-file", help="CSV file with the same six columns")
    p.add_argument("--v0", default="1,1e3,1e6,1e9", help="initial values for the oracle")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("selfcheck", help="randomized property sweeps")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="fraction of the default draw counts")
    p.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
