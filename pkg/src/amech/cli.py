"""Command-line harness: `amech validate | simulate | check`.

Scenario files are TOML, chart files are JSON, trajectory output is CSV
with a JSON drift-summary sidecar written next to it.  Exit codes: 0 on
success, 1 on a failed validation or check, 2 on malformed input or a
violated precondition, 3 when the integration hit a non-finite value
(a partial CSV is still written).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:                      # Python 3.10
    import tomli as tomllib

from .algebroid import chart_from_dict, sample_box, validate_structure
from .atiyah import hp_field
from .checks import DEFAULT_TOLS, run_check
from .errors import AmechError, NoConvergence, PreconditionFailed, SingularHessian
from .fields import fd_gradient
from .hamiltonian import hamilton_field, hj_residual
from .integrate import IntegratorConfig, Trajectory, drift, rk4_integrate
from .lagrangian import el_field
from .models import (BuiltinModel, builtin_names, get_builtin,
                     model_from_principal, principal_from_dict)


class CliError(Exception):
    """Configuration problem: maps to exit code 2."""


def _model_from_json(path: str) -> BuiltinModel:
    """A JSON model file is either a constant chart {m, n, rho, C} or
    principal-bundle data {m, c, A, ...} producing an Atiyah/Wong model."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise CliError(f"model file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc}") from exc
    try:
        if "c" in data:
            pd, wd = principal_from_dict(data)
            return model_from_principal(pd, wd, name=path)
        chart = chart_from_dict(data)
    except (KeyError, ValueError, AmechError) as exc:
        raise CliError(f"malformed model file {path}: {exc}") from exc
    m = chart.m
    return BuiltinModel(name=path, chart=chart,
                        box_lo=-np.ones(m), box_hi=np.ones(m),
                        x0=np.zeros(m))


def _resolve_model(spec: str) -> BuiltinModel:
    """Model spec: 'builtin:<name>' (or bare builtin name) or a JSON path."""
    if spec.startswith("builtin:"):
        spec = spec[len("builtin:"):]
    if spec in builtin_names():
        return get_builtin(spec)
    if spec.endswith(".json"):
        return _model_from_json(spec)
    raise CliError(f"cannot resolve model {spec!r}; "
                   f"builtins: {builtin_names()}")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def cmd_validate(args) -> int:
    model = _resolve_model(args.model)
    pts = sample_box(model.box_lo, model.box_hi, args.points,
                     offset=0.5 + 0.381966011 * args.seed)
    report = validate_structure(model.chart, pts, tol=args.tol)
    out = {"model": model.name, **report.as_dict()}
    print(json.dumps(out, indent=2))
    return 0 if report.passed else 1


def _make_monitor(model: BuiltinModel, dynamics: str, name: str):
    chart = model.chart
    m, n = chart.m, chart.n
    if name == "energy":
        if dynamics == "lagrangian":
            L = model.sys_L.L

            def mon(s):
                grad = fd_gradient(L, s)
                return float(s[m:] @ grad[m:] - L(s))
        else:
            H = model.sys_H.H

            def mon(s):
                return H(s)
        return mon
    if name.startswith("momentum:"):
        spec = name.split(":", 1)[1]
        k = int(spec[1:] if spec.startswith("e") else spec) - 1
        if not 0 <= k < n:
            raise CliError(f"momentum index out of range in {name!r}")
        if dynamics == "lagrangian":
            L = model.sys_L.L

            def mon(s):
                return float(fd_gradient(L, s)[m + k])
        else:
            def mon(s):
                return float(s[m + k])
        return mon
    if name.startswith("casimir:"):
        key = name.split(":", 1)[1]
        table = model.casimirs.get(key, {})
        if dynamics not in table:
            raise CliError(f"model {model.name} has no casimir {key!r} "
                           f"for {dynamics} dynamics")
        return table[dynamics]
    if name == "hj-residual":
        if model.hj_alpha is None or model.sys_H is None:
            raise CliError(f"model {model.name} carries no Hamilton-Jacobi section")
        H = model.sys_H.H

        def mon(s):
            cocycle, hj = hj_residual(chart, H, model.hj_alpha, s[:m])
            worst = max(np.max(np.abs(cocycle)) if cocycle.size else 0.0,
                        np.max(np.abs(hj)) if hj.size else 0.0)
            return float(worst)
        return mon
    raise CliError(f"unknown monitor {name!r}")


def _load_scenario(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise CliError(f"scenario file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise CliError(f"malformed scenario TOML: {exc}") from exc


def cmd_simulate(args) -> int:
    sc = _load_scenario(args.config)
    for key in ("model", "dynamics"):
        if key not in sc:
            raise CliError(f"scenario is missing the {key!r} key")
    model = _resolve_model(str(sc["model"]))
    dynamics = str(sc["dynamics"])
    m, n = model.chart.m, model.chart.n

    if dynamics == "lagrangian":
        if model.sys_L is None:
            raise CliError(f"model {model.name} has no Lagrangian dynamics")
        field = el_field(model.sys_L)
        fiber_names = [f"y{k+1}" for k in range(n)]
    elif dynamics == "hamiltonian":
        if model.sys_H is None:
            raise CliError(f"model {model.name} has no Hamiltonian dynamics")
        field = hamilton_field(model.sys_H)
        fiber_names = [f"p{k+1}" for k in range(n)]
    elif dynamics == "wong":
        if model.pd is None or model.sys_H is None:
            raise CliError(f"model {model.name} is not a Wong/Atiyah model")
        field = hp_field(model.pd, model.sys_H.H)
        fiber_names = [f"p{k+1}" for k in range(n)]
    else:
        raise CliError(f"unknown dynamics {dynamics!r}")

    if "initial_state" in sc:
        state0 = np.asarray(sc["initial_state"], dtype=float)
        if state0.shape != (m + n,):
            raise CliError(
                f"initial_state must have length {m + n}, got {state0.size}")
    else:
        state0 = model.initial_state(dynamics)

    icfg = sc.get("integrator", {})
    cfg = IntegratorConfig(dt=float(icfg.get("dt", 1e-3)),
                           t_end=float(icfg.get("t_end", 1.0)))
    monitor_names = list(sc.get("monitors", ["energy"]))
    monitors = {name: _make_monitor(model, dynamics, name)
                for name in monitor_names}

    traj = rk4_integrate(field, state0, cfg, monitors)
    _write_csv(args.out, traj, m, fiber_names, monitor_names)

    summary = {
        "model": model.name,
        "dynamics": dynamics,
        "steps": int(traj.times.size - 1),
        "completed": traj.completed,
        "error": traj.error,
        "drift": {name: dict(zip(("max_abs", "relative"), drift(traj, name)))
                  for name in monitor_names},
    }
    with open(str(args.out) + ".json", "w") as fh:
        json.dump(summary, fh, indent=2)
    return 0 if traj.completed else 3


def _write_csv(path, traj: Trajectory, m: int, fiber_names, monitor_names):
    cols = ["t"] + [f"x{k+1}" for k in range(m)] + list(fiber_names) \
        + list(monitor_names)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for k in range(traj.times.size):
            row = [_fmt(traj.times[k])]
            row += [_fmt(v) for v in traj.states[k]]
            row += [_fmt(traj.monitors[name][k]) for name in monitor_names]
            fh.write(",".join(row) + "\n")


def cmd_check(args) -> int:
    model = _resolve_model(args.model)
    try:
        worst, tol, passed = run_check(args.check, model, points=args.points,
                                       tol=args.tol, seed=args.seed)
    except KeyError as exc:
        raise CliError(str(exc))
    except (PreconditionFailed, SingularHessian, NoConvergence) as exc:
        print(json.dumps({"check": args.check, "model": model.name,
                          "error": type(exc).__name__, "message": str(exc)},
                         indent=2))
        return 2
    print(json.dumps({"check": args.check, "model": model.name,
                      "points": args.points, "max_residual": worst,
                      "tol": tol, "passed": passed}, indent=2))
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="amech",
        description="Mechanics on Lie algebroid charts: validation, "
                    "simulation, and geometric cross-checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the structure equations of a model")
    v.add_argument("--model", required=True,
                   help="builtin:<name> or a chart JSON path")
    v.add_argument("--points", type=int, default=50)
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(fn=cmd_validate)

    s = sub.add_parser("simulate", help="integrate a scenario to CSV")
    s.add_argument("--config", required=True, help="scenario TOML path")
    s.add_argument("--out", required=True, help="output CSV path")
    s.set_defaults(fn=cmd_simulate)

    c = sub.add_parser("check", help="run a geometric cross-check")
    c.add_argument("--check", required=True,
                   help=f"one of {sorted(DEFAULT_TOLS)}")
    c.add_argument("--model", required=True)
    c.add_argument("--points", type=int, default=100)
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AmechError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
