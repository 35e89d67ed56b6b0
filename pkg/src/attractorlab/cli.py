"""Batch front end.

Subcommands: simulate, attractor, omega, verify, reproduce, schema.
Exit codes: 0 success, 1 usage or config error, 2 numerical failure,
3 a check outcome did not match the scenario's expectation (an expected
counterexample that fails as expected exits 0).

Reports are deterministic: identical config and seed give byte-identical
JSON (sorted keys, no timestamps). Files are written to a temp path in the
target directory and renamed into place.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import jsonschema
import numpy as np

from . import scenarios
from .errors import ContractViolation, EmptySetError, NumericalFailure, UnsupportedModel
from .limits import a_min, forward_omega, omega_liminf, omega_limsup
from .models_pde import (
    ChafeeModel,
    Grid1D,
    ParabolicInclusionModel,
    chafee_attractor_sample,
    chafee_handle,
    parabolic_attractor_sample,
    parabolic_autonomous_attractor,
    parabolic_handle,
)
from .models_scalar import (
    InclusionModel,
    LinearModel,
    TimeFnSpec,
    inclusion_attractor,
    inclusion_autonomous_limit,
    inclusion_handle,
    linear_handle,
    linear_pullback_trajectory,
)
from .process import UNIQUE_BRANCH_KIND, TrajectorySample, evolve
from .setcalc import (
    CompactSetSample,
    SetFamily,
    StatePoint,
    interval_hull,
    interval_sample,
    save_family,
    singleton,
)

_TIMEFN_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["constant", "linear", "sinusoidal", "exp-ramp", "table"]},
        "c0": {"type": "number"},
        "c1": {"type": "number"},
        "nu": {"type": "number", "exclusiveMinimum": 0},
        "phi": {"type": "number"},
        "c_inf": {"type": "number"},
        "k": {"type": "number", "exclusiveMinimum": 0},
        "times": {"type": "array", "items": {"type": "number"}, "minItems": 2},
        "values": {"type": "array", "items": {"type": "number"}, "minItems": 2},
    },
    "additionalProperties": False,
}

_GRID_SCHEMA = {
    "type": "object",
    "required": ["domain_length", "n_interior"],
    "properties": {
        "domain_length": {"type": "number", "exclusiveMinimum": 0},
        "n_interior": {"type": "integer", "minimum": 15},
    },
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "attractorlab scenario config",
    "type": "object",
    "required": ["model"],
    "properties": {
        "model": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {
                    "enum": ["linear", "ode-inclusion", "chafee", "parabolic-inclusion"]
                },
                "model_id": {"type": "string"},
                "drift": {"type": "number", "exclusiveMaximum": 0},
                "forcing": _TIMEFN_SCHEMA,
                "lam": {"type": "number"},
                "b": _TIMEFN_SCHEMA,
                "omega": _TIMEFN_SCHEMA,
                "grid": _GRID_SCHEMA,
                "dt": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
            "allOf": [
                {
                    "if": {"properties": {"kind": {"const": "linear"}}},
                    "then": {"required": ["drift", "forcing"]},
                },
                {
                    "if": {"properties": {"kind": {"const": "ode-inclusion"}}},
                    "then": {"required": ["lam", "b"]},
                },
                {
                    "if": {"properties": {"kind": {"const": "chafee"}}},
                    "then": {"required": ["lam", "b", "grid", "dt"]},
                },
                {
                    "if": {"properties": {"kind": {"const": "parabolic-inclusion"}}},
                    "then": {"required": ["b", "omega", "grid", "dt"]},
                },
            ],
        },
        "seed": {"type": "integer"},
        "schedule": {
            "type": "object",
            "required": ["tol", "grid"],
            "properties": {
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "grid": {"type": "array", "items": {"type": "number"}, "minItems": 2},
                "budget": {"type": "integer", "minimum": 1},
                "eps": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "output_dir": {"type": "string"},
    },
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(CONFIG_SCHEMA)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


# ---------------------------------------------------------------------------
# config plumbing


def validate_config(cfg: dict):
    errors = sorted(_VALIDATOR.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for e in errors[:8]:
            where = "/".join(str(p) for p in e.absolute_path) or "<root>"
            lines.append(f"  {where}: {e.message}")
        raise ContractViolation("config failed schema validation:\n" + "\n".join(lines))


def builtin_config(name: str) -> dict:
    m = scenarios.build_model(name)
    if isinstance(m, LinearModel):
        model = {"kind": "linear", "drift": m.drift,
                 "forcing": m.forcing.to_dict(), "model_id": m.model_id}
    elif isinstance(m, InclusionModel):
        model = {"kind": "ode-inclusion", "lam": m.lam,
                 "b": m.b.to_dict(), "model_id": m.model_id}
    elif isinstance(m, ChafeeModel):
        model = {"kind": "chafee", "lam": m.lam, "b": m.b.to_dict(),
                 "grid": {"domain_length": m.grid.domain_length,
                          "n_interior": m.grid.n_interior},
                 "dt": m.dt, "model_id": m.model_id}
    else:
        model = {"kind": "parabolic-inclusion", "b": m.b.to_dict(),
                 "omega": m.omega.to_dict(),
                 "grid": {"domain_length": m.grid.domain_length,
                          "n_interior": m.grid.n_interior},
                 "dt": m.dt, "model_id": m.model_id}
    return {"model": model}


def model_from_config(cfg: dict):
    mc = cfg["model"]
    kind = mc["kind"]
    if kind == "linear":
        m = LinearModel(mc["drift"], TimeFnSpec.from_dict(mc["forcing"]),
                        mc.get("model_id", "linear"))
        return m, linear_handle(m)
    if kind == "ode-inclusion":
        m = InclusionModel(mc["lam"], TimeFnSpec.from_dict(mc["b"]),
                           mc.get("model_id", "ode-inclusion"))
        return m, inclusion_handle(m)
    grid = Grid1D(mc["grid"]["domain_length"], mc["grid"]["n_interior"])
    if kind == "chafee":
        m = ChafeeModel(mc["lam"], TimeFnSpec.from_dict(mc["b"]), grid, mc["dt"],
                        mc.get("model_id", "chafee"))
        return m, chafee_handle(m)
    m = ParabolicInclusionModel(TimeFnSpec.from_dict(mc["b"]),
                                TimeFnSpec.from_dict(mc["omega"]), grid, mc["dt"],
                                mc.get("model_id", "parabolic-inclusion"))
    return m, parabolic_handle(m)


def resolve_config(args) -> dict:
    target = getattr(args, "target", None)
    if target and args.config:
        raise ContractViolation("give either a scenario name or --config, not both")
    if args.config:
        try:
            with open(args.config) as f:
                cfg = json.load(f)
        except OSError as e:
            raise ContractViolation(f"cannot read config: {e}")
        except json.JSONDecodeError as e:
            raise ContractViolation(f"config is not valid JSON: {e}")
        validate_config(cfg)
        return cfg
    if target:
        if target in scenarios.BATTERIES:
            return builtin_config(target)
        if os.path.exists(target):
            args.config = target
            args.target = None
            return resolve_config(args)
        raise ContractViolation(
            f"unknown scenario {target!r}; builtin names: "
            + ", ".join(scenarios.SCENARIO_NAMES)
        )
    raise ContractViolation("a builtin scenario name or --config PATH is required")


# ---------------------------------------------------------------------------
# output helpers


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".part")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_times(spec: str, dt: float | None = None) -> np.ndarray:
    """'a:b:n' -> linspace, or a comma-separated list; dt snaps to the step grid."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ContractViolation(f"bad times spec {spec!r}; want a:b:n or v1,v2,...")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        times = np.linspace(a, b, n)
    else:
        times = np.array([float(v) for v in spec.split(",")], dtype=float)
    if dt is not None:
        times = times[0] + dt * np.unique(np.round((times - times[0]) / dt))
    if len(times) > 1 and not np.all(np.diff(times) > 0):
        raise ContractViolation("times must be strictly increasing")
    return times


def _parse_ic(m, spec: str):
    """Initial condition: a number for scalar models; 'zero', 'sin:amp[:mode]',
    a comma list, or a one-column file for grid models."""
    if isinstance(m, (LinearModel, InclusionModel)):
        return StatePoint(np.array([float(spec)]))
    grid = m.grid
    if spec == "zero":
        field = np.zeros(grid.n_interior)
    elif spec.startswith("sin:"):
        parts = spec.split(":")
        amp = float(parts[1])
        mode = int(parts[2]) if len(parts) > 2 else 1
        field = amp * np.sin(mode * np.pi * grid.x / grid.domain_length)
    elif os.path.exists(spec):
        field = np.loadtxt(spec, delimiter=",").ravel()
    else:
        field = np.array([float(v) for v in spec.split(",")], dtype=float)
    if field.shape != (grid.n_interior,):
        raise ContractViolation(
            f"initial field has {field.size} values; the grid has {grid.n_interior}"
        )
    return StatePoint(field, "l2", grid.h)


def _parse_set(m, spec: str):
    """'lo:hi:n@t0' (scalar interval), 'VALUE@t0', 'zero@t0', 'sin:amp[:mode]@t0'."""
    body, sep, t0s = spec.rpartition("@")
    if not sep:
        raise ContractViolation(f"set spec {spec!r} needs a trailing @t0")
    t0 = float(t0s)
    if isinstance(m, (LinearModel, InclusionModel)) and body.count(":") == 2:
        lo, hi, n = body.split(":")
        return interval_sample(float(lo), float(hi), int(n)), t0
    return CompactSetSample([_parse_ic(m, body)]), t0


def _family_for(m, times, points, depth, bank, seed) -> SetFamily:
    """The model's pullback attractor family sampled on a time grid."""
    if isinstance(m, LinearModel):
        secs = [singleton(linear_pullback_trajectory(m, float(t))) for t in times]
    elif isinstance(m, InclusionModel):
        secs = [inclusion_attractor(m, float(t), points) for t in times]
    elif isinstance(m, ChafeeModel):
        secs = [chafee_attractor_sample(m, float(t), depth, bank, seed) for t in times]
    else:
        raw = np.geomspace(m.dt, max(depth, m.dt), 41)
        durations = np.concatenate(([0.0], np.unique(np.round(raw / m.dt)) * m.dt))
        secs = [parabolic_attractor_sample(m, float(t), durations) for t in times]
    return SetFamily(times, secs)


def _branch_states(p, times, x0, label):
    """Reconstruct one branch along a grid from its final-time label."""
    states = [x0]
    t_start = float(times[0])
    for s in times[1:]:
        s = float(s)
        if label.kind == UNIQUE_BRANCH_KIND:
            states.append(evolve(p, s, t_start, x0, 1)[0][1])
        elif label.departure_time is None or s <= label.departure_time:
            states.append(x0)
        else:
            out = evolve(p, s, label.departure_time, x0, 3)
            match = [st for lbl, st in out
                     if lbl.kind == label.kind
                     and lbl.departure_time == label.departure_time]
            if not match:
                raise ContractViolation(
                    f"cannot reconstruct branch {label.serialize()} at t={s}"
                )
            states.append(match[0])
    return states


# ---------------------------------------------------------------------------
# subcommands


def cmd_schema(args) -> int:
    text = _dump_json(CONFIG_SCHEMA)
    if args.out:
        path = os.path.join(args.out, "config-schema.json")
        _atomic_write(path, text)
        print(path)
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    cfg = resolve_config(args)
    m, p = model_from_config(cfg)
    if args.t <= args.t0:
        raise ContractViolation("simulate needs t > t0")
    dt = getattr(m, "dt", None)
    times = np.linspace(args.t0, args.t, args.samples)
    if dt is not None:
        times = args.t0 + dt * np.unique(np.round((times - args.t0) / dt))
    x0 = _parse_ic(m, args.ic)
    branches = evolve(p, args.t, args.t0, x0, args.budget)
    os.makedirs(args.out, exist_ok=True)
    written = []
    for label, _ in branches:
        states = _branch_states(p, times, x0, label)
        name = f"trajectory-{label.serialize().replace(':', '@')}.csv"
        path = os.path.join(args.out, name)
        fd, tmp = tempfile.mkstemp(dir=args.out, suffix=".part")
        os.close(fd)
        TrajectorySample(times, states, label).save_csv(tmp)
        os.replace(tmp, path)
        written.append(name)
    index = {
        "model_id": p.model_id,
        "t0": args.t0,
        "t": args.t,
        "budget": args.budget,
        "branches": written,
    }
    _atomic_write(os.path.join(args.out, "simulate-index.json"), _dump_json(index))
    print(f"{len(written)} branch file(s) in {args.out}")
    return 0


def cmd_attractor(args) -> int:
    cfg = resolve_config(args)
    m, p = model_from_config(cfg)
    seed = 12345 if args.seed is None else args.seed
    depth = args.depth if args.depth is not None else (
        25.0 if isinstance(m, (ChafeeModel, ParabolicInclusionModel)) else 40.0
    )
    if args.kind == "pullback":
        if not args.times:
            raise ContractViolation("attractor --kind pullback needs --times")
        times = _parse_times(args.times, getattr(m, "dt", None))
        fam = _family_for(m, times, args.points, depth, args.bank, seed)
    else:
        if isinstance(m, LinearModel):
            c = m.forcing.declared_limit()
            if c is None:
                raise UnsupportedModel("forcing declares no limit; no autonomous attractor")
            fam = SetFamily([0.0], [singleton(c / -m.drift)])
        elif isinstance(m, InclusionModel):
            sample = inclusion_autonomous_limit(m)["attractor_sample"](args.points)
            fam = SetFamily([0.0], [sample])
        elif isinstance(m, ChafeeModel):
            b_inf = m.b.declared_limit()
            if b_inf is None:
                raise UnsupportedModel("b declares no limit; no autonomous attractor")
            m_inf = ChafeeModel(m.lam, TimeFnSpec.constant(b_inf), m.grid, m.dt,
                                m.model_id + "-limit")
            fam = SetFamily([0.0], [chafee_attractor_sample(m_inf, 0.0, depth,
                                                            args.bank, seed)])
        else:
            raw = np.geomspace(m.dt, max(depth, m.dt), 41)
            durations = np.concatenate(([0.0], np.unique(np.round(raw / m.dt)) * m.dt))
            fam = SetFamily([0.0], [parabolic_autonomous_attractor(m, durations)["sample"]])
    index = save_family(fam, args.out)
    sizes = [len(s) for s in fam.sections]
    print(f"{len(fam.times)} section(s), {min(sizes)}..{max(sizes)} points each: {index}")
    return 0


def cmd_omega(args) -> int:
    cfg = resolve_config(args)
    m, p = model_from_config(cfg)
    eps = 1e-2 if args.tol is None else args.tol
    seed = 12345 if args.seed is None else args.seed
    if args.kind in ("forward", "amin"):
        if not args.set:
            raise ContractViolation(f"omega --kind {args.kind} needs --set lo:hi:n@t0")
        if args.horizon is None:
            raise ContractViolation(f"omega --kind {args.kind} needs --horizon")
        pairs = [_parse_set(m, s) for s in args.set]
        if args.kind == "forward":
            if len(pairs) != 1:
                raise ContractViolation("omega --kind forward takes exactly one --set")
            (B, t0), = pairs
            res = forward_omega(p, B, t0, args.horizon, args.window, eps,
                                args.n_times, args.budget)
        else:
            res = a_min(p, [B for B, _ in pairs], [t0 for _, t0 in pairs],
                        args.horizon, args.window, eps, args.n_times, args.budget)
    else:
        if not args.times:
            raise ContractViolation(f"omega --kind {args.kind} needs --times")
        times = _parse_times(args.times, getattr(m, "dt", None))
        depth = args.depth if args.depth is not None else (
            25.0 if isinstance(m, (ChafeeModel, ParabolicInclusionModel)) else 40.0
        )
        fam = _family_for(m, times, args.points, depth, args.bank, seed)
        window = args.window
        if window is None:
            window = (times[-1] - times[0]) / 4.0
        fn = omega_limsup if args.kind == "limsup" else omega_liminf
        res = fn(fam, window, eps)
    path = res.to_json(args.out, f"omega-{args.kind}")
    line = f"{res.kind}: {len(res.sample)} point(s), residual {res.residual:.6g}"
    if not res.is_empty and res.sample.dim == 1:
        lo, hi = interval_hull(res.sample)
        line += f", hull [{lo:.6f}, {hi:.6f}]"
    print(line)
    print(path)
    return 0


def _battery_exit(rows) -> int:
    return 0 if all(r["ok"] for r in rows) else 3


def _print_rows(rows):
    for r in rows:
        got = "PASS" if r["passed"] else "FAIL"
        want = "PASS" if r["expected_passed"] else "FAIL"
        flag = "ok" if r["ok"] else "MISMATCH"
        print(f"  {r['check']}: {got} (expected {want}) [{flag}] {r['detail']}")


def cmd_verify(args) -> int:
    if args.no_cache:
        scenarios.set_cache_enabled(False)
    if args.scenario not in scenarios.BATTERIES:
        raise ContractViolation(
            f"unknown scenario {args.scenario!r}; builtin names: "
            + ", ".join(scenarios.SCENARIO_NAMES)
        )
    result = scenarios.run_battery(args.scenario, args.seed)
    needle = args.check.replace("_", "-")
    rows = [r for r in result["rows"] if needle in r["check"]]
    if not rows:
        available = ", ".join(r["check"] for r in result["rows"])
        raise ContractViolation(
            f"no check matching {args.check!r} in {args.scenario}; available: {available}"
        )
    payload = {
        "scenario": args.scenario,
        "check_filter": args.check,
        "seed": result["seed"],
        "rows": rows,
    }
    print(f"{args.scenario}:")
    _print_rows(rows)
    if args.out:
        safe = "".join(c if c.isalnum() or c in "-_" else "-" for c in args.check)
        path = os.path.join(args.out, f"verify-{args.scenario}-{safe}.json")
        _atomic_write(path, _dump_json(payload))
        print(path)
    return _battery_exit(rows)


def cmd_reproduce(args) -> int:
    if args.no_cache:
        scenarios.set_cache_enabled(False)
    ids = list(args.ids)
    if args.all:
        ids = list(scenarios.REPRODUCE_IDS) + [i for i in ids
                                               if i not in scenarios.REPRODUCE_IDS]
    if not ids:
        raise ContractViolation("give one or more example ids, or --all")
    seen = set()
    ids = [i for i in ids if not (i in seen or seen.add(i))]
    for i in ids:
        if i not in scenarios.BATTERIES:
            raise ContractViolation(
                f"unknown example id {i!r}; known ids: "
                + ", ".join(scenarios.REPRODUCE_IDS)
            )

    def run_one(name):
        try:
            return scenarios.run_battery(name, args.seed)
        except Exception as e:  # preserve a partial report on any crash
            return {"scenario": name, "rows": [], "all_ok": False,
                    "seed": args.seed, "error": f"{type(e).__name__}: {e}"}

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_one, ids))
    else:
        results = [run_one(name) for name in ids]

    crashed = False
    for res in results:
        _atomic_write(os.path.join(args.out, f"report-{res['scenario']}.json"),
                      _dump_json(res))
        print(f"{res['scenario']}:")
        if "error" in res:
            crashed = True
            print(f"  CRASH {res['error']}")
        else:
            _print_rows(res["rows"])
    aggregate = {
        "reports": results,
        "all_ok": all(r["all_ok"] for r in results),
        "seed": args.seed,
    }
    _atomic_write(os.path.join(args.out, "report.json"), _dump_json(aggregate))
    print(os.path.join(args.out, "report.json"))
    if crashed:
        return 2
    return 0 if aggregate["all_ok"] else 3


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="attractorlab",
                     description="Pullback/forward attractor laboratory")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add_common(sp, out_default="attractorlab-out"):
        sp.add_argument("target", nargs="?", metavar="SCENARIO",
                        help="builtin scenario name (or use --config)")
        sp.add_argument("--config", help="path to a JSON config (see 'schema')")
        sp.add_argument("--out", default=out_default, help="output directory")

    sp = sub.add_parser("simulate", help="sample trajectories, one CSV per branch")
    add_common(sp)
    sp.add_argument("--t0", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--ic", required=True,
                    help="number | zero | sin:amp[:mode] | v1,v2,... | file")
    sp.add_argument("--budget", type=int, default=9, help="branch cap")
    sp.add_argument("--samples", type=int, default=33, help="grid points per CSV")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("attractor", help="write a sampled attractor family")
    add_common(sp)
    sp.add_argument("--kind", choices=["pullback", "autonomous"], default="pullback")
    sp.add_argument("--times", help="a:b:n or comma list (pullback sections)")
    sp.add_argument("--depth", type=float, default=None,
                    help="pullback depth (default 40 scalar, 25 grid)")
    sp.add_argument("--points", type=int, default=201, help="points per scalar section")
    sp.add_argument("--bank", type=int, default=40, help="initial-condition bank size")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_attractor)

    sp = sub.add_parser("omega", help="forward/limsup/liminf/amin limit sets")
    add_common(sp)
    sp.add_argument("--kind", choices=["forward", "limsup", "liminf", "amin"],
                    required=True)
    sp.add_argument("--set", action="append", default=[],
                    help="lo:hi:n@t0 | value@t0 | zero@t0 | sin:amp[:mode]@t0")
    sp.add_argument("--horizon", type=float, default=None)
    sp.add_argument("--window", type=float, default=None)
    sp.add_argument("--times", help="family grid for limsup/liminf (a:b:n)")
    sp.add_argument("--points", type=int, default=201)
    sp.add_argument("--depth", type=float, default=None)
    sp.add_argument("--bank", type=int, default=40)
    sp.add_argument("--n-times", type=int, default=129, dest="n_times")
    sp.add_argument("--budget", type=int, default=9)
    sp.add_argument("--tol", type=float, default=None,
                    help="merge/recurrence tolerance (default 1e-2)")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_omega)

    sp = sub.add_parser("verify", help="run one named check of a builtin scenario")
    sp.add_argument("scenario", metavar="SCENARIO")
    sp.add_argument("check", metavar="CHECK", nargs="?", default="",
                    help="check id substring (default: all checks)")
    sp.add_argument("--out", default=None, help="also write a JSON report here")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--no-cache", action="store_true", dest="no_cache")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("reproduce", help="run full example batteries")
    sp.add_argument("ids", nargs="*", metavar="ID")
    sp.add_argument("--all", action="store_true", help="run every example id")
    sp.add_argument("--jobs", type=int, default=1, help="concurrent batteries")
    sp.add_argument("--out", default="attractorlab-out")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--no-cache", action="store_true", dest="no_cache")
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("schema", help="print the config schema")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_schema)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) is None:
        parser.error("a subcommand is required")
    try:
        return args.func(args)
    except NumericalFailure as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2
    except (ContractViolation, UnsupportedModel, EmptySetError,
            jsonschema.ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
