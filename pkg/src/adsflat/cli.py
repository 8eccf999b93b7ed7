"""Command-line front end.

Commands
--------
selftest                 algebra and Hopf identity suites
lift --front F           asymptotic lift of one front; curve CSV + report
surface --front1 F1 --front2 F2 [--grid min:max:step ...]
                         flat surface on a grid; CSV, OBJ and report
torus --front1 F1 --front2 F2
                         flat torus from two closed fronts
scenario --name NAME     named gallery construction
export --config C        run a surface config and write every artifact

Curve specification files are JSON objects with a ``kind`` field:

``{"kind": "constant-curvature", "k": 3}``  (or ``"omega"``; optional ``"span": [a, b]``, ``"closed"``)
``{"kind": "angle-samples", "s0": -2.1, "step": 0.001, "omega": [...]}``  (optional ``"period"`` for closed fronts)
``{"kind": "parallel-of", "base": {...}, "d": 0.5}``
``{"kind": "preset", "name": "circle-k3"}``  (see ``PRESETS``)

Run configs (``--config``) are JSON objects with ``"schema": "adsflat.run/1"``
and any of the keys ``front``, ``front1``, ``front2``, ``grid``, ``tol``,
``out``, ``format``, ``projection``, ``name``, ``params``.  Command-line flags
override config values.  Front specs inside a config may be inline objects or
paths relative to the config file.

Exit status: 0 if every check passes, 1 if some check fails or the inputs
are mathematically inadmissible (a report is still written), 2 on malformed
input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import export as ex
from .checks import Check
from .cliffalg import algebra_suite
from .fronts import (
    AngleSamples,
    BranchError,
    InadmissiblePairError,
    arccot,
    check_admissible,
    constant_curvature_front,
    make_front_from_curvature,
    parallel_front,
    prepare_front,
)
from .gallery import SCENARIOS, run_scenario, torus_from_fronts
from .hopf import hopf_suite
from .lift import asymptotic_lift, verify_lift
from .surface import NonImmersionError, completeness_check, round_trip, synthesize, verify_patch

CONFIG_SCHEMA = "adsflat.run/1"
FORMATS = ("csv", "obj", "report")


class ConfigError(ValueError):
    """Malformed input; maps to exit status 2."""


def _sinusoid(s):
    return 1.0 + 0.3 * np.sin(s)


PRESETS = {
    "circle-k2": lambda span: constant_curvature_front(k=2.0, label="circle-k2"),
    "circle-k3": lambda span: constant_curvature_front(k=3.0, label="circle-k3"),
    "circle-k1.4": lambda span: constant_curvature_front(k=1.4, label="circle-k1.4"),
    "geodesic": lambda span: make_front_from_curvature(np.pi / 2, span=span, label="geodesic"),
    "horocycle": lambda span: make_front_from_curvature(np.pi / 4, span=span, label="horocycle"),
    "sinusoid": lambda span: make_front_from_curvature(_sinusoid, span=span, label="sinusoid"),
    "sinusoid-b": lambda span: make_front_from_curvature(
        lambda s: 2.0 + 0.3 * np.sin(1.3 * s), span=span, label="sinusoid-b"),
    "q4-band1": lambda span: make_front_from_curvature(
        lambda s: arccot(2.75 + 0.25 * np.sin(s)), span=span, label="q4-band1"),
    "q4-band2": lambda span: make_front_from_curvature(
        lambda s: arccot(1.35 + 0.15 * np.sin(s)), span=span, label="q4-band2"),
}


# ---------------------------------------------------------------- parsing


def _num(spec, key, field, positive=False):
    try:
        x = float(spec[key])
    except KeyError:
        raise ConfigError(f"{field}: missing field {key!r}") from None
    except (TypeError, ValueError):
        raise ConfigError(f"{field}.{key}: expected a number, got {spec[key]!r}") from None
    if not np.isfinite(x) or (positive and x <= 0):
        raise ConfigError(f"{field}.{key}: expected a {'positive ' if positive else ''}finite number, got {x}")
    return x


def _span(spec, field, default):
    if "span" not in spec:
        return default
    sp = spec["span"]
    if not (isinstance(sp, list) and len(sp) == 2):
        raise ConfigError(f"{field}.span: expected [a, b]")
    a, b = float(sp[0]), float(sp[1])
    if not a <= 0 <= b or a == b:
        raise ConfigError(f"{field}.span: must contain 0 and be non-degenerate, got [{a}, {b}]")
    return (a, b)


def load_json(path, field):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ConfigError(f"{field}: cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{field}: {path} is not valid JSON ({e.msg} at line {e.lineno})") from None


def resolve_spec(spec, field, base_dir=None):
    if isinstance(spec, (str, Path)):
        p = Path(spec)
        if base_dir is not None and not p.is_absolute():
            p = Path(base_dir) / p
        return load_json(p, field), p.parent
    if isinstance(spec, dict):
        return spec, base_dir
    raise ConfigError(f"{field}: expected a path or a JSON object")


def front_from_spec(spec, field="front", default_span=(-2.1, 2.1), base_dir=None):
    """Build a FrontCurve from a curve specification (dict or path)."""
    spec, base_dir = resolve_spec(spec, field, base_dir)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"{field}: curve spec needs a 'kind' field")
    kind = spec["kind"]
    span = _span(spec, field, default_span)
    try:
        if kind == "constant-curvature":
            if "k" in spec:
                w = float(arccot(_num(spec, "k", field)))
            elif "omega" in spec:
                w = _num(spec, "omega", field)
                if not 0 < w < np.pi:
                    raise ConfigError(f"{field}.omega: must lie in (0, pi), got {w}")
            else:
                raise ConfigError(f"{field}: constant-curvature needs 'k' or 'omega'")
            closed = spec.get("closed")
            if closed is None and "span" in spec:
                closed = False
            if closed:
                return constant_curvature_front(omega=w, closed=True, label=spec.get("label", ""))
            if closed is False:
                return constant_curvature_front(omega=w, span=span, closed=False, label=spec.get("label", ""))
            # circles close by default, other constant-curvature fronts use the grid span
            if np.cos(2 * w) > 0:
                return constant_curvature_front(omega=w, closed=True, label=spec.get("label", ""))
            return constant_curvature_front(omega=w, span=span, closed=False, label=spec.get("label", ""))
        if kind == "angle-samples":
            om = np.asarray(spec.get("omega"), dtype=float)
            if om.ndim != 1 or len(om) < 4 or not np.all(np.isfinite(om)):
                raise ConfigError(f"{field}.omega: expected a list of at least 4 finite numbers")
            step = _num(spec, "step", field, positive=True)
            s0 = _num(spec, "s0", field) if "s0" in spec else 0.0
            samples = AngleSamples(s0, step, om)
            s_end = s0 + step * (len(om) - 1)
            if "period" in spec:
                L = _num(spec, "period", field, positive=True)
                if abs(s0) > 1e-12 or abs(s_end - L) > 1e-9 * max(1, L):
                    raise ConfigError(f"{field}: closed angle samples must span [0, period]")
                return make_front_from_curvature(samples, L=L, closed=True, label=spec.get("label", ""))
            if not s0 <= 0 <= s_end:
                raise ConfigError(f"{field}: angle samples must cover 0")
            lo, hi = max(span[0], s0), min(span[1], s_end)
            return make_front_from_curvature(samples, span=(lo, hi), label=spec.get("label", ""))
        if kind == "parallel-of":
            if "base" not in spec:
                raise ConfigError(f"{field}: parallel-of needs 'base'")
            base = front_from_spec(spec["base"], f"{field}.base", default_span, base_dir)
            return parallel_front(base, _num(spec, "d", field))
        if kind == "preset":
            name = spec.get("name")
            if name not in PRESETS:
                raise ConfigError(f"{field}.name: unknown preset {name!r}; choose from {sorted(PRESETS)}")
            return PRESETS[name](span)
    except ConfigError:
        raise
    except (ValueError, BranchError) as e:
        raise ConfigError(f"{field}: {e}") from None
    raise ConfigError(f"{field}.kind: unknown kind {kind!r}")


def parse_axis(text, field="grid"):
    try:
        lo, hi, step = (float(x) for x in str(text).split(":"))
    except ValueError:
        raise ConfigError(f"{field}: expected min:max:step, got {text!r}") from None
    if not (np.isfinite(lo) and np.isfinite(hi) and np.isfinite(step)):
        raise ConfigError(f"{field}: values must be finite")
    if step <= 0:
        raise ConfigError(f"{field}: step must be positive, got {step}")
    if hi <= lo:
        raise ConfigError(f"{field}: range is degenerate ({lo} >= {hi})")
    n = (hi - lo) / step
    m = int(round(n))
    if abs(n - m) > 1e-9 * max(1.0, n):
        raise ConfigError(f"{field}: step {step} does not divide [{lo}, {hi}]")
    return np.linspace(lo, hi, m + 1)


def parse_grid(items):
    """One item applies to both axes, two items are the u and v axes."""
    if items is None or len(items) == 0:
        return None
    if isinstance(items, str):
        items = [items]
    if len(items) > 2:
        raise ConfigError("grid: give at most two axes")
    axes = [parse_axis(t, f"grid[{i}]") for i, t in enumerate(items)]
    return (axes[0], axes[-1])


def parse_tol(items):
    out = {}
    if isinstance(items, dict):
        items = [f"{k}={v}" for k, v in items.items()]
    for it in items or []:
        if "=" not in it:
            raise ConfigError(f"tol: expected name=value, got {it!r}")
        k, v = it.split("=", 1)
        try:
            x = float(v)
        except ValueError:
            raise ConfigError(f"tol.{k}: not a number: {v!r}") from None
        if not x > 0 or not np.isfinite(x):
            raise ConfigError(f"tol.{k}: tolerance must be positive, got {x}")
        out[k.strip()] = x
    return out


def apply_tol(checks, overrides):
    known = {c.invariant for c in checks}
    bad = sorted(set(overrides) - known)
    if bad:
        raise ConfigError(f"tol: unknown invariant(s) {bad}; known: {sorted(known)}")
    return [Check(c.invariant, c.max_residual, overrides[c.invariant]) if c.invariant in overrides else c
            for c in checks]


# ---------------------------------------------------------------- commands


def _grid_span(grid, pad=0.1):
    if grid is None:
        return (-2.0 - pad, 2.0 + pad)
    lo = min(grid[0][0], grid[1][0], 0.0)
    hi = max(grid[0][-1], grid[1][-1], 0.0)
    return (lo - pad, hi + pad)


def _write_patch(patch, out, stem, formats, projection):
    written = []
    if "csv" in formats:
        written.append(ex.write_grid_csv(patch, out / f"{stem}.csv"))
    if "obj" in formats:
        written.append(ex.write_obj(patch, out / f"{stem}.obj", projection=projection, name=stem))
    return written


def _finish(args, command, checks, details, stem):
    checks = apply_tol(checks, args.tol)
    ok = all(c.passed for c in checks)
    if "report" in args.format:
        ex.write_report(args.out / f"{stem}_report.json", command, checks, details)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.invariant:32s} {c.max_residual:.3e} <= {c.tolerance:.1e}")
    print(f"{command}: {'all checks pass' if ok else 'some checks FAILED'}")
    return 0 if ok else 1


def _failure(args, command, stem, err):
    chk = [Check("admissible_input", 1.0, 0.0)]
    details = {"error": str(err)}
    if "report" in args.format:
        ex.write_report(args.out / f"{stem}_report.json", command, chk, details)
    print(f"{command}: {err}", file=sys.stderr)
    return 1


def cmd_selftest(args):
    checks = algebra_suite() + hopf_suite()
    return _finish(args, "selftest", checks, {}, "selftest")


def cmd_lift(args):
    if args.front is None:
        raise ConfigError("lift: --front is required")
    g = prepare_front(front_from_spec(args.front, "front", base_dir=args.base_dir))
    c = asymptotic_lift(g)
    checks = verify_lift(c, g)
    if c.closure is not None:
        checks.append(Check("closure", c.closure.residual, 1e-6))
    if "csv" in args.format:
        ex.write_curve_csv(c, args.out / "lift.csv")
    details = {"n": len(c.u), "u_range": [c.u[0], c.u[-1]], "period": c.period,
               "epsilon": None if c.closure is None else c.closure.epsilon}
    return _finish(args, "lift", checks, details, "lift")


def _fronts(args, span):
    if args.front1 is None or args.front2 is None:
        raise ConfigError(f"{args.command}: --front1 and --front2 are required")
    g1 = front_from_spec(args.front1, "front1", span, args.base_dir)
    g2 = front_from_spec(args.front2, "front2", span, args.base_dir)
    return g1, g2


def cmd_surface(args, command="surface"):
    grid = args.grid
    if grid is not None and not all(ax[0] <= 0 <= ax[-1] for ax in grid):
        raise ConfigError("grid: each axis must contain 0 (the base point)")
    g1, g2 = _fronts(args, _grid_span(grid))
    try:
        adm = check_admissible(g1, g2)
        a1 = asymptotic_lift(prepare_front(adm.gamma1))
        a2 = asymptotic_lift(prepare_front(adm.gamma2))
        u, v = grid if grid is not None else (None, None)
        patch = synthesize(a1, a2, u, v, label=command)
    except (InadmissiblePairError, NonImmersionError) as e:
        return _failure(args, command, command, e)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    checks = verify_patch(patch)
    _, dev = round_trip(patch)
    checks.append(Check("round_trip", dev, 1e-8))
    cert = completeness_check(patch.omega1, patch.omega2, patch.u, patch.v)
    _write_patch(patch, args.out, command, args.format, args.projection)
    if command == "export":
        ex.write_curve_csv(patch.a1, args.out / f"{command}_a1.csv")
        ex.write_curve_csv(patch.a2, args.out / f"{command}_a2.csv")
        if "obj" in args.format and args.projection != "hopf":
            ex.write_obj(patch, args.out / f"{command}_hopf.obj", projection="hopf", name=command)
    details = {"grid_shape": [len(patch.u), len(patch.v)], "swapped": adm.swapped,
               "admissible_kind": adm.kind, "admissible_margin": adm.margin, "min_sin": patch.min_sin,
               "completeness": cert.verdict.value, "omega_range": [cert.c1, cert.c2]}
    return _finish(args, command, checks, details, command)


def cmd_torus(args):
    g1, g2 = _fronts(args, (-2.1, 2.1))
    try:
        res = torus_from_fronts(g1, g2)
    except (InadmissiblePairError, NonImmersionError) as e:
        return _failure(args, "torus", "torus", e)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    _write_patch(res.patch, args.out, "torus", args.format, args.projection)
    return _finish(args, "torus", res.checks, res.details, "torus")


SCENARIO_PARAMS = {"dn-q2": ("T", "c0")}


def cmd_scenario(args):
    if args.name is None:
        raise ConfigError("scenario: --name is required")
    if args.name not in SCENARIOS:
        raise ConfigError(f"name: unknown scenario {args.name!r}; choose from {sorted(SCENARIOS)}")
    params = dict(args.params)
    for key in ("T", "c0"):
        val = getattr(args, key)
        if val is not None:
            if key not in SCENARIO_PARAMS.get(args.name, ()):
                raise ConfigError(f"--{key} does not apply to scenario {args.name}")
            params[key] = val
    if "c0" in params and not 0 < params["c0"] < 1:
        raise ConfigError(f"c0: must lie in (0, 1), got {params['c0']}")
    if "T" in params and not params["T"] > 10:
        raise ConfigError(f"T: must exceed 10, got {params['T']}")
    try:
        res = run_scenario(args.name, **params)
    except TypeError as e:
        raise ConfigError(f"params: {e}") from None
    stem = args.name
    if res.patch is not None:
        _write_patch(res.patch, args.out, stem, args.format, args.projection)
    return _finish(args, f"scenario {args.name}", res.checks, res.details, stem)


def cmd_export(args):
    return cmd_surface(args, command="export")


COMMANDS = {
    "selftest": cmd_selftest,
    "lift": cmd_lift,
    "surface": cmd_surface,
    "torus": cmd_torus,
    "scenario": cmd_scenario,
    "export": cmd_export,
}


# ---------------------------------------------------------------- entry point


def build_parser():
    p = argparse.ArgumentParser(prog="adsflat", description="Flat Lorentzian surfaces in anti-de Sitter 3-space.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON run config (schema adsflat.run/1)")
        sp.add_argument("--out", help="output directory (default: current directory)")
        sp.add_argument("--format", action="append", choices=FORMATS,
                        help="artifact to write; repeat for several (default: all)")
        sp.add_argument("--tol", action="append", default=None, metavar="NAME=VALUE",
                        help="override the tolerance of one check")
        sp.add_argument("--projection", choices=("drop-x1", "hopf"), default=None,
                        help="OBJ projection (default drop-x1)")
        if name == "lift":
            sp.add_argument("--front", help="curve spec JSON")
        if name in ("surface", "torus", "export"):
            sp.add_argument("--front1", help="curve spec JSON for the first front")
            sp.add_argument("--front2", help="curve spec JSON for the second front")
        if name in ("surface", "export"):
            sp.add_argument("--grid", action="append", metavar="MIN:MAX:STEP",
                            help="grid axis; once for both axes or twice for u then v")
        if name == "scenario":
            sp.add_argument("--name", help=f"one of {', '.join(sorted(SCENARIOS))}")
            sp.add_argument("--T", type=float, default=None, help="dn-q2 probe radius")
            sp.add_argument("--c0", type=float, default=None, help="dn-q2 profile constant in (0, 1)")
    return p


def resolve_config(args):
    """Merge a JSON config under the command-line flags."""
    cfg, base_dir = {}, None
    if args.config:
        cfg = load_json(args.config, "config")
        if not isinstance(cfg, dict):
            raise ConfigError("config: expected a JSON object")
        if cfg.get("schema") != CONFIG_SCHEMA:
            raise ConfigError(f"config.schema: expected {CONFIG_SCHEMA!r}, got {cfg.get('schema')!r}")
        if "command" in cfg and cfg["command"] != args.command:
            raise ConfigError(f"config.command: {cfg['command']!r} does not match {args.command!r}")
        base_dir = Path(args.config).parent
    args.base_dir = base_dir if base_dir is not None else Path.cwd()

    def pick(name, default=None):
        v = getattr(args, name, None)
        return v if v is not None else cfg.get(name, default)

    for key in ("front", "front1", "front2", "name"):
        if hasattr(args, key) or key in cfg:
            setattr(args, key, pick(key))
    fmt = pick("format", list(FORMATS))
    fmt = [fmt] if isinstance(fmt, str) else list(fmt)
    bad = [f for f in fmt if f not in FORMATS]
    if bad:
        raise ConfigError(f"format: unknown format(s) {bad}")
    args.format = fmt
    args.projection = pick("projection", "drop-x1")
    if args.projection not in ("drop-x1", "hopf"):
        raise ConfigError(f"projection: unknown projection {args.projection!r}")
    args.out = Path(pick("out", "."))
    tol = parse_tol(cfg.get("tol", {}))
    tol.update(parse_tol(args.tol))
    args.tol = tol
    g = getattr(args, "grid", None)
    args.grid = parse_grid(g if g is not None else cfg.get("grid"))
    params = cfg.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("config.params: expected an object")
    args.params = params
    if args.command == "scenario":
        for key in ("T", "c0"):
            if getattr(args, key) is None and key in cfg:
                setattr(args, key, float(cfg[key]))
    return args


def _glue_negative_values(argv):
    """argparse reads ``--grid -2:2:0.02`` as two options; glue it into ``--grid=-2:2:0.02``."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--grid", "--tol") and i + 1 < len(argv) and argv[i + 1].startswith("-") and ":" in argv[i + 1] + "=":
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        args = resolve_config(args)
        args.out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"adsflat {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
