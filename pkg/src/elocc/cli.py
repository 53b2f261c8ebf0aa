"""Command-line front end: ``elocc <subcommand> [flags]``.

Exit status is 0 on success, 1 on domain errors (no transition found,
degenerate ground state, ...) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .criticality import (
    classify_pattern,
    critical_region,
    dump_json,
    gs_vs_excited,
    interception_table,
    locate_boundary,
    scaling_fit,
    split_index,
    sweep,
)
from .errors import ConfigError, ELOCCError
from .models import parse_model
from .monotones import (
    DEFAULT_GRID,
    DEFAULT_TRUNC_TOL,
    AlphaGrid,
    elocc_verdict,
    locc_convertible,
    normalize_descending,
    read_schmidt_csv,
    tensor_product,
    verify_catalyst,
)
from .reduction import parse_partition

SUBCOMMANDS = ("sweep", "table", "classify", "locate", "scaling", "check", "excited", "demo-catalyst")


def _common(p, model=True, sweep_range=True):
    if model:
        p.add_argument("--model", help="model spec, e.g. ising:g=0.95 or xy:gamma=0.8660254")
        p.add_argument("--n", type=int, help="number of sites")
        p.add_argument("--cut", default="half", help="half | comb | sites=1,3,5")
    if sweep_range:
        p.add_argument("--param", help="parameter to vary (g, gamma, h, delta)")
        p.add_argument("--from", dest="start", type=float)
        p.add_argument("--to", dest="stop", type=float)
        p.add_argument("--step", type=float)
    p.add_argument("--alpha-min", type=float, default=DEFAULT_GRID.alpha_min)
    p.add_argument("--alpha-max", type=float, default=DEFAULT_GRID.alpha_max)
    p.add_argument("--alpha-points", type=int, default=DEFAULT_GRID.points)
    p.add_argument("--refine-tol", type=float, default=DEFAULT_GRID.refine_tol)
    p.add_argument("--trunc-tol", type=float, default=DEFAULT_TRUNC_TOL)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--round-paper", dest="tenths", action="store_true",
                   help="show crossing alpha rounded up to the next 0.1")
    p.add_argument("--workers", type=int, default=int(os.environ.get("ELOCC_WORKERS", "1")))
    p.add_argument("--no-banner", action="store_true", help="omit the timestamp header")
    p.add_argument("--config", help="key = value file; explicit flags take precedence")


def build_parser():
    parser = argparse.ArgumentParser(prog="elocc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"elocc {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    sub.required = True

    p = sub.add_parser("sweep", help="ground-state Schmidt spectra along a parameter")
    _common(p)
    p.add_argument("--excited", action="store_true", help="also reduce the first excited state")

    p = sub.add_parser("table", help="pairwise interception table of a sweep")
    _common(p)

    p = sub.add_parser("classify", help="match a sweep's table to the case (i)/(ii) patterns")
    _common(p)
    p.add_argument("--split", type=float, required=False, help="first parameter value of the second group")
    p.add_argument("--tolerance", type=float, default=0.10)

    p = sub.add_parser("locate", help="bracket a transition by step decimation")
    _common(p, sweep_range=False)
    p.add_argument("--param")
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--target-step", type=float)

    p = sub.add_parser("scaling", help="fit g_c(N) = a exp(-N/b) + c")
    _common(p, sweep_range=False)
    p.add_argument("--points", help="explicit N:g_c pairs, e.g. 4:0.62,6:0.92,8:0.98")
    p.add_argument("--sizes", help="system sizes to locate, e.g. 4,6,8,10")
    p.add_argument("--param")
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--target-step", type=float, default=1e-4)

    p = sub.add_parser("check", help="convertibility between two Schmidt-spectrum CSV files")
    _common(p, model=False, sweep_range=False)
    p.add_argument("--a", required=False, help="CSV with a 'lambda' column")
    p.add_argument("--b", required=False, help="CSV with a 'lambda' column")

    p = sub.add_parser("excited", help="first excited state vs ground state")
    _common(p, sweep_range=False)
    p.add_argument("--param")
    p.add_argument("--value", type=float)

    p = sub.add_parser("demo-catalyst", help="the textbook catalysis example, end to end")
    _common(p, model=False, sweep_range=False)
    return parser


def _read_config(path):
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError("config", f"{path}:{lineno}: expected key = value")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_FLAG_ALIASES = {"from": "start", "to": "stop"}


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        config = _read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, raw in config.items():
            dest = _FLAG_ALIASES.get(key, key)
            if dest not in known:
                raise ConfigError(key, f"unknown configuration key for '{args.command}'")
            action = known[dest]
            if action.nargs == 0:
                defaults[dest] = raw.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                try:
                    defaults[dest] = action.type(raw)
                except ValueError:
                    raise ConfigError(key, f"cannot convert {raw!r}") from None
            else:
                defaults[dest] = raw
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            flag = {"start": "from", "stop": "to"}.get(name, name).replace("_", "-")
            raise ConfigError(flag, f"--{flag} is required for '{args.command}'")


def _grid(args):
    try:
        return AlphaGrid(args.alpha_min, args.alpha_max, args.alpha_points, args.refine_tol)
    except ValueError as exc:
        raise ConfigError("alpha-grid", str(exc)) from None


def _model_and_cut(args):
    _require(args, "model", "n")
    if args.n < 2:
        raise ConfigError("n", "need at least 2 sites")
    model = parse_model(args.model)
    part = parse_partition(args.cut, args.n)
    return model, part


def _sweep_param(args, model):
    if args.param is None:
        missing = model.missing()
        if len(missing) != 1:
            raise ConfigError("param", f"cannot infer which parameter to vary; pass --param ({model.param_names})")
        args.param = missing[0]
    if args.param not in model.param_names:
        raise ConfigError("param", f"{model.family} has no parameter {args.param!r}")
    rest = [k for k in model.missing() if k != args.param]
    if rest:
        raise ConfigError("model", f"parameter(s) {rest} must be fixed in --model")
    return args.param


def _banner():
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return f"elocc {__version__} {stamp}"


def _records_csv(record):
    keys = list(record)
    vals = []
    for k in keys:
        v = record[k]
        vals.append(json.dumps(v) if isinstance(v, (list, dict)) else ("" if v is None else str(v)))
    return ",".join(keys) + "\n" + ",".join(vals) + "\n"


def _emit(args, csv_text, json_obj):
    if args.format == "json":
        obj = dict(json_obj)
        if not args.no_banner:
            obj["_banner"] = _banner()
        text = dump_json(obj)
    else:
        text = csv_text if args.no_banner else f"# {_banner()}\n{csv_text}"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _run_sweep(args, with_excited=False):
    model, part = _model_and_cut(args)
    param = _sweep_param(args, model)
    _require(args, "start", "stop", "step")
    if args.step <= 0:
        raise ConfigError("step", "must be positive")
    if args.start > args.stop:
        raise ConfigError("from", "must not exceed --to")
    return sweep(model, param, (args.start, args.stop, args.step), args.n, part,
                 with_excited=with_excited, workers=args.workers, trunc_tol=args.trunc_tol)


def cmd_sweep(args):
    result = _run_sweep(args, with_excited=args.excited)
    _emit(args, result.spectra_csv_text(), result.to_json())


def cmd_table(args):
    result = _run_sweep(args)
    table = interception_table(result, _grid(args), workers=args.workers)
    _emit(args, table.to_csv_text(result.param, args.tenths), table.to_json(args.tenths))


def cmd_classify(args):
    result = _run_sweep(args)
    table = interception_table(result, _grid(args), workers=args.workers)
    _require(args, "split")
    split = split_index(table.labels, args.split)
    cls = classify_pattern(table, split, args.tolerance)
    record = {
        "pattern": cls.pattern.value,
        "split": args.split,
        "nonconforming": cls.nonconforming,
        "crossing_fraction": cls.crossing_fraction,
    }
    try:
        region = critical_region(table, cls, split)
        record["region"] = [region[0], region[1]]
    except ELOCCError:
        record["region"] = None
    _emit(args, _records_csv(record), record)


def cmd_locate(args):
    model, part = _model_and_cut(args)
    param = _sweep_param(args, model)
    _require(args, "start", "stop", "target_step")
    bracket = locate_boundary(model, param, (args.start, args.stop), args.n, part,
                              args.target_step, _grid(args), args.trunc_tol)
    record = bracket.to_json()
    csv_text = "lower,upper,step,midpoint\n" + f"{bracket.lower!r},{bracket.upper!r},{bracket.step!r},{bracket.midpoint!r}\n"
    _emit(args, csv_text, record)


def _parse_points(text):
    pts = []
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        n, sep, g = chunk.partition(":")
        if not sep:
            raise ConfigError("points", f"expected N:g_c, got {chunk!r}")
        try:
            pts.append((int(n), float(g)))
        except ValueError:
            raise ConfigError("points", f"bad pair {chunk!r}") from None
    return pts


def cmd_scaling(args):
    if args.points:
        pts = _parse_points(args.points)
    else:
        _require(args, "sizes", "model", "start", "stop")
        model = parse_model(args.model)
        param = _sweep_param(args, model)
        pts = []
        for n in (int(s) for s in args.sizes.split(",") if s.strip()):
            part = parse_partition(args.cut, n)
            b = locate_boundary(model, param, (args.start, args.stop), n, part,
                                args.target_step, _grid(args), args.trunc_tol)
            pts.append((n, b.midpoint))
    fit = scaling_fit(pts)
    record = fit.to_json()
    record["points"] = [[n, g] for n, g in pts]
    csv_text = "a,b,c,rms_residual,degenerate\n" + f"{fit.a!r},{fit.b!r},{fit.c!r},{fit.residual!r},{fit.degenerate}\n"
    _emit(args, csv_text, record)


def _verdict_record(p, q, grid):
    v = elocc_verdict(p, q, grid)
    return {
        "direction": v.direction.value,
        "crossings": list(v.crossings),
        "locc_a_to_b": locc_convertible(p, q),
        "locc_b_to_a": locc_convertible(q, p),
    }


def cmd_check(args):
    _require(args, "a", "b")
    p = read_schmidt_csv(args.a, args.trunc_tol)
    q = read_schmidt_csv(args.b, args.trunc_tol)
    record = _verdict_record(p, q, _grid(args))
    _emit(args, _records_csv(record), record)


def cmd_excited(args):
    model, part = _model_and_cut(args)
    if args.param is not None or args.value is not None:
        _require(args, "param", "value")
    v = gs_vs_excited(model, args.param, args.value, args.n, part, _grid(args), args.trunc_tol)
    record = {"direction": v.direction.value, "crossings": list(v.crossings),
              "excited_to_ground": v.direction.value in ("AtoB", "Equivalent")}
    _emit(args, _records_csv(record), record)


def demo_catalyst_lines(grid=DEFAULT_GRID):
    p = normalize_descending([0.4, 0.4, 0.1, 0.1])
    q = normalize_descending([0.5, 0.25, 0.25, 0.0])
    c = normalize_descending([0.6, 0.4])
    fwd, back = locc_convertible(p, q), locc_convertible(q, p)
    lam, lam_q = tensor_product(p, c), tensor_product(q, c)
    verdict = elocc_verdict(p, q, grid)
    ok = verify_catalyst(p, q, c)
    fmt = lambda v: "(" + ", ".join(f"{x:.2f}" for x in v.coeffs) + ")"
    return [
        f"psi   = {fmt(p)}",
        f"psi'  = {fmt(q)}",
        f"LOCC: {'incomparable' if not (fwd or back) else 'comparable'} (psi->psi': {fwd}, psi'->psi: {back})",
        "Renyi curves: " + (
            "cross at alpha = " + ", ".join(f"{a:.3f}" for a in verdict.crossings)
            if verdict.crossings else f"no crossing, verdict {verdict.direction.value}"),
        f"Lambda  = {fmt(lam)}",
        f"Lambda' = {fmt(lam_q)}",
        f"with catalyst {fmt(c)}: {'convertible' if ok else 'not convertible'}",
    ]


def cmd_demo_catalyst(args):
    lines = demo_catalyst_lines(_grid(args))
    if args.format == "json":
        _emit(args, "", {"lines": lines})
    else:
        _emit(args, "\n".join(lines) + "\n", {})


_COMMANDS = {
    "sweep": cmd_sweep,
    "table": cmd_table,
    "classify": cmd_classify,
    "locate": cmd_locate,
    "scaling": cmd_scaling,
    "check": cmd_check,
    "excited": cmd_excited,
    "demo-catalyst": cmd_demo_catalyst,
}


def run_command(argv=None):
    """Run one subcommand and return its exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    except ConfigError as exc:
        print(f"elocc: usage error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "workers", 1) < 1:
        print("elocc: usage error: workers: must be >= 1", file=sys.stderr)
        return 2
    try:
        _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"elocc: usage error: {exc}", file=sys.stderr)
        return 2
    except (ELOCCError, OSError, ValueError) as exc:
        print(f"elocc: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
