"""Command-line front end: ``fasevt <command> [flags]``.

Exit codes: 0 success, 1 compute failure, 2 usage error. Every file output
is accompanied by ``<out>.manifest.json`` recording the resolved flags.
"""

import argparse
import datetime
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from .chansim import mc_capacity, mc_outage, parse_csv, run_monte_carlo
from .correlation import DEFAULT_RAYLEIGH_SCALE, SystemConfig
from .errors import ConvergenceError, FasEvtError, SurrogateRangeError
from .evd import UNBOUNDED, params_from_dict, params_to_json
from .fit import fit_gev_mle, fit_gumbel_mle
from .perf import (
    abs_error,
    closed_form_perf,
    ec_gev,
    ec_gumbel,
    log_error,
    op_gev,
    op_gumbel,
    qq_points,
)
from .surrogate import export_coefficients, params_surrogate

PERF_HEADER = "snr_db,outage,capacity_nats,source,capacity_unbounded"
COMPARE_HEADER = (
    "snr_db,mc_op,gumbel_op,gev_op,"
    "gumbel_op_logerr,gumbel_op_floored,gev_op_logerr,gev_op_floored,"
    "mc_ec,gumbel_ec,gev_ec,gumbel_ec_abserr,gev_ec_abserr,gev_ec_unbounded"
)
QQ_HEADER = "probability,empirical,theoretical"


class UsageError(Exception):
    pass


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def parse_snr_range(text):
    """``"A:B:STEP"`` -> inclusive dB grid."""
    try:
        a, b, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--snr-db-range must be A:B:STEP, got {text!r}") from None
    if not (step > 0 and b >= a and all(map(math.isfinite, (a, b, step)))):
        raise UsageError(f"--snr-db-range needs finite A <= B and STEP > 0, got {text!r}")
    n = int(round((b - a) / step)) + 1
    return [a + i * step for i in range(n)]


def fmt(v):
    if v is None:
        return ""
    if v is UNBOUNDED:
        return "inf"
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return "%.17g" % v


def write_rows(path, header, rows):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_manifest(args, outputs):
    params = {k: v for k, v in vars(args).items() if k not in ("func", "config")}
    manifest = {
        "command": args.command,
        "parameters": params,
        "seed": params.get("seed"),
        "version": __version__,
        "outputs": list(outputs),
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(outputs[0] + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"{args.command}: missing required {flags}")


def _config(args):
    if args.ports < 2:
        raise UsageError("--ports must be >= 2")
    try:
        return SystemConfig(
            n_ports=args.ports,
            aperture_w=args.aperture,
            rayleigh_scale=getattr(args, "rayleigh_scale", DEFAULT_RAYLEIGH_SCALE),
        )
    except FasEvtError as exc:
        raise UsageError(str(exc)) from None


def _load_samples(path):
    try:
        with open(path) as fh:
            return parse_csv(fh.read())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read SampleSet {path!r}: {exc}") from None


def _load_params(path, dist):
    try:
        with open(path) as fh:
            d = json.load(fh)
        # accept a bare params record or a FitReport
        p = params_from_dict(d["params"] if "params" in d else d)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read parameters {path!r}: {exc}") from None
    if p.family != dist:
        raise UsageError(f"--dist {dist} but {path!r} holds {p.family} parameters")
    return p


def _param_source(args, n_ports=None, aperture_w=None):
    if (args.params is None) == (not args.surrogate):
        raise UsageError("give exactly one of --params PATH or --surrogate")
    if args.params is not None:
        return _load_params(args.params, args.dist)
    n = args.ports if args.ports is not None else n_ports
    w = args.aperture if args.aperture is not None else aperture_w
    if n is None or w is None:
        raise UsageError("--surrogate needs --ports and --aperture")
    return params_surrogate(args.dist, n, w, force=args.force_surrogate)


# ------------------------------------------------------------------ commands


def cmd_simulate(args):
    _require(args, "ports", "aperture", "seed", "out")
    cfg = _config(args)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    s = run_monte_carlo(cfg, args.samples, args.seed)
    s.to_csv(args.out)
    write_manifest(args, [args.out])


def cmd_fit(args):
    _require(args, "input", "out")
    s = _load_samples(args.input)
    fitter = fit_gumbel_mle if args.dist == "gumbel" else fit_gev_mle
    try:
        report = fitter(s)
    except ConvergenceError as exc:
        if exc.report is not None:
            with open(args.out, "w") as fh:
                fh.write(exc.report.to_json() + "\n")
            write_manifest(args, [args.out])
        raise
    with open(args.out, "w") as fh:
        fh.write(report.to_json() + "\n")
    write_manifest(args, [args.out])


def cmd_surrogate(args):
    _require(args, "ports", "aperture")
    if args.ports < 2:
        raise UsageError("--ports must be >= 2")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        p = params_surrogate(args.dist, args.ports, args.aperture, force=args.force_surrogate)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(params_to_json(p))


def cmd_eval(args):
    _require(args, "snr_db_range", "out")
    grid = parse_snr_range(args.snr_db_range)
    p = _param_source(args)
    gamma_th = db_to_linear(args.threshold_db)
    rows = []
    for snr_db in grid:
        pt = closed_form_perf(p, gamma_th, db_to_linear(snr_db))
        outage = pt.outage if args.metric in ("op", "both") else None
        cap = pt.capacity if args.metric in ("ec", "both") else None
        rows.append((snr_db, outage, cap, pt.source, cap is UNBOUNDED))
    write_rows(args.out, PERF_HEADER, rows)
    write_manifest(args, [args.out])


def compare_rows(samples, gumbel, gev, gamma_th_db, grid):
    floor = 1.0 / samples.n_samples
    gamma_th = db_to_linear(gamma_th_db)
    rows = []
    for snr_db in grid:
        g = db_to_linear(snr_db)
        mc_op = mc_outage(samples, math.sqrt(gamma_th / g))
        op_g, op_v = op_gumbel(gumbel, gamma_th, g), op_gev(gev, gamma_th, g)
        le_g, le_v = log_error(mc_op, op_g, floor), log_error(mc_op, op_v, floor)
        mc_ec = mc_capacity(samples, g)
        ec_g, ec_v = ec_gumbel(gumbel, g), ec_gev(gev, g)
        rows.append((
            snr_db, mc_op, op_g, op_v,
            le_g.value, le_g.floored, le_v.value, le_v.floored,
            mc_ec, ec_g, ec_v, abs_error(mc_ec, ec_g), abs_error(mc_ec, ec_v),
            ec_v is UNBOUNDED,
        ))
    return rows


def cmd_compare(args):
    _require(args, "ports", "aperture", "snr_db_range", "seed", "out")
    cfg = _config(args)
    grid = parse_snr_range(args.snr_db_range)
    gumbel = params_surrogate("gumbel", cfg.n_ports, cfg.aperture_w, force=args.force_surrogate)
    gev = params_surrogate("gev", cfg.n_ports, cfg.aperture_w, force=args.force_surrogate)
    samples = run_monte_carlo(cfg, args.samples, args.seed)
    write_rows(args.out, COMPARE_HEADER, compare_rows(samples, gumbel, gev, args.threshold_db, grid))
    write_manifest(args, [args.out])


def cmd_qq(args):
    _require(args, "input", "out")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    s = _load_samples(args.input)
    p = _param_source(args, s.meta.get("n_ports"), s.meta.get("aperture_w"))
    pairs = qq_points(s, p, args.points)
    probs = (np.arange(1, args.points + 1) - 0.5) / args.points
    write_rows(args.out, QQ_HEADER, [(q, e, t) for q, (e, t) in zip(probs, pairs)])
    write_manifest(args, [args.out])


def cmd_coefficients(args):
    _require(args, "out")
    export_coefficients(args.out)


# -------------------------------------------------------------------- parser


def build_parser():
    parser = argparse.ArgumentParser(prog="fasevt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    parser.commands = {}

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        parser.commands[name] = p
        p.add_argument("--config", help="JSON file of flag defaults")
        p.set_defaults(func=func)
        return p

    def geometry(p):
        p.add_argument("--ports", type=int)
        p.add_argument("--aperture", type=float)

    def params(p):
        p.add_argument("--dist", choices=("gumbel", "gev"), required=True)
        p.add_argument("--params")
        p.add_argument("--surrogate", action="store_true")
        p.add_argument("--force-surrogate", action="store_true")

    p = add("simulate", cmd_simulate, "Monte Carlo samples of |h_FAS|")
    geometry(p)
    p.add_argument("--rayleigh-scale", type=float, default=DEFAULT_RAYLEIGH_SCALE)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")

    p = add("fit", cmd_fit, "ML fit of a Gumbel or GEV distribution")
    p.add_argument("--dist", choices=("gumbel", "gev"), required=True)
    p.add_argument("--input")
    p.add_argument("--out")

    p = add("surrogate", cmd_surrogate, "surrogate EVD parameters for (N, W)")
    p.add_argument("--dist", choices=("gumbel", "gev"), required=True)
    geometry(p)
    p.add_argument("--force-surrogate", action="store_true")

    p = add("eval", cmd_eval, "closed-form OP/EC over an SNR sweep")
    params(p)
    geometry(p)
    p.add_argument("--metric", choices=("op", "ec", "both"), default="both")
    p.add_argument("--threshold-db", type=float, default=10.0)
    p.add_argument("--snr-db-range")
    p.add_argument("--out")

    p = add("compare", cmd_compare, "surrogate closed forms against Monte Carlo")
    geometry(p)
    p.add_argument("--threshold-db", type=float, default=10.0)
    p.add_argument("--snr-db-range")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--force-surrogate", action="store_true")
    p.add_argument("--out")

    p = add("qq", cmd_qq, "Q-Q pairs of samples against a fitted model")
    p.add_argument("--input")
    params(p)
    p.add_argument("--ports", type=int, help=argparse.SUPPRESS)
    p.add_argument("--aperture", type=float, help=argparse.SUPPRESS)
    p.add_argument("--points", type=int, default=99)
    p.add_argument("--out")

    p = add("coefficients", cmd_coefficients, "export the surrogate coefficient table")
    p.add_argument("--out")
    return parser


def _apply_config(parser, argv):
    """Re-parse with defaults from ``--config``; explicit flags still win."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config) as fh:
            defaults = json.load(fh)
    except (OSError, ValueError) as exc:
        parser.error(f"cannot read --config {args.config!r}: {exc}")
    if not isinstance(defaults, dict):
        parser.error("--config must hold a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in defaults.items()}
    parser.commands[args.command].set_defaults(**defaults)
    return parser.parse_args(argv)


def _glue_ranges(argv):
    """Attach range values to their flag so ``-10:30:1`` is not read as an option."""
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--snr-db-range":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = _glue_ranges(sys.argv[1:] if argv is None else list(argv))
    args = _apply_config(parser, argv)
    try:
        args.func(args)
    except (UsageError, SurrogateRangeError) as exc:
        parser.exit(2, f"fasevt {args.command}: error: {exc}\n")
    except (FasEvtError, ArithmeticError) as exc:
        print(f"fasevt {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
