"""Command-line front end: ``zerocross <group> <action> [flags]``.

Each action calls one library function per grid point and prints a table
as CSV (default) or JSON.  Exit status: 0 on success, 1 when a self-test
check fails, 2 on argument or domain errors, 3 when a numerical budget
runs out (the module that gave up is named on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Callable

import numpy as np

from . import iterated, jointlaw, lastzero, mcoracle, reflmax, selftest
from .errors import BudgetExhausted, DomainError
from .lastzero import DriftClock
from .quad import TIGHT_BUDGET, QuadratureBudget

GRID_FLAGS = ("a", "b", "x", "w", "beta", "gamma")


class CliError(Exception):
    """Bad flag combination; reported with exit status 2."""


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return str(v)
    return v


def render(command: str, params: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        doc = {"command": command,
               "params": {k: _json_value(v) for k, v in params.items()},
               "rows": [{k: _json_value(v) for k, v in r.items()} for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    columns = list(rows[0].keys()) if rows else []
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def parse_grid(text: str) -> list[float]:
    """``lo:hi:n`` -> n evenly spaced points, both ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"grid must look like lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise CliError(f"grid must look like lo:hi:n, got {text!r}") from None
    if n < 1:
        raise CliError("grid needs n >= 1")
    if n == 1:
        return [lo]
    return [float(v) for v in np.linspace(lo, hi, n)]


def _points(args, name: str, default: float | None = None) -> list[float]:
    grid = getattr(args, f"{name}_grid", None)
    value = getattr(args, name, None)
    if grid is not None and value is not None:
        raise CliError(f"give either --{name} or --{name}-grid, not both")
    if grid is not None:
        return parse_grid(grid)
    if value is not None:
        return [value]
    if default is not None:
        return [default]
    raise CliError(f"--{name} (or --{name}-grid) is required")


def _need(args, name: str):
    v = getattr(args, name)
    if v is None:
        raise CliError(f"--{name.replace('_', '-')} is required")
    return v


def _budget(args) -> QuadratureBudget:
    if args.tol is None:
        return TIGHT_BUDGET
    return QuadratureBudget(abs_tol=args.tol, rel_tol=args.tol, max_depth=TIGHT_BUDGET.max_depth)


def _clock(args) -> DriftClock:
    return DriftClock(args.mu, _need(args, "t"))


# --- analytic groups ----------------------------------------------------------

def _cmd_lastzero(args):
    budget = _budget(args)
    act = args.action
    if act == "limit":
        return [{"a": a, "value": lastzero.last_zero_cdf_infinite_horizon(args.mu, a)}
                for a in _points(args, "a")]
    clock = _clock(args)
    if act == "cdf":
        return [{"a": a, "value": lastzero.last_zero_cdf(clock, a, form=args.form or "integral-y",
                                                        budget=budget)} for a in _points(args, "a")]
    if act == "pdf":
        return [{"a": a, "value": lastzero.last_zero_pdf(clock, a, form=args.form or "closed",
                                                        budget=budget)} for a in _points(args, "a")]
    if act == "moment":
        m = _need(args, "m")
        return [{"m": m, "value": lastzero.last_zero_moment(clock, m)}]
    if act == "mgf":
        return [{"gamma": g, "value": lastzero.last_zero_mgf(clock, g, budget)}
                for g in _points(args, "gamma")]
    raise CliError(f"unknown action {act!r}")


def _cmd_joint(args):
    budget = _budget(args)
    act = args.action
    if act == "cond-a":
        b = _need(args, "b")
        return [{"a": a, "b": b, "value": jointlaw.cond_last_given_return_pdf(_need(args, "t"), a, b)}
                for a in _points(args, "a")]
    clock = _clock(args)
    if act == "survival":
        return [{"a": a, "b": b, "value": jointlaw.joint_survival(clock, a, b, budget)}
                for a in _points(args, "a") for b in _points(args, "b")]
    if act == "pdf":
        return [{"a": a, "b": b, "value": jointlaw.joint_pdf(clock, a, b)}
                for a in _points(args, "a") for b in _points(args, "b")]
    if act == "return-pdf":
        return [{"b": b, "value": jointlaw.return_time_pdf(clock, b)} for b in _points(args, "b")]
    if act == "never":
        if args.a is not None or args.a_grid is not None:
            return [{"a": a, "value": jointlaw.p_never_return_given_last(clock, a, budget)}
                    for a in _points(args, "a")]
        return [{"value": jointlaw.p_never_return(clock)}]
    if act == "cond-b":
        return [{"a": a, "b": b, "value": jointlaw.cond_return_given_last_pdf(clock, a, b, budget)}
                for a in _points(args, "a") for b in _points(args, "b")]
    if act == "straddle":
        return [{"w": w, "value": jointlaw.straddle_length_pdf(clock, w)} for w in _points(args, "w")]
    raise CliError(f"unknown action {act!r}")


def _cmd_reflmax(args):
    act = args.action
    printed = bool(args.printed)
    if act == "bridge":
        t = _need(args, "t")
        route = "ratio" if printed or args.route == "ratio" else "series"
        return [{"beta": b, "value": reflmax.bridge_max_abs_cdf(t, b, route=route, mu=args.mu,
                                                               printed=printed)}
                for b in _points(args, "beta")]
    clock = _clock(args)
    if act == "triple":
        beta = _need(args, "beta")
        alpha = args.alpha if args.alpha is not None else -beta
        box = reflmax.BarrierBox(alpha, beta)
        return [{"y": y, "value": reflmax.two_barrier_density(clock, box, y, printed=printed)}
                for y in _points(args, "x")]
    if act == "maxabs":
        return [{"beta": b, "value": reflmax.max_abs_cdf(clock, b, printed=printed)}
                for b in _points(args, "beta")]
    if act == "onesided":
        return [{"beta": b, "value": reflmax.max_onesided_cdf(clock, b, args.y0)}
                for b in _points(args, "beta")]
    raise CliError(f"unknown action {act!r}")


def _cmd_iter(args):
    budget = _budget(args)
    act = args.action
    if act == "pdf":
        t = _need(args, "t")
        return [{"x": x, "value": iterated.iterated_bm_pdf(args.mu, args.mu2, t, x, budget)}
                for x in _points(args, "x")]
    if act == "lastzero":
        t = _need(args, "t")
        rows = []
        for a in _points(args, "a"):
            if args.mu2 == 0.0 and args.horizon_kind == "abs-max":
                v = iterated.iter_last_zero_cdf(args.mu, t, a, budget)
            else:
                v = iterated.iter_last_zero_cdf_drifted_inner(args.mu, args.mu2, t, a,
                                                              args.horizon_kind, budget)
            rows.append({"a": a, "value": v})
        return rows
    if act == "nested":
        t = _need(args, "t")
        fn = iterated.nested_last_zero_pdf if args.density else iterated.nested_last_zero_cdf
        return [{"a": a, "value": fn(args.mu, args.mu2, t, a, budget)} for a in _points(args, "a")]
    if act == "nfold-pdf":
        n, t = _need(args, "n"), _need(args, "t")
        return [{"a": a, "value": iterated.nfold_last_zero_pdf(n, t, a, budget)}
                for a in _points(args, "a")]
    if act == "nfold-moment":
        n, m, t = _need(args, "n"), _need(args, "m"), _need(args, "t")
        return [{"n": n, "m": m, "value": iterated.nfold_moment(n, m, t)}]
    if act == "nfold-mgf":
        n, t = _need(args, "n"), _need(args, "t")
        return [{"gamma": g, "value": iterated.nfold_mgf(n, t, g)} for g in _points(args, "gamma")]
    raise CliError(f"unknown action {act!r}")


def _cmd_nfold(args):
    args.action = "nfold-" + args.action
    return _cmd_iter(args)


# --- Monte Carlo group -----------------------------------------------------------

def _mc_config(args) -> mcoracle.McConfig:
    return mcoracle.McConfig(paths=args.paths, dt=args.dt, seed=args.seed, shards=args.shards,
                             bridge_correction=not args.no_bridge, threads=args.threads)


def _mc_row(point: dict, est: mcoracle.Estimate, analytic: float | None) -> dict:
    row = dict(point)
    row.update({"mc": est.value, "std_error": est.std_error, "n": est.n})
    if analytic is not None:
        row.update({"analytic": analytic, "z": est.z_score(analytic)})
    return row


def _cdf_rows(samples, name, points, analytic: Callable[[float], float] | None):
    return [_mc_row({name: p}, mcoracle.estimate(samples, "cdf-at", p),
                    analytic(p) if analytic else None) for p in points]


def _moment_rows(samples, analytic: Callable[[int], float] | None):
    return [_mc_row({"m": m}, mcoracle.estimate(samples, "moment", m),
                    analytic(m) if analytic else None) for m in (1, 2)]


def _cmd_mc(args):
    cfg = _mc_config(args)
    act = args.action
    t = _need(args, "t")
    samples = None
    if act == "lastzero":
        samples = mcoracle.sample_last_zero(args.mu, t, cfg)
        clock = DriftClock(args.mu, t)
        if args.a is None and args.a_grid is None:
            rows = _moment_rows(samples, lambda m: lastzero.last_zero_moment(clock, m))
        else:
            rows = _cdf_rows(samples, "a", _points(args, "a"), lambda a: lastzero.last_zero_cdf(clock, a))
    elif act == "return":
        res = mcoracle.sample_first_return_after(args.mu, t, args.horizon, cfg)
        clock = DriftClock(args.mu, t)
        rows = [_mc_row({"event": "censored"}, res.censored_fraction(), None)]
        if args.b is not None or args.b_grid is not None:
            rows += [_mc_row({"event": f"R<={b!r}"}, res.return_cdf(b), jointlaw.return_time_cdf(clock, b))
                     for b in _points(args, "b")]
        samples = np.where(res.censored, np.inf, res.times)
    elif act == "maxabs":
        samples = mcoracle.sample_max_abs(args.mu, t, cfg)
        clock = DriftClock(args.mu, t)
        rows = _cdf_rows(samples, "beta", _points(args, "beta"), lambda b: reflmax.max_abs_cdf(clock, b))
    elif act == "nested":
        n = _need(args, "n")
        drifts = tuple(float(v) for v in args.drifts.split(",")) if args.drifts else ()
        spec = iterated.NestedSpec(n, drifts, t)
        samples = mcoracle.sample_nested(spec, cfg)
        analytic = (lambda m: iterated.nfold_moment(n, m, t)) if spec.driftless else None
        rows = _moment_rows(samples, analytic)
    elif act == "iterated":
        samples = mcoracle.sample_iterated_last_zero(args.mu, t, cfg, mu2=args.mu2,
                                                     horizon_kind=args.horizon_kind)

        def analytic(a):
            if args.mu2 == 0.0 and args.horizon_kind == "abs-max":
                return iterated.iter_last_zero_cdf(args.mu, t, a)
            return iterated.iter_last_zero_cdf_drifted_inner(args.mu, args.mu2, t, a, args.horizon_kind)
        rows = _cdf_rows(samples, "a", _points(args, "a"), analytic)
    else:
        raise CliError(f"unknown action {act!r}")
    if args.samples_out:
        mcoracle.export_csv(samples, args.samples_out, header=act)
    return rows


# --- parser --------------------------------------------------------------------------

_GROUPS = {
    "lastzero": (("cdf", "pdf", "moment", "mgf", "limit"), _cmd_lastzero),
    "joint": (("survival", "pdf", "return-pdf", "never", "cond-a", "cond-b", "straddle"), _cmd_joint),
    "reflmax": (("triple", "maxabs", "onesided", "bridge"), _cmd_reflmax),
    "iter": (("pdf", "lastzero", "nested", "nfold-pdf", "nfold-moment", "nfold-mgf"), _cmd_iter),
    "nfold": (("pdf", "moment", "mgf"), _cmd_nfold),
    "mc": (("lastzero", "return", "maxabs", "nested", "iterated"), _cmd_mc),
}


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model")
    g.add_argument("--mu", type=float, default=0.0, help="drift (outer motion)")
    g.add_argument("--mu2", type=float, default=0.0, help="drift of the inner motion")
    g.add_argument("--t", type=float, help="time horizon")
    for name in GRID_FLAGS:
        g.add_argument(f"--{name}", type=float)
        g.add_argument(f"--{name}-grid", metavar="LO:HI:N")
    g.add_argument("--alpha", type=float, help="lower barrier (default -beta)")
    g.add_argument("--y0", type=float, default=0.0, help="start for the one-sided max")
    g.add_argument("--n", type=int, help="nesting depth")
    g.add_argument("--m", type=int, help="moment order")
    g.add_argument("--form", help="integral form for lastzero cdf/pdf")
    g.add_argument("--route", choices=("series", "ratio"), default="series")
    g.add_argument("--printed", action="store_true",
                   help="use the alternative (uncorrected) image weights for comparison")
    g.add_argument("--density", action="store_true", help="iter nested: density instead of cdf")
    g.add_argument("--horizon-kind", choices=iterated.HORIZON_KINDS, default="abs-max")
    g.add_argument("--tol", type=float, help="quadrature abs/rel tolerance")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    s = p.add_argument_group("simulation")
    s.add_argument("--paths", type=int, default=200_000)
    s.add_argument("--dt", type=float, default=1e-4)
    s.add_argument("--seed", type=int, default=mcoracle.DEFAULT_SEED)
    s.add_argument("--shards", type=int, default=8)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--no-bridge", action="store_true", help="disable within-step bridge correction")
    s.add_argument("--horizon", type=float, default=50.0, help="censoring horizon for mc return")
    s.add_argument("--drifts", help="comma-separated drifts for mc nested, outermost first")
    s.add_argument("--samples-out", help="write raw samples to this CSV file")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zerocross",
                                     description="Last zero-crossing laws of drifted and iterated Brownian motion.")
    sub = parser.add_subparsers(dest="group", required=True)
    common = _common_flags()
    for group, (actions, _) in _GROUPS.items():
        gp = sub.add_parser(group, parents=[common])
        gp.add_argument("action", choices=actions)
    st = sub.add_parser("selftest", help="analytic and Monte Carlo self-checks")
    st.add_argument("suite", nargs="?", choices=selftest.SUITES)
    st.add_argument("--suite", dest="suite_flag", choices=selftest.SUITES)
    st.add_argument("--seed", type=int, default=mcoracle.DEFAULT_SEED)
    st.add_argument("--threads", type=int, default=1)
    st.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


_SIM_KEYS = {"paths", "dt", "seed", "shards", "threads", "no_bridge", "horizon", "drifts", "samples_out"}


def _params(args) -> dict:
    skip = {"group", "action", "format"}
    if args.group != "mc":
        skip |= _SIM_KEYS
    return {k: v for k, v in sorted(vars(args).items())
            if k not in skip and v is not None and v is not False}


def run_command(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = "zerocross " + " ".join(argv if argv is not None else sys.argv[1:])
    try:
        if args.group == "selftest":
            suite = args.suite_flag or args.suite or "quick"
            results = selftest.run_suite(suite, seed=args.seed, threads=args.threads)
            rows = [r.row() for r in results]
            params = {"suite": suite, "seed": args.seed}
            stdout.write(render(f"zerocross selftest {suite}", params, rows, args.format))
            return 0 if all(r.passed for r in results) else 1
        rows = _GROUPS[args.group][1](args)
        stdout.write(render(command, _params(args), rows, args.format))
        return 0
    except CliError as exc:
        parser.print_usage(stderr)
        stderr.write(f"zerocross: error: {exc}\n")
        return 2
    except DomainError as exc:
        stderr.write(f"zerocross: domain error: {exc}\n")
        return 2
    except BudgetExhausted as exc:
        stderr.write(f"zerocross: numerical budget exhausted in module '{exc.module}': {exc} "
                     f"(best estimate {exc.estimate!r}, error {exc.error!r})\n")
        return 3
    except ValueError as exc:
        stderr.write(f"zerocross: invalid argument: {exc}\n")
        return 2


def main(argv: list[str] | None = None) -> None:
    sys.exit(run_command(argv))
