"""Command-line front end: single evaluations, sweeps, and comparisons.

SNRs cross this boundary in dB and are converted once; the library below is
linear-only. Exit codes: 0 success, 2 flag parsing, 3 parameter domain,
4 method validity, 5 convergence, 6 comparison failure.
"""

import argparse
import json
import math
import os
import re
import sys as _sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .channel import ChannelParams, SystemParams, db_to_linear, make_channel
from .exceptions import ConvergenceError, DomainError, MethodValidityError
from .monte_carlo import McSpec
from .rate import Method, QuadratureSpec, rate_dispatch

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_VALIDITY = 4
EXIT_CONVERGENCE = 5
EXIT_COMPARISON = 6

SCHEMA_LINE = "# schema=1"
CSV_COLUMNS = ("axis", "axis_value", "kappa", "mu", "m", "gamma_bar_db",
               "a_exp", "antennas", "rho_db", "method", "rate_bps_hz",
               "stderr", "diag_nodes", "diag_trials", "seed", "error")
CSV_HEADER = ",".join(CSV_COLUMNS)
COMPARE_RTOL = 1e-6


# argparse only forwards '-'-prefixed tokens that look like plain negative
# numbers to value conversion; widen the match so -inf/-nan reach the float
# converter and get rejected by the finiteness check (exit 3) instead of
# dying as unknown flags (exit 2).
_NEGATIVE_TOKEN = re.compile(
    r"^-(\d+\.?\d*([eE][-+]?\d+)?|\.\d+([eE][-+]?\d+)?|inf(inity)?|nan)$",
    re.IGNORECASE)


def _allow_negative_values(parser):
    parser._negative_number_matcher = _NEGATIVE_TOKEN


class SweepAxis(Enum):
    RHO_DB = "rho_db"
    ANTENNAS = "antennas"


@dataclass(frozen=True)
class SweepSpec:
    """One sweep axis plus the fixed remainder of the parameter set."""

    axis: SweepAxis
    start: float
    stop: float
    step: float
    channel: ChannelParams
    gamma_bar_db: float
    a_exp: float
    antennas: int
    rho_db: float
    methods: tuple
    trials: int
    seed: int
    jobs: int

    def values(self):
        if self.step <= 0.0:
            raise DomainError(f"step must be > 0, got {self.step}")
        if self.start > self.stop:
            raise DomainError("start must be <= stop")
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        vals = [self.start + i * self.step for i in range(count)]
        if self.axis is SweepAxis.ANTENNAS:
            ints = [round(v) for v in vals]
            if any(abs(v - i) > 1e-9 or i < 1 for v, i in zip(vals, ints)):
                raise DomainError("antenna sweep values must be integers >= 1")
            return ints
        return vals


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _row(channel, gamma_bar_db, a_exp, antennas, rho_db, axis="", axis_value=None,
         method="", rate=None, stderr=None, nodes=None, trials=None, seed=None,
         error=""):
    return {
        "axis": axis,
        "axis_value": _fmt(axis_value),
        "kappa": _fmt(channel.kappa),
        "mu": _fmt(channel.mu),
        "m": _fmt(channel.m),
        "gamma_bar_db": _fmt(gamma_bar_db),
        "a_exp": _fmt(a_exp),
        "antennas": _fmt(antennas),
        "rho_db": _fmt(rho_db),
        "method": method,
        "rate_bps_hz": _fmt(rate),
        "stderr": _fmt(stderr),
        "diag_nodes": _fmt(nodes),
        "diag_trials": _fmt(trials),
        "seed": _fmt(seed),
        "error": error,
    }


def _result_row(channel, gamma_bar_db, a_exp, antennas, rho_db, result,
                axis="", axis_value=None):
    diag = result.diagnostics
    mc = result.method is Method.MONTE_CARLO
    nodes = diag.get("nodes")
    return _row(channel, gamma_bar_db, a_exp, antennas, rho_db,
                axis=axis, axis_value=axis_value, method=result.method.value,
                rate=result.rate,
                stderr=diag.get("stderr") if mc else None,
                nodes=int(nodes) if nodes is not None else None,
                trials=int(diag["trials"]) if mc else None,
                seed=int(diag["seed"]) if mc else None)


def _emit_rows(rows, fmt, stream):
    if fmt == "json":
        for row in rows:
            stream.write(json.dumps(row) + "\n")
    else:
        stream.write(SCHEMA_LINE + "\n")
        stream.write(CSV_HEADER + "\n")
        for row in rows:
            stream.write(",".join(row[c] for c in CSV_COLUMNS) + "\n")


def _add_param_flags(p, need_rho=True):
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--gamma-bar-db", type=float, required=True,
                   help="mean SNR per antenna in dB")
    p.add_argument("--antennas", type=int, default=1)
    if need_rho:
        p.add_argument("--rho-db", type=float, required=True,
                       help="transmit SNR in dB")
    p.add_argument("--a-exp", type=float, default=None,
                   help="delay exponent product; alternative to --theta/--block-t/--bandwidth")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--block-t", type=float, default=None)
    p.add_argument("--bandwidth", type=float, default=None)


def _add_mc_flags(p):
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--jobs", type=int,
                   default=int(os.environ.get("EFFCAP_JOBS", "1")))


def _resolve_a_exp(args, parser):
    qos = (args.theta, args.block_t, args.bandwidth)
    if args.a_exp is not None:
        if any(v is not None for v in qos):
            parser.error("--a-exp conflicts with --theta/--block-t/--bandwidth")
        return args.a_exp
    if all(v is not None for v in qos):
        return args.theta * args.block_t * args.bandwidth / math.log(2.0)
    parser.error("provide --a-exp or all of --theta, --block-t, --bandwidth")


def _check_finite(parser_name, **values):
    for name, v in values.items():
        if v is not None and not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v}")


def _build_params(args, a_exp, rho_db):
    _check_finite("params", kappa=args.kappa, mu=args.mu, m=args.m,
                  gamma_bar_db=args.gamma_bar_db, rho_db=rho_db, a_exp=a_exp)
    channel = make_channel(args.kappa, args.mu, args.m, args.gamma_bar_db)
    system = SystemParams(antennas=args.antennas, rho=db_to_linear(rho_db),
                          a_exp=a_exp)
    return channel, system


def cmd_eval(args, parser) -> int:
    a_exp = _resolve_a_exp(args, parser)
    channel, system = _build_params(args, a_exp, args.rho_db)
    mc = McSpec(trials=args.trials, seed=args.seed)
    result = rate_dispatch(channel, system, args.method, mc=mc, jobs=args.jobs)
    row = _result_row(channel, args.gamma_bar_db, a_exp, args.antennas,
                      args.rho_db, result)
    _emit_rows([row], args.format, _sys.stdout)
    return EXIT_OK


def cmd_sweep(args, parser) -> int:
    a_exp = _resolve_a_exp(args, parser)
    axis = SweepAxis(args.axis.replace("-", "_"))
    antennas = args.antennas
    if axis is SweepAxis.ANTENNAS:
        if args.rho_db is None:
            parser.error("--rho-db is required when sweeping antennas")
        rho_db = args.rho_db
    else:
        if args.rho_db is not None:
            parser.error("--rho-db conflicts with the rho-db sweep axis")
        rho_db = 0.0
    _check_finite("sweep", kappa=args.kappa, mu=args.mu, m=args.m,
                  gamma_bar_db=args.gamma_bar_db, a_exp=a_exp,
                  rho_db=args.rho_db, start=args.start, stop=args.stop,
                  step=args.step)
    channel = make_channel(args.kappa, args.mu, args.m, args.gamma_bar_db)
    methods = tuple(t.strip() for t in args.methods.split(",") if t.strip())
    if not methods:
        parser.error("--methods must name at least one method")
    spec = SweepSpec(axis=axis, start=args.start, stop=args.stop, step=args.step,
                     channel=channel, gamma_bar_db=args.gamma_bar_db, a_exp=a_exp,
                     antennas=antennas, rho_db=rho_db, methods=methods,
                     trials=args.trials, seed=args.seed, jobs=args.jobs)
    rows = run_sweep(spec)
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            _emit_rows(rows, args.format, fh)
    except OSError as exc:
        _sys.stderr.write(f"effcap: cannot write {args.out}: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK


def run_sweep(spec: SweepSpec):
    """Evaluate the sweep grid; per-point failures become error rows."""
    values = spec.values()
    mc = McSpec(trials=spec.trials, seed=spec.seed)

    def point(value):
        if spec.axis is SweepAxis.RHO_DB:
            rho_db, antennas = value, spec.antennas
        else:
            rho_db, antennas = spec.rho_db, value
        system = SystemParams(antennas=antennas, rho=db_to_linear(rho_db),
                              a_exp=spec.a_exp)
        out = []
        for method in spec.methods:
            try:
                result = rate_dispatch(spec.channel, system, method, mc=mc)
                out.append(_result_row(spec.channel, spec.gamma_bar_db,
                                       spec.a_exp, antennas, rho_db, result,
                                       axis=spec.axis.value, axis_value=value))
            except (DomainError, MethodValidityError, ConvergenceError) as exc:
                out.append(_row(spec.channel, spec.gamma_bar_db, spec.a_exp,
                                antennas, rho_db, axis=spec.axis.value,
                                axis_value=value, method=method,
                                error=str(exc).replace(",", ";")))
        return out

    if spec.jobs > 1:
        with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
            per_point = list(pool.map(point, values))
    else:
        per_point = [point(v) for v in values]
    return [row for rows in per_point for row in rows]


def cmd_compare(args, parser) -> int:
    a_exp = _resolve_a_exp(args, parser)
    channel, system = _build_params(args, a_exp, args.rho_db)
    mc = McSpec(trials=args.trials, seed=args.seed)
    comparison = rate_dispatch(channel, system, "compare", mc=mc, jobs=args.jobs)

    print(f"{'method':8s} {'rate_bps_hz':>22s}  note")
    for method in Method:
        if method in comparison.results:
            result = comparison.results[method]
            note = ""
            if method is Method.MONTE_CARLO:
                note = f"stderr={result.diagnostics['stderr']:.3e}"
                if comparison.mc_sigma_distance is not None:
                    note += f" sigma={comparison.mc_sigma_distance:.2f}"
            print(f"{method.value:8s} {result.rate:22.15e}  {note}")
        elif method in comparison.failures:
            print(f"{method.value:8s} {'-':>22s}  {comparison.failures[method]}")

    if len(comparison.results) < 2:
        _sys.stderr.write("effcap: fewer than two methods are valid here\n")
        return EXIT_VALIDITY

    ok = True
    if comparison.max_exact_discrepancy is not None:
        print(f"max exact discrepancy: {comparison.max_exact_discrepancy:.3e} "
              f"(tolerance {COMPARE_RTOL:g})")
        ok &= comparison.max_exact_discrepancy <= COMPARE_RTOL
    if comparison.mc_sigma_distance is not None:
        print(f"monte-carlo distance: {comparison.mc_sigma_distance:.2f} sigma "
              f"(tolerance {args.mc_sigma:g})")
        ok &= comparison.mc_sigma_distance <= args.mc_sigma
    return EXIT_OK if ok else EXIT_COMPARISON


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effcap",
        description="Effective throughput of MISO links over kappa-mu shadowed fading")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one parameter point")
    _add_param_flags(p_eval)
    p_eval.add_argument("--method", default="auto",
                        choices=["auto", "quad", "closed", "asym", "mc"])
    _add_mc_flags(p_eval)
    p_eval.add_argument("--format", default="csv", choices=["csv", "json"])

    p_sweep = sub.add_parser("sweep", help="sweep one axis and write a table")
    p_sweep.add_argument("--axis", required=True, choices=["rho-db", "antennas"])
    p_sweep.add_argument("--start", type=float, required=True)
    p_sweep.add_argument("--stop", type=float, required=True)
    p_sweep.add_argument("--step", type=float, required=True)
    p_sweep.add_argument("--kappa", type=float, required=True)
    p_sweep.add_argument("--mu", type=float, required=True)
    p_sweep.add_argument("--m", type=float, required=True)
    p_sweep.add_argument("--gamma-bar-db", type=float, required=True)
    p_sweep.add_argument("--antennas", type=int, default=1,
                         help="fixed antenna count (rho-db axis only)")
    p_sweep.add_argument("--rho-db", type=float, default=None,
                         help="fixed transmit SNR in dB (antennas axis only)")
    p_sweep.add_argument("--a-exp", type=float, default=None)
    p_sweep.add_argument("--theta", type=float, default=None)
    p_sweep.add_argument("--block-t", type=float, default=None)
    p_sweep.add_argument("--bandwidth", type=float, default=None)
    p_sweep.add_argument("--methods", default="quad",
                         help="comma-separated method tags, e.g. quad,asym")
    p_sweep.add_argument("--out", required=True)
    _add_mc_flags(p_sweep)
    p_sweep.add_argument("--format", default="csv", choices=["csv", "json"])

    p_cmp = sub.add_parser("compare", help="cross-check all applicable methods")
    _add_param_flags(p_cmp)
    _add_mc_flags(p_cmp)
    p_cmp.add_argument("--mc-sigma", type=float, default=3.0,
                       help="allowed Monte Carlo deviation in standard errors")

    for p in (parser, p_eval, p_sweep, p_cmp):
        _allow_negative_values(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"eval": cmd_eval, "sweep": cmd_sweep, "compare": cmd_compare}
    try:
        return handlers[args.command](args, parser)
    except DomainError as exc:
        _sys.stderr.write(f"effcap: parameter domain error: {exc}\n")
        return EXIT_DOMAIN
    except MethodValidityError as exc:
        _sys.stderr.write(f"effcap: method validity error: {exc}\n")
        return EXIT_VALIDITY
    except ConvergenceError as exc:
        _sys.stderr.write(f"effcap: convergence failure: {exc} "
                          f"(best estimate {exc.best_estimate!r})\n")
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    raise SystemExit(main())
