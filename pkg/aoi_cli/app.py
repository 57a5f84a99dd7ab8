"""
Command-line front end.

Usage examples::

    python -m aoi_cli iir --k 1000 --delta 0.4
    python -m aoi_cli fr-curve --k 1000 --delta 0.1 0.2 0.3 0.4 --normalize --bound
    python -m aoi_cli fr-opt --k 1000 --delta 0.1 --format json
    python -m aoi_cli iir-multi-sweep --k 1000 --delta 0.1 0.4 --m-max 64
    python -m aoi_cli verify --scheme fr --k 1 --delta 0.5 --n 1 --horizon 1000000
    python -m aoi_cli sim-sweep --scheme fr --k 100 --delta 0.2 --values 120 130 140

Exit codes: ``0`` success, ``1`` a verification outside the z-score limit,
``2`` invalid flags or parameters (a ``{"error": ...}`` object on stderr).
"""

import argparse
import json
import logging
import sys

from common import config
from common.logging_config import configure_logging
from common.utils.exceptions import AoIError
from aoi_analytic import DEFAULT_M_LIMIT
from aoi_sim import InitialAge, SchemeKind, VariateMode
from aoi_cli import commands
from aoi_cli.output import render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _output_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", choices=["csv", "json"], default="csv", help="Output encoding.")
    parent.add_argument("--out", default=None, help="Write to this path instead of stdout.")
    parent.add_argument("--log-level", default=config.LOG_LEVEL, help="Logging level for stderr.")
    return parent


def _channel_options(multiple_deltas: bool = False) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--k", type=int, required=True, help="Symbols per update.")
    if multiple_deltas:
        parent.add_argument("--delta", type=float, nargs="+", required=True, help="Erasure probabilities.")
    else:
        parent.add_argument("--delta", type=float, required=True, help="Erasure probability.")
    return parent


def _simulation_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--horizon", type=int, default=config.DEFAULT_HORIZON,
                        help="Updates per replication (IIR) or packet slots (FR).")
    parent.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="64-bit seed.")
    parent.add_argument("--reps", type=int, default=config.DEFAULT_REPS, help="Independent replications.")
    parent.add_argument("--variates", choices=[v.value for v in VariateMode], default=VariateMode.FAST.value,
                        help="Inversion (fast) or symbol-by-symbol erasures (symbol).")
    parent.add_argument("--initial-age", choices=[v.value for v in InitialAge], default=InitialAge.RENEWAL.value,
                        help="Start at a renewal point or from age zero.")
    parent.add_argument("--tol", type=float, default=config.DEFAULT_TOL, help="Moment-sum tolerance.")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per :mod:`aoi_cli.commands` function."""
    parser = argparse.ArgumentParser(
        prog="aoi_cli",
        description="Age of information over a symbol-erasure channel: formulas, optimisation and simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    output = _output_options()
    single = _channel_options()
    several = _channel_options(multiple_deltas=True)
    simulation = _simulation_options()

    iir = sub.add_parser("iir", parents=[single, output], help="IIR age for one channel.")
    iir.add_argument("--m", type=int, default=None, help="Also report the age with m monitors.")
    iir.add_argument("--tol", type=float, default=config.DEFAULT_TOL, help="Moment-sum tolerance.")
    iir.set_defaults(handler=_run_iir)

    curve = sub.add_parser("fr-curve", parents=[several, output], help="FR age over packet lengths.")
    curve.add_argument("--n-min", type=int, default=None, help="Smallest packet length (default k).")
    curve.add_argument("--n-max", type=int, default=None, help="Largest packet length (default 2k/(1-delta)).")
    curve.add_argument("--step", type=int, default=1, help="Packet length increment.")
    curve.add_argument("--normalize", action="store_true", help="Divide n and ages by k/(1-delta).")
    curve.add_argument("--bound", action="store_true", help="Add the upper-bound column.")
    curve.set_defaults(handler=_run_fr_curve)

    opt = sub.add_parser("fr-opt", parents=[single, output], help="Optimal FR packet length.")
    opt.add_argument("--eta0", type=float, default=config.DEFAULT_ETA0, help="Exponent slack for beta_k.")
    opt.set_defaults(handler=_run_fr_opt)

    multi = sub.add_parser("iir-multi-sweep", parents=[several, output],
                           help="Normalised IIR age versus number of monitors, with the FR line.")
    multi.add_argument("--m-max", type=int, required=True, help="Largest number of monitors in the table.")
    multi.add_argument("--m-limit", type=int, default=DEFAULT_M_LIMIT, help="Crossover search limit.")
    multi.add_argument("--tol", type=float, default=config.DEFAULT_TOL, help="Moment-sum tolerance.")
    multi.set_defaults(handler=_run_iir_multi_sweep)

    verify = sub.add_parser("verify", parents=[single, simulation, output],
                            help="Closed form against simulation; exit 1 when |z| exceeds the limit.")
    verify.add_argument("--scheme", choices=[s.value for s in SchemeKind], required=True)
    verify.add_argument("--m", type=int, default=None, help="Monitors (iir_multi).")
    verify.add_argument("--n", type=int, default=None, help="Packet length (fr).")
    verify.add_argument("--z-limit", type=float, default=config.VERIFY_Z_LIMIT, help="Largest accepted |z|.")
    verify.set_defaults(handler=_run_verify)

    sweep = sub.add_parser("sim-sweep", parents=[single, simulation, output],
                           help="Simulated age over n (fr) or m (iir_multi).")
    sweep.add_argument("--scheme", choices=[SchemeKind.FR.value, SchemeKind.IIR_MULTI.value], required=True)
    sweep.add_argument("--values", type=int, nargs="+", required=True, help="Packet lengths or monitor counts.")
    sweep.set_defaults(handler=_run_sim_sweep)

    return parser


def _run_iir(args):
    return commands.cmd_iir(args.k, args.delta, args.m, args.tol)


def _run_fr_curve(args):
    return commands.cmd_fr_curve(args.k, args.delta, args.n_min, args.n_max, args.step, args.normalize, args.bound)


def _run_fr_opt(args):
    return commands.cmd_fr_opt(args.k, args.delta, args.eta0)


def _run_iir_multi_sweep(args):
    return commands.cmd_iir_multi_sweep(args.k, args.delta, args.m_max, args.m_limit, args.tol)


def _run_verify(args):
    return commands.cmd_verify(
        args.k, args.delta, args.scheme, m=args.m, n=args.n, horizon=args.horizon, seed=args.seed,
        reps=args.reps, variates=args.variates, initial_age=args.initial_age, tol=args.tol,
        z_limit=args.z_limit,
    )


def _run_sim_sweep(args):
    return commands.cmd_sim_sweep(
        args.k, args.delta, args.scheme, args.values, horizon=args.horizon, seed=args.seed, reps=args.reps,
        variates=args.variates, initial_age=args.initial_age, tol=args.tol,
    )


def _usage_error(message: str) -> int:
    sys.stderr.write(json.dumps({"error": message}) + "\n")
    return EXIT_USAGE


def main(argv=None) -> int:
    """
    Run one command.

    :param argv: Arguments without the program name (defaults to ``sys.argv[1:]``).
    :returns: Process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed usage; --help exits with 0
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        configure_logging(args.log_level)
    except ValueError as exc:
        return _usage_error(str(exc))

    try:
        record = args.handler(args)
    except AoIError as exc:
        logger.debug("%s failed: %s", args.command, exc)
        return _usage_error(str(exc))

    text = render(record, args.format)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        except OSError as exc:
            return _usage_error(f"cannot write {args.out}: {exc}")
    else:
        sys.stdout.write(text)

    if args.command == "verify" and not all(row["passed"] for row in record.rows):
        return EXIT_VERIFY_FAILED
    return EXIT_OK
