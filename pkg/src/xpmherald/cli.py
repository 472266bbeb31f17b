"""Command-line harness.

Subcommands: ``run <config>`` (named experiments from a JSON config),
``verify`` (invariant suites), ``sample`` (Monte Carlo shot campaign),
``loss-bound`` (tolerable-absorption solver), ``cascade`` (chained setups).

Exit codes: 0 success, 1 configuration error, 2 invariant failure,
3 truncation failure.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from .cascade import CascadeConfig, simulate_cascade
from .errors import ConfigurationError, TruncationError
from .experiments import ExperimentConfig, ResultTable, run_experiment
from .fock import TruncationPolicy
from .loss import max_tolerable_loss
from .mzi import (
    CoherentProbe,
    NoisyPhotonProbe,
    NoisySource,
    sample_shots,
    transparent_via_angle_sum,
)
from .verify import all_passed, format_report, run_suite

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INVARIANT = 2
EXIT_TRUNCATION = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xpmherald",
        description="Heralded single-photon purification simulator",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a named experiment from a config file")
    p_run.add_argument("config", help="JSON config file")
    p_run.add_argument("--out", help="output CSV path (overrides config)")
    p_run.add_argument("--seed", type=int, help="seed (overrides config)")
    p_run.add_argument("--trunc-tol", type=float, help="truncation tail tolerance")
    p_run.add_argument("--threads", type=int, help="worker threads for sweeps")

    p_verify = sub.add_parser("verify", help="run the invariant suites")
    p_verify.add_argument("--suite", choices=("fast", "full"), default="fast")

    p_sample = sub.add_parser("sample", help="Monte Carlo shot campaign")
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.add_argument("--shots", type=int, default=100_000)
    p_sample.add_argument("--p-a", type=float, default=0.5, help="signal source efficiency")
    p_sample.add_argument("--p-b", type=float, help="probe source efficiency (noisy probe)")
    p_sample.add_argument("--beta", type=float, help="coherent probe amplitude")
    p_sample.add_argument("--phi-chi", type=float, default=math.pi)
    p_sample.add_argument("--theta1", type=float, default=math.pi / 4.0)
    p_sample.add_argument("--trunc-tol", type=float, default=1e-10)
    p_sample.add_argument("--out", help="output CSV path")

    p_loss = sub.add_parser("loss-bound", help="maximum tolerable absorption")
    p_loss.add_argument("--phi-chi", type=float, default=math.pi)
    p_loss.add_argument(
        "--beta-sq", type=float, nargs="+", default=[1.0, 1e2, 1e4],
        help="probe mean photon numbers",
    )
    p_loss.add_argument(
        "--fixed-p", type=float,
        help="evaluate improvement at this source efficiency instead of the weak-source limit",
    )
    p_loss.add_argument("--out", help="output CSV path")

    p_casc = sub.add_parser("cascade", help="chained setups sharing one probe")
    p_casc.add_argument(
        "--scheme", choices=("reused-probe", "shared-probe"), default="reused-probe"
    )
    p_casc.add_argument("--setups", type=int, default=10)
    p_casc.add_argument("--alpha-sq", type=float, default=4.0)
    p_casc.add_argument("--phi-chi", type=float, default=math.pi / 2.0)
    p_casc.add_argument("--p", type=float, default=0.6)
    p_casc.add_argument("--shots", type=int, help="Monte Carlo shots (default: exact)")
    p_casc.add_argument("--seed", type=int, help="required with --shots")
    p_casc.add_argument("--out", help="output CSV path")
    return parser


def _emit(table: ResultTable, out: str | None) -> None:
    if out:
        table.write(out)
        print(f"wrote {out}")
    else:
        sys.stdout.write(table.to_csv_text())


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    if args.out is not None:
        cfg.out = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.trunc_tol is not None:
        cfg.trunc_tol = args.trunc_tol
    if args.threads is not None:
        cfg.threads = args.threads
    table = run_experiment(cfg)
    if cfg.out:
        print(f"wrote {cfg.out}")
    else:
        sys.stdout.write(table.to_csv_text())
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_suite(args.suite)
    print(format_report(results))
    return EXIT_OK if all_passed(results) else EXIT_INVARIANT


def _cmd_sample(args) -> int:
    if (args.p_b is None) == (args.beta is None):
        raise ConfigurationError("choose exactly one probe: --p-b or --beta")
    probe = (
        CoherentProbe(args.beta)
        if args.beta is not None
        else NoisyPhotonProbe(NoisySource(args.p_b))
    )
    cfg = transparent_via_angle_sum(args.theta1, 0.0, args.phi_chi)
    counts = sample_shots(
        cfg,
        NoisySource(args.p_a),
        probe,
        args.shots,
        args.seed,
        policy=TruncationPolicy(tail_tolerance=args.trunc_tol),
    )
    table = ResultTable(
        columns=["shots", "seed"] + list(counts),
        rows=[(args.shots, args.seed) + tuple(counts.values())],
        manifest={
            "experiment": "sample",
            "version": __version__,
            "p_a": repr(args.p_a),
            "probe": "coherent" if args.beta is not None else "noisy_photon",
            "phi_chi": repr(args.phi_chi),
            "theta1": repr(args.theta1),
            "seed": args.seed,
        },
    )
    _emit(table, args.out)
    return EXIT_OK


def _cmd_loss_bound(args) -> int:
    cfg = transparent_via_angle_sum(math.pi / 4.0, 0.0, args.phi_chi)
    rows = []
    for beta_sq in args.beta_sq:
        bound = max_tolerable_loss(cfg, math.sqrt(beta_sq), fixed_p=args.fixed_p)
        rows.append((args.phi_chi, beta_sq, bound))
    table = ResultTable(
        columns=["phi_chi", "beta_sq", "pa_max"],
        rows=rows,
        manifest={
            "experiment": "loss-bound",
            "version": __version__,
            "criterion": "weak-source limit"
            if args.fixed_p is None
            else f"fixed p = {args.fixed_p}",
        },
    )
    _emit(table, args.out)
    return EXIT_OK


def _cmd_cascade(args) -> int:
    if args.shots is not None and args.seed is None:
        raise ConfigurationError("--shots requires --seed")
    scheme = args.scheme.replace("-", "_")
    cfg = CascadeConfig(
        scheme, args.setups, math.sqrt(args.alpha_sq), args.phi_chi, args.p
    )
    result = simulate_cascade(cfg, shots=args.shots, seed=args.seed)
    rows = [(n + 1, float(pn)) for n, pn in enumerate(result.per_setup)]
    manifest = {
        "experiment": "cascade",
        "version": __version__,
        "scheme": scheme,
        "alpha_sq": repr(args.alpha_sq),
        "phi_chi": repr(args.phi_chi),
        "p": repr(args.p),
        "total": repr(result.total),
        "residual_amp": repr(result.residual_amp),
    }
    if args.shots is not None:
        manifest["shots"] = args.shots
        manifest["seed"] = args.seed
    table = ResultTable(columns=["setup", "p_first_click"], rows=rows, manifest=manifest)
    _emit(table, args.out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are config errors here
        if exc.code not in (0, None):
            return EXIT_CONFIG
        return EXIT_OK
    handlers = {
        "run": _cmd_run,
        "verify": _cmd_verify,
        "sample": _cmd_sample,
        "loss-bound": _cmd_loss_bound,
        "cascade": _cmd_cascade,
    }
    try:
        return handlers[args.command](args)
    except TruncationError as exc:
        print(f"truncation failure: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (ConfigurationError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
