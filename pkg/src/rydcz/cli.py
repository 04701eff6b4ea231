"""Command-line interface: simulate, optimize, budget and reproduce commands.

Exit codes: 0 success, 1 reproduction-check failure, 2 usage/config error,
3 numerical (integration) failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import IntegrationError, __version__, errors, metrics, optimizer, reproduce, scenarios

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


def _output_dir(args):
    base = args.output or os.environ.get("RYDCZ_OUTPUT", ".")
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _get_scenario(name):
    try:
        return scenarios.get(name)
    except KeyError as exc:
        raise UsageError(str(exc)) from None


def _write_json(path, payload):
    payload = dict(payload)
    payload["version"] = __version__
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
    print(f"wrote {path}")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path}")


def _parse_rate_khz(text):
    """Rate flag value in kHz (plain, no 2*pi), '50' or '50kHz' -> 1/us."""
    cleaned = str(text).strip().lower().removesuffix("khz")
    try:
        return float(cleaned) * 1e-3
    except ValueError:
        raise UsageError(f"cannot parse rate {text!r}; expected e.g. '50' or '50kHz'") from None


def cmd_simulate(args):
    s = _get_scenario(args.scenario)
    out = _output_dir(args)
    if s.kind == "single-atom":
        from .effective import acceleration_ratio, measure_period, reference_period

        traj = reproduce.fig2_trajectory(s.name)
        t0 = reference_period(s.params, s.omega1_const)
        period = measure_period(traj)
        payload = {
            "scenario": s.name,
            "period_us": period,
            "reference_period_us": t0,
            "acceleration_ratio": acceleration_ratio(traj, t0),
        }
        _write_json(out / f"{s.name}-simulate.json", payload)
        return EXIT_OK
    result, trajectories = metrics.evaluate_gate(s.params, s.pulse1, s.pulsec,
                                                 steps=args.steps)
    payload = {"scenario": s.name, "result": result.to_dict()}
    _write_json(out / f"{s.name}-simulate.json", payload)
    if args.trajectories:
        for label, traj in trajectories.items():
            cols = traj.population_columns()
            header = list(cols)
            rows = zip(*(np.asarray(v) for v in cols.values()))
            _write_csv(out / f"{s.name}-{label}-populations.csv", header, rows)
    return EXIT_OK


def cmd_optimize(args):
    s = _get_scenario(args.scenario)
    if s.kind == "single-atom":
        raise UsageError(f"scenario {s.name!r} is a single-atom demo, not a gate")
    overrides = {}
    if args.config:
        try:
            with open(args.config) as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}") from None
    variant = args.variant or ("asa-free" if s.kind == "asa" else "sa")
    overrides.setdefault("variant", variant)
    overrides.setdefault("seed", args.seed)
    if args.population:
        overrides["population"] = args.population
    if args.generations:
        overrides["generations"] = args.generations
    for key in ("beta_range", "delta_opt_range", "alpha_range", "duration_range"):
        if key in overrides and overrides[key] is not None:
            overrides[key] = tuple(overrides[key])
    try:
        config = optimizer.GAConfig(**overrides)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid optimizer config: {exc}") from None

    out = _output_dir(args)
    if args.runs > 1:
        stats = optimizer.batch_runs(
            config, s, args.runs,
            progress=lambda i, f: print(f"run {i}: best F = {f:.4f}", flush=True))
        _write_json(out / f"{s.name}-optimize-stats.json",
                    {"scenario": s.name, **stats.to_dict()})
        _write_csv(out / f"{s.name}-optimize-runs.csv", ["run", "best_F"],
                   list(enumerate(stats.fidelities)))
    else:
        result = optimizer.run_ga(
            config, s,
            progress=lambda g, f: print(f"generation {g}: best fitness = {f:.5f}",
                                        flush=True))
        _write_json(out / f"{s.name}-optimize.json",
                    {"scenario": s.name, **result.to_dict()})
    return EXIT_OK


def cmd_budget(args):
    s = _get_scenario(args.scenario)
    if s.pulsec is None:
        raise UsageError(
            f"scenario {s.name!r} has no ancillary drive; the budget command "
            "sweeps ancillary-laser deviations and needs an ASA case"
        )
    out = _output_dir(args)
    gamma_d = _parse_rate_khz(args.gamma_d)
    gamma_d_prime = _parse_rate_khz(args.gamma_d_prime)
    report = errors.error_report(
        s,
        gamma_d=gamma_d or 0.1,
        gamma_d_prime=gamma_d_prime or 0.1,
        with_leakage=args.leakage,
        combined_epsilon=args.epsilon,
        combined_eta=args.eta,
        combined_gamma_d=gamma_d,
    )
    _write_json(out / f"{s.name}-budget.json", report.to_dict())
    _write_csv(out / f"{s.name}-epsilon-sweep.csv", ["epsilon", "infidelity"],
               report.epsilon_curve)
    _write_csv(out / f"{s.name}-eta-sweep.csv", ["eta", "infidelity"],
               report.eta_curve)
    return EXIT_OK


def cmd_reproduce(args):
    targets = sorted(reproduce.CHECKS) if args.target == "all" else [args.target]
    if any(t not in reproduce.CHECKS for t in targets):
        raise UsageError(
            f"unknown target {args.target!r}; known: all, {', '.join(sorted(reproduce.CHECKS))}"
        )
    all_passed = True
    for target in targets:
        results = reproduce.run_checks(target)
        print(f"== {target} ==")
        print(reproduce.format_table(results))
        all_passed &= all(r.passed for r in results)
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rydcz",
        description="Simulation and pulse-optimization toolkit for fast Rydberg "
                    "CZ gates with an ancillary drive.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evaluate one catalog scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--trajectories", action="store_true",
                   help="also write population CSV files")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimize", help="run the genetic-algorithm pulse search")
    p.add_argument("--scenario", required=True)
    p.add_argument("--variant", choices=optimizer.VARIANTS, default=None)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--population", type=int, default=None)
    p.add_argument("--generations", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON file with GAConfig overrides")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("budget", help="ancillary-drive error budget")
    p.add_argument("--scenario", required=True)
    p.add_argument("--epsilon", type=float, default=0.02)
    p.add_argument("--eta", type=float, default=0.02)
    p.add_argument("--gamma-d", default="50kHz", dest="gamma_d")
    p.add_argument("--gamma-d-prime", default="0", dest="gamma_d_prime")
    p.add_argument("--leakage", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("reproduce", help="compare measured values against the "
                                         "published benchmarks")
    p.add_argument("target", nargs="?", default="all")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
