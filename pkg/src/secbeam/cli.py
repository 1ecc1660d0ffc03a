"""Command-line front end.

Subcommands: solve (single scenario), sweep (run the configured sweep),
beampattern (received-power surface of a solved beamformer), print-defaults
(canonical default config JSON), oracle-check (solver vs exhaustive search
on a small instance).  Exit codes: 0 success, 2 bad configuration,
3 infeasible scenario, 4 solver non-convergence on any row.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

from . import baselines, objective, solver
from .config import (
    SCHEMES,
    ConfigError,
    ExperimentSpec,
    default_spec,
    emit_defaults,
    parse_config,
)
from .harness import build_instance, emit_beampattern, run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NO_CONVERGE = 4


def _load_spec(args) -> ExperimentSpec:
    spec = parse_config(args.config) if args.config else default_spec()
    if getattr(args, "mode", None):
        spec = replace(spec, mode=args.mode)
    if getattr(args, "out", None):
        spec = replace(spec, output_dir=args.out)
    if getattr(args, "seed", None) is not None:
        spec = replace(spec, seed=args.seed)
    if getattr(args, "schemes", None):
        schemes = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
        spec = replace(spec, schemes=schemes)
    return spec


def _exit_code(rows) -> int:
    statuses = {row.status for row in rows}
    if "infeasible" in statuses:
        return EXIT_INFEASIBLE
    if "no_converge" in statuses:
        return EXIT_NO_CONVERGE
    return EXIT_OK


def _print_rows(rows):
    for row in rows:
        print(
            f"  sweep={row.sweep_var:g} scheme={row.scheme:9s} mode={row.mode} "
            f"asr={row.asr_worst:.6f} asr_dense={row.asr_worst_dense:.6f} "
            f"outer={row.iters_outer} inner={row.iters_inner_total} "
            f"t={row.solve_ms:.0f}ms status={row.status}"
        )


def cmd_solve(args) -> int:
    spec = _load_spec(args)
    spec = replace(spec, sweep=replace(spec.sweep, kind="none", values=()))
    rows = run_experiment(spec)
    print(f"wrote {os.path.join(spec.output_dir, 'results.csv')}")
    _print_rows(rows)
    return _exit_code(rows)


def cmd_sweep(args) -> int:
    spec = _load_spec(args)
    if spec.sweep.kind == "none":
        print("config defines no sweep (sweep.kind is 'none')", file=sys.stderr)
        return EXIT_CONFIG
    rows = run_experiment(spec)
    print(f"wrote {os.path.join(spec.output_dir, 'results.csv')}")
    _print_rows(rows)
    return _exit_code(rows)


def cmd_beampattern(args) -> int:
    spec = _load_spec(args)
    scenario = spec.scenario
    instance = build_instance(scenario, spec.mode, spec.seed)
    scheme = args.scheme
    try:
        if scheme == "robust":
            bf, _ = solver.dinkelbach_solve(instance, scenario.solver)
        elif scheme == "mrt":
            bf = baselines.mrt_bf(instance)
        else:
            bf, _ = baselines.nonrobust_bf(instance, scenario.solver)
    except solver.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    os.makedirs(spec.output_dir, exist_ok=True)
    path = os.path.join(spec.output_dir, "beampattern.csv")
    emit_beampattern(bf, scenario, resolution=args.resolution, path=path)
    print(f"wrote {path} ({args.resolution}x{args.resolution} samples, scheme={scheme})")
    return EXIT_OK


def cmd_print_defaults(_args) -> int:
    print(emit_defaults())
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    """Compare the solver against the exhaustive oracle on a 2-antenna case."""
    spec = _load_spec(args)
    scenario = spec.scenario
    sat = scenario.satellite
    small_sat = replace(
        sat,
        antenna_offsets_m=sat.antenna_offsets_m[:2],
        beam_centers=sat.beam_centers[:2],
    )
    small = replace(
        scenario,
        satellite=small_sat,
        eve_regions=scenario.eve_regions[:1],
        m1=2,
        m2=2,
    )
    instance = build_instance(small, spec.mode, spec.seed)
    try:
        bf, _ = solver.dinkelbach_solve(instance, small.solver)
        oracle = baselines.brute_force_oracle(instance, args.phase_steps)
    except solver.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    solved = baselines.exact_objective(bf, instance)
    n_points = sum(g.n_points for g in instance.eve_grids)
    tol = max(0.05 * oracle.objective, math.log(n_points) / instance.beta)
    gap = solved - oracle.objective
    ok = abs(gap) <= tol
    print(
        f"solver objective {solved:.6f}, oracle objective {oracle.objective:.6f} "
        f"({oracle.phase_steps} phase steps), gap {gap:+.6f}, tolerance {tol:.6f}"
    )
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_NO_CONVERGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secbeam",
        description="Worst-case secrecy-rate beamforming for multibeam satellite downlinks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, schemes_flag=True):
        p.add_argument("--config", help="JSON config file (defaults apply if omitted)")
        p.add_argument("--mode", choices=["ue", "ce"], help="eavesdropper model")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="base RNG seed")
        if schemes_flag:
            p.add_argument(
                "--schemes",
                help=f"comma-separated subset of {','.join(SCHEMES)}",
            )

    p = sub.add_parser("solve", help="solve the scenario once per scheme")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="run the sweep defined in the config")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("beampattern", help="emit the received-power surface")
    common(p, schemes_flag=False)
    p.add_argument("--scheme", choices=list(SCHEMES), default="robust")
    p.add_argument("--resolution", type=int, default=101)
    p.set_defaults(func=cmd_beampattern)

    p = sub.add_parser("print-defaults", help="print the default config JSON")
    p.set_defaults(func=cmd_print_defaults)

    p = sub.add_parser("oracle-check", help="solver vs exhaustive search, N=2")
    common(p, schemes_flag=False)
    p.add_argument("--phase-steps", type=int, default=720)
    p.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except solver.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
