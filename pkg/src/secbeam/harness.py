"""Experiment runner: builds problem instances, solves, writes CSV artifacts.

results.csv has one row per (sweep value, scheme) with the fixed header
sweep_var,scheme,mode,asr_worst,asr_worst_dense,qos_slack,iters_outer,
iters_inner_total,solve_ms,status.  Every solver row also gets a
trace_<row>.csv with eta and the consensus residual per iteration.  All
columns except the wall-clock solve_ms are deterministic for a fixed config
and seed.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, replace

import numpy as np

from . import objective
from .baselines import mrt_bf, nonrobust_bf
from .channel import GroundPosition, compose_channel, nominal_rain, sample_rain
from .config import ExperimentSpec, ScenarioConfig
from .objective import Beamformer, ProblemInstance
from .solver import InfeasibleError, SolverTrace, dinkelbach_solve
from .uncertainty import grid_channels

RESULTS_HEADER = (
    "sweep_var,scheme,mode,asr_worst,asr_worst_dense,qos_slack,"
    "iters_outer,iters_inner_total,solve_ms,status"
)

# validation grid is this many times denser per axis than the solve grid
DENSE_FACTOR = 4


@dataclass
class RowResult:
    """One results.csv row plus the trace behind it."""

    sweep_var: float | None
    scheme: str
    mode: str
    asr_worst: float
    asr_worst_dense: float
    qos_slack: float
    iters_outer: int
    iters_inner_total: int
    solve_ms: float
    status: str
    trace: SolverTrace | None = None


def build_instance(
    scenario: ScenarioConfig,
    mode: str,
    seed: int,
    m1: int | None = None,
    m2: int | None = None,
) -> ProblemInstance:
    """Synthesize the user channel and Eve grids for one scenario.

    Under the "sampled" rain policy one rng seeded here draws the user fade
    first, then one fade vector per region, so results are reproducible for
    a fixed seed.  The "nominal" policy is fully deterministic.
    """
    rng = np.random.default_rng(seed)
    sat = scenario.satellite
    link = scenario.link_budget
    if scenario.rain_policy == "sampled":
        lu_rain = sample_rain(link, rng, sat.n_antennas)
    else:
        lu_rain = nominal_rain(link, sat.n_antennas)
    lu = compose_channel(sat, scenario.lu_position, link, rain=lu_rain)
    grids = grid_channels(
        sat,
        link,
        scenario.eve_regions,
        m1 if m1 is not None else scenario.m1,
        m2 if m2 is not None else scenario.m2,
        rain_policy=scenario.rain_policy,
        rng=rng,
    )
    return ProblemInstance(
        h_tilde_s=lu.h_tilde,
        eve_grids=tuple(grids),
        gamma_th=scenario.gamma_th_linear,
        p_watts=scenario.p_watts,
        beta=scenario.beta,
        mode=mode,
    )


def _center_channels(scenario: ScenarioConfig) -> list[np.ndarray]:
    """Exact noise-normalized channels at every region center, nominal rain."""
    link = scenario.link_budget
    return [
        compose_channel(scenario.satellite, region.center, link).h_tilde
        for region in scenario.eve_regions
    ]


def _apply_sweep(scenario: ScenarioConfig, kind: str, value: float) -> ScenarioConfig:
    if kind == "power_dbmw":
        return replace(scenario, power_dbmw=value)
    if kind == "region_edge_km":
        regions = tuple(r.with_edge(value) for r in scenario.eve_regions)
        return replace(scenario, eve_regions=regions)
    if kind == "grid_density":
        return replace(scenario, m1=int(value), m2=int(value))
    return scenario


def _solve_row(
    scenario: ScenarioConfig,
    scheme: str,
    mode: str,
    instance: ProblemInstance,
    dense_instance: ProblemInstance,
) -> RowResult:
    status = "ok"
    trace = None
    iters_outer = 0
    iters_inner = 0
    t0 = time.perf_counter()
    try:
        if scheme == "robust":
            bf, trace = dinkelbach_solve(instance, scenario.solver)
        elif scheme == "nonrobust":
            bf, trace = nonrobust_bf(
                instance, scenario.solver, center_channels=_center_channels(scenario)
            )
        else:
            bf = mrt_bf(instance)
    except InfeasibleError:
        solve_ms = (time.perf_counter() - t0) * 1000.0
        return RowResult(
            sweep_var=None,
            scheme=scheme,
            mode=mode,
            asr_worst=math.nan,
            asr_worst_dense=math.nan,
            qos_slack=math.nan,
            iters_outer=0,
            iters_inner_total=0,
            solve_ms=solve_ms,
            status="infeasible",
        )
    solve_ms = (time.perf_counter() - t0) * 1000.0
    if trace is not None:
        iters_outer = trace.n_outer
        iters_inner = trace.total_inner
        if not (trace.outer_converged and all(trace.inner_converged)):
            status = "no_converge"
    return RowResult(
        sweep_var=None,
        scheme=scheme,
        mode=mode,
        asr_worst=objective.asr(bf, instance),
        asr_worst_dense=objective.asr(bf, dense_instance),
        qos_slack=objective.snr(bf, instance.h_tilde_s) - instance.gamma_th,
        iters_outer=iters_outer,
        iters_inner_total=iters_inner,
        solve_ms=solve_ms,
        status=status,
        trace=trace,
    )


def run_experiment(spec: ExperimentSpec, write: bool = True) -> list[RowResult]:
    """Run every (sweep value, scheme) cell and optionally write the CSVs.

    Channels are synthesized once per sweep value and shared by all schemes.
    Per-row seeds derive from spec.seed plus the row index so rows stay
    reproducible in isolation.  Infeasible or non-converged rows are
    recorded with their status and the run continues.
    """
    sweep_values: list[float | None]
    if spec.sweep.kind == "none":
        sweep_values = [None]
    else:
        sweep_values = list(spec.sweep.values)

    rows: list[RowResult] = []
    row_index = 0
    for value in sweep_values:
        scenario = (
            spec.scenario
            if value is None
            else _apply_sweep(spec.scenario, spec.sweep.kind, value)
        )
        seed = spec.seed + row_index
        try:
            instance = build_instance(scenario, spec.mode, seed)
            dense = build_instance(
                scenario,
                spec.mode,
                seed,
                m1=scenario.m1 * DENSE_FACTOR,
                m2=scenario.m2 * DENSE_FACTOR,
            )
        except (ValueError, InfeasibleError) as exc:
            raise RuntimeError(f"channel synthesis failed at sweep={value}: {exc}")
        for scheme in spec.schemes:
            row = _solve_row(scenario, scheme, spec.mode, instance, dense)
            row.sweep_var = value if value is not None else scenario.power_dbmw
            rows.append(row)
            row_index += 1

    if write:
        write_results(spec.output_dir, rows)
    return rows


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def write_results(output_dir: str, rows: list[RowResult]):
    """Write results.csv and one trace_<row>.csv per solver row."""
    os.makedirs(output_dir, exist_ok=True)
    lines = [RESULTS_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [
                    _fmt(row.sweep_var),
                    row.scheme,
                    row.mode,
                    _fmt(row.asr_worst),
                    _fmt(row.asr_worst_dense),
                    _fmt(row.qos_slack),
                    str(row.iters_outer),
                    str(row.iters_inner_total),
                    _fmt(row.solve_ms),
                    row.status,
                ]
            )
        )
    path = os.path.join(output_dir, "results.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    for idx, row in enumerate(rows):
        if row.trace is None:
            continue
        write_trace(os.path.join(output_dir, f"trace_{idx}.csv"), row.trace)


def write_trace(path: str, trace: SolverTrace):
    """Per-iteration eta and consensus residual of one solve."""
    lines = ["outer_iter,inner_iter,eta,residual"]
    for outer, records in enumerate(trace.inner):
        eta = trace.eta[outer + 1]  # eta[0] is the initial 0
        for inner, rec in enumerate(records):
            lines.append(f"{outer},{inner},{_fmt(eta)},{_fmt(rec.residual)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def beampattern_box(scenario: ScenarioConfig, margin_km: float = 60.0):
    """Bounding box covering the user and every Eve region, plus a margin."""
    xs = [scenario.lu_position.x_km]
    ys = [scenario.lu_position.y_km]
    for r in scenario.eve_regions:
        xs += [r.x_lower_km, r.x_upper_km]
        ys += [r.y_lower_km, r.y_upper_km]
    return (
        min(xs) - margin_km,
        max(xs) + margin_km,
        min(ys) - margin_km,
        max(ys) + margin_km,
    )


def emit_beampattern(
    w: Beamformer | np.ndarray,
    scenario: ScenarioConfig,
    resolution: int = 101,
    path: str | None = None,
) -> np.ndarray:
    """Received-power surface |h_tilde(pos)^H w|^2 in dB over the scene.

    Samples a resolution x resolution grid over the bounding box of the user
    and all Eve regions under nominal rain.  Returns an (resolution^2, 3)
    array of (x_km, y_km, power_db) rows, x-major, and writes them as CSV
    when a path is given.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    vec = w.w if isinstance(w, Beamformer) else np.asarray(w, dtype=complex)
    x_lo, x_hi, y_lo, y_hi = beampattern_box(scenario)
    xs = np.linspace(x_lo, x_hi, resolution)
    ys = np.linspace(y_lo, y_hi, resolution)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    positions = np.column_stack([gx.ravel(), gy.ravel()])
    power = beampattern_samples(vec, scenario, positions)
    out = np.column_stack([positions, power])
    if path is not None:
        lines = ["x_km,y_km,power_db"]
        for x, y, p in out:
            lines.append(f"{_fmt(x)},{_fmt(y)},{_fmt(p)}")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    return out


def beampattern_samples(
    w, scenario: ScenarioConfig, positions_km: np.ndarray
) -> np.ndarray:
    """Received power in dB at arbitrary ground positions, nominal rain."""
    from .channel import _compose_batch, noise_variance

    vec = w.w if isinstance(w, Beamformer) else np.asarray(w, dtype=complex)
    positions_km = np.asarray(positions_km, dtype=float)
    link = scenario.link_budget
    sat = scenario.satellite
    rain = nominal_rain(link, sat.n_antennas)
    h = _compose_batch(
        sat, positions_km, link, np.broadcast_to(rain, (positions_km.shape[0], sat.n_antennas))
    )
    h_tilde = h / math.sqrt(noise_variance(link))
    power = np.abs(h_tilde.conj() @ vec) ** 2
    return 10.0 * np.log10(np.maximum(power, 1e-300))
