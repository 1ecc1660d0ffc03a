"""Reference beamformers: MRT, center-point non-robust, exhaustive oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .objective import Beamformer, ProblemInstance, _as_vector
from .solver import InfeasibleError, SolverParams, SolverTrace, dinkelbach_solve
from .uncertainty import EveRegionGrid

_MAX_ORACLE_ANTENNAS = 3
_MAX_PHASE_STEPS = 720


@dataclass(frozen=True)
class OracleResult:
    """Best feasible grid candidate of the exhaustive search."""

    w: np.ndarray
    objective: float
    phase_steps: int


def mrt_bf(instance: ProblemInstance) -> Beamformer:
    """Phase alignment to the user channel at full per-antenna power."""
    hs = instance.h_tilde_s
    if np.all(hs == 0):
        raise ValueError("MRT undefined for an all-zero user channel")
    w = math.sqrt(instance.p_watts) * np.exp(1j * np.angle(hs))
    return Beamformer(w=w, p_watts=instance.p_watts)


def _collapse_to_center(grid: EveRegionGrid) -> EveRegionGrid:
    """Single-point grid at the region center, channel taken from the grid.

    Instances carry channels rather than the synthesis context, so the
    center channel is the grid row at the center when the center is a grid
    point (true for even per-axis counts) and the nearest grid row
    otherwise, ties toward the lower index.
    """
    center = grid.region.center
    coords = np.array([[p.x_km, p.y_km] for p in grid.points])
    dist_sq = (coords[:, 0] - center.x_km) ** 2 + (coords[:, 1] - center.y_km) ** 2
    idx = int(np.argmin(dist_sq))
    degenerate = grid.region.with_edge(0.0)
    return EveRegionGrid(
        region=degenerate,
        m1=1,
        m2=1,
        points=(center,),
        channels=grid.channels[idx : idx + 1],
        sigma2_w=grid.sigma2_w,
    )


def nonrobust_bf(
    instance: ProblemInstance,
    params: SolverParams | None = None,
    center_channels: list[np.ndarray] | None = None,
) -> tuple[Beamformer, SolverTrace]:
    """Robust solver run with every uncertainty region collapsed to its center.

    Pass center_channels (one noise-normalized vector per region) to pin the
    exact center-point channels; otherwise they are looked up on the grid.
    """
    if center_channels is not None:
        if len(center_channels) != instance.n_eves:
            raise ValueError("need one center channel per region")
        grids = []
        for grid, ch in zip(instance.eve_grids, center_channels):
            ch = np.asarray(ch, dtype=complex).reshape(1, -1)
            grids.append(
                EveRegionGrid(
                    region=grid.region.with_edge(0.0),
                    m1=1,
                    m2=1,
                    points=(grid.region.center,),
                    channels=ch,
                    sigma2_w=grid.sigma2_w,
                )
            )
    else:
        grids = [_collapse_to_center(g) for g in instance.eve_grids]
    collapsed = replace(instance, eve_grids=tuple(grids))
    return dinkelbach_solve(collapsed, params)


def _worst_case_objective(
    w_batch: np.ndarray, instance: ProblemInstance
) -> tuple[np.ndarray, np.ndarray]:
    """Unsmoothed discretized objective and user quadratic for a batch of w."""
    gamma_s = np.abs(w_batch @ instance.h_tilde_s.conj()) ** 2
    eve = np.abs(w_batch @ instance.eve_stack.conj().T) ** 2  # (B, G)
    if instance.mode == "ue":
        worst = np.max(eve, axis=1)
    else:
        worst = sum(np.max(eve[:, sl], axis=1) for sl in instance.eve_slices)
    return (1.0 + worst) / (1.0 + gamma_s), gamma_s


def exact_objective(w, instance: ProblemInstance) -> float:
    """Unsmoothed worst-case ratio (1 + worst Eve term) / (1 + user SNR)."""
    vec = _as_vector(w)
    obj, _ = _worst_case_objective(vec[None, :], instance)
    return float(obj[0])


def brute_force_oracle(
    instance: ProblemInstance, phase_steps: int, first_phase: float = 0.0
) -> OracleResult:
    """Exhaustive phase-grid search over the constant-modulus set.

    The first antenna is pinned at sqrt(p) * exp(j first_phase) (the
    objective is invariant to a global phase) and the remaining N - 1 phases
    sweep a uniform grid of phase_steps points.  Candidates violating the
    QoS floor are dropped; ties resolve to the lowest linear index.
    Unsmoothed objective, so this is the discretized ground truth.
    """
    n = instance.n_antennas
    if n > _MAX_ORACLE_ANTENNAS:
        raise ValueError(f"oracle supports N <= {_MAX_ORACLE_ANTENNAS}, got {n}")
    if not 1 <= phase_steps <= _MAX_PHASE_STEPS:
        raise ValueError(f"phase_steps must be in [1, {_MAX_PHASE_STEPS}]")

    sqrt_p = math.sqrt(instance.p_watts)
    grid = 2.0 * math.pi * np.arange(phase_steps) / phase_steps
    if n == 1:
        phases = np.zeros((1, 0))
    elif n == 2:
        phases = grid[:, None]
    else:
        a, b = np.meshgrid(grid, grid, indexing="ij")
        phases = np.column_stack([a.ravel(), b.ravel()])

    n_cand = phases.shape[0]
    best_obj = math.inf
    best_w = None
    chunk = 65536
    for start in range(0, n_cand, chunk):
        block = phases[start : start + chunk]
        w_batch = np.empty((block.shape[0], n), dtype=complex)
        w_batch[:, 0] = sqrt_p * np.exp(1j * first_phase)
        if n > 1:
            w_batch[:, 1:] = sqrt_p * np.exp(1j * (block + first_phase))
        obj, gamma_s = _worst_case_objective(w_batch, instance)
        obj = np.where(gamma_s >= instance.gamma_th, obj, math.inf)
        idx = int(np.argmin(obj))
        if obj[idx] < best_obj:
            best_obj = float(obj[idx])
            best_w = w_batch[idx].copy()

    if best_w is None or not math.isfinite(best_obj):
        raise InfeasibleError("no phase-grid candidate satisfies the QoS floor")
    return OracleResult(w=best_w, objective=best_obj, phase_steps=phase_steps)
