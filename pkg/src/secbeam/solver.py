"""Fractional programming solver for constant-modulus secrecy beamforming.

The outer loop is Dinkelbach's method on the smoothed worst-case ratio: at
iterate w the parameter becomes eta = ratio(w) and the subproblem minimizes
Gamma(w, eta) subject to per-antenna constant modulus and the user QoS floor.
Each subproblem runs a non-convex ADMM with the splitting w_tilde = x:

    x      <- entrywise projection of w_tilde + v/rho onto |x_n| = sqrt(p)
    w_tilde <- argmin ||w - c||^2  s.t.  w^H H_s w >= gamma_th,
               c = x - (grad Gamma(x) + v) / (rho + L)
    v      <- v + rho (w_tilde - x)

Both inner updates are closed-form.  L is a curvature bound for the smoothed
objective; the analytic bound is safe but very loose, so the default
"safeguarded" mode starts from the frozen-softmax curvature and doubles L
whenever the descent inequality of the linearized step fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .objective import (
    Beamformer,
    ProblemInstance,
    _as_vector,
    dinkelbach_ratio,
    gamma_gradient,
    gamma_objective,
    snr,
)

LIPSCHITZ_MODES = ("analytic", "safeguarded")


class InfeasibleError(Exception):
    """QoS floor unattainable at the configured per-antenna power."""


@dataclass(frozen=True)
class SolverParams:
    """Knobs of the ADMM / Dinkelbach iteration."""

    rho: float = 300.0
    epsilon: float = 1e-4
    delta: float = 1e-5
    max_outer: int = 50
    max_inner: int = 5000
    lipschitz_mode: str = "safeguarded"

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be > 0, got {self.rho}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("max_outer and max_inner must be >= 1")
        if self.lipschitz_mode not in LIPSCHITZ_MODES:
            raise ValueError(f"lipschitz_mode must be one of {LIPSCHITZ_MODES}")


@dataclass
class InnerRecord:
    """One ADMM iteration: consensus residual, Lagrangian value, QoS slack."""

    residual: float
    aug_lagrangian: float
    qos_slack: float


@dataclass
class AdmmResult:
    """Outcome of one subproblem solve."""

    w_tilde: np.ndarray
    w_next: np.ndarray
    records: list[InnerRecord]
    converged: bool
    n_iter: int
    modulus_deviation: float
    lipschitz_final: float


@dataclass
class SolverTrace:
    """Per-outer-iteration history of a dinkelbach_solve run."""

    eta: list[float] = field(default_factory=list)
    inner: list[list[InnerRecord]] = field(default_factory=list)
    inner_iterations: list[int] = field(default_factory=list)
    inner_converged: list[bool] = field(default_factory=list)
    modulus_deviation: list[float] = field(default_factory=list)
    outer_converged: bool = False
    final_qos_slack: float = math.nan

    @property
    def n_outer(self) -> int:
        return len(self.inner)

    @property
    def total_inner(self) -> int:
        return sum(self.inner_iterations)


def init_w(instance: ProblemInstance) -> Beamformer:
    """Phase-aligned full-power start w_n = sqrt(p) exp(j arg h_tilde_s,n).

    This maximizes the user SNR over the constant-modulus set, so failing the
    QoS check here proves the problem infeasible at power p.
    """
    hs = instance.h_tilde_s
    w = math.sqrt(instance.p_watts) * np.exp(1j * np.angle(hs))
    if snr(w, hs) < instance.gamma_th * (1.0 - 1e-12):
        raise InfeasibleError(
            f"QoS gamma_th={instance.gamma_th} unattainable at power "
            f"p={instance.p_watts} W (best SNR {snr(w, hs):.6g})"
        )
    return Beamformer(w=w, p_watts=instance.p_watts)


def update_x(
    w_tilde: np.ndarray,
    x_prev: np.ndarray,
    v: np.ndarray,
    rho: float,
    p_watts: float,
) -> np.ndarray:
    """Entrywise projection of w_tilde + v/rho onto the modulus circle.

    Zero entries have no nearest point, so they keep the previous x entry.
    """
    u = w_tilde + v / rho
    x = np.array(x_prev, dtype=complex, copy=True)
    mask = u != 0
    x[mask] = math.sqrt(p_watts) * u[mask] / np.abs(u[mask])
    return x


def qos_projection(c: np.ndarray, h_tilde_s: np.ndarray, gamma_th: float) -> np.ndarray:
    """Nearest point to c satisfying |h_tilde_s^H w|^2 >= gamma_th.

    Splitting w along and orthogonal to h_tilde_s, only the along-component
    a = h_tilde_s^H c matters: if |a|^2 >= gamma_th, c is already feasible;
    otherwise the along-component is pushed out to the constraint circle,
    keeping the phase of a (phase 0 when a = 0).
    """
    hs_norm_sq = float(np.real(np.vdot(h_tilde_s, h_tilde_s)))
    a = np.vdot(h_tilde_s, c)
    if abs(a) ** 2 >= gamma_th:
        return np.array(c, dtype=complex, copy=True)
    if hs_norm_sq == 0.0:
        raise InfeasibleError("QoS floor with a zero user channel")
    phase = np.exp(1j * np.angle(a)) if a != 0 else 1.0 + 0.0j
    c_perp = c - (a / hs_norm_sq) * h_tilde_s
    return c_perp + (math.sqrt(gamma_th) * phase / hs_norm_sq) * h_tilde_s


def update_w(
    x: np.ndarray,
    v: np.ndarray,
    instance: ProblemInstance,
    eta: float,
    lipschitz: float,
    rho: float,
) -> np.ndarray:
    """Linearized proximal step followed by the QoS projection."""
    grad = gamma_gradient(x, instance, eta)
    c = x - (grad + v) / (rho + lipschitz)
    return qos_projection(c, instance.h_tilde_s, instance.gamma_th)


def update_v(
    v: np.ndarray, w_tilde: np.ndarray, x: np.ndarray, rho: float
) -> np.ndarray:
    """Dual ascent on the consensus constraint w_tilde = x."""
    return v + rho * (w_tilde - x)


def lipschitz_bound(
    instance: ProblemInstance, eta: float, mode: str = "analytic"
) -> float:
    """Curvature bound for the smoothed objective's gradient.

    "analytic" is the conservative global bound over the power ball
    ||w||^2 = pN; it is safe but can overshoot the observed curvature by
    orders of magnitude.  "safeguarded" returns the frozen-softmax curvature
    used as the starting value of the doubling safeguard in admm_solve.
    """
    if mode not in LIPSCHITZ_MODES:
        raise ValueError(f"mode must be one of {LIPSCHITZ_MODES}")
    norms = instance.eve_row_norms_sq
    total = float(np.sum(norms))
    biggest = float(np.max(norms)) if norms.size else 0.0
    hs_sq = float(np.real(np.vdot(instance.h_tilde_s, instance.h_tilde_s)))
    if mode == "analytic":
        coupling = (
            4.0 * instance.beta * total * biggest
            * instance.p_watts * instance.n_antennas
        )
        return 2.0 * total + coupling + 2.0 * abs(eta) * hs_sq
    return 2.0 * (biggest + abs(eta) * hs_sq)


def admm_solve(
    instance: ProblemInstance,
    eta: float,
    params: SolverParams,
    warm_start,
) -> AdmmResult:
    """Solve one Dinkelbach subproblem by non-convex consensus ADMM.

    Cycles update_x, update_w, update_v from the warm start until the
    consensus residual ||w_tilde - x|| drops below delta or max_inner is hit;
    on non-convergence the lowest-residual iterate is returned with the
    converged flag cleared.  w_next is the outer-loop iterate: w_tilde
    itself, or its modulus projection when the per-antenna moduli deviate
    beyond delta.
    """
    w_tilde = np.array(_as_vector(warm_start), dtype=complex, copy=True)
    x = w_tilde.copy()
    v = np.zeros_like(w_tilde)
    rho = params.rho
    lipschitz = lipschitz_bound(instance, eta, params.lipschitz_mode)

    records: list[InnerRecord] = []
    converged = False
    best_residual = math.inf
    best_w = w_tilde.copy()
    sqrt_p = math.sqrt(instance.p_watts)

    for _ in range(params.max_inner):
        x = update_x(w_tilde, x, v, rho, instance.p_watts)
        grad = gamma_gradient(x, instance, eta)
        gamma_x = gamma_objective(x, instance, eta)
        while True:
            c = x - (grad + v) / (rho + lipschitz)
            w_new = qos_projection(c, instance.h_tilde_s, instance.gamma_th)
            if params.lipschitz_mode == "analytic":
                break
            step = w_new - x
            step_sq = float(np.real(np.vdot(step, step)))
            surrogate = (
                gamma_x
                + float(np.real(np.vdot(grad, step)))
                + 0.5 * lipschitz * step_sq
            )
            slack = 1e-10 * (1.0 + abs(gamma_x))
            if gamma_objective(w_new, instance, eta) <= surrogate + slack:
                break
            if step_sq <= 1e-28 or lipschitz > 1e18:
                break
            lipschitz *= 2.0
        v = update_v(v, w_new, x, rho)
        w_tilde = w_new
        residual = float(np.linalg.norm(w_tilde - x))
        records.append(
            InnerRecord(
                residual=residual,
                aug_lagrangian=gamma_objective(w_tilde, instance, eta)
                + float(np.real(np.vdot(v, w_tilde - x)))
                + 0.5 * rho * residual**2,
                qos_slack=snr(w_tilde, instance.h_tilde_s) - instance.gamma_th,
            )
        )
        if residual < best_residual:
            best_residual = residual
            best_w = w_tilde.copy()
        if residual <= params.delta:
            converged = True
            break

    if not converged:
        w_tilde = best_w
    deviation = float(np.max(np.abs(np.abs(w_tilde) - sqrt_p)))
    if deviation > params.delta:
        w_next = update_x(w_tilde, x, np.zeros_like(v), rho, instance.p_watts)
    else:
        w_next = w_tilde.copy()
    return AdmmResult(
        w_tilde=w_tilde,
        w_next=w_next,
        records=records,
        converged=converged,
        n_iter=len(records),
        modulus_deviation=deviation,
        lipschitz_final=lipschitz,
    )


def dinkelbach_solve(
    instance: ProblemInstance, params: SolverParams | None = None
) -> tuple[Beamformer, SolverTrace]:
    """Full solve: Dinkelbach outer loop around the ADMM subproblem.

    Starts from the phase-aligned beamformer (raising InfeasibleError when
    even that misses the QoS floor), iterates eta <- ratio(w) and one
    subproblem solve per outer step, and stops when consecutive eta values
    differ by at most epsilon.  A subproblem result that fails to improve the
    current objective (Gamma > 0 at its own eta) is rejected, which keeps the
    smoothed ratio non-increasing and forces termination on the next check.

    The returned beamformer is the final iterate re-projected to exact
    per-antenna modulus sqrt(p).  If the projection breaks the QoS floor the
    subproblem is re-run with a tighter delta before giving up.
    """
    if params is None:
        params = SolverParams()
    w_vec = init_w(instance).w
    trace = SolverTrace()
    trace.eta.append(0.0)
    eta_prev = 0.0
    delta_scale = 1.0

    for _ in range(params.max_outer):
        eta = dinkelbach_ratio(w_vec, instance)
        trace.eta.append(eta)
        run_params = params
        if delta_scale != 1.0:
            run_params = SolverParams(
                rho=params.rho,
                epsilon=params.epsilon,
                delta=params.delta * delta_scale,
                max_outer=params.max_outer,
                max_inner=params.max_inner,
                lipschitz_mode=params.lipschitz_mode,
            )
        result = admm_solve(instance, eta, run_params, w_vec)
        trace.inner.append(result.records)
        trace.inner_iterations.append(result.n_iter)
        trace.inner_converged.append(result.converged)
        trace.modulus_deviation.append(result.modulus_deviation)
        candidate = result.w_next
        if gamma_objective(candidate, instance, eta) <= 1e-12 * (1.0 + abs(eta)):
            w_vec = candidate
        if abs(eta - eta_prev) <= params.epsilon:
            trace.outer_converged = True
            # tighten the subproblem if exact reprojection would break QoS
            final = _project_modulus(w_vec, instance.p_watts)
            qos_ok = snr(final, instance.h_tilde_s) >= instance.gamma_th * (1.0 - 1e-6)
            if qos_ok or delta_scale <= 1e-3:
                break
            delta_scale *= 1e-2
            trace.outer_converged = False
        eta_prev = eta

    final = _project_modulus(w_vec, instance.p_watts)
    trace.final_qos_slack = snr(final, instance.h_tilde_s) - instance.gamma_th
    return Beamformer(w=final, p_watts=instance.p_watts), trace


def _project_modulus(w: np.ndarray, p_watts: float) -> np.ndarray:
    """Exact constant-modulus projection, zero entries take phase 0."""
    phases = np.angle(w)
    return math.sqrt(p_watts) * np.exp(1j * phases)
