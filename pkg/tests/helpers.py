"""Independent oracles shared by the test modules.

Everything here re-derives expected values with plain loops, dense sweeps,
or finite differences so that the library is checked against arithmetic it
does not share code with.
"""

from __future__ import annotations

import math

import numpy as np

from secbeam import (
    EveRegion,
    EveRegionGrid,
    GroundPosition,
    ProblemInstance,
)


# ---------------------------------------------------------------------------
# instance builders
# ---------------------------------------------------------------------------

def point_grid(channel_row: np.ndarray, sigma2: float = 1.0) -> EveRegionGrid:
    """Single-point grid carrying one explicit normalized channel row."""
    region = EveRegion(0.0, 0.0, 0.0, 0.0)
    return EveRegionGrid(
        region=region,
        m1=1,
        m2=1,
        points=(GroundPosition(0.0, 0.0),),
        channels=np.asarray(channel_row, dtype=complex).reshape(1, -1),
        sigma2_w=sigma2,
    )


def explicit_grid(channels: np.ndarray, m1: int, m2: int) -> EveRegionGrid:
    """Grid with explicit channel rows on a dummy rectangle."""
    channels = np.asarray(channels, dtype=complex)
    region = EveRegion(0.0, 1.0, 0.0, 1.0)
    pts = tuple(
        GroundPosition(i / m1, j / m2) for i in range(m1) for j in range(m2)
    )
    return EveRegionGrid(
        region=region, m1=m1, m2=m2, points=pts, channels=channels, sigma2_w=1.0
    )


def random_instance(
    rng: np.random.Generator,
    n: int = 4,
    k: int = 2,
    m1: int = 2,
    m2: int = 2,
    mode: str = "ue",
    beta: float = 2.0,
    gamma_th: float = 0.5,
    p_watts: float = 1.0,
    scale: float = 0.7,
) -> ProblemInstance:
    """Small instance with O(1) random complex channels."""
    def crandn(*shape):
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    grids = [explicit_grid(crandn(m1 * m2, n), m1, m2) for _ in range(k)]
    return ProblemInstance(
        h_tilde_s=crandn(n),
        eve_grids=tuple(grids),
        gamma_th=gamma_th,
        p_watts=p_watts,
        beta=beta,
        mode=mode,
    )


def zero_eve_instance(
    h_tilde_s: np.ndarray,
    k: int = 2,
    m1: int = 2,
    m2: int = 3,
    mode: str = "ue",
    beta: float = 100.0,
    gamma_th: float = 0.0,
    p_watts: float = 1.0,
) -> ProblemInstance:
    """Instance whose every grid channel is exactly zero."""
    n = np.asarray(h_tilde_s).size
    grids = [explicit_grid(np.zeros((m1 * m2, n)), m1, m2) for _ in range(k)]
    return ProblemInstance(
        h_tilde_s=np.asarray(h_tilde_s, dtype=complex),
        eve_grids=tuple(grids),
        gamma_th=gamma_th,
        p_watts=p_watts,
        beta=beta,
        mode=mode,
    )


def random_modulus(rng: np.random.Generator, n: int, p_watts: float) -> np.ndarray:
    """Random vector with every entry at modulus sqrt(p)."""
    return math.sqrt(p_watts) * np.exp(1j * rng.uniform(-math.pi, math.pi, n))


# ---------------------------------------------------------------------------
# naive loop-based evaluations
# ---------------------------------------------------------------------------

def naive_snr(w: np.ndarray, h_tilde: np.ndarray) -> float:
    acc = 0.0 + 0.0j
    for hn, wn in zip(h_tilde, w):
        acc += complex(hn).conjugate() * complex(wn)
    return abs(acc) ** 2


def _grid_quads(w: np.ndarray, instance: ProblemInstance) -> list[list[float]]:
    """Per-region lists of |h^H w|^2, plain loops."""
    out = []
    for grid in instance.eve_grids:
        vals = [naive_snr(w, row) for row in grid.channels]
        out.append(vals)
    return out


def naive_lse(values, beta: float) -> float:
    m = max(values)
    return m + math.log(sum(math.exp(beta * (v - m)) for v in values)) / beta


def naive_gamma(w: np.ndarray, instance: ProblemInstance, eta: float) -> float:
    per_region = _grid_quads(w, instance)
    den = 1.0 + naive_snr(w, instance.h_tilde_s)
    if instance.mode == "ue":
        flat = [1.0 + q for vals in per_region for q in vals]
        num = naive_lse(flat, instance.beta)
    else:
        num = 1.0 + sum(naive_lse(vals, instance.beta) for vals in per_region)
    return num - eta * den


def naive_ratio(w: np.ndarray, instance: ProblemInstance) -> float:
    per_region = _grid_quads(w, instance)
    den = 1.0 + naive_snr(w, instance.h_tilde_s)
    if instance.mode == "ue":
        flat = [1.0 + q for vals in per_region for q in vals]
        num = naive_lse(flat, instance.beta)
    else:
        num = 1.0 + sum(naive_lse(vals, instance.beta) for vals in per_region)
    return num / den


def naive_worst_ratio(w: np.ndarray, instance: ProblemInstance) -> float:
    """Unsmoothed (1 + worst Eve term) / (1 + user SNR), plain loops."""
    per_region = _grid_quads(w, instance)
    gamma_s = naive_snr(w, instance.h_tilde_s)
    if instance.mode == "ue":
        worst = max(q for vals in per_region for q in vals)
    else:
        worst = sum(max(vals) for vals in per_region)
    return (1.0 + worst) / (1.0 + gamma_s)


def naive_asr(w: np.ndarray, instance: ProblemInstance) -> float:
    per_region = _grid_quads(w, instance)
    gamma_s = naive_snr(w, instance.h_tilde_s)
    if instance.mode == "ue":
        gamma_e = max(q for vals in per_region for q in vals)
    else:
        gamma_e = sum(max(vals) for vals in per_region)
    return max(0.0, math.log2(1.0 + gamma_s) - math.log2(1.0 + gamma_e))


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def central_directional(f, w: np.ndarray, direction: np.ndarray, t: float = 1e-6) -> float:
    """Central finite-difference directional derivative of a real function."""
    return (f(w + t * direction) - f(w - t * direction)) / (2.0 * t)


# ---------------------------------------------------------------------------
# dense sweep oracle for the single-constraint projection
# ---------------------------------------------------------------------------

def qos_sweep_oracle(
    c: np.ndarray,
    h_tilde_s: np.ndarray,
    gamma_th: float,
    levels: int = 8,
    pts: int = 41,
    shrink: float = 10.0,
) -> np.ndarray:
    """Minimizer of ||w - c|| s.t. |h_s^H w|^2 >= gamma_th by zoomed sweep.

    Candidates keep the component of c orthogonal to h_tilde_s and sweep the
    aligned component's magnitude s and phase over a refining 2-D grid,
    keeping only candidates with s^2 >= gamma_th.
    """
    hs = np.asarray(h_tilde_s, dtype=complex)
    hs_sq = float(np.real(np.vdot(hs, hs)))
    a = complex(np.vdot(hs, c))
    c_perp = c - (a / hs_sq) * hs

    s_lo, s_hi = 0.0, math.sqrt(gamma_th) * 1.5 + 2.0 * abs(a) + 1.0
    phi_lo, phi_hi = -math.pi, math.pi
    best = None
    for _ in range(levels):
        s_grid = np.linspace(s_lo, s_hi, pts)
        phi_grid = np.linspace(phi_lo, phi_hi, pts)
        ss, pp = np.meshgrid(s_grid, phi_grid, indexing="ij")
        alpha = (ss * np.exp(1j * pp)).ravel()
        feasible = alpha[np.abs(alpha) ** 2 >= gamma_th * (1.0 - 1e-12)]
        cand = c_perp[None, :] + (feasible[:, None] / hs_sq) * hs[None, :]
        dist = np.linalg.norm(cand - c[None, :], axis=1)
        idx = int(np.argmin(dist))
        best = cand[idx]
        s_best, phi_best = abs(feasible[idx]), float(np.angle(feasible[idx]))
        s_span = (s_hi - s_lo) / shrink
        phi_span = (phi_hi - phi_lo) / shrink
        s_lo, s_hi = max(0.0, s_best - s_span / 2), s_best + s_span / 2
        phi_lo, phi_hi = phi_best - phi_span / 2, phi_best + phi_span / 2
    return best
