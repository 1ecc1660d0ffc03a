"""Worst-case secrecy objective, its log-sum-exp smoothing and gradient.

Two eavesdropper models share one interface.  In mode "ue" the adversaries do
not cooperate: the binding term is the single worst grid point across all
regions.  In mode "ce" they combine their observations: per-region worst-case
SNRs add up.  Smoothing replaces the discrete max with a log-sum-exp of
inverse temperature beta, which keeps every expression differentiable.

The gradient convention for the complex beamformer w is
Gamma(w + delta) ~= Gamma(w) + Re{grad^H delta}, so that for the quadratic
w^H H w (H Hermitian) the gradient is 2 H w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .uncertainty import EveRegionGrid

MODES = ("ue", "ce")


@dataclass(frozen=True)
class Beamformer:
    """Constant-modulus beamforming vector: every |w_n| equals sqrt(p)."""

    w: np.ndarray
    p_watts: float

    def __post_init__(self):
        w = np.asarray(self.w, dtype=complex)
        object.__setattr__(self, "w", w)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("w must be a 1-D vector")
        if not self.p_watts > 0:
            raise ValueError(f"p_watts must be > 0, got {self.p_watts}")
        dev = np.max(np.abs(np.abs(w) - math.sqrt(self.p_watts)))
        if dev > 1e-9:
            raise ValueError(f"per-antenna modulus deviates from sqrt(p) by {dev:.3g}")


@dataclass(frozen=True)
class ProblemInstance:
    """One beamforming problem: user channel, Eve grids, QoS and smoothing."""

    h_tilde_s: np.ndarray
    eve_grids: tuple[EveRegionGrid, ...]
    gamma_th: float
    p_watts: float
    beta: float
    mode: str = "ue"

    def __post_init__(self):
        hs = np.asarray(self.h_tilde_s, dtype=complex)
        object.__setattr__(self, "h_tilde_s", hs)
        object.__setattr__(self, "eve_grids", tuple(self.eve_grids))
        if hs.ndim != 1 or hs.size < 1:
            raise ValueError("h_tilde_s must be a 1-D vector")
        if len(self.eve_grids) < 1:
            raise ValueError("need at least one Eve grid")
        for g in self.eve_grids:
            if g.channels.shape[1] != hs.size:
                raise ValueError("grid channel width does not match h_tilde_s")
        if not self.gamma_th >= 0:
            raise ValueError(f"gamma_th must be >= 0, got {self.gamma_th}")
        if not self.p_watts > 0:
            raise ValueError(f"p_watts must be > 0, got {self.p_watts}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def n_antennas(self) -> int:
        return self.h_tilde_s.size

    @property
    def n_eves(self) -> int:
        return len(self.eve_grids)

    @cached_property
    def eve_stack(self) -> np.ndarray:
        """All grid channels stacked, shape (G_total, N)."""
        return np.concatenate([g.channels for g in self.eve_grids], axis=0)

    @cached_property
    def eve_slices(self) -> tuple[slice, ...]:
        """Row slice of eve_stack belonging to each region, in order."""
        slices = []
        start = 0
        for g in self.eve_grids:
            slices.append(slice(start, start + g.n_points))
            start += g.n_points
        return tuple(slices)

    @cached_property
    def eve_row_norms_sq(self) -> np.ndarray:
        """Squared norm of every stacked grid channel row."""
        return np.sum(np.abs(self.eve_stack) ** 2, axis=1)


def _as_vector(w) -> np.ndarray:
    vec = w.w if isinstance(w, Beamformer) else np.asarray(w, dtype=complex)
    if vec.ndim != 1:
        raise ValueError("beamformer must be a 1-D vector")
    return vec


def snr(w, h_tilde: np.ndarray) -> float:
    """Receive SNR |h_tilde^H w|^2 of a noise-normalized channel."""
    vec = _as_vector(w)
    h = np.asarray(h_tilde, dtype=complex)
    if h.shape != vec.shape:
        raise ValueError(f"shape mismatch: {h.shape} vs {vec.shape}")
    return float(np.abs(np.vdot(h, vec)) ** 2)


def _eve_quadratics(vec: np.ndarray, instance: ProblemInstance) -> np.ndarray:
    """w^H H w for every stacked grid channel, shape (G_total,)."""
    z = instance.eve_stack.conj() @ vec
    return np.abs(z) ** 2


def worst_eve_snr(w, instance: ProblemInstance) -> float:
    """Largest per-grid-point Eve SNR across all regions."""
    return float(np.max(_eve_quadratics(_as_vector(w), instance)))


def asr(w, instance: ProblemInstance) -> float:
    """Worst-case achievable secrecy rate over the grid, bits/s/Hz.

    Mode "ue" takes the single worst grid point; mode "ce" sums the
    per-region worst-case SNRs.  Negative rates clamp to zero.
    """
    vec = _as_vector(w)
    gamma_s = snr(vec, instance.h_tilde_s)
    quads = _eve_quadratics(vec, instance)
    if instance.mode == "ue":
        gamma_e = float(np.max(quads))
    else:
        gamma_e = float(sum(np.max(quads[sl]) for sl in instance.eve_slices))
    rate = math.log2(1.0 + gamma_s) - math.log2(1.0 + gamma_e)
    return max(0.0, rate)


def lse(values, beta: float) -> float:
    """Smoothed maximum: log-sum-exp of the values at inverse temperature beta.

    Computed max-shifted so that exponents never overflow.  Satisfies
    max(v) <= lse(v, beta) <= max(v) + ln(len(v)) / beta.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("lse of an empty list")
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    m = float(np.max(v))
    return m + math.log(float(np.sum(np.exp(beta * (v - m))))) / beta


def _softmax_shifted(values: np.ndarray, beta: float) -> np.ndarray:
    e = np.exp(beta * (values - np.max(values)))
    return e / np.sum(e)


def gamma_objective(w, instance: ProblemInstance, eta: float) -> float:
    """Smoothed Dinkelbach objective Gamma at parameter eta.

    Mode "ue": lse over all grid points of (1 + w^H H w) minus
    eta * (1 + w^H H_s w).  Mode "ce": 1 plus the per-region lse of the
    grid quadratics (summed over regions) minus the same eta term.
    """
    vec = _as_vector(w)
    quads = _eve_quadratics(vec, instance)
    den = 1.0 + snr(vec, instance.h_tilde_s)
    if instance.mode == "ue":
        num = lse(1.0 + quads, instance.beta)
    else:
        num = 1.0 + sum(lse(quads[sl], instance.beta) for sl in instance.eve_slices)
    return num - eta * den


def gamma_gradient(w, instance: ProblemInstance, eta: float) -> np.ndarray:
    """Conjugate-coordinate gradient of gamma_objective at w.

    Softmax weights replace the lse: in mode "ue" one softmax spans every
    grid point, in mode "ce" each region gets its own softmax (each summing
    to one).  The result satisfies
    Gamma(w + delta) ~= Gamma(w) + Re{grad^H delta}.
    """
    vec = _as_vector(w)
    z = instance.eve_stack.conj() @ vec  # h^H w per grid point
    quads = np.abs(z) ** 2
    if instance.mode == "ue":
        weights = _softmax_shifted(quads, instance.beta)
    else:
        weights = np.empty_like(quads)
        for sl in instance.eve_slices:
            weights[sl] = _softmax_shifted(quads[sl], instance.beta)
    # sum_q s_q * 2 H_q w with H_q = h_q h_q^H, vectorized over rows
    grad_eve = 2.0 * (instance.eve_stack.T @ (weights * z))
    hs = instance.h_tilde_s
    grad_s = 2.0 * eta * hs * np.vdot(hs, vec)
    return grad_eve - grad_s


def dinkelbach_ratio(w, instance: ProblemInstance) -> float:
    """Smoothed worst-case ratio whose root Gamma(w, eta) = 0 defines eta.

    Mode "ue": lse(1 + quadratics) / (1 + user SNR); mode "ce" adds the
    per-region lse terms to 1 before dividing.
    """
    vec = _as_vector(w)
    quads = _eve_quadratics(vec, instance)
    den = 1.0 + snr(vec, instance.h_tilde_s)
    if instance.mode == "ue":
        num = lse(1.0 + quads, instance.beta)
    else:
        num = 1.0 + sum(lse(quads[sl], instance.beta) for sl in instance.eve_slices)
    return num / den
