"""Secrecy metrics, smoothed maxima, subproblem objective and gradient."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secbeam import (
    Beamformer,
    ProblemInstance,
    asr,
    dinkelbach_ratio,
    gamma_gradient,
    gamma_objective,
    lse,
    snr,
    worst_eve_snr,
)

from helpers import (
    central_directional,
    naive_asr,
    naive_gamma,
    naive_ratio,
    naive_snr,
    point_grid,
    random_instance,
    random_modulus,
    zero_eve_instance,
)


class TestBeamformer:
    def test_modulus_enforced(self):
        with pytest.raises(ValueError):
            Beamformer(w=np.array([1.0 + 0j, 0.5 + 0j]), p_watts=1.0)

    def test_exact_modulus_accepted(self):
        bf = Beamformer(w=2.0 * np.exp(1j * np.array([0.3, -1.2])), p_watts=4.0)
        assert bf.w.shape == (2,)

    def test_power_positive(self):
        with pytest.raises(ValueError):
            Beamformer(w=np.array([0j]), p_watts=0.0)


class TestInstanceValidation:
    def test_mode_checked(self):
        with pytest.raises(ValueError):
            random_instance(np.random.default_rng(0), mode="both")

    def test_channel_width_checked(self):
        inst = random_instance(np.random.default_rng(0), n=3)
        with pytest.raises(ValueError):
            ProblemInstance(
                h_tilde_s=np.ones(4, dtype=complex),
                eve_grids=inst.eve_grids,
                gamma_th=1.0,
                p_watts=1.0,
                beta=1.0,
            )

    def test_negative_threshold_rejected(self):
        inst = random_instance(np.random.default_rng(0))
        with pytest.raises(ValueError):
            ProblemInstance(
                h_tilde_s=inst.h_tilde_s,
                eve_grids=inst.eve_grids,
                gamma_th=-1.0,
                p_watts=1.0,
                beta=1.0,
            )

    def test_region_slices_partition_stack(self):
        inst = random_instance(np.random.default_rng(3), k=3, m1=2, m2=3)
        total = sum(sl.stop - sl.start for sl in inst.eve_slices)
        assert total == inst.eve_stack.shape[0] == 3 * 6


class TestSnr:
    def test_basis_channel_full_power(self):
        h = np.zeros(4, dtype=complex)
        h[0] = 1.0
        w = math.sqrt(2.5) * np.ones(4, dtype=complex)
        assert snr(w, h) == pytest.approx(2.5, rel=1e-15)

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(1)
        h = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        w = random_modulus(rng, 5, 1.0)
        assert snr(w * np.exp(0.7j), h) == pytest.approx(snr(w, h), rel=1e-12)

    def test_matches_naive_loop(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            h = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            w = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            assert snr(w, h) == pytest.approx(naive_snr(w, h), rel=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            snr(np.ones(3, dtype=complex), np.ones(4, dtype=complex))


class TestAsr:
    def test_single_eavesdropper_substitution(self):
        inst = ProblemInstance(
            h_tilde_s=np.array([math.sqrt(3.0)], dtype=complex),
            eve_grids=(point_grid([1.0]),),
            gamma_th=0.0,
            p_watts=1.0,
            beta=100.0,
            mode="ue",
        )
        assert asr(np.array([1.0 + 0j]), inst) == pytest.approx(1.0, rel=1e-12)

    def test_clamped_at_zero_when_overheard(self):
        inst = ProblemInstance(
            h_tilde_s=np.array([math.sqrt(3.0)], dtype=complex),
            eve_grids=(point_grid([2.0]),),
            gamma_th=0.0,
            p_watts=1.0,
            beta=100.0,
            mode="ue",
        )
        assert asr(np.array([1.0 + 0j]), inst) == 0.0

    def test_summed_eavesdroppers_substitution(self):
        half = math.sqrt(0.5)
        inst = ProblemInstance(
            h_tilde_s=np.array([math.sqrt(3.0)], dtype=complex),
            eve_grids=(point_grid([half]), point_grid([half])),
            gamma_th=0.0,
            p_watts=1.0,
            beta=100.0,
            mode="ce",
        )
        assert asr(np.array([1.0 + 0j]), inst) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("mode", ["ue", "ce"])
    def test_never_negative_and_matches_naive(self, mode):
        rng = np.random.default_rng(4)
        inst = random_instance(rng, mode=mode, scale=1.5)
        for _ in range(20):
            w = random_modulus(rng, inst.n_antennas, inst.p_watts)
            val = asr(w, inst)
            assert val >= 0.0
            assert val == pytest.approx(naive_asr(w, inst), rel=1e-12, abs=1e-15)

    def test_global_phase_invariance(self, ue_instance):
        rng = np.random.default_rng(5)
        w = random_modulus(rng, ue_instance.n_antennas, ue_instance.p_watts)
        assert asr(w * np.exp(1.3j), ue_instance) == pytest.approx(
            asr(w, ue_instance), rel=1e-12
        )

    def test_worst_eve_matches_stack_max(self, ue_instance):
        rng = np.random.default_rng(6)
        w = random_modulus(rng, ue_instance.n_antennas, ue_instance.p_watts)
        direct = max(
            naive_snr(w, row) for g in ue_instance.eve_grids for row in g.channels
        )
        assert worst_eve_snr(w, ue_instance) == pytest.approx(direct, rel=1e-12)


class TestLse:
    def test_single_value_identity(self):
        assert lse([3.7], 10.0) == pytest.approx(3.7, rel=1e-15)

    def test_two_equal_values(self):
        for beta in (1.0, 10.0, 100.0):
            assert lse([1.0, 1.0], beta) == pytest.approx(
                1.0 + math.log(2.0) / beta, rel=1e-14
            )

    def test_dominant_value_sandwich(self):
        val = lse([0.0, 10.0], 100.0)
        assert 10.0 <= val <= 10.0 + math.log(2.0) / 100.0

    def test_overflow_safe(self):
        val = lse([500.0, 600.0], 100.0)
        assert math.isfinite(val)
        assert 600.0 <= val <= 600.0 + math.log(2.0) / 100.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            lse([], 1.0)

    def test_beta_positive(self):
        with pytest.raises(ValueError):
            lse([1.0], 0.0)

    @given(
        st.lists(st.floats(min_value=-1e3, max_value=1e3), min_size=1, max_size=20),
        st.sampled_from([1.0, 10.0, 100.0]),
    )
    @settings(max_examples=100, deadline=None)
    def test_sandwich_property(self, values, beta):
        val = lse(values, beta)
        m = max(values)
        assert m <= val <= m + math.log(len(values)) / beta

    @given(st.lists(st.floats(min_value=-50.0, max_value=50.0), min_size=2, max_size=10))
    @settings(max_examples=50, deadline=None)
    def test_gap_shrinks_as_beta_grows(self, values):
        gaps = [lse(values, beta) - max(values) for beta in (1.0, 10.0, 100.0, 1000.0)]
        assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))


class TestGammaObjective:
    def test_zero_channels_closed_form_single_worst(self):
        rng = np.random.default_rng(7)
        hs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        inst = zero_eve_instance(hs, k=2, m1=2, m2=3, mode="ue", beta=100.0)
        w = random_modulus(rng, 4, 1.0)
        g_total = 2 * 2 * 3
        eta = 0.8
        expected = 1.0 + math.log(g_total) / 100.0 - eta * (1.0 + snr(w, hs))
        assert gamma_objective(w, inst, eta) == pytest.approx(expected, rel=1e-12)

    def test_zero_channels_closed_form_summed(self):
        rng = np.random.default_rng(8)
        hs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        inst = zero_eve_instance(hs, k=2, m1=2, m2=3, mode="ce", beta=100.0)
        w = random_modulus(rng, 4, 1.0)
        expected = 1.0 + 2 * math.log(6) / 100.0 - 0.0
        assert gamma_objective(w, inst, 0.0) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("mode", ["ue", "ce"])
    def test_matches_naive_summation(self, mode):
        rng = np.random.default_rng(9)
        inst = random_instance(rng, n=3, k=2, m1=2, m2=2, mode=mode, beta=2.0)
        for _ in range(10):
            w = random_modulus(rng, 3, 1.0)
            eta = float(rng.uniform(-1, 2))
            assert gamma_objective(w, inst, eta) == pytest.approx(
                naive_gamma(w, inst, eta), rel=1e-12
            )


class TestGammaGradient:
    def test_zero_channels_reduces_to_user_term(self):
        rng = np.random.default_rng(10)
        hs = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        inst = zero_eve_instance(hs, mode="ue")
        w = random_modulus(rng, 5, 1.0)
        grad = gamma_gradient(w, inst, 1.0)
        expected = -2.0 * hs * np.vdot(hs, w)
        assert grad == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("mode", ["ue", "ce"])
    def test_first_order_expansion_on_default_scene(self, mode, ue_instance, ce_instance):
        import dataclasses

        base = ue_instance if mode == "ue" else ce_instance
        inst = base if base.mode == mode else dataclasses.replace(base, mode=mode)
        rng = np.random.default_rng(12)
        n = inst.n_antennas
        for _ in range(20):
            w = random_modulus(rng, n, inst.p_watts)
            d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            d /= np.linalg.norm(d)
            eta = float(rng.uniform(-0.5, 1.5))
            grad = gamma_gradient(w, inst, eta)
            fd = central_directional(
                lambda v: gamma_objective(v, inst, eta), w, d, t=1e-6
            )
            analytic = float(np.real(np.vdot(grad, d)))
            assert analytic == pytest.approx(fd, rel=1e-5, abs=1e-9)

    @pytest.mark.parametrize("mode", ["ue", "ce"])
    def test_first_order_expansion_small_random(self, mode):
        rng = np.random.default_rng(13)
        inst = random_instance(rng, mode=mode, beta=5.0)
        for _ in range(20):
            w = random_modulus(rng, inst.n_antennas, 1.0)
            d = rng.standard_normal(inst.n_antennas) + 1j * rng.standard_normal(
                inst.n_antennas
            )
            d /= np.linalg.norm(d)
            eta = float(rng.uniform(-1.0, 2.0))
            grad = gamma_gradient(w, inst, eta)
            fd = central_directional(
                lambda v: gamma_objective(v, inst, eta), w, d, t=1e-6
            )
            assert float(np.real(np.vdot(grad, d))) == pytest.approx(
                fd, rel=1e-5, abs=1e-9
            )


class TestDinkelbachRatio:
    def test_zero_channels_closed_form(self):
        rng = np.random.default_rng(14)
        hs = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        inst = zero_eve_instance(hs, k=2, m1=2, m2=3, mode="ue", beta=100.0)
        w = random_modulus(rng, 3, 1.0)
        expected = (1.0 + math.log(12) / 100.0) / (1.0 + snr(w, hs))
        assert dinkelbach_ratio(w, inst) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("mode", ["ue", "ce"])
    def test_objective_vanishes_at_own_ratio(self, mode):
        rng = np.random.default_rng(15)
        inst = random_instance(rng, mode=mode, beta=3.0)
        for _ in range(10):
            w = random_modulus(rng, inst.n_antennas, 1.0)
            eta = dinkelbach_ratio(w, inst)
            assert abs(gamma_objective(w, inst, eta)) <= 1e-10

    @pytest.mark.parametrize("mode", ["ue", "ce"])
    def test_matches_naive_ratio(self, mode):
        rng = np.random.default_rng(16)
        inst = random_instance(rng, mode=mode, beta=2.0)
        for _ in range(10):
            w = random_modulus(rng, inst.n_antennas, 1.0)
            assert dinkelbach_ratio(w, inst) == pytest.approx(
                naive_ratio(w, inst), rel=1e-12
            )

    @pytest.mark.parametrize("mode", ["ue", "ce"])
    def test_vanishes_on_default_scene(self, mode, ue_instance, ce_instance):
        inst = ue_instance if mode == "ue" else ce_instance
        rng = np.random.default_rng(17)
        w = random_modulus(rng, inst.n_antennas, inst.p_watts)
        eta = dinkelbach_ratio(w, inst)
        assert abs(gamma_objective(w, inst, eta)) <= 1e-10 * (1.0 + abs(eta))
