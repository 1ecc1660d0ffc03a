"""Session fixtures: the shipped default scenario and its solved beamformers."""

from __future__ import annotations

import time

import pytest

from secbeam import build_instance, default_scenario, dinkelbach_solve


@pytest.fixture(scope="session")
def scenario():
    return default_scenario()


@pytest.fixture(scope="session")
def ue_instance(scenario):
    return build_instance(scenario, "ue", 42)


@pytest.fixture(scope="session")
def ce_instance(scenario):
    return build_instance(scenario, "ce", 42)


@pytest.fixture(scope="session")
def default_solves(scenario, ue_instance, ce_instance):
    """Timed full solves of the default scenario in both modes."""
    out = {}
    for mode, instance in (("ue", ue_instance), ("ce", ce_instance)):
        t0 = time.perf_counter()
        bf, trace = dinkelbach_solve(instance, scenario.solver)
        out[mode] = {
            "bf": bf,
            "trace": trace,
            "elapsed_s": time.perf_counter() - t0,
            "instance": instance,
        }
    return out
