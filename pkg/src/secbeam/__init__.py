"""Worst-case secrecy-rate beamforming for multibeam satellite downlinks.

A constant-modulus beamformer is tuned so the legitimate user keeps its SNR
floor while the worst eavesdropper position inside rectangular uncertainty
regions learns as little as possible.  The solver smooths the discretized
worst case with a log-sum-exp, runs Dinkelbach's method on the resulting
ratio and solves each subproblem with a non-convex ADMM whose updates are
closed-form.
"""

from .baselines import OracleResult, brute_force_oracle, exact_objective, mrt_bf, nonrobust_bf
from .channel import (
    ChannelVector,
    GroundPosition,
    LinkBudgetParams,
    SatelliteGeometry,
    beam_gain,
    bessel_j,
    compose_channel,
    free_space_response,
    link_geometry,
    noise_variance,
    nominal_rain,
    receiver_gain,
    sample_rain,
)
from .config import (
    DEFAULT_CONFIG,
    ConfigError,
    ExperimentSpec,
    ScenarioConfig,
    SweepSpec,
    default_scenario,
    default_spec,
    emit_defaults,
    parse_config,
    parse_config_dict,
)
from .harness import build_instance, emit_beampattern, run_experiment
from .objective import (
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
from .solver import (
    InfeasibleError,
    SolverParams,
    SolverTrace,
    admm_solve,
    dinkelbach_solve,
    init_w,
    lipschitz_bound,
    qos_projection,
    update_v,
    update_w,
    update_x,
)
from .uncertainty import EveRegion, EveRegionGrid, discretize, grid_channels

__all__ = [
    "Beamformer",
    "ChannelVector",
    "ConfigError",
    "DEFAULT_CONFIG",
    "EveRegion",
    "EveRegionGrid",
    "ExperimentSpec",
    "GroundPosition",
    "InfeasibleError",
    "LinkBudgetParams",
    "OracleResult",
    "ProblemInstance",
    "SatelliteGeometry",
    "ScenarioConfig",
    "SolverParams",
    "SolverTrace",
    "SweepSpec",
    "admm_solve",
    "asr",
    "beam_gain",
    "bessel_j",
    "brute_force_oracle",
    "build_instance",
    "compose_channel",
    "default_scenario",
    "default_spec",
    "dinkelbach_ratio",
    "dinkelbach_solve",
    "discretize",
    "emit_beampattern",
    "emit_defaults",
    "exact_objective",
    "free_space_response",
    "gamma_gradient",
    "gamma_objective",
    "grid_channels",
    "init_w",
    "link_geometry",
    "lipschitz_bound",
    "lse",
    "mrt_bf",
    "noise_variance",
    "nominal_rain",
    "nonrobust_bf",
    "parse_config",
    "parse_config_dict",
    "qos_projection",
    "receiver_gain",
    "run_experiment",
    "sample_rain",
    "snr",
    "update_v",
    "update_w",
    "update_x",
    "worst_eve_snr",
]

__version__ = "0.1.0"
