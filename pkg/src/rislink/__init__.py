"""rislink: link-level simulator for a RIS-on-UAV relay in an OFDM downlink.

Synthesizes the direct and cascaded radio channels of the base-station ->
UAV-mounted reflective surface -> IoT device scenario, configures the surface
phase profile by semidefinite relaxation, computes OFDM achievable rates, and
orchestrates the seeded Monte-Carlo sweeps comparing the configured surface
against an unconfigured baseline.
"""

from .beamforming import (
    QuadraticForm,
    SdrSolution,
    brute_force_phases,
    build_quadratic,
    composite_power,
    composite_power_batch,
    coordinate_ascent,
    lifted_objective,
    randomize_extract,
    sdr_solve,
    unconfigured_phases,
)
from .channel import (
    SPEED_OF_LIGHT,
    ChannelParams,
    ChannelRealization,
    FrequencyChannel,
    SystemGeometry,
    direct_avg_power_db,
    element_positions,
    fspl_amplitude,
    gen_cascaded_channel,
    gen_direct_channel,
    path_loss_fspl,
    realize_channel,
    tap_variance_profile,
    to_frequency_domain,
)
from .estimators import SdrBeamformer, UnconfiguredSurface
from .harness import (
    DEFAULT_SWEEPS,
    ExperimentConfig,
    SolverOptions,
    SweepResult,
    SweepRow,
    config_from_dict,
    config_to_dict,
    load_config,
    oracle_check,
    read_results,
    run_point,
    run_single,
    sweep_elements,
    sweep_snr,
    sweep_subcarriers,
    write_results,
)
from .ofdm import OfdmParams, RateResult, achievable_rate, composite_channel, noise_power
from .validation import ConfigurationError

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "ChannelParams",
    "ChannelRealization",
    "ConfigurationError",
    "DEFAULT_SWEEPS",
    "ExperimentConfig",
    "FrequencyChannel",
    "OfdmParams",
    "QuadraticForm",
    "RateResult",
    "SdrBeamformer",
    "SdrSolution",
    "SolverOptions",
    "SweepResult",
    "SweepRow",
    "SystemGeometry",
    "UnconfiguredSurface",
    "achievable_rate",
    "brute_force_phases",
    "build_quadratic",
    "composite_channel",
    "composite_power",
    "composite_power_batch",
    "config_from_dict",
    "config_to_dict",
    "coordinate_ascent",
    "direct_avg_power_db",
    "element_positions",
    "fspl_amplitude",
    "gen_cascaded_channel",
    "gen_direct_channel",
    "lifted_objective",
    "load_config",
    "noise_power",
    "oracle_check",
    "path_loss_fspl",
    "randomize_extract",
    "read_results",
    "realize_channel",
    "run_point",
    "run_single",
    "sdr_solve",
    "sweep_elements",
    "sweep_snr",
    "sweep_subcarriers",
    "tap_variance_profile",
    "to_frequency_domain",
    "unconfigured_phases",
    "write_results",
]
