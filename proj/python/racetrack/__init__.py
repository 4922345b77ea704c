"""Racetrack core-periphery model with differentiated agricultural transport costs."""

from ._core import (
    ConfigError,
    CriticalPoints,
    Equilibrium,
    Grid,
    HomogeneousState,
    ModelParams,
    NumericalError,
    SpectralResult,
    StationaryResult,
    cosine_seed,
    count_spikes,
    critical_points,
    exp_kernel_mass,
    h_coefficient,
    homogeneous_state,
    measured_growth_rate,
    mode_growth,
    random_initial,
    run_to_stationary,
    solve_instantaneous,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CriticalPoints",
    "Equilibrium",
    "Grid",
    "HomogeneousState",
    "ModelParams",
    "NumericalError",
    "SpectralResult",
    "StationaryResult",
    "cosine_seed",
    "count_spikes",
    "critical_points",
    "exp_kernel_mass",
    "h_coefficient",
    "homogeneous_state",
    "measured_growth_rate",
    "mode_growth",
    "random_initial",
    "run_to_stationary",
    "solve_instantaneous",
]
