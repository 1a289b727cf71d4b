"""Simulation and online gain tuning for clamped state-feedback regulators
on first-order passive unidirectional plants."""

from .ase import (
    AseBuffers,
    AseConfig,
    AseDecision,
    GainUpdate,
    adapt_gains,
    ase_evaluate,
    omega,
    push_sample,
    shc_update,
)
from .episode import (
    DivergenceError,
    EpisodeLog,
    FeasibilityVerdict,
    cost_J,
    cost_Jprime,
    feasibility_check,
    run_episode,
)
from .plant import DriftSchedule, PlantParams, PlantState, apply_drift, plant_output, plant_step
from .regulator import (
    GainBounds,
    RegulatorGains,
    StabilityVerdict,
    bounds_from_uncertainty,
    control_output,
    feedforward_offset,
    stability_check,
)
from .session import (
    MetricsSummary,
    SessionConfig,
    episode_converged,
    episodes_to_convergence,
    run_adaptive_session,
    summarize_metrics,
)
from .trajectory import TrajectorySpec, peak_reference, period_steps, sample, series
from .tuners import (
    CostOracle,
    HillClimbConfig,
    SearchInterval,
    golden_section_1d,
    golden_section_2d,
    shc_neighbors,
    shc_offline,
    shc_online_step,
)

__version__ = "0.1.0"
