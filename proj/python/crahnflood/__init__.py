"""Interference-aware flooding analysis for cognitive radio ad hoc networks."""

from ._core import (
    SystemParams,
    __version__,
    avoidance_gain,
    canonical_config,
    config_hash,
    derive,
    effective_neighbor_rate,
    link_success_model,
    link_success_probe,
    mean_neighbors,
    ode_run,
    optimal_power,
    optimal_timer,
    permissible_density,
    plan,
    pr_outage_oracle,
    run_sim,
    table1,
)

__all__ = [
    "SystemParams",
    "__version__",
    "avoidance_gain",
    "canonical_config",
    "config_hash",
    "derive",
    "effective_neighbor_rate",
    "link_success_model",
    "link_success_probe",
    "mean_neighbors",
    "ode_run",
    "optimal_power",
    "optimal_timer",
    "permissible_density",
    "plan",
    "pr_outage_oracle",
    "run_sim",
    "table1",
]
