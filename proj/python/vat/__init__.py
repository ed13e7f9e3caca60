"""I/O amplification models, optimizer, simulators and calibration for multi-level KV stores."""

from ._vat import (
    DomainError,
    IoError,
    cost_ratio,
    estimate_a,
    estimate_r,
    figure_preset,
    figure_preset_names,
    growth_schedule_constant_total,
    growth_schedule_from_anchor,
    lambert_w0,
    log_benefit_limit,
    minimize,
    run_cli,
    simulate_counters,
    simulate_ssts,
    space_amplification,
    sweep,
)

__all__ = [
    "DomainError",
    "IoError",
    "cost_ratio",
    "estimate_a",
    "estimate_r",
    "figure_preset",
    "figure_preset_names",
    "growth_schedule_constant_total",
    "growth_schedule_from_anchor",
    "lambert_w0",
    "log_benefit_limit",
    "minimize",
    "run_cli",
    "simulate_counters",
    "simulate_ssts",
    "space_amplification",
    "sweep",
]
