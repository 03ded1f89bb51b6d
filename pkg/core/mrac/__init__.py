"""Model-reference adaptive control of the table."""

from core.mrac.controller import (
    AdaptiveState,
    AugmentedSystem,
    GainAndCertificate,
    build_augmented,
    build_regressor,
    command_signal,
    control_force,
    design_reference,
    lyapunov_value,
    reference_dc_gain,
    reference_model,
    reference_step,
    true_weights,
    update_weights,
)

__all__ = [
    "AugmentedSystem",
    "GainAndCertificate",
    "AdaptiveState",
    "build_augmented",
    "design_reference",
    "reference_model",
    "reference_dc_gain",
    "command_signal",
    "reference_step",
    "build_regressor",
    "control_force",
    "update_weights",
    "lyapunov_value",
    "true_weights",
]
