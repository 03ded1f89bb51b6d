"""Two-story shear-frame specimen dynamics."""

from core.structure.frame import (
    StructureState,
    TwoDofFrame,
    frame_state_space,
    inertial_feedback,
    modal_frequencies,
    newmark_step,
)

__all__ = [
    "TwoDofFrame",
    "StructureState",
    "newmark_step",
    "modal_frequencies",
    "inertial_feedback",
    "frame_state_space",
]
