"""Shake-table plant models: ideal force-driven table and identified hydraulic table."""

from core.plant.ideal import IdealTable, balance_acceleration, ideal_step
from core.plant.identified import (
    IdentifiedTable,
    force_to_command,
    identified_step,
    inner_loop_poles,
    inner_loop_polynomial,
)

__all__ = [
    "IdealTable",
    "IdentifiedTable",
    "ideal_step",
    "balance_acceleration",
    "force_to_command",
    "identified_step",
    "inner_loop_polynomial",
    "inner_loop_poles",
]
