from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from core.errors import InputDataError, LengthMismatch, SchemaMismatch
from core.schema.series import TimeSeries, Unit


# CSV column schema, in file order
COLUMNS = (
    "t",
    "r",
    "dt_cmd",
    "d_table",
    "v_table",
    "a_table",
    "d1",
    "d2",
    "a1_abs",
    "a2_abs",
    "F",
    "V_lyap",
)

COLUMN_UNITS: Dict[str, Unit] = {
    "t": Unit.NONE,
    "r": Unit.M,
    "dt_cmd": Unit.M,
    "d_table": Unit.M,
    "v_table": Unit.M_S,
    "a_table": Unit.M_S2,
    "d1": Unit.M,
    "d2": Unit.M,
    "a1_abs": Unit.M_S2,
    "a2_abs": Unit.M_S2,
    "F": Unit.N,
    "V_lyap": Unit.NONE,
}


@dataclass
class SimulationRecord:
    """
    Time-aligned log of one closed-loop run.

    `columns` holds the persisted CSV columns. The remaining arrays exist only
    in memory: the augmented state X (n x 3), the reference-model state X_r
    (n x 3), its acceleration -K X_r, the adaptive weights (n x 3) and the
    tracking error norm.
    """

    columns: Dict[str, np.ndarray]
    augmented_state: Optional[np.ndarray] = None
    reference_state: Optional[np.ndarray] = None
    reference_acceleration: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    error_norm: Optional[np.ndarray] = None
    summary: Optional[object] = field(default=None, repr=False)

    def __post_init__(self):
        missing = [c for c in COLUMNS if c not in self.columns]
        if missing:
            raise SchemaMismatch(f"record is missing columns: {missing}")
        self.columns = {c: np.asarray(self.columns[c], dtype=float) for c in COLUMNS}
        n = len(self.columns["t"])
        for name, values in self.columns.items():
            if values.shape != (n,):
                raise LengthMismatch(f"column {name} has shape {values.shape}, expected ({n},)")

    @staticmethod
    def allocate(n: int) -> "SimulationRecord":
        """Zero-filled record with n rows, ready for in-place filling by the run loop."""
        return SimulationRecord(
            columns={c: np.zeros(n) for c in COLUMNS},
            augmented_state=np.zeros((n, 3)),
            reference_state=np.zeros((n, 3)),
            reference_acceleration=np.zeros(n),
            weights=np.zeros((n, 3)),
            error_norm=np.zeros(n),
        )

    def __len__(self) -> int:
        return len(self.columns["t"])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def dt(self) -> float:
        t = self.columns["t"]
        return float(t[1] - t[0]) if len(t) > 1 else 0.0

    def series(self, name: str) -> TimeSeries:
        """One logged column as a TimeSeries with its physical unit."""
        if name not in self.columns:
            raise InputDataError(f"unknown column: {name}")
        return TimeSeries.create(self.columns[name], self.dt, COLUMN_UNITS[name])

    def reference_series(self, quantity: str) -> TimeSeries:
        """Reference-model trajectory: displacement, velocity or acceleration."""
        if self.reference_state is None:
            raise InputDataError("record carries no reference-model trajectory")
        if quantity == "displacement":
            return TimeSeries.create(self.reference_state[:, 0], self.dt, Unit.M)
        if quantity == "velocity":
            return TimeSeries.create(self.reference_state[:, 1], self.dt, Unit.M_S)
        if quantity == "acceleration":
            return TimeSeries.create(self.reference_acceleration, self.dt, Unit.M_S2)
        raise InputDataError(f"unknown reference quantity: {quantity}")

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        t = self.columns["t"]
        if len(t) < 2:
            return True
        steps = np.diff(t)
        return bool(np.all(steps > 0) and np.allclose(steps, steps[0], rtol=rtol, atol=0.0))
