"""
Pydantic models for scenario configuration and reports.
"""

import io
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from core.errors import ConfigurationError, IoFailure
from core.structure.frame import TwoDofFrame

IDENTIFIED_MAX_STEP = 1e-4

_PATH_KEYS = ("record_path", "output_path")
_FRAME_KEYS = ("m1", "m2", "k1", "k2")


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [tok for tok in value.replace(",", " ").split() if tok]
    return value


def _parse_complex(value: Any) -> complex:
    if isinstance(value, (int, float, complex, np.number)):
        return complex(value)
    return complex(str(value).strip().replace(" ", ""))


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, complex):
        return repr(value.real) if value.imag == 0 else repr(value).strip("()")
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_format_value(v) for v in value)
    return str(value)


class ScenarioConfig(BaseModel):
    """One closed-loop simulation scenario."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # ============ REFERENCE ============
    reference: Literal["record", "sine", "step"] = Field(
        "record", description="Reference source: AT2 record, sine or step"
    )
    record_path: Optional[Path] = Field(None, description="AT2 ground-motion record")
    sine_amplitude_m: float = Field(0.01, description="Sine reference amplitude (m)")
    sine_frequency_hz: float = Field(1.0, gt=0, description="Sine reference frequency (Hz)")
    step_amplitude_m: float = Field(0.01, description="Step reference amplitude (m)")
    amplitude_scale: float = Field(1.0, description="Factor applied to the reference displacement")

    # ============ PLANT & SPECIMEN ============
    plant_kind: Literal["ideal", "identified"] = Field("ideal", description="Table model")
    m1: Optional[float] = Field(None, description="First floor mass (kg)")
    m2: Optional[float] = Field(None, description="Second floor mass (kg)")
    k1: Optional[float] = Field(None, description="First story stiffness (N/m)")
    k2: Optional[float] = Field(None, description="Second story stiffness (N/m)")
    c1: Optional[float] = Field(None, description="First story dashpot (N s/m)")
    c2: Optional[float] = Field(None, description="Second story dashpot (N s/m)")
    zeta1: Optional[float] = Field(None, description="First modal damping ratio")
    zeta2: Optional[float] = Field(None, description="Second modal damping ratio")
    m_t: float = Field(1.0, gt=0, description="True table mass (kg)")
    m_t_nominal: float = Field(1.0, gt=0, description="Nominal table mass known to the controller (kg)")

    # ============ CONTROLLER ============
    gamma: float = Field(10.0, gt=0, description="Adaptation rate")
    reference_poles: List[Any] = Field(
        default_factory=lambda: [complex(-10), complex(-12), complex(-14)],
        description="Reference-model poles (rad/s)",
    )
    e_r: float = Field(1.0, description="Command-state self coupling E_r")
    e_p: Tuple[float, float] = Field((1.0, 0.0), description="Command-state coupling to [d_t, v_t]")
    initial_weights: Tuple[float, float, float] = Field((0.0, 0.0, 0.0), description="Initial W_hat")
    adapt: bool = Field(True, description="Integrate the adaptive law (false freezes W_hat)")

    # ============ TIME & FILTERING ============
    dt: float = Field(1e-4, gt=0, description="Simulation step (s)")
    duration: float = Field(20.0, gt=0, description="Simulated time (s)")
    filter_cutoff_hz: float = Field(50.0, gt=0, description="Butterworth cutoff (Hz)")

    # ============ IDENTIFIED TABLE ============
    inner_gain: float = Field(200.0, gt=0, description="Inner displacement loop gain k_v (V/m)")
    table_output_scale: float = Field(1e-3, gt=0, description="Metres per unit of identified output")
    command_leak: float = Field(0.05, ge=0, description="Leak of the force-to-command integrators (rad/s)")
    csi_extension: bool = Field(False, description="Feed specimen reaction into the identified table")
    csi_gain: float = Field(1.0, description="Gain on the specimen reaction voltage")

    # ============ OUTPUT ============
    nrmse_window_s: float = Field(2.0, ge=0, description="Leading transient excluded from NRMSE")
    output_path: Path = Field(Path("simulation.csv"), description="CSV output path")

    # ----------------------------
    # Field validation
    # ----------------------------
    @field_validator("reference_poles", mode="before")
    @classmethod
    def _parse_poles(cls, v):
        return [_parse_complex(p) for p in _split_list(v)]

    @field_validator("e_p", "initial_weights", mode="before")
    @classmethod
    def _parse_vector(cls, v):
        return _split_list(v)

    @field_validator("reference_poles")
    @classmethod
    def _poles_hurwitz(cls, v):
        if len(v) != 3:
            raise ValueError(f"need exactly 3 reference poles, got {len(v)}")
        for p in v:
            if not p.real < 0:
                raise ValueError(f"reference pole {p} is not in the open left half-plane")
        for p in v:
            if p.imag != 0 and not any(abs(q - p.conjugate()) <= 1e-9 * abs(p) for q in v):
                raise ValueError(f"reference poles are not closed under conjugation: {v}")
        return v

    @model_validator(mode="after")
    def _check_scenario(self):
        given = [getattr(self, k) is not None for k in _FRAME_KEYS]
        if any(given) and not all(given):
            raise ValueError("frame needs all of m1, m2, k1, k2")
        if (self.c1 is not None or self.c2 is not None) and (
            self.zeta1 is not None or self.zeta2 is not None
        ):
            raise ValueError("give story dashpots (c1, c2) or damping ratios (zeta1, zeta2), not both")
        if self.reference == "record" and self.record_path is None:
            raise ValueError("reference = record needs record_path")
        if self.filter_cutoff_hz >= 0.5 / self.dt:
            raise ValueError(
                f"filter cutoff {self.filter_cutoff_hz} Hz is not below Nyquist for dt={self.dt}"
            )
        if self.plant_kind == "identified":
            if self.dt > IDENTIFIED_MAX_STEP * (1.0 + 1e-9):
                raise ValueError(f"identified plant needs dt <= {IDENTIFIED_MAX_STEP} s")
            if all(given) and not self.csi_extension:
                raise ValueError("identified plant with a specimen needs csi_extension = true")
        if self.duration < self.dt * (1.0 - 1e-9):
            raise ValueError(f"duration {self.duration} s is shorter than one step dt={self.dt} s")
        if self.nrmse_window_s >= self.duration:
            raise ValueError("nrmse_window_s must be shorter than duration")
        return self

    # ----------------------------
    # Derived objects
    # ----------------------------
    @property
    def has_frame(self) -> bool:
        return self.m1 is not None

    def frame(self) -> Optional[TwoDofFrame]:
        """Specimen frame, or None for the bare table."""
        if not self.has_frame:
            return None
        if self.zeta1 is not None or self.zeta2 is not None:
            return TwoDofFrame.from_damping_ratios(
                self.m1, self.m2, self.k1, self.k2, self.zeta1 or 0.0, self.zeta2 or 0.0
            )
        return TwoDofFrame(self.m1, self.m2, self.k1, self.k2, self.c1 or 0.0, self.c2 or 0.0)

    @property
    def n_steps(self) -> int:
        return int(np.floor(self.duration / self.dt + 1e-9))

    def with_overrides(self, **overrides) -> "ScenarioConfig":
        """Validated copy with some keys replaced."""
        data = self.model_dump()
        data.update(overrides)
        return build_config(data)

    # ----------------------------
    # Text form
    # ----------------------------
    def to_text(self) -> str:
        """Flat `key = value` text; parse_config_text(cfg.to_text()) == cfg."""
        lines = []
        for key, value in self.model_dump().items():
            if value is None:
                continue
            lines.append(f"{key} = {_format_value(value)}")
        return "\n".join(lines) + "\n"


class NrmseSummary(BaseModel):
    """Tracking scores of the table against the reference-model trajectory and r."""

    displacement: float = Field(..., ge=0, description="Displacement NRMSE")
    velocity: float = Field(..., ge=0, description="Velocity NRMSE")
    acceleration: float = Field(..., ge=0, description="Acceleration NRMSE")
    command: float = Field(..., ge=0, description="Displacement NRMSE against the commanded reference r")
    window_s: float = Field(..., ge=0, description="Excluded leading time (s)")
    samples: int = Field(..., ge=1, description="Samples scored")

    def as_text(self) -> str:
        return (
            f"NRMSE (t > {self.window_s:g} s, {self.samples} samples): "
            f"displacement={self.displacement:.6f} "
            f"velocity={self.velocity:.6f} "
            f"acceleration={self.acceleration:.6f} "
            f"vs r: displacement={self.command:.6f}"
        )


class NrmseReport(BaseModel):
    """Offline comparison of one column between two CSV files."""

    column: str = Field(..., description="Compared column")
    value: float = Field(..., ge=0, description="NRMSE of measured against reference")
    samples: int = Field(..., ge=1, description="Samples compared")


class BatchResult(BaseModel):
    """Outcome of one scenario inside a batch."""

    config_path: Path
    ok: bool
    exit_code: int = 0
    error: Optional[str] = None
    output_path: Optional[Path] = None
    summary: Optional[NrmseSummary] = None


# ============ LOADING ============

def build_config(values: Dict[str, Any]) -> ScenarioConfig:
    """Validate raw values, mapping validation failures to ConfigurationError."""
    try:
        return ScenarioConfig.model_validate(values)
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(f"invalid scenario: {details}") from None


def _resolve_paths(values: Dict[str, Any], base_dir: Optional[Path]) -> Dict[str, Any]:
    if base_dir is None:
        return values
    for key in _PATH_KEYS:
        raw = values.get(key)
        if raw:
            path = Path(raw).expanduser()
            values[key] = path if path.is_absolute() else (base_dir / path)
    return values


def parse_config_text(text: str, base_dir: Union[str, Path, None] = None) -> ScenarioConfig:
    """Parse `key = value` lines (# comments allowed); relative paths resolve against base_dir."""
    raw = dotenv_values(stream=io.StringIO(text), interpolate=False)
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        key = key.strip().lower()
        if value is None or value.strip() == "":
            raise ConfigurationError(f"key {key!r} has no value")
        values[key] = value.strip()
    return build_config(_resolve_paths(values, Path(base_dir) if base_dir is not None else None))


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read a scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise IoFailure(f"cannot read config {path}: {e}") from e
    return parse_config_text(text, base_dir=path.parent.resolve())
