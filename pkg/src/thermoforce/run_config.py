"""
Run configuration documents, one model per CLI command.

A run is described by a single JSON or YAML document whose "command" field
selects the model. Physical inputs carry their unit in the field name
(_k, _m, _h, _f, _ohm); blocks named "reduced" hold dimensionless inputs.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    ValidationError,
    field_validator,
    model_validator,
)

from thermoforce.errors import ConfigError
from thermoforce.langevin import SimulationConfig
from thermoforce.lifshitz import DielectricModel
from thermoforce.quadrature import QuadratureSpec
from thermoforce.resistance import ResistanceLaw

logger = logging.getLogger(__name__)


def _check_grid(v: List[float]) -> List[float]:
    if not v:
        raise ValueError("grid must not be empty")
    if any(b <= a for a, b in zip(v, v[1:])):
        raise ValueError("grid must be strictly increasing")
    return v


Grid = Annotated[List[float], Field(min_length=1)]


class _Strict(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class OutputSpec(_Strict):
    """Where and how the result table is written; stdout when path is absent."""

    path: Optional[Path] = None
    format: Literal["csv", "json"] = "csv"


class QuadratureOverrides(_Strict):
    """Per-run tolerances; unset fields fall back to the process settings."""

    rel_tol: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    abs_tol: Optional[float] = Field(default=None, ge=0.0)
    max_subdivisions: Optional[int] = Field(default=None, ge=1)

    def apply(self, base: QuadratureSpec) -> QuadratureSpec:
        return base.model_copy(update=self.model_dump(exclude_none=True))


class _RunBase(_Strict):
    output: OutputSpec = Field(default_factory=OutputSpec)
    seed: Optional[int] = Field(default=None, ge=0)
    quadrature: QuadratureOverrides = Field(default_factory=QuadratureOverrides)


# ---------------------------------------------------------------------------
# antenna-scan
# ---------------------------------------------------------------------------


class ReducedScan(_Strict):
    """Scan over rho at fixed m^2 and kappa (all dimensionless)."""

    m_sq: float = Field(..., ge=0.0, lt=1.0)
    kappa: float = Field(default=0.0, ge=0.0, description="omega_C / omega_R; 0 for RL")
    rho_grid: Grid
    resistance_exponent: float = Field(
        default=2.0, description="d ln R / d ln T used for the entropy column"
    )

    @field_validator("rho_grid")
    @classmethod
    def validate_rho_grid(cls, v: List[float]) -> List[float]:
        """Validate that rho values are non-negative and strictly increasing."""
        if any(r < 0.0 for r in v):
            raise ValueError("rho values must be non-negative")
        return _check_grid(v)


class PhysicalScan(_Strict):
    """Scan over temperature for a concrete antenna pair (SI units)."""

    inductance_h: float = Field(..., gt=0.0)
    coupling: float = Field(..., ge=0.0, lt=1.0)
    resistance: ResistanceLaw
    capacitance_f: Optional[float] = Field(default=None, gt=0.0)
    temperature_grid_k: Grid

    @field_validator("temperature_grid_k")
    @classmethod
    def validate_temperature_grid(cls, v: List[float]) -> List[float]:
        """Validate that temperatures are positive and strictly increasing."""
        if any(t <= 0.0 for t in v):
            raise ValueError("temperatures must be positive")
        return _check_grid(v)


class AntennaScanConfig(_RunBase):
    command: Literal["antenna-scan"]
    reduced: Optional[ReducedScan] = None
    physical: Optional[PhysicalScan] = None

    @model_validator(mode="after")
    def validate_one_block(self) -> "AntennaScanConfig":
        if (self.reduced is None) == (self.physical is None):
            raise ValueError("give exactly one of 'reduced' or 'physical'")
        return self


# ---------------------------------------------------------------------------
# figure1
# ---------------------------------------------------------------------------


class Figure1Config(_RunBase):
    """RLC curve in t = k_B T / (hbar omega_C) with omega_R = ratio * t^exponent * omega_C."""

    command: Literal["figure1"]
    t_grid: Grid
    m: float = Field(default=0.8, ge=0.0, lt=1.0)
    ratio: float = Field(default=5.0, gt=0.0)
    exponent: float = Field(default=2.0, gt=0.0)

    @field_validator("t_grid")
    @classmethod
    def validate_t_grid(cls, v: List[float]) -> List[float]:
        """Validate that reduced temperatures are positive and strictly increasing."""
        if any(t <= 0.0 for t in v):
            raise ValueError("reduced temperatures must be positive")
        return _check_grid(v)


# ---------------------------------------------------------------------------
# lifshitz-scan
# ---------------------------------------------------------------------------


class LifshitzScanConfig(_RunBase):
    command: Literal["lifshitz-scan"]
    separation_grid_m: Grid
    temperature_grid_k: Grid
    models: List[DielectricModel] = Field(..., min_length=1)
    ratio_to_ideal: bool = Field(default=False, description="Add P / P_ideal column")
    tail_tolerance: float = Field(default=1e-10, gt=0.0)
    matsubara_cutoff: Optional[int] = Field(default=None, ge=1)

    @field_validator("separation_grid_m", "temperature_grid_k")
    @classmethod
    def validate_positive_grid(cls, v: List[float]) -> List[float]:
        """Validate that grid values are positive and strictly increasing."""
        if any(x <= 0.0 for x in v):
            raise ValueError("grid values must be positive")
        return _check_grid(v)


# ---------------------------------------------------------------------------
# oracle-check
# ---------------------------------------------------------------------------


class OracleSimulation(_Strict):
    """Simulation settings without the seed, which is set per run."""

    time_step: float = Field(default=0.05, gt=0.0)
    steps: int = Field(default=20000, ge=2)
    burn_in: int = Field(default=2000, ge=0)
    ensemble: int = Field(default=64, ge=1)
    integrator: Literal["exact", "euler"] = "exact"

    def with_seed(self, seed: int) -> SimulationConfig:
        return SimulationConfig(seed=seed, **self.model_dump())


class OracleCheckConfig(_RunBase):
    command: Literal["oracle-check"]
    couplings: List[float] = Field(default_factory=lambda: [0.0, 0.3, 0.8], min_length=1)
    inductance_h: float = Field(default=1e-6, gt=0.0)
    resistance_ohm: float = Field(default=1.0, gt=0.0)
    temperature_k: float = Field(default=300.0, gt=0.0)
    simulation: OracleSimulation = Field(default_factory=OracleSimulation)
    sigma_threshold: float = Field(default=3.0, gt=0.0)
    simulation_tolerance: Optional[float] = Field(
        default=None,
        ge=0.0,
        description="Fixed tolerance on <i1 i2> in units of k_B T / L, replacing the sigma test",
    )
    h_tolerance: float = Field(default=1e-6, gt=0.0)

    @field_validator("couplings")
    @classmethod
    def validate_couplings(cls, v: List[float]) -> List[float]:
        """Validate that couplings lie in [0, 1)."""
        if any(not 0.0 <= m < 1.0 for m in v):
            raise ValueError("couplings must lie in [0, 1)")
        return v


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------


class ForceBlock(_Strict):
    temperature_k: float = Field(..., gt=0.0)
    resistance: ResistanceLaw
    capacitance_f: Optional[float] = Field(default=None, gt=0.0)


class GeometryConfig(_RunBase):
    command: Literal["geometry"]
    length_m: float = Field(..., gt=0.0)
    wire_radius_m: float = Field(..., gt=0.0)
    separation_grid_m: Grid
    neumann_check: bool = True
    force: Optional[ForceBlock] = None

    @model_validator(mode="after")
    def validate_no_overlap(self) -> "GeometryConfig":
        if self.separation_grid_m[0] <= 2.0 * self.wire_radius_m:
            raise ValueError("every separation must exceed 2 * wire_radius_m")
        return self

    @field_validator("separation_grid_m")
    @classmethod
    def validate_separations(cls, v: List[float]) -> List[float]:
        """Validate that separations are positive and strictly increasing."""
        if any(d <= 0.0 for d in v):
            raise ValueError("separations must be positive")
        return _check_grid(v)


RunConfig = Annotated[
    Union[AntennaScanConfig, Figure1Config, LifshitzScanConfig, OracleCheckConfig, GeometryConfig],
    Field(discriminator="command"),
]

_ADAPTER: TypeAdapter = TypeAdapter(RunConfig)


def format_validation_error(error: ValidationError) -> str:
    """One line per problem, prefixed with its field path."""
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{path}: {item['msg']}")
    return "; ".join(lines)


def parse_run_config(data: object) -> RunConfig:
    """
    Validate a decoded document.

    Raises:
        ConfigError: With the offending field paths
    """
    try:
        return _ADAPTER.validate_python(data)
    except ValidationError as e:
        raise ConfigError(f"invalid run configuration: {format_validation_error(e)}") from e


def load_run_config(path: Path) -> RunConfig:
    """
    Read and validate a JSON or YAML (.yaml/.yml) run configuration.

    Raises:
        ConfigError: If the file cannot be read, decoded or validated
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    logger.info(f"Loaded run configuration from {path}")
    return parse_run_config(data)


def config_digest(cfg: RunConfig) -> str:
    """sha256 of the canonical JSON form of a validated configuration, output block excluded."""
    body = cfg.model_dump(mode="json", exclude={"output"})
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
