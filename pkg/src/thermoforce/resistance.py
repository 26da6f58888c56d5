"""Temperature laws for the antenna resistance R(T)."""

from typing import Annotated, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ConstantResistance(BaseModel):
    """R independent of temperature."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["constant"] = "constant"
    value_ohm: float = Field(..., ge=0.0, description="Resistance in ohm")

    def resistance(self, temperature: float) -> float:
        return self.value_ohm

    def log_slope(self, temperature: float) -> Optional[float]:
        """d ln R / d ln T."""
        return 0.0


class PowerLawResistance(BaseModel):
    """
    R(T) = R_ref * (T / T_ref)^p.

    The default p = 2 describes impurity-free wires at liquid helium
    temperatures, where R vanishes as T^2.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["power_law"] = "power_law"
    r_ref_ohm: float = Field(..., ge=0.0, description="Resistance at the reference temperature")
    t_ref_k: float = Field(..., gt=0.0, description="Reference temperature in kelvin")
    exponent: float = Field(default=2.0, gt=0.0, description="Power p of the law")

    def resistance(self, temperature: float) -> float:
        return self.r_ref_ohm * (temperature / self.t_ref_k) ** self.exponent

    def log_slope(self, temperature: float) -> Optional[float]:
        return self.exponent


class TabulatedResistance(BaseModel):
    """Measured R(T), linearly interpolated; no analytic slope is offered."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["tabulated"] = "tabulated"
    temperatures_k: List[float] = Field(..., min_length=2)
    values_ohm: List[float] = Field(..., min_length=2)

    @field_validator("temperatures_k")
    @classmethod
    def validate_increasing(cls, v: List[float]) -> List[float]:
        """Validate that the temperature table is strictly increasing and non-negative."""
        if v[0] < 0.0 or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("temperatures must be non-negative and strictly increasing")
        return v

    @field_validator("values_ohm")
    @classmethod
    def validate_non_negative(cls, v: List[float]) -> List[float]:
        """Validate that resistances are non-negative."""
        if any(r < 0.0 for r in v):
            raise ValueError("resistance values must be non-negative")
        return v

    @model_validator(mode="after")
    def validate_lengths(self) -> "TabulatedResistance":
        if len(self.temperatures_k) != len(self.values_ohm):
            raise ValueError("temperatures_k and values_ohm must have the same length")
        return self

    def resistance(self, temperature: float) -> float:
        return float(np.interp(temperature, self.temperatures_k, self.values_ohm))

    def log_slope(self, temperature: float) -> Optional[float]:
        return None


ResistanceLaw = Annotated[
    Union[ConstantResistance, PowerLawResistance, TabulatedResistance],
    Field(discriminator="kind"),
]
