"""
Circuit parameters of two parallel, aligned thin wires.

The wires have equal length l, radius r0 and lie a distance d apart. Only
the separation enters the interaction, through the coupling m(d) = M(d) / L.
"""

import logging
import math
from typing import NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.constants import mu_0

from thermoforce.circuit_noise import AntennaPair, interaction_force_coefficient
from thermoforce.errors import ModelValidityError
from thermoforce.quadrature import QuadratureResult, QuadratureSpec, integrate_interval
from thermoforce.resistance import ResistanceLaw

logger = logging.getLogger(__name__)

#: r0 / d (or r0 / l) above which the thin-wire formulas are flagged
THIN_WIRE_LIMIT = 0.1

_NEUMANN_SPEC = QuadratureSpec(rel_tol=1e-11, abs_tol=0.0, max_subdivisions=400)


class WireGeometry(BaseModel):
    """Two equal, parallel, aligned straight wires."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    length_m: float = Field(..., gt=0.0, description="Wire length l")
    wire_radius_m: float = Field(..., gt=0.0, description="Wire radius r0")
    separation_m: float = Field(..., gt=0.0, description="Axis-to-axis distance d")

    @model_validator(mode="after")
    def validate_non_overlapping(self) -> "WireGeometry":
        if self.separation_m <= 2.0 * self.wire_radius_m:
            raise ValueError("wires overlap: separation_m must exceed 2 * wire_radius_m")
        return self

    @property
    def thin_wire_valid(self) -> bool:
        """False when r0 is not small compared to both d and l."""
        return (
            self.wire_radius_m / self.separation_m <= THIN_WIRE_LIMIT
            and self.wire_radius_m / self.length_m <= THIN_WIRE_LIMIT
        )

    def at_separation(self, separation_m: float) -> "WireGeometry":
        return WireGeometry(
            length_m=self.length_m, wire_radius_m=self.wire_radius_m, separation_m=separation_m
        )


class CouplingProfile(NamedTuple):
    """Coupling m and its separation gradient d(m^2)/dd in 1/m."""

    m: float
    dm_sq_dd: float


def _warn_if_thick(g: WireGeometry) -> None:
    if not g.thin_wire_valid:
        logger.warning(
            f"thin-wire approximation is poor: r0={g.wire_radius_m} m, "
            f"d={g.separation_m} m, l={g.length_m} m"
        )


def self_inductance(g: WireGeometry) -> float:
    """
    L = (mu_0 l / 2 pi) (ln(2 l / r0) - 1) in henry.

    Raises:
        ModelValidityError: If the radius is so large that the formula gives L <= 0
    """
    _warn_if_thick(g)
    value = mu_0 * g.length_m / (2.0 * math.pi) * (math.log(2.0 * g.length_m / g.wire_radius_m) - 1.0)
    if value <= 0.0:
        raise ModelValidityError(
            f"thin-wire self-inductance is non-positive for r0={g.wire_radius_m} m, l={g.length_m} m"
        )
    return value


def mutual_inductance(g: WireGeometry) -> float:
    """M = (mu_0 / 2 pi) [l asinh(l/d) - sqrt(l^2 + d^2) + d] in henry."""
    l, d = g.length_m, g.separation_m
    # sqrt(l^2 + d^2) - d written without cancellation
    hyp_minus_d = l * l / (math.hypot(l, d) + d)
    return mu_0 / (2.0 * math.pi) * (l * math.asinh(l / d) - hyp_minus_d)


def mutual_inductance_gradient(g: WireGeometry) -> float:
    """dM/dd = (mu_0 / 2 pi) [1 - sqrt(l^2 + d^2) / d], always negative."""
    l, d = g.length_m, g.separation_m
    return -mu_0 / (2.0 * math.pi) * l * l / (d * (math.hypot(l, d) + d))


def coupling_profile(g: WireGeometry) -> CouplingProfile:
    """
    m = M / L and d(m^2)/dd from the closed forms.

    Raises:
        ModelValidityError: If m >= 1 (the geometry leaves the thin-wire regime)
    """
    inductance = self_inductance(g)
    m = mutual_inductance(g) / inductance
    if m >= 1.0:
        raise ModelValidityError(
            f"coupling m={m:.6g} >= 1 at d={g.separation_m} m; geometry is outside the thin-wire regime"
        )
    return CouplingProfile(m=m, dm_sq_dd=2.0 * m * mutual_inductance_gradient(g) / inductance)


def neumann_mutual_inductance(g: WireGeometry, spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """
    Neumann double integral (mu_0 / 4 pi) int int ds dt / |r1(s) - r2(t)|.

    Evaluated by iterated adaptive quadrature with the near-diagonal peak
    at t = s forced as a panel boundary. Used only to check the closed form.
    """
    spec = spec or _NEUMANN_SPEC
    l, d = g.length_m, g.separation_m
    d_sq = d * d

    def inner(s: float) -> float:
        return integrate_interval(
            lambda t: 1.0 / math.sqrt((s - t) ** 2 + d_sq), 0.0, l, spec, breakpoints=(s,)
        ).value

    outer = integrate_interval(inner, 0.0, l, spec, breakpoints=(0.5 * l,))
    return outer.scaled(mu_0 / (4.0 * math.pi))


def pair_at(
    g: WireGeometry, resistance: ResistanceLaw, capacitance_f: Optional[float] = None
) -> AntennaPair:
    """AntennaPair for this geometry."""
    return AntennaPair(
        inductance_h=self_inductance(g),
        coupling=coupling_profile(g).m,
        resistance=resistance,
        capacitance_f=capacitance_f,
    )


def antenna_force(
    g: WireGeometry,
    temperature: float,
    resistance: ResistanceLaw,
    capacitance_f: Optional[float] = None,
    spec: Optional[QuadratureSpec] = None,
) -> QuadratureResult:
    """
    Force between the wires in newtons along +d (positive is repulsive).

    F = -(k_B T H) d(m^2)/dd
    """
    profile = coupling_profile(g)
    coefficient = interaction_force_coefficient(pair_at(g, resistance, capacitance_f), temperature, spec)
    return coefficient.scaled(-profile.dm_sq_dd)
