"""
Johnson-Nyquist interaction between two coupled noisy antennas.

Each antenna is a series R-L (optionally R-L-C) circuit driven by its own
thermal e.m.f.; the pair is coupled through a mutual inductance M = m L.
All integrals are evaluated in reduced variables:

    x     = omega / omega_R            (omega_R = R / L)
    rho   = omega_R / omega_T          (omega_T = k_B T / hbar)
    kappa = omega_C / omega_R          (omega_C = 1 / sqrt(L C), 0 for RL)

with reduced impedance z(x) = 1 - i (x - kappa^2 / x). The physical layer
(AntennaPair, temperatures in kelvin, SI results) converts at the boundary.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field
from scipy.constants import Boltzmann, hbar
from scipy.special import exprel

from thermoforce.errors import DomainError, EvaluationError
from thermoforce.quadrature import (
    QuadratureResult,
    QuadratureSpec,
    derivative_scalar,
    integrate_semi_infinite,
)
from thermoforce.resistance import ResistanceLaw

logger = logging.getLogger(__name__)

#: 16 pi^5 / 63, prefactor of the low-temperature RLC free energy
ASYMPTOTE_COEFFICIENT = 16.0 * math.pi**5 / 63.0

#: Default tolerances; abs_tol is relative to the integral of |integrand|
CIRCUIT_SPEC = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-12, relative_to_l1=True)


class ReducedParams(BaseModel):
    """Dimensionless evaluation point (rho, m^2, kappa)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rho: float = Field(..., ge=0.0, description="omega_R / omega_T")
    m_sq: float = Field(..., ge=0.0, lt=1.0, description="Squared coupling (M/L)^2")
    kappa: float = Field(default=0.0, ge=0.0, description="omega_C / omega_R; 0 for RL")

    @property
    def m(self) -> float:
        return math.sqrt(self.m_sq)

    def breakpoints(self) -> List[float]:
        """Abscissae where the integrands change character."""
        points = []
        if self.rho > 0.0:
            points.append(1.0 / self.rho)
        if self.kappa > 0.0:
            points.append(self.kappa)
            if self.m > 0.0:
                # coupled-mode resonances
                points.append(self.kappa / math.sqrt(1.0 + self.m))
                points.append(self.kappa / math.sqrt(1.0 - self.m))
        return points


class AntennaPair(BaseModel):
    """Circuit parameters of two identical coupled antennas (SI units)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    inductance_h: float = Field(..., gt=0.0, description="Self-inductance L in henry")
    coupling: float = Field(..., ge=0.0, lt=1.0, description="m = M / L")
    resistance: ResistanceLaw
    capacitance_f: Optional[float] = Field(
        default=None, gt=0.0, description="End-point capacitance C in farad; None for RL"
    )

    @property
    def is_rlc(self) -> bool:
        return self.capacitance_f is not None

    @property
    def omega_c(self) -> Optional[float]:
        if self.capacitance_f is None:
            return None
        return 1.0 / math.sqrt(self.inductance_h * self.capacitance_f)

    def omega_r(self, temperature: float) -> float:
        return self.resistance.resistance(temperature) / self.inductance_h

    def is_dissipationless(self, temperature: float) -> bool:
        return self.resistance.resistance(temperature) == 0.0

    def reduced(self, temperature: float) -> ReducedParams:
        """
        Reduced evaluation point at a temperature.

        Raises:
            DomainError: If T <= 0 or R(T) = 0 (no reduced form exists)
        """
        _check_temperature(temperature)
        omega_r = self.omega_r(temperature)
        if omega_r <= 0.0:
            raise DomainError(f"R({temperature} K) = 0: the pair is dissipationless")
        omega_t = Boltzmann * temperature / hbar
        kappa = 0.0 if self.omega_c is None else self.omega_c / omega_r
        return ReducedParams(rho=omega_r / omega_t, m_sq=self.coupling**2, kappa=kappa)


@dataclass(frozen=True)
class EntropyEstimate(QuadratureResult):
    """Entropy with a flag telling whether it came from numerical differentiation."""

    numerical: bool = False


@dataclass(frozen=True)
class ThermoPoint:
    """Interaction thermodynamics at one temperature."""

    temperature: Optional[float]
    free_energy: float
    entropy: float
    force_coefficient: float
    quadrature_error: float
    converged: bool = True
    numerical_entropy: bool = False


def _check_temperature(temperature: float) -> None:
    if not temperature > 0.0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")


# ---------------------------------------------------------------------------
# Spectral building blocks
# ---------------------------------------------------------------------------


def planck_weight(y: float) -> float:
    """
    Noise weight E(y) = y / (e^y - 1), with E(0) = 1.

    Raises:
        DomainError: If y < 0
    """
    if y < 0.0:
        raise DomainError(f"planck_weight needs y >= 0, got {y!r}")
    return float(1.0 / exprel(y))


def planck_weight_derivative(y: float) -> float:
    """dE/dy; equals -1/2 at y = 0."""
    if y < 0.0:
        raise DomainError(f"planck_weight_derivative needs y >= 0, got {y!r}")
    if y < 1e-4:
        return -0.5 + y / 6.0
    e = planck_weight(y)
    return e * (1.0 - e) / y - e


def reduced_impedance(x: float, kappa: float = 0.0) -> complex:
    """
    z(x) = 1 - i (x - kappa^2 / x).

    kappa = 0 is the RL form 1 - i x; the real part is always 1.
    """
    if x <= 0.0:
        raise DomainError(f"reduced_impedance needs x > 0, got {x!r}")
    if kappa < 0.0:
        raise DomainError(f"kappa must be non-negative, got {kappa!r}")
    return complex(1.0, -(x - kappa * kappa / x))


def _im_log(x: float, p: ReducedParams) -> float:
    """Im log[1 + (x m / z)^2] on the principal branch."""
    z = reduced_impedance(x, p.kappa)
    w = x * p.m / z
    arg = cmath.phase(1.0 + w * w)
    if not abs(arg) < math.pi:
        raise EvaluationError("complex logarithm left the principal branch", abscissa=x)
    return arg


def _kappa_log_derivative(x: float, p: ReducedParams) -> float:
    """kappa * d/dkappa of Im log[1 + (x m / z)^2]."""
    if p.kappa == 0.0:
        return 0.0
    z = reduced_impedance(x, p.kappa)
    w_sq = (x * p.m / z) ** 2
    dz = 2j * p.kappa * p.kappa / x
    return (-2.0 * w_sq / (1.0 + w_sq) * dz / z).imag


def _integrate(f: Callable[[float], float], p: ReducedParams, spec: Optional[QuadratureSpec]) -> QuadratureResult:
    return integrate_semi_infinite(f, spec or CIRCUIT_SPEC, breakpoints=p.breakpoints())


# ---------------------------------------------------------------------------
# Reduced quantities
# ---------------------------------------------------------------------------


def h_factor(p: ReducedParams, spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """
    H = (1/pi) int_0^inf dx x E(x rho) Im[z(x)^2 + x^2 m^2]^-1.

    The force between the antennas is -k_B T H grad(m^2). H is positive for
    the RL model and in the classical limit; in the quantum regime of the
    RLC model it turns negative.
    """

    def integrand(x: float) -> float:
        z = reduced_impedance(x, p.kappa)
        det = z * z + x * x * p.m_sq
        return x * planck_weight(x * p.rho) * (1.0 / det).imag / math.pi

    return _integrate(integrand, p, spec)


def free_energy_factor(p: ReducedParams, spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """
    Interaction free energy in units of k_B T.

    F / k_B T = (1/pi) int_0^inf (dx/x) E(x rho) Im log[1 + (x m / z(x))^2]
    """
    if p.m_sq == 0.0:
        return QuadratureResult(value=0.0, error_estimate=0.0, evaluations=0, converged=True)

    def integrand(x: float) -> float:
        return planck_weight(x * p.rho) * _im_log(x, p) / (math.pi * x)

    return _integrate(integrand, p, spec)


def reduced_entropy(
    p: ReducedParams, resistance_exponent: float, spec: Optional[QuadratureSpec] = None
) -> QuadratureResult:
    """
    Interaction entropy in units of k_B, by differentiating under the integral.

    With R proportional to T^p locally (p = d ln R / d ln T), rho scales as
    T^(p-1) and kappa as T^-p, so

        S / k_B = -[Phi + (p - 1) rho dPhi/drho - p kappa dPhi/dkappa]

    where Phi is free_energy_factor.
    """
    if p.m_sq == 0.0:
        return QuadratureResult(value=0.0, error_estimate=0.0, evaluations=0, converged=True)
    slope = resistance_exponent

    def integrand(x: float) -> float:
        y = x * p.rho
        weight = planck_weight(y)
        im_log = _im_log(x, p)
        value = weight * im_log
        if p.rho > 0.0:
            value += (slope - 1.0) * y * planck_weight_derivative(y) * im_log
        if p.kappa > 0.0:
            value -= slope * weight * _kappa_log_derivative(x, p)
        return -value / (math.pi * x)

    return _integrate(integrand, p, spec)


def reduced_thermo_point(
    p: ReducedParams,
    resistance_exponent: float,
    temperature: Optional[float] = None,
    energy_unit: float = 1.0,
    entropy_unit: float = 1.0,
    spec: Optional[QuadratureSpec] = None,
) -> ThermoPoint:
    """
    Free energy, entropy and force coefficient at one reduced point.

    Args:
        p: Reduced parameters
        resistance_exponent: d ln R / d ln T at this point
        temperature: Temperature reported in the result (any unit); None on a
            purely reduced grid
        energy_unit: k_B T expressed in the output energy unit (1 keeps k_B T)
        entropy_unit: k_B expressed in the output entropy unit
        spec: Quadrature tolerances
    """
    free = free_energy_factor(p, spec).scaled(energy_unit)
    force = h_factor(p, spec).scaled(energy_unit)
    entropy = reduced_entropy(p, resistance_exponent, spec).scaled(entropy_unit)
    return ThermoPoint(
        temperature=temperature,
        free_energy=free.value,
        entropy=entropy.value,
        force_coefficient=force.value,
        quadrature_error=free.error_estimate + force.error_estimate + entropy.error_estimate,
        converged=free.converged and force.converged and entropy.converged,
    )


# ---------------------------------------------------------------------------
# Physical layer
# ---------------------------------------------------------------------------


def _zero() -> QuadratureResult:
    return QuadratureResult(value=0.0, error_estimate=0.0, evaluations=0, converged=True)


def interaction_force_coefficient(
    pair: AntennaPair, temperature: float, spec: Optional[QuadratureSpec] = None
) -> QuadratureResult:
    """
    k_B T H in joules; the force is -(k_B T H) grad(m^2).

    Strictly zero resistance is its own branch: no noise, no force. This is
    not the R -> 0+ limit (see zero_resistance_limit).
    """
    _check_temperature(temperature)
    if pair.is_dissipationless(temperature):
        return _zero()
    return h_factor(pair.reduced(temperature), spec).scaled(Boltzmann * temperature)


def interaction_free_energy(
    pair: AntennaPair, temperature: float, spec: Optional[QuadratureSpec] = None
) -> QuadratureResult:
    """Interaction free energy in joules."""
    _check_temperature(temperature)
    if pair.is_dissipationless(temperature):
        return _zero()
    return free_energy_factor(pair.reduced(temperature), spec).scaled(Boltzmann * temperature)


def interaction_entropy(
    pair: AntennaPair, temperature: float, spec: Optional[QuadratureSpec] = None
) -> EntropyEstimate:
    """
    Interaction entropy S = -dF/dT in J/K.

    Resistance laws with an analytic slope are differentiated under the
    integral sign. Tabulated laws fall back to numerical differentiation of
    the free energy and the result is flagged numerical.
    """
    _check_temperature(temperature)
    if pair.is_dissipationless(temperature):
        return EntropyEstimate(value=0.0, error_estimate=0.0, evaluations=0, converged=True)

    slope = pair.resistance.log_slope(temperature)
    if slope is None:
        logger.warning(
            f"resistance law '{pair.resistance.kind}' has no analytic slope; "
            f"differentiating the free energy numerically at T={temperature} K"
        )
        d = derivative_scalar(
            lambda t: interaction_free_energy(pair, t, spec).value,
            temperature,
            h0=0.05 * temperature,
        )
        value = -d.value
        return EntropyEstimate(
            value=value,
            error_estimate=d.error_estimate,
            evaluations=0,
            converged=d.error_estimate <= 1e-4 * abs(value) or value == 0.0,
            numerical=True,
        )

    result = reduced_entropy(pair.reduced(temperature), slope, spec).scaled(Boltzmann)
    return EntropyEstimate(
        value=result.value,
        error_estimate=result.error_estimate,
        evaluations=result.evaluations,
        converged=result.converged,
    )


def thermo_point(
    pair: AntennaPair, temperature: float, spec: Optional[QuadratureSpec] = None
) -> ThermoPoint:
    """Free energy (J), entropy (J/K) and force coefficient (J) at one temperature."""
    free = interaction_free_energy(pair, temperature, spec)
    force = interaction_force_coefficient(pair, temperature, spec)
    entropy = interaction_entropy(pair, temperature, spec)
    return ThermoPoint(
        temperature=temperature,
        free_energy=free.value,
        entropy=entropy.value,
        force_coefficient=force.value,
        quadrature_error=free.error_estimate + force.error_estimate + entropy.error_estimate,
        converged=free.converged and force.converged and entropy.converged,
        numerical_entropy=entropy.numerical,
    )


# ---------------------------------------------------------------------------
# Limits, asymptotes and the self terms
# ---------------------------------------------------------------------------


def _log_one_minus_boltzmann(u: float) -> float:
    """log(1 - e^-u) for u > 0, accurate at both ends."""
    return math.log(-math.expm1(-u))


def normal_mode_free_energy(m: float, t: float) -> float:
    """
    R -> 0 limit of the RLC interaction free energy, in units of hbar omega_C.

    Without damping the pair is two oscillators at omega_C / sqrt(1 -+ m);
    the interaction free energy is their thermal free energy minus that of
    two uncoupled oscillators at omega_C.
    """
    if not 0.0 <= m < 1.0:
        raise DomainError(f"coupling must lie in [0, 1), got {m!r}")
    if t < 0.0:
        raise DomainError(f"reduced temperature must be non-negative, got {t!r}")
    if t == 0.0 or m == 0.0:
        return 0.0
    u_c = 1.0 / t
    u_plus = u_c / math.sqrt(1.0 - m)
    u_minus = u_c / math.sqrt(1.0 + m)
    return t * (
        _log_one_minus_boltzmann(u_plus)
        + _log_one_minus_boltzmann(u_minus)
        - 2.0 * _log_one_minus_boltzmann(u_c)
    )


def _normal_mode_h(m_sq: float, t: float) -> float:
    """d(normal_mode_free_energy)/d(m^2) in units of k_B T."""
    if t == 0.0:
        return 0.0
    u_c = 1.0 / t
    m = math.sqrt(m_sq)
    if m < 1e-6:
        return (2.0 * planck_weight(u_c) + u_c * planck_weight_derivative(u_c)) / 4.0
    u_plus = u_c / math.sqrt(1.0 - m)
    u_minus = u_c / math.sqrt(1.0 + m)
    return (planck_weight(u_plus) / (1.0 - m) - planck_weight(u_minus) / (1.0 + m)) / (4.0 * m)


def zero_resistance_limit(
    m_sq: float,
    model: Literal["RL", "RLC"] = "RL",
    thermal_energy: float = 1.0,
    t: Optional[float] = None,
) -> float:
    """
    Force coefficient k_B T H in the limit R -> 0+.

    RL gives the equipartition value k_B T / (2 (1 - m^2)). For RLC the
    limit is the normal-mode value, which needs the reduced temperature
    t = k_B T / (hbar omega_C); it is exponentially small once t << 1 and
    tends to the RL value for t >> 1.

    Args:
        m_sq: Squared coupling
        model: "RL" or "RLC"
        thermal_energy: k_B T in the output unit (1 gives H itself)
        t: Reduced temperature, required for RLC
    """
    if not 0.0 <= m_sq < 1.0:
        raise DomainError(f"m_sq must lie in [0, 1), got {m_sq!r}")
    if model == "RL":
        return thermal_energy / (2.0 * (1.0 - m_sq))
    if t is None:
        raise DomainError("the RLC zero-resistance limit needs the reduced temperature t")
    return thermal_energy * _normal_mode_h(m_sq, t)


def low_temperature_asymptote(
    m: float, omega_r: float, omega_c: float, temperature: float
) -> float:
    """
    Low-temperature RLC free energy in joules.

    F = -(16 pi^5 m^2 / 63) t^6 hbar omega_R,  t = k_B T / (hbar omega_C) < 1
    """
    if omega_c <= 0.0:
        raise DomainError(f"omega_c must be positive, got {omega_c!r}")
    t = Boltzmann * temperature / (hbar * omega_c)
    if not 0.0 <= t < 1.0:
        raise DomainError(f"asymptote needs 0 <= t < 1, got t={t!r}")
    return -ASYMPTOTE_COEFFICIENT * m * m * t**6 * hbar * omega_r


def self_free_energy(omega_c: float, temperature: float) -> float:
    """Thermal free energy of one RLC oscillator, k_B T log(1 - e^(-hbar omega_C / k_B T))."""
    if omega_c <= 0.0:
        raise DomainError(f"omega_c must be positive, got {omega_c!r}")
    if temperature < 0.0:
        raise DomainError(f"temperature must be non-negative, got {temperature!r}")
    if temperature == 0.0:
        return 0.0
    kt = Boltzmann * temperature
    return kt * _log_one_minus_boltzmann(hbar * omega_c / kt)


def self_entropy(t: float) -> float:
    """Entropy of one oscillator in units of k_B at reduced temperature t."""
    if t < 0.0:
        raise DomainError(f"reduced temperature must be non-negative, got {t!r}")
    if t == 0.0:
        return 0.0
    u = 1.0 / t
    if u > 700.0:
        return 0.0
    return -_log_one_minus_boltzmann(u) + planck_weight(u)


def total_entropy(
    pair: AntennaPair, temperature: float, spec: Optional[QuadratureSpec] = None
) -> EntropyEstimate:
    """Interaction entropy plus the self entropies of both RLC wires, in J/K."""
    if pair.omega_c is None:
        raise DomainError("total_entropy needs the RLC model (capacitance_f is not set)")
    interaction = interaction_entropy(pair, temperature, spec)
    t = Boltzmann * temperature / (hbar * pair.omega_c)
    return EntropyEstimate(
        value=interaction.value + 2.0 * Boltzmann * self_entropy(t),
        error_estimate=interaction.error_estimate,
        evaluations=interaction.evaluations,
        converged=interaction.converged,
        numerical=interaction.numerical,
    )


# ---------------------------------------------------------------------------
# Reduced RLC curves
# ---------------------------------------------------------------------------


def rlc_reduced_params(t: float, m: float, omega_r_over_omega_c: float) -> ReducedParams:
    """Reduced point for an RLC pair at reduced temperature t = k_B T / (hbar omega_C)."""
    if t <= 0.0:
        raise DomainError(f"reduced temperature must be positive, got {t!r}")
    if omega_r_over_omega_c <= 0.0:
        raise DomainError("omega_R / omega_C must be positive")
    return ReducedParams(
        rho=omega_r_over_omega_c / t, m_sq=m * m, kappa=1.0 / omega_r_over_omega_c
    )


def figure1_curve(
    t_grid: Sequence[float],
    m: float = 0.8,
    ratio: float = 5.0,
    exponent: float = 2.0,
    spec: Optional[QuadratureSpec] = None,
) -> List[ThermoPoint]:
    """
    Interaction free energy of an impurity-free RLC pair versus t.

    omega_R(t) = ratio * t^exponent * omega_C. Free energy and force
    coefficient are in units of hbar omega_C, entropy in units of k_B.
    """
    points = []
    for t in t_grid:
        p = rlc_reduced_params(t, m, ratio * t**exponent)
        points.append(reduced_thermo_point(p, exponent, temperature=t, energy_unit=t, spec=spec))
    return points


def asymptote_reduced(t: float, m: float, omega_r_over_omega_c: float) -> float:
    """Low-temperature free energy in units of hbar omega_C."""
    return -ASYMPTOTE_COEFFICIENT * m * m * t**6 * omega_r_over_omega_c
