"""
Thermal Casimir interaction between two parallel metallic plates.

Free energy per unit area, as a Matsubara sum over imaginary frequencies
xi_n = 2 pi n k_B T / hbar with the n = 0 term at half weight:

    F / A = (k_B T / 2 pi a^2) sum'_n int_{zeta_n}^inf y dy
                sum_{TE, TM} ln(1 - r^2 e^(-2y))

where y = q a is the reduced normal wave number, q = sqrt(k^2 + xi^2 / c^2),
and zeta_n = xi_n a / c. The pressure is the analytic a-derivative

    P = -(k_B T / pi a^3) sum'_n int_{zeta_n}^inf y^2 r^2 e^(-2y) / (1 - r^2 e^(-2y)) dy

The zero-frequency reflection coefficients are fixed per model rather than
evaluated near xi = 0: that limit is where Drude and plasma part ways.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.constants import Boltzmann, c, epsilon_0, hbar
from scipy.special import zeta

from thermoforce.errors import DomainError, NotApplicableError
from thermoforce.quadrature import QuadratureResult, QuadratureSpec, integrate_semi_infinite

logger = logging.getLogger(__name__)

ZETA_3 = float(zeta(3.0))

ModelKind = Literal["plasma", "drude", "ideal"]


class DielectricModel(BaseModel):
    """Local permittivity of the plate metal."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ModelKind
    plasma_frequency_rad_s: Optional[float] = Field(
        default=None, gt=0.0, description="Plasma frequency Omega_p; unused for ideal plates"
    )
    gamma_rad_s: float = Field(default=0.0, ge=0.0, description="Drude relaxation rate")

    @model_validator(mode="after")
    def validate_kind(self) -> "DielectricModel":
        if self.kind != "ideal" and self.plasma_frequency_rad_s is None:
            raise ValueError(f"{self.kind} model needs plasma_frequency_rad_s")
        if self.kind == "plasma" and self.gamma_rad_s > 0.0:
            logger.warning(f"gamma_rad_s={self.gamma_rad_s} is ignored by the plasma model")
        return self

    @classmethod
    def drude_from_conductivity(
        cls, plasma_frequency_rad_s: float, conductivity_s_m: float
    ) -> "DielectricModel":
        """Drude model with gamma = epsilon_0 Omega_p^2 / sigma (SI)."""
        if conductivity_s_m <= 0.0:
            raise DomainError(f"conductivity must be positive, got {conductivity_s_m!r}")
        return cls(
            kind="drude",
            plasma_frequency_rad_s=plasma_frequency_rad_s,
            gamma_rad_s=epsilon_0 * plasma_frequency_rad_s**2 / conductivity_s_m,
        )

    @property
    def dissipative(self) -> bool:
        return self.kind == "drude" and self.gamma_rad_s > 0.0


#: Gold-like defaults (conventional literature values, not fitted data)
GOLD = DielectricModel(kind="drude", plasma_frequency_rad_s=1.37e16, gamma_rad_s=4.5e13)
GOLD_PLASMA = DielectricModel(kind="plasma", plasma_frequency_rad_s=1.37e16)
IDEAL = DielectricModel(kind="ideal")


class LifshitzConfig(BaseModel):
    """One plate-separation / temperature point."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    separation_m: float = Field(..., gt=0.0, description="Plate separation a")
    temperature_k: float = Field(..., gt=0.0, description="Temperature T")
    model: DielectricModel
    matsubara_cutoff: Optional[int] = Field(
        default=None, ge=1, description="Fixed number of Matsubara terms (n = 0 .. cutoff-1)"
    )
    tail_tolerance: float = Field(
        default=1e-10, gt=0.0, description="Stop once a term is below this fraction of the sum"
    )
    max_terms: int = Field(default=200000, ge=1, description="Hard limit on adaptive terms")
    k_integral_spec: QuadratureSpec = Field(
        default_factory=lambda: QuadratureSpec(rel_tol=1e-10, abs_tol=0.0)
    )

    @property
    def matsubara_step(self) -> float:
        """zeta_1 = 2 pi k_B T a / (hbar c)."""
        return 2.0 * math.pi * Boltzmann * self.temperature_k * self.separation_m / (hbar * c)


@dataclass(frozen=True)
class LifshitzResult:
    """A Matsubara sum with its error budget."""

    value: float
    truncation_bound: float
    quadrature_error: float
    terms: int
    converged: bool = True


def permittivity_imag_freq(model: DielectricModel, xi: float) -> float:
    """
    epsilon(i xi) for xi > 0; infinite for ideal plates.

    Raises:
        DomainError: If xi <= 0 (use zero_frequency_coefficient)
    """
    if xi <= 0.0:
        raise DomainError(f"xi must be positive, got {xi!r}")
    if model.kind == "ideal":
        return math.inf
    omega_p = model.plasma_frequency_rad_s
    if model.kind == "plasma":
        return 1.0 + (omega_p / xi) ** 2
    return 1.0 + omega_p * omega_p / (xi * (xi + model.gamma_rad_s))


def zero_frequency_coefficient(model: DielectricModel) -> float:
    """
    A = lim_{xi -> 0} xi^2 epsilon(i xi) in (rad/s)^2.

    Any gamma > 0 sends A from Omega_p^2 to zero.
    """
    if model.kind == "ideal":
        return math.inf
    if model.dissipative:
        return 0.0
    return model.plasma_frequency_rad_s**2


def _fresnel(eps: float, q: float, k_medium: float) -> Tuple[float, float]:
    r_te = (q - k_medium) / (q + k_medium)
    r_tm = (eps * q - k_medium) / (eps * q + k_medium)
    return r_te, r_tm


def reflection_coefficients(model: DielectricModel, xi_n: float, k: float) -> Tuple[float, float]:
    """
    (r_TE, r_TM) at imaginary frequency xi_n and in-plane wave number k (1/m).

    Ideal plates give (-1, 1). xi_n = 0 uses the per-model limits.
    """
    if xi_n < 0.0:
        raise DomainError(f"xi_n must be non-negative, got {xi_n!r}")
    if k <= 0.0:
        raise DomainError(f"k must be positive, got {k!r}")
    if model.kind == "ideal":
        return -1.0, 1.0
    if xi_n == 0.0:
        a_coeff = zero_frequency_coefficient(model)
        k_medium = math.sqrt(k * k + a_coeff / (c * c))
        return (k - k_medium) / (k + k_medium), 1.0
    eps = permittivity_imag_freq(model, xi_n)
    q = math.sqrt(k * k + (xi_n / c) ** 2)
    k_medium = math.sqrt(k * k + eps * (xi_n / c) ** 2)
    return _fresnel(eps, q, k_medium)


def _reduced_coefficients(
    model: DielectricModel, n: int, zeta_n: float, separation: float
) -> Callable[[float], Tuple[float, float]]:
    """(r_TE, r_TM) as a function of y = q a for Matsubara index n."""
    if model.kind == "ideal":
        return lambda y: (-1.0, 1.0)

    omega_p = model.plasma_frequency_rad_s
    plasma_sq = (omega_p * separation / c) ** 2
    if n == 0:
        te_sq = plasma_sq if not model.dissipative else 0.0
        if te_sq == 0.0:
            return lambda y: (0.0, 1.0)

        def zero_term(y: float) -> Tuple[float, float]:
            k_medium = math.sqrt(y * y + te_sq)
            return (y - k_medium) / (y + k_medium), 1.0

        return zero_term

    xi = zeta_n * c / separation
    eps = permittivity_imag_freq(model, xi)
    # (eps - 1) zeta^2 without cancellation
    extra = plasma_sq if model.kind == "plasma" else plasma_sq * xi / (xi + model.gamma_rad_s)

    def term(y: float) -> Tuple[float, float]:
        return _fresnel(eps, y, math.sqrt(y * y + extra))

    return term


def _one_minus(r_sq: float, y: float) -> Tuple[float, float]:
    """(r^2 e^(-2y), 1 - r^2 e^(-2y)) with the difference formed stably."""
    decay = math.exp(-2.0 * y)
    product = r_sq * decay
    return product, -math.expm1(-2.0 * y) + (1.0 - r_sq) * decay


def _log_term(r_sq: float, y: float) -> float:
    product, rest = _one_minus(r_sq, y)
    return math.log1p(-product) if product < 0.5 else math.log(rest)


def _matsubara_term(
    cfg: LifshitzConfig, n: int, quantity: Literal["free_energy", "pressure"]
) -> QuadratureResult:
    """Reduced k-integral of one Matsubara term, both polarizations."""
    zeta_n = n * cfg.matsubara_step
    coefficients = _reduced_coefficients(cfg.model, n, zeta_n, cfg.separation_m)

    if quantity == "free_energy":

        def integrand(s: float) -> float:
            y = zeta_n + s
            r_te, r_tm = coefficients(y)
            return y * (_log_term(r_te * r_te, y) + _log_term(r_tm * r_tm, y))

    else:

        def integrand(s: float) -> float:
            y = zeta_n + s
            total = 0.0
            for r in coefficients(y):
                product, rest = _one_minus(r * r, y)
                total += product / rest
            return y * y * total

    breakpoints = [1.0]
    if cfg.model.plasma_frequency_rad_s is not None:
        plasma_y = cfg.model.plasma_frequency_rad_s * cfg.separation_m / c
        if plasma_y < 50.0:
            breakpoints.append(plasma_y)
    return integrate_semi_infinite(integrand, cfg.k_integral_spec, breakpoints=breakpoints)


def _matsubara_sum(cfg: LifshitzConfig, quantity: Literal["free_energy", "pressure"]) -> LifshitzResult:
    first = _matsubara_term(cfg, 0, quantity)
    total = 0.5 * first.value
    error = 0.5 * first.error_estimate
    converged = first.converged
    previous = abs(first.value)
    bound = 0.0
    n = 1
    limit = cfg.matsubara_cutoff if cfg.matsubara_cutoff is not None else cfg.max_terms
    while n < limit:
        term = _matsubara_term(cfg, n, quantity)
        total += term.value
        error += term.error_estimate
        converged = converged and term.converged
        size = abs(term.value)
        ratio = size / previous if previous > 0.0 else 0.0
        previous = size
        n += 1
        if cfg.matsubara_cutoff is None and size <= cfg.tail_tolerance * abs(total):
            bound = size * ratio / (1.0 - ratio) if ratio < 1.0 else size
            break
    else:
        if cfg.matsubara_cutoff is None:
            logger.warning(f"Matsubara sum hit max_terms={cfg.max_terms} before the tail tolerance")
            converged = False
        # remaining terms are bounded by a geometric tail in zeta_1
        ratio = math.exp(-2.0 * cfg.matsubara_step)
        bound = previous * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf

    logger.debug(
        f"{quantity} sum at a={cfg.separation_m} m, T={cfg.temperature_k} K: "
        f"{n} terms, tail bound {bound:.3g}"
    )
    return LifshitzResult(
        value=total, truncation_bound=bound, quadrature_error=error, terms=n, converged=converged
    )


def free_energy_per_area(cfg: LifshitzConfig) -> LifshitzResult:
    """Casimir free energy per unit area in J/m^2 (negative is binding)."""
    reduced = _matsubara_sum(cfg, "free_energy")
    unit = Boltzmann * cfg.temperature_k / (2.0 * math.pi * cfg.separation_m**2)
    return _scale(reduced, unit)


def pressure(cfg: LifshitzConfig) -> LifshitzResult:
    """Casimir pressure -d(F/A)/da in Pa (negative is attractive)."""
    reduced = _matsubara_sum(cfg, "pressure")
    unit = -Boltzmann * cfg.temperature_k / (math.pi * cfg.separation_m**3)
    return _scale(reduced, unit)


def _scale(result: LifshitzResult, unit: float) -> LifshitzResult:
    return LifshitzResult(
        value=result.value * unit,
        truncation_bound=result.truncation_bound * abs(unit),
        quadrature_error=result.quadrature_error * abs(unit),
        terms=result.terms,
        converged=result.converged,
    )


def evanescent_scale(separation_m: float, model: DielectricModel) -> float:
    """
    Frequency gamma (omega_c / Omega_p)^2 of the thermal TE near fields, omega_c = c / a.

    Raises:
        NotApplicableError: If the model is not Drude
    """
    if model.kind != "drude":
        raise NotApplicableError(f"evanescent scale is defined for the Drude model, not {model.kind}")
    if separation_m <= 0.0:
        raise DomainError(f"separation must be positive, got {separation_m!r}")
    return model.gamma_rad_s * (c / (separation_m * model.plasma_frequency_rad_s)) ** 2


def ideal_classical_free_energy(separation_m: float, temperature_k: float) -> float:
    """High-temperature limit for perfect reflectors, -zeta(3) k_B T / (8 pi a^2)."""
    return -ZETA_3 * Boltzmann * temperature_k / (8.0 * math.pi * separation_m**2)


def ideal_classical_pressure(separation_m: float, temperature_k: float) -> float:
    """-zeta(3) k_B T / (4 pi a^3)."""
    return -ZETA_3 * Boltzmann * temperature_k / (4.0 * math.pi * separation_m**3)


def ideal_zero_temperature_free_energy(separation_m: float) -> float:
    """-pi^2 hbar c / (720 a^3)."""
    return -math.pi**2 * hbar * c / (720.0 * separation_m**3)


def ideal_zero_temperature_pressure(separation_m: float) -> float:
    """-pi^2 hbar c / (240 a^4)."""
    return -math.pi**2 * hbar * c / (240.0 * separation_m**4)
