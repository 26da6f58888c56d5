"""Unit tests for the antenna noise interaction."""

import logging
import math
from typing import Optional

import pytest
from pydantic import ValidationError
from scipy.constants import Boltzmann, hbar

from thermoforce.circuit_noise import (
    ASYMPTOTE_COEFFICIENT,
    AntennaPair,
    ReducedParams,
    asymptote_reduced,
    figure1_curve,
    free_energy_factor,
    h_factor,
    interaction_entropy,
    interaction_force_coefficient,
    interaction_free_energy,
    low_temperature_asymptote,
    normal_mode_free_energy,
    planck_weight,
    planck_weight_derivative,
    reduced_entropy,
    reduced_impedance,
    reduced_thermo_point,
    rlc_reduced_params,
    self_entropy,
    self_free_energy,
    thermo_point,
    total_entropy,
    zero_resistance_limit,
)
from thermoforce.errors import DomainError
from thermoforce.langevin import oracle_h_zero
from thermoforce.quadrature import QuadratureSpec, derivative_scalar
from thermoforce.resistance import ConstantResistance, PowerLawResistance, TabulatedResistance

TIGHT = QuadratureSpec(rel_tol=1e-12, abs_tol=0.0, max_subdivisions=500)


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def test_planck_weight_values() -> None:
    """Test E(y) = y / (e^y - 1) at a few points."""
    assert planck_weight(0.0) == 1.0
    assert planck_weight(1.0) == pytest.approx(1.0 / (math.e - 1.0), rel=1e-14)
    assert planck_weight(10.0) == pytest.approx(4.5402e-4, rel=1e-4)
    assert planck_weight(1e-12) == pytest.approx(1.0, abs=1e-12)

    with pytest.raises(DomainError):
        planck_weight(-1.0)


def test_planck_weight_is_decreasing() -> None:
    """Test that the noise weight decreases strictly and stays in (0, 1]."""
    values = [planck_weight(y) for y in (0.0, 0.1, 1.0, 5.0, 20.0)]

    assert all(b < a for a, b in zip(values, values[1:]))
    assert all(0.0 < v <= 1.0 for v in values)


@pytest.mark.parametrize("y", [0.01, 0.5, 2.0, 30.0])
def test_planck_weight_derivative(y: float) -> None:
    """Test the analytic derivative against numerical differentiation."""
    numeric = derivative_scalar(planck_weight, y, h0=0.1 * y)

    assert planck_weight_derivative(y) == pytest.approx(numeric.value, rel=1e-7, abs=1e-12)


def test_planck_weight_derivative_at_zero() -> None:
    """Test dE/dy = -1/2 at y = 0."""
    assert planck_weight_derivative(0.0) == -0.5
    # series branch joins the closed form
    y = 0.99e-4
    e = planck_weight(y)
    assert planck_weight_derivative(y) == pytest.approx(e * (1.0 - e) / y - e, abs=1e-10)


def test_reduced_impedance() -> None:
    """Test the RL form, series resonance and a detuned RLC point."""
    assert reduced_impedance(1.0) == complex(1.0, -1.0)
    assert reduced_impedance(2.0, kappa=2.0) == complex(1.0, 0.0)
    assert reduced_impedance(0.5, kappa=1.0) == complex(1.0, 1.5)

    with pytest.raises(DomainError):
        reduced_impedance(0.0)
    with pytest.raises(DomainError):
        reduced_impedance(1.0, kappa=-1.0)


def test_reduced_params_validation() -> None:
    """Test the passivity bound on m^2."""
    with pytest.raises(ValidationError):
        ReducedParams(rho=0.0, m_sq=1.0)
    with pytest.raises(ValidationError):
        ReducedParams(rho=-1.0, m_sq=0.5)


# ---------------------------------------------------------------------------
# H factor and free energy
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("m_sq", [0.0, 0.36, 0.64, 0.9])
@pytest.mark.parametrize("rho", [0.0, 1e-9])
def test_h_factor_matches_equipartition(rho: float, m_sq: float) -> None:
    """Test H(rho -> 0) = 1 / (2 (1 - m^2))."""
    result = h_factor(ReducedParams(rho=rho, m_sq=m_sq))

    assert result.converged
    assert result.value == pytest.approx(oracle_h_zero(m_sq), abs=1e-5)


@pytest.mark.parametrize("m_sq", [0.0, 0.36, 0.64, 0.9])
def test_h_factor_first_quantum_correction(m_sq: float) -> None:
    """Test that a small rho lowers H by less than 1e-3."""
    correction = h_factor(ReducedParams(rho=1e-6, m_sq=m_sq)).value - oracle_h_zero(m_sq)

    assert -1e-3 < correction < 0.0


def test_h_factor_known_values() -> None:
    """Test H at the decoupled point and its suppression at large rho."""
    assert h_factor(ReducedParams(rho=0.0, m_sq=0.0)).value == pytest.approx(0.5, rel=1e-9)
    assert h_factor(ReducedParams(rho=0.0, m_sq=0.64)).value == pytest.approx(25.0 / 18.0, rel=1e-9)
    assert 0.0 < h_factor(ReducedParams(rho=1e3, m_sq=0.64)).value < 1e-2


@pytest.mark.parametrize("m_sq", [0.1, 0.36, 0.64, 0.9])
@pytest.mark.parametrize("rho", [0.0, 1e-9])
def test_classical_free_energy(rho: float, m_sq: float) -> None:
    """Test F / k_B T = -(1/2) ln(1 - m^2) in the classical limit."""
    result = free_energy_factor(ReducedParams(rho=rho, m_sq=m_sq))
    expected = -0.5 * math.log(1.0 - m_sq)

    assert result.converged
    assert result.value == pytest.approx(expected, rel=1e-5)


def test_free_energy_vanishes_without_coupling() -> None:
    """Test that m = 0 gives no interaction."""
    assert free_energy_factor(ReducedParams(rho=0.3, m_sq=0.0, kappa=2.0)).value == 0.0
    assert reduced_entropy(ReducedParams(rho=0.3, m_sq=0.0), 2.0).value == 0.0


def test_free_energy_non_increasing_in_rho() -> None:
    """Test that a stronger quantum cutoff never raises the RL free energy."""
    values = [free_energy_factor(ReducedParams(rho=rho, m_sq=0.64)).value for rho in (0.0, 0.1, 1.0, 10.0)]

    assert all(b <= a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("kappa", [0.0, 2.0])
def test_force_is_derivative_of_free_energy(kappa: float) -> None:
    """Test H = dPhi / d(m^2) by finite differences in m^2."""
    rho = 0.5

    def phi(m_sq: float) -> float:
        return free_energy_factor(ReducedParams(rho=rho, m_sq=m_sq, kappa=kappa), TIGHT).value

    numeric = derivative_scalar(phi, 0.36, h0=0.02, levels=5)
    analytic = h_factor(ReducedParams(rho=rho, m_sq=0.36, kappa=kappa), TIGHT).value

    assert analytic == pytest.approx(numeric.value, rel=1e-6)


def test_rl_free_energy_increases_with_coupling() -> None:
    """Test dF/d(m^2) > 0 for the RL model."""
    values = [free_energy_factor(ReducedParams(rho=1.0, m_sq=m_sq)).value for m_sq in (0.1, 0.3, 0.5, 0.7)]

    assert all(b > a for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# Entropy
# ---------------------------------------------------------------------------


def _fast_pair(capacitance_f: Optional[float] = None) -> AntennaPair:
    """Pair with omega_R ~ omega_T near 4 K."""
    return AntennaPair(
        inductance_h=1e-7,
        coupling=0.6,
        resistance=PowerLawResistance(r_ref_ohm=1e5, t_ref_k=4.0, exponent=2.0),
        capacitance_f=capacitance_f,
    )


@pytest.mark.parametrize("capacitance_f", [None, 1e-17])
@pytest.mark.parametrize("temperature", [2.0, 4.0, 8.0])
def test_entropy_matches_numerical_derivative(capacitance_f: Optional[float], temperature: float) -> None:
    """Test the differentiated-under-the-integral entropy against -dF/dT."""
    pair = _fast_pair(capacitance_f)

    numeric = derivative_scalar(
        lambda t: interaction_free_energy(pair, t, TIGHT).value,
        temperature,
        h0=0.01 * temperature,
        levels=5,
    )
    analytic = interaction_entropy(pair, temperature, TIGHT)

    assert not analytic.numerical
    assert analytic.value == pytest.approx(-numeric.value, rel=1e-5)


@pytest.mark.parametrize("m_sq", [0.36, 0.64])
def test_nernst_violation_in_reduced_form(m_sq: float) -> None:
    """Test S -> (1/2) ln(1 - m^2) k_B for R ~ T^2 as T -> 0."""
    entropy = reduced_entropy(ReducedParams(rho=1e-9, m_sq=m_sq), resistance_exponent=2.0)

    assert entropy.value == pytest.approx(0.5 * math.log(1.0 - m_sq), abs=1e-4)


def test_nernst_violation_on_a_temperature_grid(rl_pair: AntennaPair) -> None:
    """Test that the RL entropy tends to a negative, coupling-dependent constant."""
    limit = 0.5 * math.log(1.0 - rl_pair.coupling**2)
    errors = [
        abs(interaction_entropy(rl_pair, t).value / Boltzmann - limit) for t in (1.0, 0.1, 0.01)
    ]

    assert errors[-1] < 1e-4
    assert errors[-1] <= errors[0]
    assert limit < 0.0


def test_tabulated_resistance_falls_back_to_numerical_entropy(caplog) -> None:
    """Test the numerical-differentiation path for laws without a slope."""
    temperatures = [1.0, 2.0, 4.0, 8.0, 16.0]
    pair = AntennaPair(
        inductance_h=1e-7,
        coupling=0.6,
        resistance=TabulatedResistance(
            temperatures_k=temperatures, values_ohm=[1e5 * (t / 4.0) ** 2 for t in temperatures]
        ),
    )

    with caplog.at_level(logging.WARNING):
        estimate = interaction_entropy(pair, 3.0)

    assert estimate.numerical
    assert math.isfinite(estimate.value)
    assert "numerically" in caplog.text


# ---------------------------------------------------------------------------
# Physical layer
# ---------------------------------------------------------------------------


def test_force_coefficient_in_classical_limit(rl_pair: AntennaPair) -> None:
    """Test k_B T H -> k_B T / (2 (1 - m^2)) when R -> 0+."""
    temperature = 0.5
    result = interaction_force_coefficient(rl_pair, temperature)
    expected = Boltzmann * temperature / (2.0 * (1.0 - 0.64))

    assert result.value == pytest.approx(expected, rel=1e-4)
    assert zero_resistance_limit(0.64, "RL", thermal_energy=Boltzmann * temperature) == pytest.approx(
        expected
    )


def test_strictly_dissipationless_pair_has_no_force() -> None:
    """Test that R = 0 exactly is its own branch with zero interaction."""
    pair = AntennaPair(inductance_h=1e-6, coupling=0.8, resistance=ConstantResistance(value_ohm=0.0))

    assert interaction_force_coefficient(pair, 4.0).value == 0.0
    assert interaction_free_energy(pair, 4.0).value == 0.0
    assert interaction_entropy(pair, 4.0).value == 0.0
    with pytest.raises(DomainError):
        pair.reduced(4.0)


def test_non_positive_temperature_rejected(constant_rl_pair: AntennaPair) -> None:
    """Test the T > 0 precondition."""
    with pytest.raises(DomainError):
        interaction_free_energy(constant_rl_pair, 0.0)
    with pytest.raises(DomainError):
        interaction_force_coefficient(constant_rl_pair, -1.0)


def test_pair_validation() -> None:
    """Test passivity and positivity checks on the pair."""
    with pytest.raises(ValidationError):
        AntennaPair(inductance_h=1e-6, coupling=1.0, resistance=ConstantResistance(value_ohm=1.0))
    with pytest.raises(ValidationError):
        AntennaPair(inductance_h=0.0, coupling=0.5, resistance=ConstantResistance(value_ohm=1.0))
    with pytest.raises(ValidationError):
        AntennaPair(
            inductance_h=1e-6,
            coupling=0.5,
            resistance=ConstantResistance(value_ohm=1.0),
            capacitance_f=0.0,
        )


def test_reduced_parameters_of_a_pair(constant_rl_pair: AntennaPair) -> None:
    """Test the conversion to (rho, m^2, kappa)."""
    temperature = 2.0
    p = constant_rl_pair.reduced(temperature)

    assert p.rho == pytest.approx((1.0 / 1e-6) / (Boltzmann * temperature / hbar))
    assert p.m_sq == pytest.approx(0.36)
    assert p.kappa == 0.0


def test_thermo_point(constant_rl_pair: AntennaPair) -> None:
    """Test that thermo_point assembles consistent quantities."""
    point = thermo_point(constant_rl_pair, 3.0)

    assert point.converged
    assert point.free_energy == pytest.approx(interaction_free_energy(constant_rl_pair, 3.0).value)
    assert point.quadrature_error >= 0.0


def test_reduced_thermo_point_error_budget() -> None:
    """Test that the reported error sums all three integrals, entropy included."""
    p = ReducedParams(rho=0.5, m_sq=0.64, kappa=2.0)
    point = reduced_thermo_point(p, 2.0)
    free, force, entropy = free_energy_factor(p), h_factor(p), reduced_entropy(p, 2.0)

    assert point.temperature is None
    assert point.free_energy == free.value
    assert point.entropy == entropy.value
    assert point.force_coefficient == force.value
    assert point.quadrature_error == free.error_estimate + force.error_estimate + entropy.error_estimate


# ---------------------------------------------------------------------------
# RLC model
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("t,tolerance", [(0.005, 0.01), (0.01, 0.03), (0.02, 0.08)])
def test_low_temperature_asymptote(t: float, tolerance: float) -> None:
    """Test the t^6 omega_R law for m = 0.8, omega_R = 5 t^2 omega_C."""
    point = figure1_curve([t])[0]
    expected = asymptote_reduced(t, 0.8, 5.0 * t * t)

    assert point.free_energy == pytest.approx(expected, rel=tolerance)


def test_asymptote_error_shrinks_with_temperature() -> None:
    """Test that the asymptote improves as t decreases."""
    grid = [0.005, 0.01, 0.02]
    errors = [
        abs(point.free_energy / asymptote_reduced(t, 0.8, 5.0 * t * t) - 1.0)
        for t, point in zip(grid, figure1_curve(grid))
    ]

    assert errors[0] < errors[1] < errors[2]


def test_asymptote_closed_form() -> None:
    """Test the prefactor and the physical-unit form."""
    assert ASYMPTOTE_COEFFICIENT == pytest.approx(77.71934, rel=1e-6)
    assert asymptote_reduced(0.1, 0.8, 0.05) == pytest.approx(-2.487e-6, rel=1e-3)
    assert asymptote_reduced(0.1, 0.0, 0.05) == 0.0

    omega_c = 1e12
    temperature = 0.1 * hbar * omega_c / Boltzmann
    value = low_temperature_asymptote(0.8, 0.05 * omega_c, omega_c, temperature)
    assert value / (hbar * omega_c) == pytest.approx(-2.487e-6, rel=1e-3)
    assert low_temperature_asymptote(0.8, 0.05 * omega_c, omega_c, 0.0) == 0.0

    with pytest.raises(DomainError):
        low_temperature_asymptote(0.8, 1.0, omega_c, 2.0 * hbar * omega_c / Boltzmann)


def test_rlc_force_vanishes_linearly_with_resistance() -> None:
    """Test force coefficient ratios of 10 per decade of omega_R / omega_C at t = 0.02."""
    t = 0.02
    values = [h_factor(rlc_reduced_params(t, 0.8, ratio)).value for ratio in (1e-2, 1e-3, 1e-4)]

    assert values[0] / values[1] == pytest.approx(10.0, abs=0.5)
    assert values[1] / values[2] == pytest.approx(10.0, abs=0.5)


def test_rlc_zero_resistance_limit() -> None:
    """Test the normal-mode limit: negligible when quantum, equipartition when classical."""
    assert abs(zero_resistance_limit(0.64, "RLC", t=0.02)) < 1e-12
    assert zero_resistance_limit(0.64, "RLC", t=1e4) == pytest.approx(25.0 / 18.0, rel=1e-3)
    assert zero_resistance_limit(0.0, "RL") == 0.5

    with pytest.raises(DomainError):
        zero_resistance_limit(0.64, "RLC")


def test_rlc_classical_limit_with_narrow_resonances() -> None:
    """Test H at t = 2, omega_R / omega_C = 1e-4 (resonance width 1e-4 of its position)."""
    result = h_factor(rlc_reduced_params(2.0, 0.8, 1e-4))

    assert result.converged
    assert result.value == pytest.approx(zero_resistance_limit(0.64, "RLC", t=2.0), rel=1e-3)


@pytest.mark.parametrize("m_sq", [0.04, 0.36, 0.64])
def test_normal_mode_force_is_derivative_of_free_energy(m_sq: float) -> None:
    """Test t H = d(F / hbar omega_C) / d(m^2) in the undamped RLC limit."""
    t = 0.5
    numeric = derivative_scalar(lambda s: normal_mode_free_energy(math.sqrt(s), t), m_sq, h0=0.01)

    assert t * zero_resistance_limit(m_sq, "RLC", t=t) == pytest.approx(numeric.value, rel=1e-6)


def test_normal_mode_force_small_coupling_branch() -> None:
    """Test that the m -> 0 series joins the closed form."""
    series = zero_resistance_limit(1e-14, "RLC", t=0.5)
    closed = zero_resistance_limit(1e-8, "RLC", t=0.5)

    assert series > 0.0
    assert series == pytest.approx(closed, rel=1e-6)


def test_normal_mode_free_energy_limits() -> None:
    """Test the zero-coupling and zero-temperature limits."""
    assert normal_mode_free_energy(0.0, 0.5) == 0.0
    assert normal_mode_free_energy(0.8, 0.0) == 0.0
    # thermal part only: the softened mode outweighs the stiffened one
    assert normal_mode_free_energy(0.8, 0.5) == pytest.approx(0.012086, rel=1e-3)


def test_self_free_energy() -> None:
    """Test the single-oscillator free energy."""
    omega_c = 1e12
    temperature = hbar * omega_c / Boltzmann

    assert self_free_energy(omega_c, 0.0) == 0.0
    assert self_free_energy(omega_c, temperature) / (Boltzmann * temperature) == pytest.approx(
        -0.458675, rel=1e-5
    )
    assert self_free_energy(omega_c, 100.0 * temperature) < self_free_energy(omega_c, temperature)


def test_self_entropy_is_derivative_of_self_free_energy() -> None:
    """Test S_self = -dF_self/dT."""
    omega_c = 1e12
    temperature = 0.7 * hbar * omega_c / Boltzmann
    numeric = derivative_scalar(lambda t: self_free_energy(omega_c, t), temperature, h0=0.01 * temperature)

    assert -numeric.value / Boltzmann == pytest.approx(self_entropy(0.7), rel=1e-7)
    assert self_entropy(0.0) == 0.0
    assert self_entropy(0.001) == 0.0


def test_figure1_curve_without_coupling_is_zero() -> None:
    """Test that m = 0 gives an identically zero curve."""
    points = figure1_curve([0.1, 0.5, 1.0], m=0.0)

    assert all(p.free_energy == 0.0 for p in points)
    assert all(p.entropy == 0.0 for p in points)


def test_total_entropy_without_coupling() -> None:
    """Test S_total = 2 S_self when the wires do not interact."""
    omega_c = 1e12
    pair = AntennaPair(
        inductance_h=1e-9,
        coupling=0.0,
        resistance=ConstantResistance(value_ohm=1.0),
        capacitance_f=1.0 / (1e-9 * omega_c**2),
    )
    temperature = 0.5 * hbar * omega_c / Boltzmann

    assert total_entropy(pair, temperature).value == pytest.approx(2.0 * Boltzmann * self_entropy(0.5))

    with pytest.raises(DomainError):
        total_entropy(pair.model_copy(update={"capacitance_f": None}), temperature)


@pytest.mark.slow
def test_figure1_shape() -> None:
    """Test F -> 0 as t -> 0, a positive-slope interval, and positive total entropy."""
    grid = [0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0, 1.3, 1.6, 2.0]
    points = figure1_curve(grid)
    free = [p.free_energy for p in points]

    assert abs(free[0]) < 1e-10
    assert abs(free[0]) < abs(free[2])
    assert any(b > a for a, b in zip(free, free[1:]))
    for t, point in zip(grid, points):
        assert point.entropy + 2.0 * self_entropy(t) >= -1e-10


@pytest.mark.slow
def test_figure1_slope_changes_sign_twice() -> None:
    """Test a minimum and a later maximum of the free energy on (0, 2]."""
    grid = [0.05 * k for k in range(1, 41)]
    free = [p.free_energy for p in figure1_curve(grid)]
    slopes = [b - a for a, b in zip(free, free[1:])]

    changes = [grid[i + 1] for i, (a, b) in enumerate(zip(slopes, slopes[1:])) if a * b < 0.0]
    assert len(changes) >= 2
    # minimum near t = 0.27, maximum near t = 0.9
    assert changes[0] < 0.5 < changes[-1]


@pytest.mark.slow
def test_rlc_entropy_vanishes_as_t_to_the_seventh() -> None:
    """Test Nernst restoration: S ~ t^7 over one decade of t."""
    low, high = figure1_curve([0.002, 0.02])

    assert low.entropy > 0.0
    assert high.entropy / low.entropy == pytest.approx(1e7, rel=0.12)
