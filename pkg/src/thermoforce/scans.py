"""
Parameter scans behind the CLI commands.

Each scan turns a validated run configuration into a ScanResult: a fixed
column list and one row per grid point, in grid order. Rows are independent
and can be computed in a process pool.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np
from scipy.constants import Boltzmann

from thermoforce.circuit_noise import (
    AntennaPair,
    ReducedParams,
    asymptote_reduced,
    figure1_curve,
    h_factor,
    reduced_thermo_point,
    self_entropy,
    thermo_point,
)
from thermoforce.geometry import (
    WireGeometry,
    antenna_force,
    coupling_profile,
    mutual_inductance,
    neumann_mutual_inductance,
    self_inductance,
)
from thermoforce.langevin import (
    equipartition_covariance,
    oracle_h_zero,
    simulate_coupled_rl,
)
from thermoforce.lifshitz import IDEAL, LifshitzConfig, free_energy_per_area, pressure
from thermoforce.quadrature import QuadratureSpec
from thermoforce.resistance import ConstantResistance
from thermoforce.run_config import (
    AntennaScanConfig,
    Figure1Config,
    GeometryConfig,
    LifshitzScanConfig,
    OracleCheckConfig,
)

logger = logging.getLogger(__name__)

Row = Dict[str, Any]
T = TypeVar("T")


@dataclass
class ScanResult:
    """Rows of one scan with their column order and outcome flags."""

    command: str
    columns: List[str]
    rows: List[Row] = field(default_factory=list)
    seed: Optional[int] = None
    passed: Optional[bool] = None

    @property
    def converged(self) -> bool:
        return all(row.get("converged", True) for row in self.rows)

    def to_dict(self) -> dict:
        """Convert result to dictionary format, each row restricted to the columns."""
        return {
            "command": self.command,
            "columns": list(self.columns),
            "rows": [{column: row.get(column) for column in self.columns} for row in self.rows],
            "converged": self.converged,
            "passed": self.passed,
        }


def _map_rows(func: Callable[[T], Row], items: Sequence[T], workers: int) -> List[Row]:
    """Apply func to every item, in a process pool when workers > 1; keeps item order."""
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def _finish(result: ScanResult) -> ScanResult:
    failed = sum(1 for row in result.rows if not row.get("converged", True))
    if failed:
        logger.warning(f"{result.command}: {failed} of {len(result.rows)} rows did not converge")
    logger.info(f"{result.command}: computed {len(result.rows)} rows")
    return result


# ---------------------------------------------------------------------------
# antenna-scan
# ---------------------------------------------------------------------------

REDUCED_COLUMNS = [
    "rho",
    "m_sq",
    "kappa",
    "free_energy_kt",
    "entropy_kb",
    "h_factor",
    "quadrature_error",
    "converged",
]

PHYSICAL_COLUMNS = [
    "temperature_k",
    "free_energy_j",
    "entropy_j_per_k",
    "force_coefficient_j",
    "quadrature_error",
    "converged",
    "numerical_entropy",
]


def _reduced_row(p: ReducedParams, exponent: float, spec: QuadratureSpec) -> Row:
    point = reduced_thermo_point(p, exponent, spec=spec)
    return {
        "rho": p.rho,
        "m_sq": p.m_sq,
        "kappa": p.kappa,
        "free_energy_kt": point.free_energy,
        "entropy_kb": point.entropy,
        "h_factor": point.force_coefficient,
        "quadrature_error": point.quadrature_error,
        "converged": point.converged,
    }


def _physical_row(temperature: float, pair: AntennaPair, spec: QuadratureSpec) -> Row:
    point = thermo_point(pair, temperature, spec)
    return {
        "temperature_k": point.temperature,
        "free_energy_j": point.free_energy,
        "entropy_j_per_k": point.entropy,
        "force_coefficient_j": point.force_coefficient,
        "quadrature_error": point.quadrature_error,
        "converged": point.converged,
        "numerical_entropy": point.numerical_entropy,
    }


def run_antenna_scan(cfg: AntennaScanConfig, spec: QuadratureSpec, workers: int = 1) -> ScanResult:
    """Interaction free energy, entropy and force coefficient over a rho or T grid."""
    if cfg.reduced is not None:
        block = cfg.reduced
        points = [ReducedParams(rho=rho, m_sq=block.m_sq, kappa=block.kappa) for rho in block.rho_grid]
        logger.info(f"antenna-scan: {len(points)} reduced points (m^2={block.m_sq}, kappa={block.kappa})")
        rows = _map_rows(
            partial(_reduced_row, exponent=block.resistance_exponent, spec=spec), points, workers
        )
        return _finish(ScanResult("antenna-scan", REDUCED_COLUMNS, rows, seed=cfg.seed))

    block = cfg.physical
    pair = AntennaPair(
        inductance_h=block.inductance_h,
        coupling=block.coupling,
        resistance=block.resistance,
        capacitance_f=block.capacitance_f,
    )
    logger.info(f"antenna-scan: {len(block.temperature_grid_k)} temperatures")
    rows = _map_rows(partial(_physical_row, pair=pair, spec=spec), block.temperature_grid_k, workers)
    return _finish(ScanResult("antenna-scan", PHYSICAL_COLUMNS, rows, seed=cfg.seed))


# ---------------------------------------------------------------------------
# figure1
# ---------------------------------------------------------------------------

FIGURE1_COLUMNS = [
    "t",
    "free_energy_hbar_omega_c",
    "entropy_kb",
    "total_entropy_kb",
    "force_coefficient_hbar_omega_c",
    "asymptote_hbar_omega_c",
    "quadrature_error",
    "converged",
]


def _figure1_row(t: float, m: float, ratio: float, exponent: float, spec: QuadratureSpec) -> Row:
    (point,) = figure1_curve([t], m=m, ratio=ratio, exponent=exponent, spec=spec)
    return {
        "t": t,
        "free_energy_hbar_omega_c": point.free_energy,
        "entropy_kb": point.entropy,
        "total_entropy_kb": point.entropy + 2.0 * self_entropy(t),
        "force_coefficient_hbar_omega_c": point.force_coefficient,
        "asymptote_hbar_omega_c": asymptote_reduced(t, m, ratio * t**exponent) if t < 1.0 else None,
        "quadrature_error": point.quadrature_error,
        "converged": point.converged,
    }


def run_figure1(cfg: Figure1Config, spec: QuadratureSpec, workers: int = 1) -> ScanResult:
    """RLC interaction curve versus t with omega_R = ratio * t^exponent * omega_C."""
    logger.info(f"figure1: {len(cfg.t_grid)} points, m={cfg.m}, omega_R = {cfg.ratio} t^{cfg.exponent} omega_C")
    row = partial(_figure1_row, m=cfg.m, ratio=cfg.ratio, exponent=cfg.exponent, spec=spec)
    return _finish(ScanResult("figure1", FIGURE1_COLUMNS, _map_rows(row, cfg.t_grid, workers), seed=cfg.seed))


# ---------------------------------------------------------------------------
# lifshitz-scan
# ---------------------------------------------------------------------------

LIFSHITZ_COLUMNS = [
    "separation_m",
    "temperature_k",
    "model",
    "free_energy_j_m2",
    "pressure_pa",
    "free_energy_truncation_bound",
    "pressure_truncation_bound",
    "matsubara_terms",
    "converged",
]


def _lifshitz_row(
    point: tuple, tail_tolerance: float, cutoff: Optional[int], spec: QuadratureSpec, ratio_to_ideal: bool
) -> Row:
    separation, temperature, model = point
    common = {"tail_tolerance": tail_tolerance, "matsubara_cutoff": cutoff, "k_integral_spec": spec}
    cfg = LifshitzConfig(separation_m=separation, temperature_k=temperature, model=model, **common)
    free = free_energy_per_area(cfg)
    pres = pressure(cfg)
    row = {
        "separation_m": separation,
        "temperature_k": temperature,
        "model": model.kind,
        "free_energy_j_m2": free.value,
        "pressure_pa": pres.value,
        "free_energy_truncation_bound": free.truncation_bound,
        "pressure_truncation_bound": pres.truncation_bound,
        "matsubara_terms": max(free.terms, pres.terms),
        "converged": free.converged and pres.converged,
    }
    if ratio_to_ideal:
        ideal = pressure(cfg.model_copy(update={"model": IDEAL}))
        row["pressure_ratio_to_ideal"] = pres.value / ideal.value
        row["converged"] = row["converged"] and ideal.converged
    return row


def run_lifshitz_scan(cfg: LifshitzScanConfig, workers: int = 1) -> ScanResult:
    """Casimir free energy and pressure over separation x temperature x model."""
    columns = list(LIFSHITZ_COLUMNS)
    if cfg.ratio_to_ideal:
        columns.insert(columns.index("converged"), "pressure_ratio_to_ideal")
    points = list(product(cfg.separation_grid_m, cfg.temperature_grid_k, cfg.models))
    logger.info(f"lifshitz-scan: {len(points)} points")
    spec = cfg.quadrature.apply(QuadratureSpec(rel_tol=1e-10, abs_tol=0.0))
    row = partial(
        _lifshitz_row,
        tail_tolerance=cfg.tail_tolerance,
        cutoff=cfg.matsubara_cutoff,
        spec=spec,
        ratio_to_ideal=cfg.ratio_to_ideal,
    )
    return _finish(ScanResult("lifshitz-scan", columns, _map_rows(row, points, workers), seed=cfg.seed))


# ---------------------------------------------------------------------------
# oracle-check
# ---------------------------------------------------------------------------

ORACLE_COLUMNS = [
    "m",
    "cov_simulated_a2",
    "cov_standard_error_a2",
    "cov_equipartition_a2",
    "h_quadrature",
    "h_oracle",
    "simulation_pass",
    "h_pass",
    "converged",
]


def _oracle_row(item: tuple, cfg: OracleCheckConfig, spec: QuadratureSpec) -> Row:
    m, member_seed = item
    pair = AntennaPair(
        inductance_h=cfg.inductance_h,
        coupling=m,
        resistance=ConstantResistance(value_ohm=cfg.resistance_ohm),
    )
    simulated = simulate_coupled_rl(pair, cfg.temperature_k, cfg.simulation.with_seed(member_seed))
    expected = equipartition_covariance(cfg.inductance_h, m * cfg.inductance_h, cfg.temperature_k)
    deviation = abs(simulated.cov_i12 - expected.cov_i12)
    if cfg.simulation_tolerance is not None:
        unit = Boltzmann * cfg.temperature_k / cfg.inductance_h
        simulation_pass = deviation <= cfg.simulation_tolerance * unit
    else:
        simulation_pass = deviation <= cfg.sigma_threshold * simulated.standard_error

    quadrature = h_factor(ReducedParams(rho=0.0, m_sq=m * m, kappa=0.0), spec)
    oracle = oracle_h_zero(m * m)
    return {
        "m": m,
        "cov_simulated_a2": simulated.cov_i12,
        "cov_standard_error_a2": simulated.standard_error,
        "cov_equipartition_a2": expected.cov_i12,
        "h_quadrature": quadrature.value,
        "h_oracle": oracle,
        "simulation_pass": bool(simulation_pass),
        "h_pass": quadrature.converged and abs(quadrature.value - oracle) <= cfg.h_tolerance,
        "converged": quadrature.converged,
    }


def member_seeds(seed: int, count: int) -> List[int]:
    """Independent per-row seeds derived from one root seed."""
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


def run_oracle_check(cfg: OracleCheckConfig, seed: int, spec: QuadratureSpec, workers: int = 1) -> ScanResult:
    """Simulated versus equipartition correlator and quadrature versus oracle H, per coupling."""
    items = list(zip(cfg.couplings, member_seeds(seed, len(cfg.couplings))))
    logger.info(f"oracle-check: {len(items)} couplings, seed={seed}")
    rows = _map_rows(partial(_oracle_row, cfg=cfg, spec=spec), items, workers)
    passed = all(row["simulation_pass"] and row["h_pass"] for row in rows)
    for row in rows:
        status = "PASS" if row["simulation_pass"] and row["h_pass"] else "FAIL"
        logger.info(f"oracle-check m={row['m']}: {status}")
    return _finish(ScanResult("oracle-check", ORACLE_COLUMNS, rows, seed=seed, passed=passed))


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

GEOMETRY_COLUMNS = [
    "separation_m",
    "self_inductance_h",
    "mutual_inductance_h",
    "coupling",
    "dm_sq_dd_per_m",
    "thin_wire_valid",
    "converged",
]


def _geometry_row(separation: float, cfg: GeometryConfig, spec: QuadratureSpec) -> Row:
    g = WireGeometry(length_m=cfg.length_m, wire_radius_m=cfg.wire_radius_m, separation_m=separation)
    profile = coupling_profile(g)
    row: Row = {
        "separation_m": separation,
        "self_inductance_h": self_inductance(g),
        "mutual_inductance_h": mutual_inductance(g),
        "coupling": profile.m,
        "dm_sq_dd_per_m": profile.dm_sq_dd,
        "thin_wire_valid": g.thin_wire_valid,
        "converged": True,
    }
    if cfg.neumann_check:
        neumann = neumann_mutual_inductance(g)
        row["neumann_mutual_inductance_h"] = neumann.value
        row["converged"] = neumann.converged
    if cfg.force is not None:
        force = antenna_force(
            g, cfg.force.temperature_k, cfg.force.resistance, cfg.force.capacitance_f, spec
        )
        row["force_n"] = force.value
        row["converged"] = row["converged"] and force.converged
    return row


def run_geometry(cfg: GeometryConfig, spec: QuadratureSpec, workers: int = 1) -> ScanResult:
    """Circuit parameters (and optionally the force) over a separation grid."""
    columns = list(GEOMETRY_COLUMNS)
    extra: List[str] = []
    if cfg.neumann_check:
        extra.append("neumann_mutual_inductance_h")
    if cfg.force is not None:
        extra.append("force_n")
    columns[columns.index("thin_wire_valid"):columns.index("thin_wire_valid")] = extra
    logger.info(f"geometry: {len(cfg.separation_grid_m)} separations")
    rows = _map_rows(partial(_geometry_row, cfg=cfg, spec=spec), cfg.separation_grid_m, workers)
    return _finish(ScanResult("geometry", columns, rows, seed=cfg.seed))
