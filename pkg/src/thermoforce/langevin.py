"""
Stochastic time-domain check of the coupled RL circuit in the classical limit.

The circuit equations K di/dt = -R i + e(t), K = [[L, M], [M, L]], with
independent white-noise e.m.f.s of intensity 2 k_B T R, are integrated in
reduced units: time in L/R, current in sqrt(k_B T / L). In those units the
drift is -K^-1 (K now [[1, m], [m, 1]]), the noise intensity is 2, and the
stationary covariance is K^-1. Results are scaled back to amperes squared.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.constants import Boltzmann
from scipy.linalg import cholesky, expm, solve_continuous_lyapunov

from thermoforce.circuit_noise import AntennaPair
from thermoforce.errors import DomainError, NotApplicableError, PassivityError, StabilityError

logger = logging.getLogger(__name__)

#: Recorded in output metadata
GENERATOR_ID = "numpy.random.PCG64"

#: Largest reduced time step accepted
MAX_TIME_STEP = 0.1

_CHUNK_STEPS = 4096
_BLOCKS_PER_MEMBER = 10


class SimulationConfig(BaseModel):
    """Time stepping and ensemble settings (time in units of L/R)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    time_step: float = Field(default=0.05, gt=0.0, description="Reduced time step dt")
    steps: int = Field(default=20000, ge=2, description="Steps per ensemble member")
    burn_in: int = Field(default=2000, ge=0, description="Steps discarded before averaging")
    ensemble: int = Field(default=64, ge=1, description="Independent ensemble members")
    seed: int = Field(default=20240101, ge=0, description="Root seed")
    integrator: Literal["exact", "euler"] = Field(
        default="exact", description="Exact Ornstein-Uhlenbeck update or Euler-Maruyama"
    )

    @model_validator(mode="after")
    def validate_burn_in(self) -> "SimulationConfig":
        if self.steps <= self.burn_in:
            raise ValueError("steps must exceed burn_in")
        return self


@dataclass(frozen=True)
class CovarianceEstimate:
    """Stationary current covariance with batch-means standard errors."""

    var_i1: float
    var_i2: float
    cov_i12: float
    standard_error: float
    samples: int
    variance_standard_error: float = 0.0


def _inverse_inductance(inductance: float, mutual: float) -> np.ndarray:
    if inductance <= 0.0:
        raise DomainError(f"inductance must be positive, got {inductance!r}")
    if abs(mutual) >= inductance:
        raise PassivityError(f"|M|={abs(mutual)!r} >= L={inductance!r}: inductance matrix is not positive")
    det = inductance * inductance - mutual * mutual
    return np.array([[inductance, -mutual], [-mutual, inductance]]) / det


def equipartition_covariance(inductance: float, mutual: float, temperature: float) -> CovarianceEstimate:
    """
    Classical stationary covariance k_B T K^-1.

    Raises:
        PassivityError: If |M| >= L
    """
    if temperature < 0.0:
        raise DomainError(f"temperature must be non-negative, got {temperature!r}")
    sigma = Boltzmann * temperature * _inverse_inductance(inductance, mutual)
    return CovarianceEstimate(
        var_i1=float(sigma[0, 0]),
        var_i2=float(sigma[1, 1]),
        cov_i12=float(sigma[0, 1]),
        standard_error=0.0,
        samples=0,
    )


def lyapunov_covariance(
    inductance: float, mutual: float, resistance: float, temperature: float
) -> np.ndarray:
    """
    Stationary covariance of the circuit SDE from A S + S A^T + B Q B^T = 0.

    A = -K^-1 R, B = K^-1, Q = 2 k_B T R. Agreement with
    equipartition_covariance fixes the white-noise intensity.
    """
    if resistance <= 0.0:
        raise DomainError(f"resistance must be positive, got {resistance!r}")
    k_inv = _inverse_inductance(inductance, mutual)
    drift = -resistance * k_inv
    diffusion = 2.0 * Boltzmann * temperature * resistance * k_inv @ k_inv.T
    return solve_continuous_lyapunov(drift, -diffusion)


def h_from_covariance(cov_i12: float, inductance: float, coupling: float, temperature: float) -> float:
    """
    Force coefficient H implied by a current correlator.

    <i1 i2> grad M = -k_B T H grad(m^2) with M = m L gives
    H = -<i1 i2> L / (2 m k_B T).
    """
    if coupling <= 0.0:
        raise DomainError("H cannot be recovered from the correlator at m = 0")
    return -cov_i12 * inductance / (2.0 * coupling * Boltzmann * temperature)


def oracle_h_zero(m_sq: float) -> float:
    """
    H at rho = 0 for the RL model, from the equipartition covariance.

    Raises:
        DomainError: If m_sq is outside [0, 1)
    """
    if not 0.0 <= m_sq < 1.0:
        raise DomainError(f"m_sq must lie in [0, 1), got {m_sq!r}")
    if m_sq == 0.0:
        # m -> 0 limit of the ratio below
        return 0.5
    m = math.sqrt(m_sq)
    temperature = 1.0 / Boltzmann
    cov = equipartition_covariance(1.0, m, temperature).cov_i12
    return h_from_covariance(cov, 1.0, m, temperature)


def _step_operators(m: float, dt: float, integrator: str) -> Tuple[np.ndarray, np.ndarray]:
    """Transition matrix and noise factor for one reduced step."""
    k_inv = _inverse_inductance(1.0, m)
    drift = -k_inv
    if integrator == "exact":
        phi = expm(drift * dt)
        step_cov = k_inv - phi @ k_inv @ phi.T
        return phi, cholesky(step_cov, lower=True)
    # Euler-Maruyama
    return np.eye(2) + drift * dt, k_inv * math.sqrt(2.0 * dt)


def _check_stability(m: float, cfg: SimulationConfig) -> None:
    if cfg.time_step >= MAX_TIME_STEP:
        raise StabilityError(f"time_step {cfg.time_step} must be below {MAX_TIME_STEP} (units of L/R)")
    fastest_rate = 1.0 / (1.0 - m)
    if cfg.integrator == "euler" and cfg.time_step * fastest_rate >= 0.5:
        raise StabilityError(
            f"Euler step {cfg.time_step} too large for the fast mode (rate {fastest_rate:.3g})"
        )


def simulate_coupled_rl(pair: AntennaPair, temperature: float, cfg: SimulationConfig) -> CovarianceEstimate:
    """
    Estimate the stationary current covariance by simulation.

    Each ensemble member draws from its own PCG64 stream spawned from
    (seed, member index). Members are advanced together and their
    post-burn-in samples are cut into blocks; the standard error is the
    spread of the block means.

    Args:
        pair: RL antenna pair (capacitance must be absent)
        temperature: Temperature in kelvin
        cfg: Simulation settings

    Returns:
        CovarianceEstimate in amperes squared

    Raises:
        NotApplicableError: If the pair has a capacitance
        StabilityError: If the time step is too large
        DomainError: If T <= 0 or R(T) = 0
    """
    if pair.is_rlc:
        raise NotApplicableError("stochastic simulation covers the RL model only")
    if temperature <= 0.0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    if pair.omega_r(temperature) <= 0.0:
        raise DomainError("R(T) = 0: the circuit never relaxes")
    m = pair.coupling
    _check_stability(m, cfg)

    phi, noise_factor = _step_operators(m, cfg.time_step, cfg.integrator)
    streams = [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.ensemble)]

    kept = cfg.steps - cfg.burn_in
    blocks = min(_BLOCKS_PER_MEMBER, kept)
    block_len = kept // blocks
    # per member, per block: sum of i1^2, i2^2, i1 i2
    block_sums = np.zeros((cfg.ensemble, blocks, 3))

    logger.info(
        f"simulating m={m:.4g}: {cfg.ensemble} members x {cfg.steps} steps "
        f"(dt={cfg.time_step}, integrator={cfg.integrator})"
    )
    state = np.zeros((cfg.ensemble, 2))
    phi_t, noise_t = phi.T, noise_factor.T
    done = 0
    while done < cfg.steps:
        chunk = min(_CHUNK_STEPS, cfg.steps - done)
        noise = np.stack([g.standard_normal((chunk, 2)) for g in streams], axis=1)
        trajectory = np.empty((chunk, cfg.ensemble, 2))
        for k in range(chunk):
            state = state @ phi_t + noise[k] @ noise_t
            trajectory[k] = state

        # post-burn-in indices of this chunk
        first = max(cfg.burn_in - done, 0)
        k0 = first
        while k0 < chunk:
            position = done + k0 - cfg.burn_in
            block = position // block_len
            if block >= blocks:
                break
            stop = min(chunk, k0 + (block + 1) * block_len - position)
            part = trajectory[k0:stop]
            block_sums[:, block, 0] += np.sum(part[..., 0] ** 2, axis=0)
            block_sums[:, block, 1] += np.sum(part[..., 1] ** 2, axis=0)
            block_sums[:, block, 2] += np.sum(part[..., 0] * part[..., 1], axis=0)
            k0 = stop
        done += chunk

    block_means = block_sums.reshape(-1, 3) / block_len
    mean = block_means.mean(axis=0)
    n_blocks = block_means.shape[0]
    if n_blocks > 1:
        errors = block_means.std(axis=0, ddof=1) / math.sqrt(n_blocks)
    else:
        errors = np.full(3, math.inf)

    scale = Boltzmann * temperature / pair.inductance_h
    estimate = CovarianceEstimate(
        var_i1=float(mean[0] * scale),
        var_i2=float(mean[1] * scale),
        cov_i12=float(mean[2] * scale),
        standard_error=float(errors[2] * scale),
        samples=n_blocks * block_len,
        variance_standard_error=float(max(errors[0], errors[1]) * scale),
    )
    logger.info(f"simulated cov_i12={estimate.cov_i12:.6g} +/- {estimate.standard_error:.3g}")
    return estimate
