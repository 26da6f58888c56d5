"""
Numerical kernels shared by the physics modules.

Semi-infinite integrals are compactified with x = u/(1-u) and handed to
QUADPACK's adaptive Gauss-Kronrod scheme on (0, 1). Around known resonance
or cutoff abscissae the panel boundaries are refined geometrically, so a
peak whose width is a small fraction of its position is still sampled.
Derivatives use central differences with step halving and Richardson
extrapolation.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad

from thermoforce.errors import ConvergenceError, EvaluationError

logger = logging.getLogger(__name__)

Integrand = Callable[[float], float]

# QUADPACK rejects relative tolerances below this when abs_tol is zero.
_MIN_REL_TOL = 50.0 * float(np.finfo(float).eps)

# Forced panels reach down to a relative distance of 10^-levels from a breakpoint
_CLUSTER_LEVELS = 10


class QuadratureSpec(BaseModel):
    """Tolerances and limits for one adaptive integration."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rel_tol: float = Field(default=1e-9, gt=0.0, description="Requested relative accuracy")
    abs_tol: float = Field(default=1e-12, ge=0.0, description="Requested absolute accuracy")
    max_subdivisions: int = Field(
        default=200, ge=1, description="Upper bound on adaptive panel subdivisions"
    )
    tail_exponent_hint: float = Field(
        default=2.0,
        gt=1.0,
        description="Expected power-law decay of the integrand; below 2 the compactified "
        "variable is stretched with a power map to remove the endpoint singularity",
    )
    relative_to_l1: bool = Field(
        default=False,
        description="Interpret abs_tol as a fraction of the integral of |f|, estimated "
        "by a coarse first pass",
    )


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral with its error estimate."""

    value: float
    error_estimate: float
    evaluations: int = 0
    converged: bool = True

    def scaled(self, factor: float) -> "QuadratureResult":
        """Multiply value and error estimate by a constant (unit conversion)."""
        return QuadratureResult(
            value=self.value * factor,
            error_estimate=self.error_estimate * abs(factor),
            evaluations=self.evaluations,
            converged=self.converged,
        )

    def require(self) -> "QuadratureResult":
        """Return self, or raise ConvergenceError if the integration did not converge."""
        if not self.converged:
            raise ConvergenceError(
                f"quadrature did not converge (value={self.value!r}, "
                f"error_estimate={self.error_estimate!r})"
            )
        return self


class _Sampler:
    """Counts evaluations and rejects non-finite samples."""

    def __init__(self, f: Integrand) -> None:
        self.f = f
        self.calls = 0

    def __call__(self, x: float) -> float:
        self.calls += 1
        value = float(self.f(x))
        if not math.isfinite(value):
            raise EvaluationError("non-finite integrand sample", abscissa=x)
        return value


def _quad_panel(
    func: Integrand,
    a: float,
    b: float,
    spec: QuadratureSpec,
    points: Optional[Sequence[float]] = None,
) -> Tuple[float, float, bool, str]:
    epsrel = spec.rel_tol
    if spec.abs_tol <= 0.0 and epsrel < _MIN_REL_TOL:
        logger.debug(f"rel_tol {epsrel} below QUADPACK minimum, using {_MIN_REL_TOL}")
        epsrel = _MIN_REL_TOL

    kwargs = {
        "epsabs": spec.abs_tol,
        "epsrel": epsrel,
        # the forced panels come on top of the adaptive budget
        "limit": spec.max_subdivisions + len(points or ()) + 1,
        "full_output": 1,
    }
    if points:
        kwargs["points"] = list(points)

    out = quad(func, a, b, **kwargs)
    value, error = float(out[0]), abs(float(out[1]))
    # QUADPACK appends a message only when it gave up
    ok = len(out) == 3
    message = "" if ok else str(out[3])
    return value, error, ok, message


def _within_tolerance(value: float, error: float, spec: QuadratureSpec) -> bool:
    return error <= max(spec.abs_tol, spec.rel_tol * abs(value))


def _cluster(center: float) -> List[float]:
    """Panel boundaries closing in on a breakpoint geometrically from both sides."""
    offsets = [center * 10.0**-k for k in range(1, _CLUSTER_LEVELS + 1)]
    return [center - h for h in offsets] + [center] + [center + h for h in offsets]


def _integrate_pieces(
    f: Integrand, breakpoints: Sequence[float], spec: QuadratureSpec
) -> Tuple[float, float, bool, str]:
    """Integrate f over (0, inf) with x = u / (1 - u), forcing clustered panels."""
    # 1 - u = 1 / (1 + x) at every forced panel boundary
    gaps = {1.0 / (1.0 + x) for b in breakpoints for x in _cluster(b) if x > 0.0}

    def mapped(u: float) -> float:
        if u >= 1.0:
            return 0.0
        one_minus = 1.0 - u
        return f(u / one_minus) / (one_minus * one_minus)

    if spec.tail_exponent_hint >= 2.0:
        points = sorted({1.0 - g for g in gaps} - {0.0, 1.0})
        return _quad_panel(mapped, 0.0, 1.0, spec, points=points)

    # mapped ~ (1-u)^(p-2) near u = 1; 1 - u = v^k with k = 1/(p-1) leaves
    # a bounded integrand in v
    k = 1.0 / (spec.tail_exponent_hint - 1.0)

    def stretched(v: float) -> float:
        w = v**k
        if w * w == 0.0:
            return 0.0
        return k * v ** (k - 1.0) * f((1.0 - w) / w) / (w * w)

    points = sorted({g ** (1.0 / k) for g in gaps} - {0.0, 1.0})
    return _quad_panel(stretched, 0.0, 1.0, spec, points=points)


def integrate_semi_infinite(
    f: Integrand,
    spec: Optional[QuadratureSpec] = None,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """
    Integrate f over (0, inf).

    Args:
        f: Real integrand, finite and piecewise smooth on (0, inf), decaying
            faster than 1/x
        spec: Tolerances; library defaults when omitted
        breakpoints: Abscissae (x > 0) of narrow resonances or cutoffs. Panels
            are refined geometrically towards each one, down to a relative
            width of 1e-10

    Returns:
        QuadratureResult; converged is False when the tolerance was not met

    Raises:
        EvaluationError: If f returns a non-finite value
    """
    spec = spec or QuadratureSpec()
    sample = _Sampler(f)
    points = sorted({x for x in breakpoints if 0.0 < x < math.inf})

    if spec.relative_to_l1:
        coarse = spec.model_copy(update={"rel_tol": 1e-3, "abs_tol": 0.0})
        l1, _, _, _ = _integrate_pieces(lambda x: abs(sample(x)), points, coarse)
        if l1 == 0.0:
            return QuadratureResult(
                value=0.0, error_estimate=0.0, evaluations=sample.calls, converged=True
            )
        spec = spec.model_copy(update={"abs_tol": spec.abs_tol * l1, "relative_to_l1": False})

    value, error, ok, message = _integrate_pieces(sample, points, spec)

    converged = ok and _within_tolerance(value, error, spec)
    if not converged:
        logger.debug(
            f"semi-infinite quadrature not converged: value={value!r} "
            f"error={error!r} ({message.strip() or 'tolerance not met'})"
        )
    return QuadratureResult(
        value=value, error_estimate=error, evaluations=sample.calls, converged=converged
    )


def integrate_interval(
    f: Integrand,
    a: float,
    b: float,
    spec: Optional[QuadratureSpec] = None,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """
    Integrate f over the finite interval [a, b].

    Args:
        f: Real integrand, finite on (a, b)
        a: Lower bound
        b: Upper bound
        spec: Tolerances; library defaults when omitted
        breakpoints: Interior abscissae that must be panel boundaries

    Returns:
        QuadratureResult for the integral
    """
    spec = spec or QuadratureSpec()
    if a == b:
        return QuadratureResult(value=0.0, error_estimate=0.0, evaluations=0, converged=True)
    sample = _Sampler(f)
    lo, hi = min(a, b), max(a, b)
    points = sorted({x for x in breakpoints if lo < x < hi})
    value, error, ok, message = _quad_panel(sample, a, b, spec, points=points)
    converged = ok and _within_tolerance(value, error, spec)
    if not converged:
        logger.debug(f"interval quadrature not converged on [{a}, {b}]: {message.strip()}")
    return QuadratureResult(
        value=value, error_estimate=error, evaluations=sample.calls, converged=converged
    )


class Derivative(NamedTuple):
    """A numerical derivative and a bound on its error."""

    value: float
    error_estimate: float


def _richardson(estimates: List[float], order_step: int) -> Tuple[float, float]:
    """
    Extrapolate a step-halving sequence and return (best value, its error).

    order_step is 2 for central differences (error series in h^2) and 1 for
    one-sided differences (error series in h).
    """
    best, best_err = estimates[0], math.inf
    table: List[List[float]] = []
    for i, estimate in enumerate(estimates):
        row = [estimate]
        for j in range(1, i + 1):
            factor = 2.0 ** (order_step * j)
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (factor - 1.0))
            err = max(abs(row[j] - row[j - 1]), abs(row[j] - table[i - 1][j - 1]))
            if err <= best_err:
                best, best_err = row[j], err
        if i > 0 and abs(row[i] - table[i - 1][i - 1]) >= 2.0 * best_err:
            # roundoff has started to dominate
            table.append(row)
            break
        table.append(row)
    return best, best_err


def derivative_scalar(
    f: Callable[[float], float],
    t0: float,
    h0: Optional[float] = None,
    levels: int = 8,
) -> Derivative:
    """
    Differentiate f at t0.

    Central differences at steps h0, h0/2, ... are extrapolated Richardson
    style. The same is done for forward differences; their disagreement is
    folded into the error estimate, so a kink at t0 shows up as a large
    error rather than a confident wrong answer.

    Args:
        f: Real function of one variable
        t0: Evaluation point
        h0: Initial step (defaults to 5% of max(|t0|, 1))
        levels: Number of step halvings

    Returns:
        Derivative(value, error_estimate)

    Raises:
        EvaluationError: If f is non-finite near t0
    """
    if h0 is None:
        h0 = 0.05 * max(abs(t0), 1.0)
    h0 = abs(h0)

    def sample(t: float) -> float:
        value = float(f(t))
        if not math.isfinite(value):
            raise EvaluationError("non-finite function sample", abscissa=t)
        return value

    f0 = sample(t0)
    central: List[float] = []
    forward: List[float] = []
    h = h0
    for _ in range(max(levels, 2)):
        plus, minus = sample(t0 + h), sample(t0 - h)
        central.append((plus - minus) / (2.0 * h))
        forward.append((plus - f0) / h)
        h /= 2.0

    value, error = _richardson(central, order_step=2)
    one_sided, one_sided_error = _richardson(forward, order_step=1)
    error = max(error, abs(value - one_sided) - one_sided_error, 0.0)
    if error > 1e-3 * max(abs(value), 1.0):
        logger.warning(f"derivative at t={t0!r} is poorly determined (error {error:.3g})")
    return Derivative(value=value, error_estimate=error)
