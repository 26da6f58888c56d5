"""
thermoforce

Forces and free energies driven by thermal fluctuations: Johnson-Nyquist
noise between two coupled antennas, and the thermal Casimir interaction
between metallic plates.
"""

__version__ = "0.1.0"
__author__ = "Newt Braswell"
__license__ = "Apache-2.0"

from thermoforce.circuit_noise import AntennaPair, ReducedParams, ThermoPoint
from thermoforce.config import ThermoforceSettings
from thermoforce.quadrature import QuadratureResult, QuadratureSpec

__all__ = [
    "AntennaPair",
    "QuadratureResult",
    "QuadratureSpec",
    "ReducedParams",
    "ThermoPoint",
    "ThermoforceSettings",
    "__version__",
]
