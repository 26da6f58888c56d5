"""Pytest configuration and shared fixtures."""

import json
import os
from pathlib import Path
from typing import Callable

import pytest
from scipy.constants import Boltzmann

from thermoforce.circuit_noise import AntennaPair
from thermoforce.config import ThermoforceSettings
from thermoforce.resistance import ConstantResistance, PowerLawResistance


@pytest.fixture
def test_settings(monkeypatch: pytest.MonkeyPatch) -> ThermoforceSettings:
    """
    Provide settings isolated from the developer's environment.

    Any THERMOFORCE_* variables are removed before the settings are built.
    """
    for name in list(os.environ):
        if name.startswith("THERMOFORCE_"):
            monkeypatch.delenv(name, raising=False)
    return ThermoforceSettings(_env_file=None)


@pytest.fixture
def rl_pair() -> AntennaPair:
    """Impurity-free RL pair: R = 1 ohm at 4.2 K scaling as T^2, m = 0.8."""
    return AntennaPair(
        inductance_h=1e-6,
        coupling=0.8,
        resistance=PowerLawResistance(r_ref_ohm=1.0, t_ref_k=4.2, exponent=2.0),
    )


@pytest.fixture
def constant_rl_pair() -> AntennaPair:
    """RL pair with a temperature-independent 1 ohm resistance, m = 0.6."""
    return AntennaPair(
        inductance_h=1e-6, coupling=0.6, resistance=ConstantResistance(value_ohm=1.0)
    )


@pytest.fixture
def unit_temperature() -> float:
    """Temperature at which k_B T = 1 J."""
    return 1.0 / Boltzmann


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """Write a run configuration document and return its path."""

    def _write(document: dict, name: str = "run.json") -> Path:
        path = tmp_path / name
        if name.endswith((".yaml", ".yml")):
            import yaml

            path.write_text(yaml.safe_dump(document))
        else:
            path.write_text(json.dumps(document))
        return path

    return _write


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "integration: mark test as an integration test")
    config.addinivalue_line("markers", "slow: mark test as slow running")
