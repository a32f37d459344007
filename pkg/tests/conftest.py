"""Shared fixtures for the qclocksync test suite."""

from pathlib import Path

import numpy as np
import pytest
import structlog

from qclocksync.config import ExperimentConfig, load_config


@pytest.fixture(autouse=True)
def _reset_logging():
    """Drop logger configuration bound to streams a CLI run may have closed."""
    yield
    structlog.reset_defaults()


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixed-seed generator so statistical assertions are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def make_config():
    """Factory for validated configs with small, fast defaults."""

    def _make(**overrides) -> ExperimentConfig:
        data = {"protocol": "GHZ", "N": 4, "k": 600, "trials": 4, "seed": 7}
        data.update(overrides)
        return load_config(data)

    return _make


@pytest.fixture
def write_config(tmp_path: Path):
    """Write a TOML config file from key/value lines and return its path."""

    def _write(text: str, name: str = "experiment.toml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
