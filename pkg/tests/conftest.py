"""Shared fixtures and the hypothesis profile."""

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from markovia.config import Settings

settings.register_profile(
    "markovia",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("markovia")

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def run_settings() -> Settings:
    return Settings()


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS


@pytest.fixture
def write_json(tmp_path):
    """Write a mapping to a JSON file under tmp_path and return its path."""

    def write(name: str, data) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data, indent=2))
        return path

    return write
