"""Shared fixtures: the shipped default setup and its pieces."""

import pytest

from ifatuner.config import default_config


@pytest.fixture(scope="session")
def cfg():
    """Shipped default run configuration (calibrated geometry, Table values)."""
    return default_config()


@pytest.fixture(scope="session")
def geometry(cfg):
    return cfg.geometry


@pytest.fixture(scope="session")
def resonator(cfg):
    return cfg.resonator


@pytest.fixture(scope="session")
def varactor(cfg):
    return cfg.varactor
