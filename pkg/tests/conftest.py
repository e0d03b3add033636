"""
Shared pytest fixtures.
"""

import os
import sys

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def gaussian_cloud(rng):
    """Isotropic 5-D Gaussian, 2000 samples."""
    return rng.standard_normal((2000, 5))


@pytest.fixture(autouse=True)
def _no_provenance_epoch(monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
