"""
Shared fixtures for the qhelper test suite.
"""
import numpy as np
import pytest

from qhelper.core.channels import discard, identity, kraus_to_stinespring
from qhelper.core.qcore import (
    SystemLayout, bell_state, diagonal_state, isotropic_state, product_state, random_density,
)


@pytest.fixture
def bell():
    return bell_state()


@pytest.fixture
def product_source():
    """ρ_A ⊗ ρ_B with H(A) = H(diag(3/4, 1/4)) and H(B) = H(diag(0.9, 0.1))."""
    return product_state(diagonal_state([0.75, 0.25], "A"), diagonal_state([0.9, 0.1], "B"))


@pytest.fixture
def isotropic75():
    return isotropic_state(0.75)


@pytest.fixture
def identity_helper():
    return kraus_to_stinespring(identity(2))


@pytest.fixture
def discard_helper():
    return kraus_to_stinespring(discard(2))


@pytest.fixture
def random_sources():
    return [random_density(SystemLayout.of(A=2, B=2), seed=[7, i]) for i in range(100)]


H_34 = 0.8112781244591328


def h2(q: float) -> float:
    return float(-q * np.log2(q) - (1 - q) * np.log2(1 - q))
