import math
from typing import List

import numpy as np
import pytest

from app.domain.xstate import XState, validate

RANDOM_SEED = 20240917


def werner_state(p: float) -> XState:
    """p |singlet><singlet| + (1 - p) I/4."""
    return validate((1 - p) / 4, (1 + p) / 4, (1 + p) / 4, (1 - p) / 4, 0.0, -p / 2)


def random_xstates(count: int, seed: int = RANDOM_SEED) -> List[XState]:
    """Flat-Dirichlet populations; coherences uniform inside their PSD limits."""
    rng = np.random.default_rng(seed)
    states = []
    for _ in range(count):
        d11, d22, d33, d44 = rng.dirichlet(np.ones(4))
        limit14 = math.sqrt(d11 * d44)
        limit23 = math.sqrt(d22 * d33)
        rho14 = rng.uniform(-limit14, limit14)
        rho23 = rng.uniform(-limit23, limit23)
        states.append(validate(d11, d22, d33, d44, rho14, rho23))
    return states


@pytest.fixture
def bell_singlet() -> XState:
    return validate(0.0, 0.5, 0.5, 0.0, 0.0, -0.5)


@pytest.fixture
def bell_phi_plus() -> XState:
    return validate(0.5, 0.0, 0.0, 0.5, 0.5, 0.0)


@pytest.fixture
def maximally_mixed() -> XState:
    return validate(0.25, 0.25, 0.25, 0.25, 0.0, 0.0)


@pytest.fixture
def up_up() -> XState:
    return validate(1.0, 0.0, 0.0, 0.0, 0.0, 0.0)


@pytest.fixture
def werner() -> XState:
    return werner_state(0.5)


@pytest.fixture(scope="session")
def random_states() -> List[XState]:
    return random_xstates(1000)
