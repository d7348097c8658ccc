import numpy as np
import pytest

from chanbound.harness.generators import Generators
from chanbound.qstate import SystemLayout


@pytest.fixture
def gen():
    return Generators(np.random.default_rng(20260809))


@pytest.fixture
def qubit_pair():
    return SystemLayout([("A", 2), ("B", 2)])


def random_hermitian(rng, d, scale=1.0):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (m + m.conj().T) / 2.0
