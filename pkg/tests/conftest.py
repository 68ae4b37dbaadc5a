import numpy as np
import pytest


def em_harmonic(N, omega, alpha=0.0, a=1.0, phi=0.0):
    n = np.arange(1, N + 1)
    return a * np.exp(alpha * n) * np.cos(2 * np.pi * omega * n + phi)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
