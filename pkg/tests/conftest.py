import numpy as np
import pytest

from kerr4ls import NearDegeneracyError, SystemParams
from kerr4ls.perturbation import perturbation_result

REFERENCE = dict(omega_a=0.2, omega_b=2.0, delta_1=0.5, delta_3=5.0)


def reference_params(omega_c=0.1, phi=0.0):
    return SystemParams.from_rabi(REFERENCE["omega_a"], REFERENCE["omega_b"], omega_c, REFERENCE["delta_1"], REFERENCE["delta_3"], phi)


def random_params(rng):
    mags = rng.uniform(0.01, 10.0, 3)
    phases = rng.uniform(0.0, 2 * np.pi, 3)
    oa, ob, oc = mags * np.exp(1j * phases)
    return SystemParams.from_rabi(oa, ob, oc, rng.uniform(-10, 10), rng.uniform(-10, 10))


def random_draws(count, seed=20240611):
    """Valid draws (gap guard satisfied) from a fixed-seed generator."""
    rng = np.random.default_rng(seed)
    draws = []
    while len(draws) < count:
        params = random_params(rng)
        try:
            perturbation_result(params)
        except NearDegeneracyError:
            continue
        draws.append(params)
    return draws


@pytest.fixture(scope="session")
def draws():
    return random_draws(1000)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
