"""Shared randomness and construction helpers for the test suite."""

import numpy as np
import pytest

from entweave.channels import QuantumChannel


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_density(n: int, rng: np.random.Generator,
                   rank: int | None = None) -> np.ndarray:
    k = rank or n
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_channel(dim: int, env: int, rng: np.random.Generator) -> QuantumChannel:
    """Haar-random channel from a Stinespring isometry with an env-level bath."""
    u = haar_unitary(dim * env, rng)
    iso = u[:, :dim]                      # |psi> -> U(|psi> (x) |0>)
    kraus = tuple(iso[i * dim:(i + 1) * dim, :].copy() for i in range(env))
    return QuantumChannel(kraus)
