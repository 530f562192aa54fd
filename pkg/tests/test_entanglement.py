"""Concurrence and negativity against closed-form oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entweave.entanglement import (
    BadDimension,
    concurrence,
    negativity,
    werner_state,
)
from entweave.qmath import OutOfRange, kron, maximally_entangled, projector, singlet
from entweave.states import DensityMatrix, matrix_of

from conftest import random_density, random_pure_state


def test_bell_states_are_maximal():
    assert math.isclose(concurrence(projector(maximally_entangled())).value, 1.0,
                        abs_tol=1e-12)
    assert math.isclose(concurrence(projector(singlet())).value, 1.0,
                        abs_tol=1e-12)
    assert math.isclose(negativity(projector(singlet())), 0.5, abs_tol=1e-12)


def test_separable_states_vanish(rng):
    assert concurrence(np.eye(4) / 4.0).value == 0.0
    prod = kron(random_density(2, rng), random_density(2, rng))
    assert concurrence(prod).value <= 1e-10
    assert negativity(prod) <= 1e-10


def test_dimension_guard():
    with pytest.raises(BadDimension):
        concurrence(np.eye(2) / 2.0)
    with pytest.raises(BadDimension):
        negativity(np.eye(8) / 8.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0))
def test_werner_closed_form(w):
    # oracle: C = max(0, (3w - 1)/2) for the isotropic mixture
    c = concurrence(werner_state(w))
    assert math.isclose(c.value, max(0.0, (3.0 * w - 1.0) / 2.0), abs_tol=1e-9)


def test_werner_probe_invariance():
    # same concurrence whichever maximally entangled probe defines the mixture
    a = concurrence(werner_state(0.96)).value
    b = concurrence(werner_state(0.96, DensityMatrix(projector(singlet())))).value
    assert math.isclose(a, b, abs_tol=1e-12)
    assert math.isclose(a, 0.94, abs_tol=1e-12)


def test_werner_validation():
    with pytest.raises(OutOfRange):
        werner_state(1.2)
    with pytest.raises(ValueError):
        werner_state(0.5, DensityMatrix(np.eye(4) / 4.0))


def test_pure_state_oracle(rng):
    # C(|psi>) = 2 |ad - bc| for amplitudes (a, b, c, d)
    for _ in range(25):
        v = random_pure_state(4, rng)
        expect = 2.0 * abs(v[0] * v[3] - v[1] * v[2])
        got = concurrence(projector(v)).value
        # the spin-flip eigensolve limits concurrence accuracy to ~1e-8
        assert math.isclose(got, expect, abs_tol=1e-7)


def _x_state(rng):
    # random diagonal + antidiagonal two-qubit state with a closed-form
    # concurrence: 2 max(0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44))
    p = rng.dirichlet(np.ones(4))
    r14 = math.sqrt(p[0] * p[3]) * rng.uniform(0.0, 1.0)
    r23 = math.sqrt(p[1] * p[2]) * rng.uniform(0.0, 1.0)
    ph1, ph2 = np.exp(1j * rng.uniform(0, 2 * np.pi, size=2))
    m = np.diag(p).astype(complex)
    m[0, 3], m[3, 0] = r14 * ph1, r14 * np.conj(ph1)
    m[1, 2], m[2, 1] = r23 * ph2, r23 * np.conj(ph2)
    expect = 2.0 * max(0.0,
                       r14 - math.sqrt(p[1] * p[2]),
                       r23 - math.sqrt(p[0] * p[3]))
    return m, expect


def test_x_state_closed_form(rng):
    for _ in range(40):
        m, expect = _x_state(rng)
        assert math.isclose(concurrence(m).value, expect, abs_tol=1e-8)


def test_pre_clamp_semantics(rng):
    for _ in range(20):
        c = concurrence(random_density(4, rng))
        assert c.value == max(0.0, c.pre_clamp)
    sep = concurrence(np.eye(4) / 4.0)
    assert sep.pre_clamp < 0.0  # strictly interior to the separable set


def test_verdict_agreement_with_negativity(rng):
    # PPT is exact for two qubits: the two routes must agree on every verdict
    for _ in range(200):
        rho = random_density(4, rng, rank=int(rng.integers(1, 5)))
        c = concurrence(rho).value
        n = negativity(rho)
        if c > 1e-7:
            assert n > 1e-12
        if n > 1e-7:
            assert c > 1e-12


def test_accepts_density_matrix_wrapper():
    dm = werner_state(0.5)
    assert isinstance(dm, DensityMatrix)
    assert concurrence(dm).value == concurrence(matrix_of(dm)).value
