"""Validated density matrices and a few reference two-qubit states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmath import (
    TOL,
    DimensionMismatch,
    NonHermitian,
    as_matrix,
    hermitian_eig,
    maximally_entangled,
    projector,
    singlet,
)


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, unit-trace, positive-semidefinite matrix.

    Construction validates all three properties (hermiticity and trace to the
    structural tolerance, positivity down to ``-TOL.psd``) and freezes the
    underlying array.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(as_matrix(self.matrix), dtype=complex)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"density matrix must be square, got {m.shape}")
        if not bool(np.max(np.abs(m - m.conj().T)) <= TOL.structural):
            raise NonHermitian("density matrix is not Hermitian within tolerance")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TOL.structural:
            raise ValueError(f"density matrix trace {tr} is not 1")
        w, _ = hermitian_eig(m)
        if w.min() < -TOL.psd:
            raise ValueError(f"density matrix has negative eigenvalue {w.min():.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def matrix_of(rho) -> np.ndarray:
    """Accept a DensityMatrix or a raw array and hand back the array."""
    return as_matrix(getattr(rho, "matrix", rho))


def omega_state() -> DensityMatrix:
    """Projector onto (|00> + |11>)/sqrt(2)."""
    return DensityMatrix(projector(maximally_entangled(2)))


def singlet_state() -> DensityMatrix:
    """Projector onto (|01> - |10>)/sqrt(2)."""
    return DensityMatrix(projector(singlet()))
