"""Dense complex linear algebra for small quantum systems.

Everything in this package works on plain ``numpy`` arrays in the
computational basis, with index 0 meaning the horizontal / ground state
``|0> = |H>`` and index 1 meaning ``|1> = |V>``.  Superoperators use the
column-stacking convention: ``vec(A @ rho @ B^dag) = kron(conj(B), A) @ vec(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np
import scipy.linalg


class DimensionMismatch(ValueError):
    """Matrix or tensor-factor dimensions do not line up."""


class NonHermitian(ValueError):
    """A Hermitian matrix was required."""


class NotUnitary(ValueError):
    """A unitary matrix was required."""


class OutOfRange(ValueError):
    """A scalar parameter fell outside its admissible interval."""


@dataclass(frozen=True)
class Tolerances:
    """Central numerical tolerances used across the package."""

    structural: float = 1e-10   # hermiticity / unitarity / trace checks
    compare: float = 1e-9       # numerical equality in comparisons
    psd: float = 1e-9           # most negative eigenvalue tolerated in states
    eb: float = 1e-9            # concurrence at or below this counts as separable
    conflict_band: float = 1e-4  # above this the concurrence and PPT verdicts must agree
    kraus_cutoff: float = 1e-12  # Choi eigenvalues below this drop out of Kraus sets


TOL = Tolerances()

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

# Relaxation operator |0><1|: sends the excited component into the basis
# state 0, which is the damping target throughout the package.
LOWERING = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    return m


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def is_hermitian(m, tol: float = TOL.structural) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_unitary(m, tol: float = TOL.structural) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def is_normal(m, tol: float = TOL.structural) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m))) ** 2)
    return bool(np.max(np.abs(m @ m.conj().T - m.conj().T @ m)) <= tol * scale)


def hermitian_eig(m, tol: float = TOL.structural):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Returns ``(w, v)`` with ``m @ v[:, k] = w[k] * v[:, k]``.  Raises
    :class:`NonHermitian` when the input fails the hermiticity check.
    """
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise NonHermitian("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(m)
    return w, v


def expm(m) -> np.ndarray:
    """Matrix exponential.

    Normal matrices go through their (unitary) Schur diagonalization, which
    exponentiates the spectrum exactly; everything else falls back to the
    scaling-and-squaring Pade implementation in scipy.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch("expm needs a square matrix")
    if is_normal(m):
        t, z = scipy.linalg.schur(m, output="complex")
        return (z * np.exp(np.diag(t))) @ z.conj().T
    return scipy.linalg.expm(m)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def _check_dims(m: np.ndarray, dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionMismatch("tensor factors must have dimension >= 1")
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise DimensionMismatch(
            f"matrix of shape {m.shape} does not factor into dims {dims}")
    return dims


def partial_trace(m, dims, keep: int) -> np.ndarray:
    """Trace out every tensor factor except ``dims[keep]``."""
    m = as_matrix(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    if not 0 <= keep < n:
        raise DimensionMismatch(f"keep index {keep} out of range for {n} factors")
    t = m.reshape(dims + dims)
    order = [keep] + [i for i in range(n) if i != keep]
    t = np.transpose(t, order + [n + i for i in order])
    dk = dims[keep]
    rest = int(np.prod(dims)) // dk
    t = t.reshape(dk, rest, dk, rest)
    return np.einsum("arbr->ab", t)


def partial_transpose(m, dims, which: int) -> np.ndarray:
    """Transpose the tensor factor ``dims[which]``, leaving the rest alone."""
    m = as_matrix(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    if not 0 <= which < n:
        raise DimensionMismatch(f"transpose index {which} out of range for {n} factors")
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[which], axes[n + which] = axes[n + which], axes[which]
    return np.transpose(t, axes).reshape(m.shape)


def vec(m) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return as_matrix(m).flatten(order="F")


def unvec(v, rows: int, cols: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    cols = rows if cols is None else cols
    if v.size != rows * cols:
        raise DimensionMismatch(f"vector of size {v.size} is not {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def sandwich_superop(a, b) -> np.ndarray:
    """Superoperator of ``rho -> a @ rho @ dagger(b)``."""
    return kron(as_matrix(b).conj(), as_matrix(a))


def apply_superop(superop, rho) -> np.ndarray:
    superop = as_matrix(superop)
    d_out = isqrt(superop.shape[0])
    if d_out * d_out != superop.shape[0]:
        raise DimensionMismatch("superoperator output dimension is not a perfect square")
    return unvec(superop @ vec(rho), d_out, d_out)


def apply_superop_first_factor(superop, rho, anc_dim: int) -> np.ndarray:
    """Apply a superoperator to the first tensor factor of a bipartite state.

    This is the linear extension ``(S (x) id)`` and works for any linear map,
    completely positive or not.
    """
    superop = as_matrix(superop)
    rho = as_matrix(rho)
    d_out = isqrt(superop.shape[0])
    d_in = isqrt(superop.shape[1])
    if d_out * d_out != superop.shape[0] or d_in * d_in != superop.shape[1]:
        raise DimensionMismatch("superoperator dimensions are not perfect squares")
    if rho.shape != (d_in * anc_dim, d_in * anc_dim):
        raise DimensionMismatch("state does not match superoperator x ancilla")
    t = rho.reshape(d_in, anc_dim, d_in, anc_dim)
    out = np.zeros((d_out * anc_dim, d_out * anc_dim), dtype=complex)
    for a in range(d_in):
        for b in range(d_in):
            e = np.zeros((d_in, d_in), dtype=complex)
            e[a, b] = 1.0
            phi_e = unvec(superop @ vec(e), d_out, d_out)
            out += np.kron(phi_e, t[a, :, b, :])
    return out


def opnorm(m) -> float:
    """Spectral norm, used as the superoperator distance throughout."""
    return float(np.linalg.norm(as_matrix(m), 2))


def psd_sqrt(m, tol: float = TOL.psd) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues slightly below zero (roundoff) are clamped before the root.
    """
    w, v = hermitian_eig(m)
    if w.min() < -tol:
        raise OutOfRange(f"matrix has negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def maximally_entangled(d: int = 2) -> np.ndarray:
    """The vector sum_i |ii> / sqrt(d)."""
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        v[i * d + i] = 1.0
    return v / np.sqrt(d)


def singlet() -> np.ndarray:
    """(|01> - |10>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0
    v[2] = -1.0
    return v / np.sqrt(2.0)


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())
