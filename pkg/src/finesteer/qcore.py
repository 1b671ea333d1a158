"""Dense complex linear algebra and qubit-state primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Subsystems are
ordered left to right (A, B, C), so ``kron(a, b)`` puts ``a`` on party A.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .constants import BLOCH_TOL, EIG_TOL, HERM_TOL, NORM_TOL, PSD_TOL, TRACE_TOL
from .errors import InvalidArgumentError

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidArgumentError(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product with ``a`` as the left (first) subsystem."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Sequence) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


def is_hermitian(m, tol: float = HERM_TOL) -> bool:
    m = as_matrix(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def check_density(rho, tol_psd: float = PSD_TOL) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array.

    Raises InvalidArgumentError if it is not Hermitian, not unit trace or
    has an eigenvalue below ``-tol_psd``.
    """
    rho = as_matrix(rho)
    if not is_hermitian(rho):
        raise InvalidArgumentError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr.real - 1.0) > TRACE_TOL or abs(tr.imag) > TRACE_TOL:
        raise InvalidArgumentError(f"density matrix has trace {tr}")
    lam_min = float(np.linalg.eigvalsh(rho)[0])
    if lam_min < -tol_psd:
        raise InvalidArgumentError(f"density matrix has negative eigenvalue {lam_min:.3e}")
    return rho


def check_pure(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise InvalidArgumentError("state vector is not normalised")
    return psi


def projector_of(psi) -> np.ndarray:
    """|psi><psi| for a normalised state vector."""
    psi = check_pure(psi)
    return np.outer(psi, psi.conj())


def num_qubits(rho) -> int:
    d = as_matrix(rho).shape[0]
    n = d.bit_length() - 1
    if 1 << n != d:
        raise InvalidArgumentError(f"dimension {d} is not a power of two")
    return n


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` gives the subsystem dimensions in A, B, C order; the kept
    subsystems retain their relative order.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    if isinstance(keep, (int, np.integer)):
        keep = [keep]
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(d < 1 for d in dims) or int(np.prod(dims)) != rho.shape[0]:
        raise InvalidArgumentError(f"subsystem dims {dims} do not match matrix dimension {rho.shape[0]}")
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise InvalidArgumentError(f"keep must be a non-empty subset of 0..{n - 1}, got {keep}")

    t = rho.reshape(dims + dims)
    # contract traced subsystems from the highest index down so axis numbers stay valid
    for idx in reversed(range(n)):
        if idx in keep:
            continue
        m = t.ndim // 2
        t = np.trace(t, axis1=idx, axis2=idx + m)
    dk = int(np.prod([dims[k] for k in keep]))
    return t.reshape(dk, dk)


def bloch_of(rho) -> np.ndarray:
    """Bloch vector (x, y, z) of a single-qubit density matrix."""
    rho = as_matrix(rho)
    if rho.shape != (2, 2):
        raise InvalidArgumentError("bloch_of needs a 2x2 matrix")
    return np.array([np.trace(rho @ s).real for s in PAULIS])


def bloch_to_state(n) -> np.ndarray:
    """(I + n.sigma)/2 for a vector inside the closed unit ball."""
    n = np.asarray(n, dtype=float).ravel()
    if n.shape != (3,):
        raise InvalidArgumentError("Bloch vector must have three components")
    if np.linalg.norm(n) > 1.0 + BLOCH_TOL:
        raise InvalidArgumentError(f"Bloch vector norm {np.linalg.norm(n)} exceeds 1")
    return 0.5 * (I2 + n[0] * SX + n[1] * SY + n[2] * SZ)


def spin_operator(n) -> np.ndarray:
    """n.sigma for a real 3-vector (not necessarily normalised)."""
    n = np.asarray(n, dtype=float).ravel()
    return n[0] * SX + n[1] * SY + n[2] * SZ


def max_eigenvalue(h) -> float:
    """Largest eigenvalue of a Hermitian matrix."""
    h = as_matrix(h)
    if not is_hermitian(h, EIG_TOL):
        raise InvalidArgumentError("max_eigenvalue requires a Hermitian matrix")
    if h.shape == (2, 2):
        a, d = h[0, 0].real, h[1, 1].real
        return float(0.5 * (a + d) + np.hypot(0.5 * (a - d), abs(h[0, 1])))
    return float(np.linalg.eigvalsh(h)[-1])


def expectation(rho, op) -> float:
    return float(np.trace(as_matrix(rho) @ as_matrix(op)).real)
