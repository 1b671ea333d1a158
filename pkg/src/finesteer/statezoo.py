"""State factories: Werner and Schmidt families, tripartite test states, random states."""

from __future__ import annotations

import math

import numpy as np

from .constants import NEGATIVITY_TOL
from .errors import InvalidArgumentError
from .qcore import as_matrix, kron, projector_of

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2.0)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def _unit_interval(value, name):
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise InvalidArgumentError(f"{name}={value} outside [0, 1]")
    return value


def werner(p: float) -> np.ndarray:
    """p |Phi+><Phi+| + (1 - p) I/4."""
    p = _unit_interval(p, "p")
    return p * projector_of(PHI_PLUS) + (1.0 - p) / 4.0 * np.eye(4, dtype=complex)


def pure_alpha(alpha: float) -> np.ndarray:
    """Amplitudes of sqrt(alpha)|00> + sqrt(1 - alpha)|11>."""
    alpha = _unit_interval(alpha, "alpha")
    return np.array([math.sqrt(alpha), 0.0, 0.0, math.sqrt(1.0 - alpha)], dtype=complex)


def pure_alpha_density(alpha: float) -> np.ndarray:
    return projector_of(pure_alpha(alpha))


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state: normalised complex Gaussian amplitudes."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state G G^dag / Tr from a complex Ginibre matrix."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def tripartite_family(kind: str, seed: int | None = None, alpha: float = 0.5) -> np.ndarray:
    """Three-qubit test states (ABC ordering) as 8x8 density matrices.

    kind is one of ``ghz``, ``w``, ``product_extension`` (pure_alpha(alpha) on
    AB with C in |0>) or ``random_pure`` (requires ``seed``).
    """
    if kind == "ghz":
        psi = np.zeros(8, dtype=complex)
        psi[0] = psi[7] = 1 / math.sqrt(2.0)
    elif kind == "w":
        psi = np.zeros(8, dtype=complex)
        psi[[1, 2, 4]] = 1 / math.sqrt(3.0)
    elif kind == "product_extension":
        psi = np.kron(pure_alpha(alpha), KET0)
    elif kind == "random_pure":
        if seed is None:
            raise InvalidArgumentError("random_pure needs an explicit seed")
        psi = random_pure(8, np.random.default_rng(seed))
    else:
        raise InvalidArgumentError(f"unknown tripartite family {kind!r}")
    return projector_of(psi)


def dephased_bell_purification(v: float) -> np.ndarray:
    """sqrt(v)|Phi+>|0> + sqrt(1-v)|Phi->|1>: C purifies a rank-two AB mixture."""
    v = _unit_interval(v, "v")
    phi_minus = np.array([1, 0, 0, -1], dtype=complex) / math.sqrt(2.0)
    psi = math.sqrt(v) * np.kron(PHI_PLUS, KET0) + math.sqrt(1.0 - v) * np.kron(phi_minus, KET1)
    return projector_of(psi)


def partial_transpose(rho, party: int = 1) -> np.ndarray:
    """Partial transpose of a two-qubit matrix on ``party`` (0 = A, 1 = B)."""
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise InvalidArgumentError("partial transpose is implemented for two qubits only")
    t = rho.reshape(2, 2, 2, 2)
    t = t.transpose(0, 3, 2, 1) if party == 1 else t.transpose(2, 1, 0, 3)
    return t.reshape(4, 4)


def negativity(rho) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    lam = np.linalg.eigvalsh(partial_transpose(rho))
    return float(-lam[lam < 0].sum())


def is_entangled(rho, tol: float = NEGATIVITY_TOL) -> bool:
    # PPT is necessary and sufficient for two qubits
    return negativity(rho) > tol


def product_state(rho_a, rho_b) -> np.ndarray:
    return kron(rho_a, rho_b)
