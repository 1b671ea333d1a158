"""Comparison criteria: CHSH (Horodecki closed form plus a grid oracle) and
the linear n-setting steering criterion with its LHS bound C_n."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import DISTINCT_ANGLE
from .errors import InvalidArgumentError
from .measure import Direction, _vec
from .qcore import PAULIS, as_matrix, kron, max_eigenvalue, spin_operator

MAX_SETTINGS = 16


def correlation_matrix(rho) -> np.ndarray:
    """T_ij = Tr[rho sigma_i (x) sigma_j]."""
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise InvalidArgumentError("correlation matrix needs a two-qubit state")
    return np.array([[np.trace(rho @ kron(si, sj)).real for sj in PAULIS] for si in PAULIS])


def chsh_max(rho) -> float:
    """Maximal CHSH value 2 sqrt(t1 + t2) over the two largest eigenvalues of T^T T."""
    t = correlation_matrix(rho)
    ev = np.linalg.eigvalsh(t.T @ t)
    return 2.0 * math.sqrt(max(0.0, ev[-1] + ev[-2]))


def chsh_value(rho, a0, a1, b0, b1) -> float:
    """<A0 B0> + <A0 B1> + <A1 B0> - <A1 B1> for spin observables along the given directions."""
    t = correlation_matrix(rho)
    a0, a1, b0, b1 = (_vec(v) for v in (a0, a1, b0, b1))
    return float(a0 @ t @ (b0 + b1) + a1 @ t @ (b0 - b1))


def chsh_grid_search(rho, step_deg: float = 1.0, chunk: int = 64) -> float:
    """Brute-force CHSH maximum on an angular grid.

    With Bob's observables written as b0 +/- b1 = 2 cos(g) u, 2 sin(g) v for
    orthonormal u, v, Alice's best responses give 2 (cos g |T u| + sin g |T v|).
    The grid runs over u (hemisphere), the rotation of v about u and g.
    """
    t = correlation_matrix(rho)
    h = math.radians(step_deg)
    thetas = np.arange(0.0, math.pi / 2 + 1e-12, h)
    phis = np.arange(0.0, 2 * math.pi - 1e-12, h)
    psis = np.arange(0.0, math.pi - 1e-12, h)
    n_gamma = int(round((math.pi / 2) / h))
    best = 0.0
    for start in range(0, len(thetas), chunk):
        th = thetas[start:start + chunk]
        tt, pp = np.meshgrid(th, phis, indexing="ij")
        tt, pp = tt.ravel(), pp.ravel()
        u = np.stack([np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], -1)
        e1 = np.stack([np.cos(tt) * np.cos(pp), np.cos(tt) * np.sin(pp), -np.sin(tt)], -1)
        e2 = np.stack([-np.sin(pp), np.cos(pp), np.zeros_like(pp)], -1)
        tu = np.linalg.norm(u @ t.T, axis=-1)
        te1, te2 = e1 @ t.T, e2 @ t.T
        for psi in psis:
            tv = np.linalg.norm(math.cos(psi) * te1 + math.sin(psi) * te2, axis=-1)
            # cos(g) A + sin(g) B is unimodal in g on [0, pi/2]; only the grid
            # points bracketing atan2(B, A) can be the grid maximum
            lo = np.clip(np.floor(np.arctan2(tv, tu) / h), 0, n_gamma)
            for g in (lo * h, np.minimum(lo + 1, n_gamma) * h):
                best = max(best, float(np.max(2.0 * (np.cos(g) * tu + np.sin(g) * tv))))
    return best


@dataclass(frozen=True)
class MeasurementSet:
    directions: tuple

    def __post_init__(self):
        dirs = tuple(d if isinstance(d, Direction) else Direction.from_vector(d) for d in self.directions)
        object.__setattr__(self, "directions", dirs)
        if len(dirs) < 2:
            raise InvalidArgumentError("need at least two measurement directions")
        for a, b in itertools.combinations(dirs, 2):
            ang = math.acos(max(-1.0, min(1.0, float(a.vector @ b.vector))))
            if ang <= DISTINCT_ANGLE:
                raise InvalidArgumentError(f"directions {a} and {b} coincide")

    @property
    def n(self) -> int:
        return len(self.directions)

    @property
    def vectors(self) -> np.ndarray:
        return np.array([d.vector for d in self.directions])


def _as_set(ms) -> MeasurementSet:
    return ms if isinstance(ms, MeasurementSet) else MeasurementSet(tuple(ms))


def saunders_bound(ms) -> float:
    """C_n: max over sign patterns of lambda_max(sum_k s_k n_k.sigma) / n.

    The enumeration is exponential, so sets larger than 16 are refused.
    """
    ms = _as_set(ms)
    if ms.n > MAX_SETTINGS:
        raise InvalidArgumentError(f"refusing to enumerate 2^{ms.n} sign patterns")
    vecs = ms.vectors
    best = -math.inf
    for signs in itertools.product((1.0, -1.0), repeat=ms.n):
        best = max(best, max_eigenvalue(spin_operator(np.asarray(signs) @ vecs)))
    return best / ms.n


def saunders_lhs(rho, ms, alice: Sequence | None = None) -> float:
    """(1/n) sum_k <A_k (x) n_k.sigma>.

    Alice's A_k is a spin measurement; by default along T n_k / |T n_k|, the
    direction that maximises each correlation (for |Phi+>-type states this is
    Bob's own direction reflected through the x-z plane).  Pass ``alice`` to
    fix her directions explicitly.
    """
    ms = _as_set(ms)
    t = correlation_matrix(rho)
    total = 0.0
    for k, b in enumerate(ms.vectors):
        tb = t @ b
        if alice is None:
            total += float(np.linalg.norm(tb))
        else:
            total += float(_vec(alice[k]) @ tb)
    return total / ms.n
