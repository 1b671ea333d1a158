"""Deterministic derivative-free maximisation over one or two Bloch directions.

A coarse (theta, phi) grid is scanned first, then the incumbent is refined by
repeatedly scanning a 9x9 local grid whose spacing shrinks by a factor of four
per round.  Ties are resolved towards the lexicographically smallest angle
tuple, so results never depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError
from .measure import Direction

DEFAULT_GRID_STEP = math.pi / 60
DEFAULT_REFINE_ITERS = 6
SHRINK = 4
_LOCAL = np.arange(-SHRINK, SHRINK + 1)


@dataclass
class OptResult:
    best_value: float
    best_directions: list[Direction]
    evaluations: int
    history: list[float] = field(default_factory=list)

    @property
    def best_angles(self) -> tuple[float, ...]:
        return tuple(a for d in self.best_directions for a in (d.theta, d.phi))


def _unit_vectors(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _evaluate(objective, angles: np.ndarray, k: int, vectorized: bool) -> np.ndarray:
    """angles has shape (N, 2k): theta_1, phi_1, theta_2, phi_2."""
    if vectorized:
        vecs = [_unit_vectors(angles[:, 2 * i], angles[:, 2 * i + 1]) for i in range(k)]
        vals = np.asarray(objective(*vecs), dtype=float).reshape(-1)
        if vals.shape[0] != angles.shape[0]:
            raise InvalidArgumentError("vectorised objective returned the wrong number of values")
        return vals
    out = np.empty(angles.shape[0])
    for n, row in enumerate(angles):
        dirs = [Direction(row[2 * i], row[2 * i + 1]) for i in range(k)]
        out[n] = float(objective(*dirs))
    return out


def _pick(values: np.ndarray, angles: np.ndarray) -> int:
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericalFailureError(
            f"objective returned {values[i]} at angles {tuple(angles[i])}", angles=tuple(angles[i])
        )
    tied = np.flatnonzero(values == values.max())
    if tied.size == 1:
        return int(tied[0])
    # np.lexsort uses the last key as primary
    keys = tuple(angles[tied, c] for c in reversed(range(angles.shape[1])))
    return int(tied[np.lexsort(keys)[0]])


def _product(per_dir: list[np.ndarray]) -> np.ndarray:
    """Cartesian product of per-direction (M_i, 2) angle tables, first direction major."""
    if len(per_dir) == 1:
        return per_dir[0]
    a, b = per_dir
    return np.hstack([np.repeat(a, len(b), axis=0), np.tile(b, (len(a), 1))])


def maximize_over_directions(
    objective: Callable,
    k: int = 1,
    grid_step: float = DEFAULT_GRID_STEP,
    refine_iters: int = DEFAULT_REFINE_ITERS,
    vectorized: bool = False,
) -> OptResult:
    """Maximise ``objective`` over ``k`` unit directions.

    The objective receives ``k`` Direction objects, or with ``vectorized=True``
    ``k`` arrays of unit vectors of shape (N, 3) and must return N values.
    A non-finite value anywhere on the search grid raises
    NumericalFailureError carrying the offending angles.
    """
    if k not in (1, 2):
        raise InvalidArgumentError("k must be 1 or 2")
    if not (0 < grid_step <= math.pi / 8):
        raise InvalidArgumentError("grid_step must lie in (0, pi/8]")
    if refine_iters < 0:
        raise InvalidArgumentError("refine_iters must be non-negative")

    n_theta = int(round(math.pi / grid_step)) + 1
    n_phi = int(round(2 * math.pi / grid_step))
    h_theta = math.pi / (n_theta - 1)
    h_phi = 2 * math.pi / n_phi
    tt, pp = np.meshgrid(np.linspace(0.0, math.pi, n_theta), np.arange(n_phi) * h_phi, indexing="ij")
    coarse = np.column_stack([tt.ravel(), pp.ravel()])

    angles = _product([coarse] * k)
    values = _evaluate(objective, angles, k, vectorized)
    evals = len(values)
    i = _pick(values, angles)
    best_angles, best_value = angles[i].copy(), float(values[i])
    history = [best_value]

    for r in range(1, refine_iters + 1):
        dt, dp = h_theta / SHRINK**r, h_phi / SHRINK**r
        per_dir = []
        for j in range(k):
            th = np.clip(best_angles[2 * j] + _LOCAL * dt, 0.0, math.pi)
            ph = np.mod(best_angles[2 * j + 1] + _LOCAL * dp, 2 * math.pi)
            a, b = np.meshgrid(th, ph, indexing="ij")
            per_dir.append(np.column_stack([a.ravel(), b.ravel()]))
        angles = _product(per_dir)
        values = _evaluate(objective, angles, k, vectorized)
        evals += len(values)
        i = _pick(values, angles)
        # the incumbent is on the local grid, so this never decreases
        best_angles, best_value = angles[i].copy(), float(values[i])
        history.append(best_value)

    dirs = [Direction(best_angles[2 * j], best_angles[2 * j + 1]) for j in range(k)]
    return OptResult(best_value, dirs, evals, history)
