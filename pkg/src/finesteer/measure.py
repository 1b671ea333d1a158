"""Spin measurements along Bloch directions and outcome probabilities.

Outcome convention: bit 0 is spin up (eigenvalue +1), bit 1 spin down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

from .constants import DEGENERATE_TOL
from .errors import DegenerateConditionError, InvalidArgumentError
from .qcore import I2, PAULIS, as_matrix, kron_all, num_qubits, spin_operator


class Outcome(IntEnum):
    UP = 0
    DOWN = 1


def check_outcome(o) -> int:
    if isinstance(o, bool) or int(o) != o or int(o) not in (0, 1):
        raise InvalidArgumentError(f"outcome must be 0 or 1, got {o!r}")
    return int(o)


def outcome_sign(o) -> int:
    return 1 - 2 * check_outcome(o)


@dataclass(frozen=True)
class Direction:
    """Unit vector given by polar angle ``theta`` and azimuth ``phi`` (radians)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise InvalidArgumentError("direction angles must be finite")
        if not (-1e-12 <= self.theta <= math.pi + 1e-12):
            raise InvalidArgumentError(f"theta={self.theta} outside [0, pi]")
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))
        object.__setattr__(self, "theta", float(min(max(self.theta, 0.0), math.pi)))

    @property
    def vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    @classmethod
    def from_vector(cls, v) -> "Direction":
        v = np.asarray(v, dtype=float).ravel()
        r = float(np.linalg.norm(v))
        if v.shape != (3,) or r == 0.0:
            raise InvalidArgumentError("need a non-zero 3-vector")
        theta = math.acos(max(-1.0, min(1.0, v[2] / r)))
        phi = math.atan2(v[1], v[0]) if (v[0] or v[1]) else 0.0
        return cls(theta, phi)

    @classmethod
    def axis(cls, name: str) -> "Direction":
        """Direction for '+x', 'x', '-y', 'z', ... axis names."""
        key = name.strip().lower()
        sign = -1.0 if key.startswith("-") else 1.0
        key = key.lstrip("+-")
        base = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}
        if key not in base:
            raise InvalidArgumentError(f"unknown axis {name!r}")
        return cls.from_vector(sign * np.array(base[key]))

    def __repr__(self) -> str:
        return f"Direction(theta={self.theta:.6g}, phi={self.phi:.6g})"


Z = Direction(0.0, 0.0)
X = Direction(math.pi / 2, 0.0)
Y = Direction(math.pi / 2, math.pi / 2)


def _vec(d) -> np.ndarray:
    if isinstance(d, Direction):
        return d.vector
    v = np.asarray(d, dtype=float).ravel()
    if v.shape != (3,):
        raise InvalidArgumentError("direction must be a Direction or a 3-vector")
    return v / np.linalg.norm(v)


def projector(d, o) -> np.ndarray:
    """(I + (-1)^o n.sigma)/2."""
    return 0.5 * (I2 + outcome_sign(o) * spin_operator(_vec(d)))


def _measurement_operator(rho, layout: Sequence[Optional[Direction]], outcomes: Sequence) -> np.ndarray:
    n = num_qubits(rho)
    if len(layout) != n:
        raise InvalidArgumentError(f"layout has {len(layout)} parties, state has {n} qubits")
    if len(outcomes) != n:
        raise InvalidArgumentError("need one outcome slot per party")
    if all(d is None for d in layout):
        raise InvalidArgumentError("layout must measure at least one party")
    return kron_all([I2 if d is None else projector(d, o) for d, o in zip(layout, outcomes)])


def joint_prob(rho, layout: Sequence[Optional[Direction]], outcomes: Sequence, raw: bool = False) -> float:
    """Probability of ``outcomes`` when each party measures its ``layout`` direction.

    Parties with direction ``None`` are left unmeasured (their outcome slot is
    ignored).  The value is clamped to [0, 1] unless ``raw`` is set.
    """
    rho = as_matrix(rho)
    p = float(np.trace(rho @ _measurement_operator(rho, layout, outcomes)).real)
    if raw:
        return p
    return min(1.0, max(0.0, p))


def marginal_prob(rho, party: int, d, o) -> float:
    n = num_qubits(rho)
    layout = [None] * n
    layout[party] = d
    outs = [0] * n
    outs[party] = o
    return joint_prob(rho, layout, outs)


def conditional_prob(rho, cond_party: int, cond_dir, cond_out, target_party: int, target_dir, target_out) -> float:
    """P(target outcome | conditioning outcome) on a multi-qubit state."""
    n = num_qubits(as_matrix(rho))
    if cond_party == target_party or not (0 <= cond_party < n and 0 <= target_party < n):
        raise InvalidArgumentError("conditioning and target parties must be distinct valid indices")
    marg = marginal_prob(rho, cond_party, cond_dir, cond_out)
    if marg <= DEGENERATE_TOL:
        raise DegenerateConditionError(
            f"conditioning outcome of party {cond_party} has probability {marg:.3e}", probability=marg
        )
    layout = [None] * n
    outs = [0] * n
    layout[cond_party], outs[cond_party] = cond_dir, cond_out
    layout[target_party], outs[target_party] = target_dir, target_out
    return min(1.0, max(0.0, joint_prob(rho, layout, outs) / marg))


def linear_form(rho, party: int, fixed: dict | None = None) -> tuple[float, np.ndarray]:
    """Coefficients of P(party gives 0 along s, fixed outcomes) as an affine function of s.

    Returns ``(c0, c)`` with probability ``c0 + sign * (s . c)`` where sign is
    +1 for outcome 0 and -1 for outcome 1.  ``fixed`` maps other party indices
    to ``(direction, outcome)`` pairs.
    """
    rho = as_matrix(rho)
    n = num_qubits(rho)
    fixed = fixed or {}
    factors = [I2] * n
    for k, (d, o) in fixed.items():
        if k == party:
            raise InvalidArgumentError("the free party cannot also be fixed")
        factors[k] = projector(d, o)
    ops = []
    for s in (I2,) + PAULIS:
        f = list(factors)
        f[party] = 0.5 * s
        ops.append(kron_all(f))
    vals = np.array([np.trace(rho @ op).real for op in ops])
    return float(vals[0]), vals[1:]


def conditional_prob_batch(rho, cond_party: int, cond_vectors, cond_out, target_party: int, target_dir,
                           target_out) -> np.ndarray:
    """Vectorised ``conditional_prob`` over many conditioning directions.

    ``cond_vectors`` is an (N, 3) array of unit vectors.  Entries whose
    conditioning probability is below the degeneracy threshold are NaN.
    """
    sgn = outcome_sign(cond_out)
    m0, m = linear_form(rho, cond_party)
    j0, j = linear_form(rho, cond_party, {target_party: (target_dir, target_out)})
    v = np.atleast_2d(np.asarray(cond_vectors, dtype=float))
    marg = m0 + sgn * (v @ m)
    joint = j0 + sgn * (v @ j)
    out = np.full(v.shape[0], np.nan)
    ok = marg > DEGENERATE_TOL
    out[ok] = np.clip(joint[ok] / marg[ok], 0.0, 1.0)
    return out
