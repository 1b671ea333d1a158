"""Monogamy of the steering functional and 1s-DIQKD key rates (individual attacks).

Parties are ordered A (0), B (1), C (2).  Bob is the trusted side and
measures an orthogonal pair P, Q; Alice steers with S, T and the
eavesdropper Charlie measures S', T' on his share.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .constants import FUR_MAX_ZX, ORTHO_TOL, SCENARIO1_BOUND, VERDICT_SLACK
from .errors import DegenerateConditionError, InvalidArgumentError
from .measure import (X, Z, Direction, check_outcome, conditional_prob, joint_prob, linear_form, outcome_sign,
                      projector)
from .optimizer import DEFAULT_GRID_STEP, DEFAULT_REFINE_ITERS, maximize_over_directions
from .qcore import I2, as_matrix, kron_all, partial_trace, projector_of
from .statezoo import random_pure
from .steering import conditional_term_max

A, B, C = 0, 1, 2

# published reference values, reported next to the formula values
PUBLISHED_MAX_RATE = 0.5
PUBLISHED_LINEAR_BOUND = 0.47
K_MAX = 0.5 - 0.5 / math.sqrt(2.0)


@dataclass(frozen=True)
class TripartiteSetting:
    alice_s: Direction = Z
    alice_t: Direction = X
    charlie_s: Direction = Z
    charlie_t: Direction = X
    bob_p: Direction = Z
    bob_q: Direction = X
    a: int = 0
    b: int = 0
    c: int = 0

    def __post_init__(self):
        for o in (self.a, self.b, self.c):
            check_outcome(o)
        dot = float(self.bob_p.vector @ self.bob_q.vector)
        if abs(dot) > ORTHO_TOL:
            raise InvalidArgumentError(f"Bob's observables must be orthogonal, p.q = {dot:.3e}")


def _check3(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (8, 8):
        raise InvalidArgumentError("expected a three-qubit state")
    return rho


def t_pair(rho, ts: TripartiteSetting) -> tuple[float, float]:
    """(T_AB, T_BC): the steering functional of Alice on Bob and of Charlie on Bob."""
    rho = _check3(rho)
    t_ab = (conditional_prob(rho, A, ts.alice_s, ts.a, B, ts.bob_p, ts.b)
            + conditional_prob(rho, A, ts.alice_t, ts.a, B, ts.bob_q, ts.b))
    t_bc = (conditional_prob(rho, C, ts.charlie_t, ts.c, B, ts.bob_q, ts.b)
            + conditional_prob(rho, C, ts.charlie_s, ts.c, B, ts.bob_p, ts.b))
    return t_ab, t_bc


def monogamy_check(rho, ts: TripartiteSetting, slack: float = VERDICT_SLACK) -> tuple[float, bool]:
    t_ab, t_bc = t_pair(rho, ts)
    avg = 0.5 * (t_ab + t_bc)
    return avg, avg <= SCENARIO1_BOUND + slack


def mixed_terms(rho, ts: TripartiteSetting) -> tuple[float, float]:
    """P(b_P|a_S) + P(b_Q|c_T') and P(b_Q|a_T) + P(b_P|c_S'); they average to (T_AB + T_BC)/2."""
    rho = _check3(rho)
    first = (conditional_prob(rho, A, ts.alice_s, ts.a, B, ts.bob_p, ts.b)
             + conditional_prob(rho, C, ts.charlie_t, ts.c, B, ts.bob_q, ts.b))
    second = (conditional_prob(rho, A, ts.alice_t, ts.a, B, ts.bob_q, ts.b)
              + conditional_prob(rho, C, ts.charlie_s, ts.c, B, ts.bob_p, ts.b))
    return first, second


def bob_state_given(rho, alice_dir, a: int, charlie_dir, c: int) -> np.ndarray:
    """Bob's normalised qubit state after Alice and Charlie obtain outcomes a and c."""
    rho = _check3(rho)
    op = kron_all([projector(alice_dir, a), I2, projector(charlie_dir, c)])
    post = op @ rho @ op
    prob = np.trace(post).real
    if prob <= 1e-12:
        raise DegenerateConditionError("joint conditioning event has zero probability", probability=prob)
    return partial_trace(post / prob, [2, 2, 2], [B])


def optimize_parties(rho, bob_p: Direction = Z, bob_q: Direction = X, a: int = 0, b: int = 0, c: int = 0,
                     grid_step: float = DEFAULT_GRID_STEP,
                     refine_iters: int = DEFAULT_REFINE_ITERS) -> TripartiteSetting:
    """Choose Alice's and Charlie's directions maximising T_AB and T_BC.

    All four conditional terms depend on distinct directions and are
    maximised independently.
    """
    rho = _check3(rho)
    best = {}
    for name, party, out, target in (("alice_s", A, a, bob_p), ("alice_t", A, a, bob_q),
                                     ("charlie_s", C, c, bob_p), ("charlie_t", C, c, bob_q)):
        res = conditional_term_max(rho, party, out, B, target, b, grid_step, refine_iters)
        best[name] = res.best_directions[0]
    return TripartiteSetting(bob_p=bob_p, bob_q=bob_q, a=a, b=b, c=c, **best)


@dataclass(frozen=True)
class MonogamyTrial:
    index: int
    t_ab: float
    t_bc: float
    average: float
    satisfied: bool


def _trial(args) -> MonogamyTrial:
    index, rho, grid_step, refine_iters = args
    ts = optimize_parties(rho, grid_step=grid_step, refine_iters=refine_iters)
    t_ab, t_bc = t_pair(rho, ts)
    avg, ok = monogamy_check(rho, ts)
    return MonogamyTrial(index, t_ab, t_bc, avg, ok)


def random_tripartite_states(trials: int, seed: int) -> list[np.ndarray]:
    """One Haar-random three-qubit pure state per trial, each from its own child seed."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [projector_of(random_pure(8, np.random.default_rng(s))) for s in children]


def monogamy_stress(states, grid_step: float = DEFAULT_GRID_STEP, refine_iters: int = DEFAULT_REFINE_ITERS,
                    workers: int = 1) -> list[MonogamyTrial]:
    """Optimise Alice and Charlie for every state and report the monogamy average.

    Results come back in input order whatever the worker count.
    """
    jobs = [(i, _check3(r), grid_step, refine_iters) for i, r in enumerate(states)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(_trial, jobs))
    return [_trial(j) for j in jobs]


def _entropy_bits(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(axis=-1)


def mutual_information(joint) -> float:
    """I(X:Y) in bits for a 2x2 joint distribution (rows X, columns Y)."""
    t = np.asarray(joint, dtype=float)
    if t.shape != (2, 2) or np.any(t < 0) or abs(t.sum() - 1.0) > 1e-10:
        raise InvalidArgumentError("joint distribution must be a non-negative 2x2 table summing to 1")
    return float(_mutual_information_batch(t[None])[0])


def _mutual_information_batch(t: np.ndarray) -> np.ndarray:
    """t has shape (N, 2, 2)."""
    h_x = _entropy_bits(t.sum(axis=2))
    h_y = _entropy_bits(t.sum(axis=1))
    h_xy = _entropy_bits(t.reshape(len(t), 4))
    return np.maximum(h_x + h_y - h_xy, 0.0)


def basis_table(rho, party: int, dir_p_round: Direction, dir_q_round: Direction, ts: TripartiteSetting) -> np.ndarray:
    """Joint table of (party's bit, Bob's bit) mixing the P and Q rounds with weight 1/2 each."""
    rho = _check3(rho)
    table = np.zeros((2, 2))
    for d_party, d_bob in ((dir_p_round, ts.bob_p), (dir_q_round, ts.bob_q)):
        layout = [None, d_bob, None]
        layout[party] = d_party
        for x in (0, 1):
            for y in (0, 1):
                outs = [0, y, 0]
                outs[party] = x
                table[x, y] += 0.5 * joint_prob(rho, layout, outs)
    return table


def information_pair(rho, ts: TripartiteSetting) -> tuple[float, float]:
    """(I(B:A), I(B:C)) in bits for the sifted rounds."""
    i_ab = mutual_information(basis_table(rho, A, ts.alice_s, ts.alice_t, ts))
    i_bc = mutual_information(basis_table(rho, C, ts.charlie_s, ts.charlie_t, ts))
    return i_ab, i_bc


def key_rate_exact(rho, ts: TripartiteSetting) -> float:
    """Csiszar-Koerner rate I(B:A) - I(B:C) for Charlie's fixed per-basis measurements."""
    i_ab, i_bc = information_pair(rho, ts)
    return i_ab - i_bc


def worst_case_charlie(rho, ts: TripartiteSetting, grid_step: float = math.pi / 8,
                       refine_iters: int = 4) -> TripartiteSetting:
    """Grid-optimised individual attack: Charlie's pair of directions maximising I(B:C).

    No global optimality is claimed; the search is the deterministic grid
    refinement of the optimizer module.
    """
    rho = _check3(rho)
    # P(c, b) in each round is affine in Charlie's direction
    coeffs = {}
    for rnd, d_bob in (("p", ts.bob_p), ("q", ts.bob_q)):
        for y in (0, 1):
            coeffs[rnd, y] = linear_form(rho, C, {B: (d_bob, y)})

    def objective(vs, vt):
        t = np.zeros((len(vs), 2, 2))
        for x in (0, 1):
            sgn = outcome_sign(x)
            for y in (0, 1):
                c0, cv = coeffs["p", y]
                d0, dv = coeffs["q", y]
                t[:, x, y] = 0.5 * (c0 + sgn * (vs @ cv)) + 0.5 * (d0 + sgn * (vt @ dv))
        return _mutual_information_batch(np.clip(t, 0.0, 1.0))

    res = maximize_over_directions(objective, 2, grid_step, refine_iters, vectorized=True)
    return replace(ts, charlie_s=res.best_directions[0], charlie_t=res.best_directions[1])


def key_rate_bounds(k: float) -> tuple[float, float]:
    """(log2[(c + k)/(c - k)], 8k / ((2 + sqrt 2) ln 2)) with c = 1/2 + 1/(2 sqrt 2)."""
    k = float(k)
    if not (0.0 <= k < FUR_MAX_ZX):
        raise InvalidArgumentError(f"violation k={k} outside [0, {FUR_MAX_ZX})")
    logratio = math.log2((FUR_MAX_ZX + k) / (FUR_MAX_ZX - k))
    linear = 8.0 * k / ((2.0 + math.sqrt(2.0)) * math.log(2.0))
    return logratio, linear


def violation_of(t_ab: float) -> float:
    return 0.5 * t_ab - FUR_MAX_ZX


@dataclass(frozen=True)
class KeyRateReport:
    t_ab: float
    t_bc: float
    k_violation: float
    rate_exact_bits: float
    rate_logratio_bits: float
    rate_linear_bound_bits: float


def key_rate_report(rho, ts: TripartiteSetting) -> KeyRateReport:
    """Rate and both violation-based bounds; the bounds are NaN when k is not positive."""
    t_ab, t_bc = t_pair(rho, ts)
    k = violation_of(t_ab)
    if 0.0 <= k < FUR_MAX_ZX:
        logratio, linear = key_rate_bounds(k)
    else:
        logratio = linear = math.nan
    return KeyRateReport(t_ab, t_bc, k, key_rate_exact(rho, ts), logratio, linear)
