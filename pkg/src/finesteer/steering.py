"""Fine-grained steering game, steering functional and its LHS bounds.

The functional is P(b along P | a along S) + P(b along Q | a along T) for
Bob's orthogonal pair (P, Q) and Alice's steering directions (S, T).
Local-hidden-state models obey it up to 1 + 1/sqrt(2) when the state
supplier knows Bob's pair in advance (scenario I) and up to 3/2 when they
do not (scenario II).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import ORTHO_TOL, SCENARIO1_BOUND, SCENARIO2_BOUND, VERDICT_SLACK
from .errors import InvalidArgumentError
from .measure import X, Z, Direction, _vec, check_outcome, conditional_prob, conditional_prob_batch, outcome_sign
from .optimizer import DEFAULT_GRID_STEP, DEFAULT_REFINE_ITERS, maximize_over_directions
from .qcore import as_matrix, bloch_of, partial_trace

MC_CHUNK = 1 << 16


class Scenario(str, Enum):
    I = "I"
    II = "II"


@dataclass(frozen=True)
class SteeringSetting:
    alice_s: Direction
    alice_t: Direction
    bob_p: Direction = Z
    bob_q: Direction = X
    outcome_a: int = 0
    outcome_b: int = 0

    def __post_init__(self):
        check_outcome(self.outcome_a)
        check_outcome(self.outcome_b)
        dot = float(self.bob_p.vector @ self.bob_q.vector)
        if abs(dot) > ORTHO_TOL:
            raise InvalidArgumentError(f"Bob's observables must be orthogonal, p.q = {dot:.3e}")

    @classmethod
    def same_basis(cls, a: int = 0, b: int = 0) -> "SteeringSetting":
        """Alice measures what Bob measures: S = P = z, T = Q = x."""
        return cls(Z, X, Z, X, a, b)


@dataclass(frozen=True)
class SteeringVerdict:
    functional_value: float
    bound: float
    scenario: Scenario
    steerable: bool
    margin: float


def fur_game_value(rho, p, q, win: int = 0) -> float:
    """Winning probability of the single-qubit game: half P(win along p) plus half P(win along q)."""
    n = bloch_of(as_matrix(rho))
    sgn = outcome_sign(win)
    return 0.5 + 0.25 * sgn * float(n @ _vec(p) + n @ _vec(q))


def fur_game_max(p, q, win: int = 0) -> tuple[float, np.ndarray]:
    """Maximal game value over qubit states and the maximising Bloch vector.

    When p = -q every state wins with probability 1/2; the zero vector is
    returned as maximiser in that case.
    """
    s = _vec(p) + _vec(q)
    norm = float(np.linalg.norm(s))
    if norm < 1e-12:
        return 0.5, np.zeros(3)
    return 0.5 + 0.25 * norm, outcome_sign(win) * s / norm + 0.0  # no negative zeros


def scenario1_bound() -> float:
    return SCENARIO1_BOUND


def scenario2_bound() -> float:
    return SCENARIO2_BOUND


def bound_for(scenario) -> float:
    return SCENARIO1_BOUND if Scenario(scenario) is Scenario.I else SCENARIO2_BOUND


def steering_functional(rho, s: SteeringSetting) -> float:
    """P(b_P | a_S) + P(b_Q | a_T) for a two-qubit state, Alice = party 0."""
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise InvalidArgumentError("steering_functional needs a two-qubit state")
    a, b = s.outcome_a, s.outcome_b
    return (conditional_prob(rho, 0, s.alice_s, a, 1, s.bob_p, b)
            + conditional_prob(rho, 0, s.alice_t, a, 1, s.bob_q, b))


def verdict(rho, s: SteeringSetting, scenario, slack: float = VERDICT_SLACK) -> SteeringVerdict:
    value = steering_functional(rho, s)
    return classify(value, scenario, slack)


def classify(value: float, scenario, slack: float = VERDICT_SLACK) -> SteeringVerdict:
    scenario = Scenario(scenario)
    bound = bound_for(scenario)
    return SteeringVerdict(value, bound, scenario, value > bound + slack, value - bound)


def scenario2_average(n, p, win: int = 0) -> float:
    """Average over Bob's second observable of the round-winning probability.

    For hidden state with Bloch vector n and fixed first observable p the
    uniform sphere average of (P(win along p) + P(win along q))/2 is
    (2 + n.p)/4 (sign flipped for the spin-down condition).
    """
    n = np.asarray(n, dtype=float)
    if np.linalg.norm(n) > 1 + 1e-10:
        raise InvalidArgumentError("Bloch vector outside the unit ball")
    return 0.25 * (2.0 + outcome_sign(win) * float(n @ _vec(p)))


def random_unit_vectors(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform points on the sphere: z uniform on [-1, 1], azimuth uniform."""
    z = rng.uniform(-1.0, 1.0, size)
    phi = rng.uniform(0.0, 2 * math.pi, size)
    r = np.sqrt(1.0 - z * z)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def random_bloch_vectors(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform points in the closed unit ball."""
    return random_unit_vectors(rng, size) * rng.uniform(0.0, 1.0, size)[:, None] ** (1 / 3)


def _mc_chunk(args) -> float:
    n, p_hat, sgn, count, seed_seq = args
    q = random_unit_vectors(np.random.default_rng(seed_seq), count)
    win_p = 0.5 * (1 + sgn * (n @ p_hat))
    win_q = 0.5 * (1 + sgn * (q @ n))
    return float(np.sum(0.5 * win_p + 0.5 * win_q))


def scenario2_average_mc(n, p, samples: int, seed: int, win: int = 0, workers: int = 1) -> float:
    """Monte-Carlo estimate of ``scenario2_average`` with uniformly random q.

    Samples are split into fixed-size chunks with independent child seeds;
    chunk sums are combined in chunk order, so the estimate does not depend on
    ``workers``.
    """
    if samples < 1:
        raise InvalidArgumentError("samples must be positive")
    n = np.asarray(n, dtype=float)
    p_hat = _vec(p)
    sgn = outcome_sign(win)
    n_chunks = -(-samples // MC_CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [MC_CHUNK] * (n_chunks - 1) + [samples - MC_CHUNK * (n_chunks - 1)]
    jobs = [(n, p_hat, sgn, c, s) for c, s in zip(sizes, seeds)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            partial = list(ex.map(_mc_chunk, jobs))
    else:
        partial = [_mc_chunk(j) for j in jobs]
    total = 0.0
    for x in partial:
        total += x
    return total / samples


def schmidt_functional_terms(alpha, theta_s, theta_t, phi_t) -> tuple[float, float]:
    """The two closed-form fractions for sqrt(a)|00> + sqrt(1-a)|11>, Bob on z/x, outcomes 0.

    Only their sum equals the functional: the first fraction exceeds the
    z-conditional by 1/2 and the second falls short of the x-conditional by 1/2.
    """
    cs, ct = math.cos(theta_s), math.cos(theta_t)
    first = ((4 * alpha - 1) * cs + 2 * alpha + 1) / ((4 * alpha - 2) * cs + 2)
    second = math.sqrt((1 - alpha) * alpha) * math.sin(theta_t) * math.cos(phi_t) / ((2 * alpha - 1) * ct + 1)
    return first, second


def optimal_steering_angle(alpha: float) -> float:
    """Polar angle of Alice's x-steering direction that makes the functional 2."""
    return math.acos(1 - 2 * alpha)


@dataclass(frozen=True)
class OptimizedFunctional:
    value: float
    alice_s: Direction
    alice_t: Direction
    term_p: float
    term_q: float

    @property
    def setting_kwargs(self) -> dict:
        return {"alice_s": self.alice_s, "alice_t": self.alice_t}


def conditional_term_max(rho, cond_party: int, cond_out: int, target_party: int, target_dir, target_out: int,
                         grid_step: float = DEFAULT_GRID_STEP, refine_iters: int = DEFAULT_REFINE_ITERS):
    """Best conditioning direction for a single conditional probability.

    Directions whose conditioning outcome is impossible score 0, so they are
    never selected while any usable direction exists.
    """
    def objective(v):
        vals = conditional_prob_batch(rho, cond_party, v, cond_out, target_party, target_dir, target_out)
        return np.where(np.isnan(vals), 0.0, vals)

    return maximize_over_directions(objective, 1, grid_step, refine_iters, vectorized=True)


def max_steering_functional(rho, bob_p: Direction = Z, bob_q: Direction = X, a: int = 0, b: int = 0,
                            grid_step: float = DEFAULT_GRID_STEP,
                            refine_iters: int = DEFAULT_REFINE_ITERS) -> OptimizedFunctional:
    """Maximise the functional over Alice's two directions.

    The two terms depend on different directions, so each is maximised on its
    own.  The state may have more than two qubits; Alice is party 0, Bob party 1.
    """
    rho = as_matrix(rho)
    if rho.shape[0] > 4:
        rho = partial_trace(rho, [2] * (rho.shape[0].bit_length() - 1), [0, 1])
    SteeringSetting(Z, X, bob_p, bob_q, a, b)  # validates the pair and outcomes
    rp = conditional_term_max(rho, 0, a, 1, bob_p, b, grid_step, refine_iters)
    rq = conditional_term_max(rho, 0, a, 1, bob_q, b, grid_step, refine_iters)
    return OptimizedFunctional(rp.best_value + rq.best_value, rp.best_directions[0], rq.best_directions[0],
                               rp.best_value, rq.best_value)
