import math

import numpy as np
import pytest

from finesteer.constants import FUR_MAX_ZX
from finesteer.errors import InvalidArgumentError
from finesteer.measure import X, Y, Z, Direction
from finesteer.qcore import bloch_to_state, kron
from finesteer.statezoo import pure_alpha_density, random_density, werner
from finesteer.steering import (Scenario, SteeringSetting, fur_game_max, fur_game_value, max_steering_functional,
                                optimal_steering_angle, random_bloch_vectors, random_unit_vectors,
                                scenario1_bound, scenario2_average, scenario2_average_mc, scenario2_bound,
                                schmidt_functional_terms, steering_functional, verdict)

R2 = math.sqrt(2)


def sphere_grid(n=400):
    th, ph = np.meshgrid(np.linspace(0, math.pi, n), np.linspace(0, 2 * math.pi, 2 * n, endpoint=False),
                         indexing="ij")
    return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], -1).reshape(-1, 3)


def random_orthogonal_pair(rng):
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    return Direction.from_vector(q[:, 0]), Direction.from_vector(q[:, 1])


def test_fur_value_examples():
    assert fur_game_value(np.eye(2) / 2, Z, X) == pytest.approx(0.5)
    plus = bloch_to_state([1 / R2, 0, 1 / R2])
    assert fur_game_value(plus, Z, X, 0) == pytest.approx(0.5 + 1 / (2 * R2), abs=1e-12)
    minus = bloch_to_state([1 / R2, 0, -1 / R2])
    # eigenstate of (sx - sz)/sqrt2 with eigenvalue -1 wins the spin-down game
    assert fur_game_value(bloch_to_state([-1 / R2, 0, -1 / R2]), Z, X, 1) == pytest.approx(0.853553390593, abs=1e-12)
    assert fur_game_value(minus, Z, X, 0) == pytest.approx(0.5, abs=1e-12)


def test_fur_value_matches_probabilities(rng):
    from finesteer.measure import marginal_prob
    for _ in range(50):
        n = random_bloch_vectors(rng, 1)[0]
        p, q = random_orthogonal_pair(rng)
        rho = bloch_to_state(n)
        direct = 0.5 * marginal_prob(rho, 0, p, 1) + 0.5 * marginal_prob(rho, 0, q, 1)
        assert fur_game_value(rho, p, q, 1) == pytest.approx(direct, abs=1e-12)


def test_fur_max_examples():
    val, n = fur_game_max(Z, X)
    assert val == pytest.approx(0.8535533905932737, abs=1e-12)
    np.testing.assert_allclose(n, [1 / R2, 0, 1 / R2], atol=1e-12)
    val, n = fur_game_max(Z, Z)
    assert val == pytest.approx(1.0)
    np.testing.assert_allclose(n, [0, 0, 1])
    assert fur_game_max(Z, Direction(2 * math.pi / 3, 0.0))[0] == pytest.approx(0.75, abs=1e-12)
    assert fur_game_max(Z, Direction(math.pi, 0.0))[0] == 0.5


@pytest.mark.parametrize("win", [0, 1])
def test_fur_max_against_grid(rng, win):
    grid = sphere_grid(300)
    for _ in range(5):
        p, q = Direction.from_vector(rng.standard_normal(3)), Direction.from_vector(rng.standard_normal(3))
        vals = 0.5 + 0.25 * (1 - 2 * win) * (grid @ p.vector + grid @ q.vector)
        assert abs(vals.max() - fur_game_max(p, q, win)[0]) < 1e-4
        best, n = fur_game_max(p, q, win)
        assert fur_game_value(bloch_to_state(n), p, q, win) == pytest.approx(best, abs=1e-12)


def test_bounds():
    assert scenario1_bound() == pytest.approx(1.7071067811, abs=1e-10)
    assert scenario2_bound() == 1.5
    assert scenario1_bound() == 2 * fur_game_max(Z, X, 0)[0]


def test_lhs_unbeatable_scenario1(rng):
    ns = random_bloch_vectors(rng, 1000)
    for n in ns:
        for o in (0, 1):
            assert fur_game_value(bloch_to_state(n), Z, X, o) <= FUR_MAX_ZX + 1e-12


def test_lhs_unbeatable_scenario2(rng):
    ns = random_bloch_vectors(rng, 1000)
    ps = random_unit_vectors(rng, 1000)
    for n, p in zip(ns, ps):
        assert scenario2_average(n, p) <= 0.75 + 1e-12


def test_scenario2_average_examples():
    assert scenario2_average([0, 0, 1], Z) == 0.75
    assert scenario2_average([0, 0, 0], Z) == 0.5
    assert scenario2_average([0, 0, -1], Z) == 0.25
    assert scenario2_average([0, 0, -1], Z, win=1) == 0.75


def test_scenario2_average_quadrature():
    # midpoint quadrature of the sphere average with the sin(theta) measure
    m = 400
    th = (np.arange(m) + 0.5) * math.pi / m
    ph = (np.arange(2 * m) + 0.5) * math.pi / m
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    q = np.stack([np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], -1)
    w = np.sin(tt) * (math.pi / m) ** 2 / (4 * math.pi)
    n, p = np.array([0.3, -0.5, 0.6]), Direction(1.1, 4.0)
    integrand = 0.25 * (1 + n @ p.vector) + 0.25 * (1 + q @ n)
    assert float((integrand * w).sum()) == pytest.approx(scenario2_average(n, p), abs=1e-5)


def test_printed_average_expression_reads_as_fixed_observable():
    # 1/4 (2 + sin t sin t' cos(f - f') + cos t cos t') with the primed angles of the fixed observable
    n = Direction(0.9, 2.2)
    p = Direction(1.7, 0.4)
    printed = 0.25 * (2 + math.sin(n.theta) * math.sin(p.theta) * math.cos(n.phi - p.phi)
                      + math.cos(n.theta) * math.cos(p.theta))
    assert printed == pytest.approx(scenario2_average(n.vector, p), abs=1e-12)


def test_scenario2_mc(rng):
    for _ in range(3):
        n = random_bloch_vectors(rng, 1)[0]
        p = Direction.from_vector(rng.standard_normal(3))
        samples = 200_000
        est = scenario2_average_mc(n, p, samples, seed=int(rng.integers(1 << 31)))
        assert abs(est - scenario2_average(n, p)) <= 4 / math.sqrt(samples)
    assert scenario2_average_mc([0, 0, 0], Z, 1000, seed=3) == pytest.approx(0.5, abs=1e-15)


def test_scenario2_mc_independent_of_workers():
    a = scenario2_average_mc([0.2, 0.1, 0.5], X, 300_001, seed=11, workers=1)
    b = scenario2_average_mc([0.2, 0.1, 0.5], X, 300_001, seed=11, workers=4)
    assert a == b


def test_setting_requires_orthogonal_pair():
    with pytest.raises(InvalidArgumentError):
        SteeringSetting(Z, X, Z, Direction(1.0, 0.0))
    SteeringSetting(Z, X, Y, X)


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_werner_functional(p):
    assert steering_functional(werner(p), SteeringSetting.same_basis()) == pytest.approx(1 + p, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.05, 0.3, 0.5, 0.77, 1.0])
def test_pure_same_basis(alpha):
    value = steering_functional(pure_alpha_density(alpha), SteeringSetting.same_basis())
    assert value == pytest.approx(1.5 + math.sqrt(alpha * (1 - alpha)), abs=1e-12)


def test_pure_optimal_angles_reach_two():
    alpha = 0.3
    s = SteeringSetting(Direction(0, 0), Direction(math.acos(0.4), 0))
    assert optimal_steering_angle(alpha) == pytest.approx(math.acos(0.4))
    assert steering_functional(pure_alpha_density(alpha), s) == pytest.approx(2.0, abs=1e-12)


def test_schmidt_terms_sum(rng):
    for _ in range(100):
        alpha = rng.uniform(0.05, 0.95)
        ts, tt, pt = rng.uniform(0, math.pi), rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        s = SteeringSetting(Direction(ts, rng.uniform(0, 2 * math.pi)), Direction(tt, pt))
        first, second = schmidt_functional_terms(alpha, ts, tt, pt)
        assert first + second == pytest.approx(steering_functional(pure_alpha_density(alpha), s), abs=1e-9)


def test_schmidt_terms_offset_by_half():
    from finesteer.measure import conditional_prob
    alpha, ts, tt, pt = 0.3, 0.8, 1.2, 0.5
    rho = pure_alpha_density(alpha)
    first, second = schmidt_functional_terms(alpha, ts, tt, pt)
    z_term = conditional_prob(rho, 0, Direction(ts, 0), 0, 1, Z, 0)
    x_term = conditional_prob(rho, 0, Direction(tt, pt), 0, 1, X, 0)
    assert first - z_term == pytest.approx(0.5, abs=1e-12)
    assert x_term - second == pytest.approx(0.5, abs=1e-12)


def test_verdicts():
    s = SteeringSetting.same_basis()
    v = verdict(werner(0.8), s, Scenario.I)
    assert v.steerable and v.margin == pytest.approx(1.8 - 1.7071067811865475)
    assert not verdict(werner(0.6), s, "I").steerable
    assert verdict(werner(0.6), s, "II").steerable
    v = verdict(werner(0.5), s, Scenario.II)
    assert not v.steerable and abs(v.margin) <= 1e-9


def test_product_states_never_violate(rng):
    for _ in range(1000):
        na, nb = random_bloch_vectors(rng, 2)
        rho = kron(bloch_to_state(na), bloch_to_state(nb))
        sa = Direction.from_vector(rng.standard_normal(3))
        ta = Direction.from_vector(rng.standard_normal(3))
        a, b = (int(x) for x in rng.integers(2, size=2))
        value = steering_functional(rho, SteeringSetting(sa, ta, Z, X, a, b))
        assert value <= scenario1_bound() + 1e-9
        p = Direction.from_vector(rng.standard_normal(3))
        # averaged over Bob's second observable, twice the round-winning probability
        assert 2 * scenario2_average(nb, p, b) <= scenario2_bound() + 1e-9


def test_max_steering_functional_mixed_state(rng):
    rho = random_density(4, rng)
    res = max_steering_functional(rho, grid_step=math.pi / 30, refine_iters=4)
    s = SteeringSetting(res.alice_s, res.alice_t)
    assert steering_functional(rho, s) == pytest.approx(res.value, abs=1e-12)
    assert res.value >= steering_functional(rho, SteeringSetting.same_basis()) - 1e-9
