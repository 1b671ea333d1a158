import math

import numpy as np
import pytest

from finesteer.errors import InvalidArgumentError
from finesteer.qcore import check_density, partial_trace
from finesteer.statezoo import (PHI_PLUS, dephased_bell_purification, is_entangled, negativity, partial_transpose,
                                pure_alpha, pure_alpha_density, random_density, tripartite_family, werner)


def test_werner_examples():
    np.testing.assert_allclose(werner(0), np.eye(4) / 4)
    np.testing.assert_allclose(werner(1), np.outer(PHI_PLUS, PHI_PLUS.conj()), atol=1e-15)
    np.testing.assert_allclose(np.diag(werner(0.5)).real, [3 / 8, 1 / 8, 1 / 8, 3 / 8], atol=1e-15)
    with pytest.raises(InvalidArgumentError):
        werner(1.2)


def test_pure_alpha_examples():
    np.testing.assert_allclose(pure_alpha(1), [1, 0, 0, 0])
    np.testing.assert_allclose(pure_alpha(0.5), PHI_PLUS, atol=1e-15)
    np.testing.assert_allclose(pure_alpha(0.25), [0.5, 0, 0, math.sqrt(0.75)], atol=1e-15)
    with pytest.raises(InvalidArgumentError):
        pure_alpha(-0.1)


def test_factories_are_valid_states(rng):
    for p in np.linspace(0, 1, 21):
        check_density(werner(p))
        check_density(pure_alpha_density(p))
        check_density(dephased_bell_purification(p))
    for kind in ("ghz", "w", "product_extension"):
        check_density(tripartite_family(kind))
    check_density(tripartite_family("random_pure", seed=1))
    check_density(random_density(8, rng))


def test_tripartite_examples():
    ab = partial_trace(tripartite_family("ghz"), [2, 2, 2], [0, 1])
    np.testing.assert_allclose(ab, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    pe = tripartite_family("product_extension", alpha=0.5)
    np.testing.assert_allclose(partial_trace(pe, [2, 2, 2], [2]), np.diag([1, 0]), atol=1e-15)
    np.testing.assert_allclose(partial_trace(pe, [2, 2, 2], [1]), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_array_equal(tripartite_family("random_pure", seed=7), tripartite_family("random_pure", seed=7))
    with pytest.raises(InvalidArgumentError):
        tripartite_family("random_pure")


def test_partial_transpose_index_swap():
    rho = np.arange(16, dtype=complex).reshape(4, 4)
    expected = np.array([[0, 4, 2, 6], [1, 5, 3, 7], [8, 12, 10, 14], [9, 13, 11, 15]])
    np.testing.assert_array_equal(partial_transpose(rho, 1), expected)
    np.testing.assert_array_equal(partial_transpose(partial_transpose(rho, 0), 0), rho)


def test_werner_negativity_closed_form():
    for p in np.linspace(0, 1, 11):
        assert negativity(werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 4), abs=1e-12)
    assert not is_entangled(werner(1 / 3))
    assert is_entangled(pure_alpha_density(0.2))
