"""Tests for eigenvalue computation and clustering."""

from unittest.mock import patch

import numpy as np
import pytest

from sun_expm.errors import InvalidInputError, NumericalFailureError
from sun_expm.ops.matrix_core import HermitianTraceless
from sun_expm.ops.simplex_geometry import multiset_distance
from sun_expm.ops.spectra import (
    Spectrum,
    aberth_roots,
    char_roots_general,
    cluster_spectrum,
    eig_hermitian,
    spectral_diameter,
    spectrum_of,
)
from sun_expm.ops.sun_generators import random_complex_matrix, random_traceless_hermitian


@pytest.fixture
def hermitian_batch():
    """Seeded traceless hermitian generators for n = 2..8."""
    return [random_traceless_hermitian(n, seed=100 + n) for n in range(2, 9)]


def test_eig_hermitian_diagonal():
    spec = eig_hermitian(HermitianTraceless(np.diag([1.0, -1.0])))
    np.testing.assert_allclose(spec.values, [1.0, -1.0])
    assert not spec.is_degenerate


def test_eig_hermitian_sigma_x():
    spec = eig_hermitian(HermitianTraceless([[0, 1], [1, 0]]))
    np.testing.assert_allclose(spec.values.real, [1.0, -1.0], atol=1e-15)
    assert np.all(spec.values.imag == 0)


def test_eig_hermitian_degenerate_cluster():
    spec = eig_hermitian(HermitianTraceless(np.diag([2.0, -1.0, -1.0])))
    np.testing.assert_allclose(spec.values, [2.0, -1.0, -1.0])
    assert spec.clusters == [[0], [1, 2]]
    assert spec.cluster_of(2) == [1, 2]
    assert spec.is_degenerate


def test_eig_hermitian_matches_numpy(hermitian_batch):
    for h in hermitian_batch:
        spec = eig_hermitian(h)
        expected = np.linalg.eigvalsh(np.asarray(h.matrix))
        assert multiset_distance(spec.values, expected) < 1e-10


def test_eig_hermitian_sweep_budget(hermitian_batch):
    with pytest.raises(NumericalFailureError) as exc_info:
        eig_hermitian(hermitian_batch[-1], max_sweeps=0)
    assert exc_info.value.diagnostic > 0


def test_char_roots_general_examples():
    spec = char_roots_general(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(spec.values, [3.0, 2.0, 1.0], atol=1e-10)

    nilpotent = char_roots_general([[0, 1], [0, 0]])
    assert nilpotent.clusters == [[0, 1]]
    assert np.max(np.abs(nilpotent.values)) < 1e-6

    companion = [[0, 0, 6], [1, 0, -11], [0, 1, 6]]
    spec = char_roots_general(companion)
    np.testing.assert_allclose(spec.values, [3.0, 2.0, 1.0], atol=1e-9)


@pytest.mark.parametrize("seed", [7, 8, 9])
def test_char_roots_general_random(seed):
    matrix = random_complex_matrix(5, seed)
    spec = char_roots_general(matrix)
    assert multiset_distance(spec.values, np.linalg.eigvals(matrix)) < 1e-8


def test_aberth_roots_linear_and_constant():
    np.testing.assert_allclose(aberth_roots([1.0, -2.0]), [2.0])
    assert aberth_roots([1.0]).size == 0


def test_aberth_roots_stagnation():
    with patch("sun_expm.ops.spectra._horner", return_value=np.ones(3, dtype=np.complex128)):
        with pytest.raises(NumericalFailureError):
            aberth_roots([1.0, -6.0, 11.0, -6.0], max_iter=3)


def test_cluster_spectrum_examples():
    assert cluster_spectrum([1.0, 1.0 + 1e-13, -2.0], 1e-10) == [[0, 1], [2]]
    assert cluster_spectrum([1.0, 2.0, 3.0], 0.0) == [[0], [1], [2]]
    assert cluster_spectrum([0.0, 0.0, 0.0], 1e-10) == [[0, 1, 2]]


def test_cluster_spectrum_is_transitive():
    assert cluster_spectrum([0.0, 0.6, 1.2], 0.7) == [[0, 1, 2]]


def _value_partition(values, groups):
    return sorted(sorted(float(np.real(values[i])) for i in group) for group in groups)


@pytest.mark.parametrize("order", [[0, 1, 2, 3, 4, 5], [5, 3, 1, 4, 0, 2], [2, 4, 0, 5, 1, 3]])
def test_cluster_spectrum_ignores_input_order(order):
    values = np.array([2.0, 2.0 + 1e-11, -0.5, -0.5 - 2e-11, -0.5 + 1e-11, -3.0])
    shuffled = values[order]
    expected = [[-3.0], sorted(values[2:5].tolist()), sorted(values[:2].tolist())]
    assert _value_partition(shuffled, cluster_spectrum(shuffled, 1e-9)) == expected


def test_cluster_spectrum_is_idempotent():
    spec = Spectrum.from_values([1.0, 1.0 + 1e-12, 0.0, -1.0 - 1e-12, -1.0], tol=1e-9)
    again = Spectrum.from_values(spec.values, tol=1e-9)
    np.testing.assert_array_equal(again.values, spec.values)
    assert again.clusters == spec.clusters == [[0, 1], [2], [3, 4]]
    assert cluster_spectrum(spec.values, 1e-9) == spec.clusters


def test_cluster_spectrum_rejects_negative_tol():
    with pytest.raises(InvalidInputError):
        cluster_spectrum([1.0], -1.0)


def test_spectrum_from_values_sorts_descending():
    spec = Spectrum.from_values([-1.0, 3.0, 0.5])
    np.testing.assert_allclose(spec.values, [3.0, 0.5, -1.0])
    assert spec.n == 3
    assert spectral_diameter(spec.values) == pytest.approx(4.0)


@pytest.mark.parametrize("values", [[], [np.nan, 1.0]])
def test_spectrum_from_values_rejects(values):
    with pytest.raises(InvalidInputError):
        Spectrum.from_values(values)


def test_spectrum_of_hermitian_with_trace():
    spec = spectrum_of(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(spec.values, [3.0, 2.0, 1.0], atol=1e-12)


def test_spectrum_of_general_matrix():
    spec = spectrum_of([[1, 1], [0, 2]])
    np.testing.assert_allclose(spec.values, [2.0, 1.0], atol=1e-10)
