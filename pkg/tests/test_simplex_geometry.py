"""Tests for simplex eigenvalue geometry and the angle maps."""

import math

import numpy as np
import pytest

from sun_expm.errors import InconsistentInvariantsError, InvalidInputError, UnsupportedOrderError
from sun_expm.ops.simplex_geometry import (
    AngleParams,
    EigenvalueVector,
    angles_to_spectrum,
    geometry_header,
    geometry_rows,
    invariants_from_angles,
    multiset_distance,
    project_spectrum,
    simplex_vertices,
    spectrum_to_angles,
    su3_angle_from_invariants,
    su4_angles_from_invariants,
)
from sun_expm.ops.spectra import eig_hermitian
from sun_expm.ops.sun_generators import SplitMix64, random_traceless_hermitian


@pytest.fixture
def rng():
    return SplitMix64(2718)


def _traceless(rng, n):
    values = rng.gaussians(n)
    return values - values.mean()


@pytest.mark.parametrize("n", range(2, 13))
def test_simplex_gram_relations(n):
    r = 1.7
    vs = simplex_vertices(n, r)
    gram = vs.gram()
    expected = np.full((n, n), r * r / (1.0 - n))
    np.fill_diagonal(expected, r * r)
    np.testing.assert_allclose(gram, expected, atol=1e-12 * r * r)
    np.testing.assert_allclose(vs.vertices.sum(axis=0), 0.0, atol=1e-12)


def test_simplex_vertices_examples():
    vs = simplex_vertices(2, 1.0)
    np.testing.assert_allclose(vs.vertices, [[1 / math.sqrt(2), -1 / math.sqrt(2)], [-1 / math.sqrt(2), 1 / math.sqrt(2)]])
    assert vs.gram()[0, 1] == pytest.approx(-1.0)
    assert simplex_vertices(3, 1.0).gram()[0, 2] == pytest.approx(-0.5)


@pytest.mark.parametrize("n, r", [(1, 1.0), (3, 0.0), (3, -1.0)])
def test_simplex_vertices_rejects(n, r):
    with pytest.raises(InvalidInputError):
        simplex_vertices(n, r)


def test_project_spectrum_examples():
    lam = np.array([1.0, -0.5, -0.5])
    norm = float(np.linalg.norm(lam))
    r = 2.0
    projected = project_spectrum(simplex_vertices(3, r), lam / norm).components
    np.testing.assert_allclose(projected, lam * r / norm, atol=1e-12)

    pair = project_spectrum(simplex_vertices(2, math.sqrt(2)), np.array([1.0, -1.0]) / math.sqrt(2))
    np.testing.assert_allclose(pair.components, [1.0, -1.0], atol=1e-12)


def test_project_spectrum_face_normal_is_degenerate():
    axis = np.array([-2.0, 1.0, 1.0]) / math.sqrt(6.0)
    projected = project_spectrum(simplex_vertices(3, 1.0), axis).components
    assert projected[1] == pytest.approx(projected[2])


@pytest.mark.parametrize("axis", [[1.0, 0.0], [1.0, -1.0, 0.0], [0.6, 0.8, 0.0]])
def test_project_spectrum_rejects(axis):
    with pytest.raises(InvalidInputError):
        project_spectrum(simplex_vertices(3, 1.0), axis)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_projection_reproduces_eigensolver(n):
    for seed in range(20):
        h = random_traceless_hermitian(n, seed=seed)
        spec = eig_hermitian(h).values.real
        r = float(np.linalg.norm(spec))
        projected = project_spectrum(simplex_vertices(n, r), spec / r).components
        assert multiset_distance(projected, spec) <= 1e-9 * max(1.0, r)


def test_angles_to_spectrum_examples():
    r3 = math.sqrt(1.5)
    np.testing.assert_allclose(angles_to_spectrum(AngleParams(3, r3, (0.0,))).components, [-0.5, -0.5, 1.0], atol=1e-15)

    r = 2.0
    su4 = angles_to_spectrum(AngleParams(4, r, (math.pi / 2, math.pi / 4))).components
    np.testing.assert_allclose(su4, [-r / 2, r / 2, -r / 2, r / 2], atol=1e-15)

    su5 = angles_to_spectrum(AngleParams(5, r, (0.0, 0.4, 1.1))).components
    expected = [-2 * r / math.sqrt(5)] + [r / (2 * math.sqrt(5))] * 4
    np.testing.assert_allclose(su5, expected, atol=1e-15)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_angles_to_spectrum_has_radius_r(n, rng):
    angles = tuple(math.pi * rng.next_float() for _ in range(n - 2))
    ev = angles_to_spectrum(AngleParams(n, 1.3, angles))
    assert ev.r == pytest.approx(1.3)
    assert abs(ev.components.sum()) < 1e-14


def test_angle_params_rejects():
    with pytest.raises(UnsupportedOrderError):
        AngleParams(6, 1.0, (0.0, 0.0, 0.0, 0.0))
    with pytest.raises(InvalidInputError):
        AngleParams(4, 1.0, (0.0,))
    with pytest.raises(InvalidInputError):
        AngleParams(3, -1.0, (0.0,))


def test_invariants_from_angles_examples():
    r = 1.4
    flat = invariants_from_angles(AngleParams(4, r, (math.pi / 2, 0.0)))
    assert flat.tr_h3 == pytest.approx(0.0, abs=1e-15)
    assert flat.det == pytest.approx(0.0, abs=1e-15)

    su5 = invariants_from_angles(AngleParams(5, r, (0.0, 0.2, 0.3)))
    assert su5.tr_h3 == pytest.approx(-3 * r**3 / (2 * math.sqrt(5)))
    assert su5.tr_h4 is None
    assert su5.det is None

    su3 = invariants_from_angles(AngleParams(3, r, (math.pi / 6,)))
    assert su3.det == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_invariants_from_angles_match_power_sums(n, rng):
    for _ in range(20):
        angles = tuple(2 * math.pi * rng.next_float() for _ in range(n - 2))
        params = AngleParams(n, 0.5 + rng.next_float(), angles)
        lam = angles_to_spectrum(params).components
        closed = invariants_from_angles(params)
        r = params.r
        assert closed.tr_h2 == pytest.approx(np.sum(lam**2), abs=1e-11 * r**2)
        assert closed.tr_h3 == pytest.approx(np.sum(lam**3), abs=1e-11 * r**3)
        if closed.tr_h4 is not None:
            assert closed.tr_h4 == pytest.approx(np.sum(lam**4), abs=1e-11 * r**4)
            assert closed.det == pytest.approx(np.prod(lam), abs=1e-11 * r**n)


def test_su3_angle_examples():
    r2 = 1.5
    r = math.sqrt(r2)
    assert su3_angle_from_invariants(r2, 0.25) == pytest.approx(0.0, abs=1e-7)
    assert su3_angle_from_invariants(r2, 0.0) == pytest.approx(math.pi / 6)
    assert su3_angle_from_invariants(r2, -(r**3) / (3 * math.sqrt(6))) == pytest.approx(math.pi / 3, abs=1e-7)


def test_su3_angle_rejects():
    with pytest.raises(InvalidInputError):
        su3_angle_from_invariants(0.0, 0.0)
    with pytest.raises(InconsistentInvariantsError):
        su3_angle_from_invariants(1.0, 1.0)


def test_su3_product_identity(rng):
    for _ in range(20):
        r = 0.5 + rng.next_float()
        theta = math.pi / 3 * rng.next_float()
        lam = angles_to_spectrum(AngleParams(3, r, (theta,))).components
        assert np.prod(lam) == pytest.approx(r**3 * math.cos(3 * theta) / (3 * math.sqrt(6)), abs=1e-12)
        params = AngleParams.from_su3_invariants(r * r, float(np.prod(lam)))
        assert params.angles[0] == pytest.approx(theta, abs=1e-6)


def test_su4_inverse_degenerate_tetrahedron():
    r = 1.0
    lam = np.array([-r / 2, -r / 2, r / 2, r / 2])
    params = su4_angles_from_invariants(np.sum(lam**2), np.sum(lam**3), np.sum(lam**4))
    recovered = angles_to_spectrum(params).components
    assert multiset_distance(recovered, lam) < 1e-10


def test_su4_inverse_roundtrip():
    r = 1.2
    forward = invariants_from_angles(AngleParams(4, r, (math.pi / 3, 0.0)))
    assert forward.tr_h3 == pytest.approx(0.75 * r**3 * math.sin(math.pi / 3) * math.sin(2 * math.pi / 3))
    params = su4_angles_from_invariants(forward.tr_h2, forward.tr_h3, forward.tr_h4)
    expected = angles_to_spectrum(AngleParams(4, r, (math.pi / 3, 0.0))).components
    assert multiset_distance(angles_to_spectrum(params).components, expected) < 1e-10 * r


@pytest.mark.parametrize("a", [-0.7, -0.3, 0.2, 0.5, 0.9])
@pytest.mark.parametrize("b", [-1.1, -0.4, 0.0, 0.35, 0.8, 1.3])
def test_su4_inverse_repeated_pair(a, b):
    lam = np.array([a, a, b, -2 * a - b])
    tr2, tr3, tr4 = (float(np.sum(lam**p)) for p in (2, 3, 4))
    params = su4_angles_from_invariants(tr2, tr3, tr4)
    recovered = angles_to_spectrum(params).components
    assert multiset_distance(recovered, lam) < 1e-10 * params.r
    assert 0.0 <= params.angles[0] <= math.pi / 2 + 1e-12
    assert 0.0 <= params.angles[1] <= math.pi / 2 + 1e-12


@pytest.mark.parametrize("a", [-0.6, 0.25, 1.0])
def test_su4_inverse_triple_root(a):
    lam = np.array([a, a, a, -3 * a])
    tr2, tr3, tr4 = (float(np.sum(lam**p)) for p in (2, 3, 4))
    params = su4_angles_from_invariants(tr2, tr3, tr4)
    assert multiset_distance(angles_to_spectrum(params).components, lam) < 1e-10 * params.r


def test_su4_inverse_forward_residual(rng):
    for _ in range(30):
        lam = _traceless(rng, 4)
        tr2, tr3, tr4 = (float(np.sum(lam**p)) for p in (2, 3, 4))
        params = su4_angles_from_invariants(tr2, tr3, tr4)
        closed = invariants_from_angles(params)
        assert abs(closed.tr_h3 - tr3) <= 1e-9 * params.r**3
        assert abs(closed.tr_h4 - tr4) <= 1e-9 * params.r**4
        assert 0.0 <= params.angles[0] <= math.pi / 2 + 1e-12
        assert 0.0 <= params.angles[1] <= math.pi / 2 + 1e-12


def test_su4_inverse_inconsistent():
    with pytest.raises(InconsistentInvariantsError):
        su4_angles_from_invariants(1.0, 10.0, 0.0)
    with pytest.raises(InvalidInputError):
        su4_angles_from_invariants(0.0, 0.0, 0.0)


def test_spectrum_to_angles_examples():
    r = 1.3
    su5 = np.array([-2 * r / math.sqrt(5)] + [r / (2 * math.sqrt(5))] * 4)
    params = spectrum_to_angles(EigenvalueVector(su5))
    assert params.gimbal
    assert params.angles == pytest.approx((0.0, 0.0, 0.0), abs=1e-7)

    su3 = math.sqrt(2 / 3) * r * np.cos(0.3 + 2 * math.pi * np.arange(1, 4) / 3)
    assert spectrum_to_angles(EigenvalueVector(su3)).angles[0] == pytest.approx(0.3)

    su4 = angles_to_spectrum(AngleParams(4, r, (1.0, 0.7))).components
    assert spectrum_to_angles(EigenvalueVector(su4)).angles == pytest.approx((1.0, 0.7))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_spectrum_angle_roundtrip(n, rng):
    for _ in range(20):
        lam = _traceless(rng, n)
        params = spectrum_to_angles(EigenvalueVector(lam))
        assert not params.gimbal
        np.testing.assert_allclose(angles_to_spectrum(params).components, lam, atol=1e-10)


def test_spectrum_to_angles_rejects():
    with pytest.raises(UnsupportedOrderError):
        spectrum_to_angles(EigenvalueVector(np.array([1.0, -1.0])))
    with pytest.raises(InvalidInputError):
        EigenvalueVector(np.array([1.0, 1.0]))


def test_spectrum_to_angles_zero():
    params = spectrum_to_angles(EigenvalueVector(np.zeros(4)))
    assert params.r == 0.0
    assert params.gimbal


def test_multiset_distance():
    assert multiset_distance([3, 1, 2], [1, 2, 3]) == 0.0
    assert multiset_distance([1, 2], [1, 2.5]) == pytest.approx(0.5)
    with pytest.raises(InvalidInputError):
        multiset_distance([1], [1, 2])


def test_geometry_rows():
    vs = simplex_vertices(3, 2.0)
    axis = np.array([2.0, -1.0, -1.0]) / math.sqrt(6.0)
    rows = list(geometry_rows(vs, axis))
    header = geometry_header(3)
    assert header == ["kind", "index", "x1", "x2", "x3", "projection"]
    assert len(rows) == 4
    assert all(len(row) == len(header) for row in rows)
    assert [row[0] for row in rows] == ["vertex", "vertex", "vertex", "axis"]
    assert rows[-1][-1] is None
    np.testing.assert_allclose([row[-1] for row in rows[:3]], 2.0 * axis, atol=1e-12)
