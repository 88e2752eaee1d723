import numpy as np
import pytest

from flatstab.errors import DependentInput, DimensionMismatch, SliceDegenerate
from flatstab.fields import COMPLEX, REAL, apply_J
from flatstab.geometry import (
    AffineFlat,
    Frame,
    Polytope,
    complex_flat_J_residual,
    delift,
    flat_contains_point,
    flat_coordinates,
    flat_distance,
    flat_from_orthogonal_frame,
    flat_point,
    flat_residual_transform,
    lift_to_slice,
    orthonormalize,
    project_to_frame,
    reconstruct_from_frame,
)


def test_polytope_validation():
    with pytest.raises(DimensionMismatch):
        Polytope(REAL, 3, np.zeros((2, 2)))
    with pytest.raises(ValueError):
        Polytope(REAL, 2, np.array([[np.inf, 0.0]]))


def test_frame_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        Frame(REAL, 2, np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        Frame(REAL, 2, np.array([[2.0, 0.0]]))


def test_empty_frame_allowed():
    fr = Frame(REAL, 3, np.zeros((0, 3)))
    assert fr.size == 0


@pytest.mark.parametrize("field", [REAL, COMPLEX])
def test_orthonormalize_gram(field):
    rng = np.random.default_rng(5)
    for _ in range(10):
        fr = orthonormalize(rng.standard_normal((3, 5 * field.real_dim)), field)
        fa = fr.as_field_matrix()
        assert np.max(np.abs(fa @ np.conj(fa.T) - np.eye(3))) < 1e-10


def test_orthonormalize_dependent_input():
    v = np.array([[1.0, 0.0], [2.0, 0.0]])
    with pytest.raises(DependentInput):
        orthonormalize(v, REAL)


def test_complex_orthonormalize_not_real_gram():
    # (1,0) and (i,0) are R-independent but C-dependent
    v = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
    with pytest.raises(DependentInput):
        orthonormalize(v, COMPLEX)


def test_lift_delift_roundtrip():
    p = Polytope(REAL, 2, np.array([[1.0, 2.0], [3.0, 4.0]]))
    lifted = lift_to_slice(p)
    assert lifted.ambient_dim == 3
    assert np.allclose(lifted.vertices[:, 2], 1.0)
    assert np.array_equal(delift(lifted).vertices, p.vertices)


def test_lift_complex_sets_real_unit():
    p = Polytope(COMPLEX, 1, np.array([[1.0, 2.0]]))
    lifted = lift_to_slice(p)
    # last F-coordinate is 1 + 0i
    assert np.allclose(lifted.vertices[0], [1.0, 2.0, 1.0, 0.0])


def test_projection_pythagoras():
    rng = np.random.default_rng(7)
    fr = orthonormalize(rng.standard_normal((2, 4)), REAL)
    x = rng.standard_normal(4)
    c = project_to_frame(fr, x)
    recon = reconstruct_from_frame(fr, c)
    # reference: orthogonal decomposition: |x|^2 = |proj|^2 + |x - proj|^2
    assert abs(
        np.dot(x, x) - (np.dot(recon, recon) + np.dot(x - recon, x - recon))
    ) < 1e-10


@pytest.mark.parametrize("field", [REAL, COMPLEX])
def test_flat_from_orthogonal_frame_inverse(field):
    rng = np.random.default_rng(11)
    d = 3
    for seed in range(5):
        rng = np.random.default_rng(seed)
        fr = orthonormalize(rng.standard_normal((2, (d + 1) * field.real_dim)), field)
        try:
            fl = flat_from_orthogonal_frame(fr)
        except SliceDegenerate:
            continue
        assert fl.k == d - 2
        # every chart point of the flat lifts orthogonally to the frame
        for _ in range(3):
            x = flat_point(fl, rng.standard_normal(fl.k * field.real_dim))
            lifted = np.concatenate([x, np.zeros(field.real_dim)])
            lifted[d * field.real_dim] = 1.0
            c = project_to_frame(fr, lifted)
            assert np.max(np.abs(c)) < 1e-8


def test_slice_degenerate():
    vec = np.zeros(4)
    vec[3] = 1.0  # e_{d+1}
    with pytest.raises(SliceDegenerate):
        flat_from_orthogonal_frame(Frame(REAL, 4, vec[None, :]))


def test_flat_distance_and_chart():
    base = np.array([1.0, 1.0])
    dirs = Frame(REAL, 2, np.array([[1.0, 0.0]]))
    fl = AffineFlat(REAL, 2, base, dirs)
    assert abs(flat_distance(fl, np.array([5.0, 3.0])) - 2.0) < 1e-12
    assert flat_contains_point(fl, np.array([-4.0, 1.0]), 1e-9)
    x = flat_point(fl, np.array([2.5]))
    assert np.allclose(flat_coordinates(fl, x), [2.5])


def test_flat_residual_transform_matches_distance():
    rng = np.random.default_rng(13)
    dirs = orthonormalize(rng.standard_normal((1, 3)), REAL)
    fl = AffineFlat(REAL, 3, rng.standard_normal(3), dirs)
    pts = rng.standard_normal((6, 3))
    res = flat_residual_transform(fl, pts)
    for x, r in zip(pts, res):
        assert abs(np.linalg.norm(r) - flat_distance(fl, x)) < 1e-10


def test_complex_flat_is_J_closed():
    rng = np.random.default_rng(17)
    dirs = orthonormalize(rng.standard_normal((1, 6)), COMPLEX)
    fl = AffineFlat(COMPLEX, 3, rng.standard_normal(6), dirs)
    assert complex_flat_J_residual(fl) < 1e-10
    # J of a direction stays on the flat through the basepoint
    jd = apply_J(fl.directions.vectors[0])
    assert flat_distance(fl, fl.basepoint + jd) < 1e-10
