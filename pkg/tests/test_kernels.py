import numpy as np
import pytest

from flatstab.kernels import BACKEND, wolfe_min_norm, wolfe_py


def _check_result(points, x, w):
    points = np.asarray(points)
    assert np.all(w >= -1e-12)
    assert abs(w.sum() - 1.0) < 1e-10
    assert np.max(np.abs(points.T @ w - x), initial=0.0) < 1e-9
    # optimality: every vertex on the far side of the supporting hyperplane
    for v in points:
        assert np.dot(x, v - x) >= -1e-8


def test_midpoint_symmetric():
    x, w, _ = wolfe_min_norm(np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert np.allclose(x, [0.5, 0.5], atol=1e-10)
    _check_result(np.array([[1.0, 0.0], [0.0, 1.0]]), x, w)


def test_origin_inside():
    pts = np.array([[1.0, 1.0], [-1.0, 1.0], [0.0, -2.0]])
    x, w, _ = wolfe_min_norm(pts)
    assert np.linalg.norm(x) < 1e-10
    _check_result(pts, x, w)


def test_single_point():
    pts = np.array([[3.0, -4.0]])
    x, w, _ = wolfe_min_norm(pts)
    assert np.allclose(x, pts[0])
    assert np.allclose(w, [1.0])


def test_random_instances_valid():
    rng = np.random.default_rng(0)
    for _ in range(100):
        pts = rng.standard_normal((rng.integers(1, 7), rng.integers(1, 5)))
        x, w, _ = wolfe_min_norm(pts)
        _check_result(pts, x, w)


def test_order_independence():
    rng = np.random.default_rng(1)
    for seed in range(20):
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((5, 3))
        x1, _, _ = wolfe_min_norm(pts)
        perm = rng.permutation(5)
        x2, _, _ = wolfe_min_norm(pts[perm])
        assert np.linalg.norm(x1 - x2) < 1e-8


@pytest.mark.skipif(BACKEND == "python", reason="compiled kernel unavailable")
def test_backends_agree():
    rng = np.random.default_rng(2)
    for _ in range(200):
        pts = rng.standard_normal((rng.integers(1, 8), rng.integers(1, 6)))
        xc, wc, _ = wolfe_min_norm(pts)
        xp, wp, _ = wolfe_py.wolfe_min_norm(pts)
        assert np.linalg.norm(xc - xp) < 1e-9
        assert abs(np.linalg.norm(xc) - np.linalg.norm(xp)) < 1e-10
