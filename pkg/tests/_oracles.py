"""Independent brute-force oracles used to freeze expected values in tests.

Nothing here shares code with the library's solvers: LP feasibility is
decided by basic-solution enumeration, min-norm points by grid search or an
off-the-shelf convex solver, and transversal labels by exact rank/sweep
arithmetic re-derivations.
"""

from __future__ import annotations

import itertools

import numpy as np

FEAS_TOL = 1e-8


def lp_feasible_bruteforce(A: np.ndarray, b: np.ndarray, tol: float = 1e-7) -> bool:
    """A x = b, x >= 0 via enumeration of basic solutions.

    Sound for pointed feasible regions (x >= 0 makes every nonempty region
    have a basic feasible point).
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    b = np.asarray(b, dtype=np.float64).ravel()
    m, n = A.shape
    r = np.linalg.matrix_rank(A, tol=1e-10)
    if r < m and np.linalg.lstsq(A, b, rcond=None)[1].size and np.linalg.lstsq(A, b, rcond=None)[1].sum() > tol**2:
        pass  # inconsistent rows handled by the residual check below
    if n == 0:
        return bool(np.max(np.abs(b), initial=0.0) <= tol)
    for cols in itertools.combinations(range(n), min(r, n)):
        sub = A[:, cols]
        x_sub, *_ = np.linalg.lstsq(sub, b, rcond=None)
        if np.max(np.abs(sub @ x_sub - b), initial=0.0) > tol:
            continue
        if np.all(x_sub >= -tol):
            return True
    return False


def min_norm_grid(vertices: np.ndarray, step: float = 1e-3) -> np.ndarray:
    """Dense simplex-grid min-norm point; tractable for <= 3 vertices."""
    V = np.asarray(vertices, dtype=np.float64)
    n = V.shape[0]
    assert n <= 3, "grid oracle is exponential in the vertex count"
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    best, best_norm = None, np.inf
    if n == 1:
        return V[0]
    if n == 2:
        pts = ticks[:, None] * V[0] + (1 - ticks)[:, None] * V[1]
        i = int(np.argmin(np.einsum("ij,ij->i", pts, pts)))
        return pts[i]
    for a in ticks:
        rem = 1.0 - a
        bt = ticks[ticks <= rem + step / 2]
        pts = a * V[0] + bt[:, None] * V[1] + (rem - bt)[:, None] * V[2]
        norms = np.einsum("ij,ij->i", pts, pts)
        i = int(np.argmin(norms))
        if norms[i] < best_norm:
            best_norm, best = norms[i], pts[i]
    return best


def min_norm_qp(vertices: np.ndarray) -> np.ndarray:
    """Min-norm point by an independent convex solver (cvxpy)."""
    import cvxpy as cp

    V = np.asarray(vertices, dtype=np.float64)
    lam = cp.Variable(V.shape[0], nonneg=True)
    prob = cp.Problem(cp.Minimize(cp.sum_squares(V.T @ lam)), [cp.sum(lam) == 1])
    prob.solve()
    return V.T @ lam.value


def zero_test_map_frame(points: np.ndarray, assignment, field):
    """An exact test-map-zero frame for a singleton family.

    For singletons p_{V,F} is the frame projection of the lifted point, so
    the test map is v -> M v blockwise; any orthonormal frame inside ker(M)
    is a zero.  Returns a Frame of size d - k, or None when the kernel is too
    small (cannot happen for n <= (k+1) + ... desk sizes used in tests).
    """
    from flatstab.fields import as_field_array, as_real_coords
    from flatstab.geometry import orthonormalize

    pts = np.asarray(points, dtype=np.float64)
    n, _ = pts.shape
    d = pts.shape[1] // field.real_dim
    k = assignment.k
    lifted = np.hstack([pts, np.tile(as_real_coords(field, np.ones(1)), (n, 1))])
    xf = as_field_array(field, lifted)  # (n, d+1) over F
    phif = (
        as_field_array(field, assignment.points[list(assignment.phi)])
        if k
        else np.zeros((n, 0))
    )
    # M v = (sum <v, x_F>, sum <v, x_F> phi_F); <v, x> = sum v_a conj(x_a)
    rows = [np.conj(xf).sum(axis=0)]
    for j in range(k):
        rows.append((np.conj(xf) * phif[:, j][:, None]).sum(axis=0))
    M = np.stack(rows)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > 1e-9 * max(1.0, s[0] if s.size else 0.0)))
    kernel = np.conj(vh[rank:])
    if kernel.shape[0] < d - k:
        return None
    kr = np.stack([as_real_coords(field, row) for row in kernel[: d - k]])
    return orthonormalize(kr, field)
