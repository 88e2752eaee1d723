"""Pure-Python Wolfe min-norm-point solver (fallback for the compiled kernel).

Given points p_1..p_m in R^n, finds the unique point of conv{p_i} closest to
the origin, together with convex coefficients, by Wolfe's major/minor cycle
method.  The compiled kernel in ``_wolfe.pyx`` implements the identical
algorithm; the two are cross-checked in the test suite.
"""

from __future__ import annotations

import numpy as np

WEIGHT_EPS = 1e-12


def _affine_minimizer(S: np.ndarray) -> np.ndarray:
    """Affine weights alpha (sum 1) minimizing ||alpha @ S||^2.

    Uses Wolfe's trick: solve (e e^T + S S^T) y = e and normalize.
    """
    m = S.shape[0]
    B = S @ S.T + 1.0
    e = np.ones(m)
    try:
        y = np.linalg.solve(B, e)
    except np.linalg.LinAlgError:
        y, *_ = np.linalg.lstsq(B, e, rcond=None)
    s = y.sum()
    if abs(s) < 1e-300:
        return np.full(m, 1.0 / m)
    return y / s


def wolfe_min_norm(points: np.ndarray, tol: float = 1e-12, max_iter: int = 100000):
    """Return (x, weights, iterations) for the min-norm point of conv(points).

    Raises RuntimeError when the iteration cap is exceeded.
    """
    P = np.ascontiguousarray(points, dtype=np.float64)
    m, _ = P.shape
    norms2 = np.einsum("ij,ij->i", P, P)
    i0 = int(np.argmin(norms2))
    support = [i0]
    w = np.array([1.0])
    x = P[i0].copy()
    iters = 0
    while iters < max_iter:
        iters += 1
        dots = P @ x
        j = int(np.argmin(dots))
        xx = float(x @ x)
        if dots[j] >= xx - tol * (1.0 + xx):
            break
        if j in support:
            break  # numerical stall: no progress possible
        support.append(j)
        w = np.append(w, 0.0)
        while True:
            iters += 1
            if iters >= max_iter:
                break
            S = P[support]
            alpha = _affine_minimizer(S)
            if np.all(alpha > WEIGHT_EPS):
                w = alpha
                x = alpha @ S
                break
            # step from w toward alpha until the first weight hits zero
            mask = alpha <= WEIGHT_EPS
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(
                    (w - alpha) > WEIGHT_EPS, w / (w - alpha), np.inf
                )
            theta = min(1.0, float(np.min(ratios[mask])) if mask.any() else 1.0)
            w = (1.0 - theta) * w + theta * alpha
            w[w < WEIGHT_EPS] = 0.0
            keep = w > 0.0
            if keep.sum() == 0:
                # degenerate collapse: keep the best single point
                k = int(np.argmin(np.einsum("ij,ij->i", S, S)))
                support = [support[k]]
                w = np.array([1.0])
                x = P[support[0]].copy()
                break
            support = [s for s, k in zip(support, keep) if k]
            w = w[keep]
            w = w / w.sum()
            x = w @ P[support]
    else:
        raise RuntimeError("wolfe_min_norm: iteration cap exceeded")
    if iters >= max_iter:
        raise RuntimeError("wolfe_min_norm: iteration cap exceeded")
    weights = np.zeros(m)
    weights[support] = w
    weights = np.clip(weights, 0.0, None)
    weights /= weights.sum()
    x = weights @ P
    return x, weights, iters
