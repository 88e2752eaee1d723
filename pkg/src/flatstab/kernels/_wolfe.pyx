# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Wolfe min-norm-point kernel.

Mirrors ``wolfe_py.wolfe_min_norm`` exactly; see that module for the
algorithm description.  This version avoids per-iteration numpy overhead,
which dominates at the small problem sizes the transversal engine produces.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double WEIGHT_EPS = 1e-12


cdef int _solve_affine(double[:, ::1] B, double[::1] y, int m) nogil:
    """Solve (B) y = e in place via Gaussian elimination with partial pivoting.

    B is overwritten.  Returns 0 on success, 1 on (near-)singularity.
    """
    cdef int i, j, k, piv
    cdef double best, tmp, factor
    for i in range(m):
        y[i] = 1.0
    for k in range(m):
        piv = k
        best = B[k, k] if B[k, k] >= 0 else -B[k, k]
        for i in range(k + 1, m):
            tmp = B[i, k] if B[i, k] >= 0 else -B[i, k]
            if tmp > best:
                best = tmp
                piv = i
        if best < 1e-300:
            return 1
        if piv != k:
            for j in range(m):
                tmp = B[k, j]; B[k, j] = B[piv, j]; B[piv, j] = tmp
            tmp = y[k]; y[k] = y[piv]; y[piv] = tmp
        for i in range(k + 1, m):
            factor = B[i, k] / B[k, k]
            if factor != 0.0:
                for j in range(k, m):
                    B[i, j] -= factor * B[k, j]
                y[i] -= factor * y[k]
    for k in range(m - 1, -1, -1):
        tmp = y[k]
        for j in range(k + 1, m):
            tmp -= B[k, j] * y[j]
        y[k] = tmp / B[k, k]
    return 0


def wolfe_min_norm(points, double tol=1e-12, int max_iter=100000):
    """Return (x, weights, iterations); see the pure-Python twin."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef int m = P.shape[0]
    cdef int n = P.shape[1]
    cdef double[:, ::1] Pv = P

    cdef cnp.ndarray[cnp.float64_t, ndim=1] xarr = np.zeros(n)
    cdef double[::1] x = xarr
    # support bookkeeping: indices, weights, candidate weights
    cdef cnp.ndarray[cnp.intp_t, ndim=1] supp_arr = np.zeros(m + 1, dtype=np.intp)
    cdef cnp.intp_t[::1] supp = supp_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] warr = np.zeros(m + 1)
    cdef double[::1] w = warr
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Barr = np.zeros((m + 1, m + 1))
    cdef double[:, ::1] B = Barr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] alpha_arr = np.zeros(m + 1)
    cdef double[::1] alpha = alpha_arr

    cdef int ns, i, j, k, jmin, iters, singular, kbest
    cdef double best, dot, xx, s, theta, ratio, tmp

    # init: vertex of smallest norm
    jmin = 0
    best = 0.0
    for j in range(n):
        best += Pv[0, j] * Pv[0, j]
    for i in range(1, m):
        dot = 0.0
        for j in range(n):
            dot += Pv[i, j] * Pv[i, j]
        if dot < best:
            best = dot
            jmin = i
    supp[0] = jmin
    w[0] = 1.0
    ns = 1
    for j in range(n):
        x[j] = Pv[jmin, j]

    iters = 0
    while iters < max_iter:
        iters += 1
        # major cycle: most negative <x, p_i>
        jmin = 0
        best = 0.0
        for j in range(n):
            best += Pv[0, j] * x[j]
        for i in range(1, m):
            dot = 0.0
            for j in range(n):
                dot += Pv[i, j] * x[j]
            if dot < best:
                best = dot
                jmin = i
        xx = 0.0
        for j in range(n):
            xx += x[j] * x[j]
        if best >= xx - tol * (1.0 + xx):
            break
        singular = 0
        for i in range(ns):
            if supp[i] == jmin:
                singular = 1
        if singular:
            break  # numerical stall
        supp[ns] = jmin
        w[ns] = 0.0
        ns += 1
        while True:
            iters += 1
            if iters >= max_iter:
                break
            # affine minimizer over the support: (S S^T + 1) alpha ~ e, normalized
            for i in range(ns):
                for k in range(i, ns):
                    dot = 1.0
                    for j in range(n):
                        dot += Pv[supp[i], j] * Pv[supp[k], j]
                    B[i, k] = dot
                    B[k, i] = dot
            singular = _solve_affine(B, alpha, ns)
            if singular:
                for i in range(ns):
                    alpha[i] = 1.0 / ns
            else:
                s = 0.0
                for i in range(ns):
                    s += alpha[i]
                if s > 1e-300 or s < -1e-300:
                    for i in range(ns):
                        alpha[i] /= s
                else:
                    for i in range(ns):
                        alpha[i] = 1.0 / ns
            best = alpha[0]
            for i in range(1, ns):
                if alpha[i] < best:
                    best = alpha[i]
            if best > WEIGHT_EPS:
                for i in range(ns):
                    w[i] = alpha[i]
                for j in range(n):
                    x[j] = 0.0
                for i in range(ns):
                    for j in range(n):
                        x[j] += w[i] * Pv[supp[i], j]
                break
            # line search toward alpha until the first weight vanishes
            theta = 1.0
            for i in range(ns):
                if alpha[i] <= WEIGHT_EPS and (w[i] - alpha[i]) > WEIGHT_EPS:
                    ratio = w[i] / (w[i] - alpha[i])
                    if ratio < theta:
                        theta = ratio
            s = 0.0
            for i in range(ns):
                w[i] = (1.0 - theta) * w[i] + theta * alpha[i]
                if w[i] < WEIGHT_EPS:
                    w[i] = 0.0
                s += w[i]
            if s <= 0.0:
                # degenerate collapse: keep the smallest-norm support point
                kbest = 0
                best = 0.0
                for j in range(n):
                    best += Pv[supp[0], j] * Pv[supp[0], j]
                for i in range(1, ns):
                    dot = 0.0
                    for j in range(n):
                        dot += Pv[supp[i], j] * Pv[supp[i], j]
                    if dot < best:
                        best = dot
                        kbest = i
                supp[0] = supp[kbest]
                w[0] = 1.0
                ns = 1
                for j in range(n):
                    x[j] = Pv[supp[0], j]
                break
            # compact the support
            k = 0
            for i in range(ns):
                if w[i] > 0.0:
                    supp[k] = supp[i]
                    w[k] = w[i] / s
                    k += 1
            ns = k
            for j in range(n):
                x[j] = 0.0
            for i in range(ns):
                for j in range(n):
                    x[j] += w[i] * Pv[supp[i], j]
    else:
        raise RuntimeError("wolfe_min_norm: iteration cap exceeded")
    if iters >= max_iter:
        raise RuntimeError("wolfe_min_norm: iteration cap exceeded")

    weights = np.zeros(m)
    s = 0.0
    for i in range(ns):
        if w[i] > 0.0:
            weights[supp[i]] = w[i]
            s += w[i]
    weights /= s
    xout = weights @ P
    return xout, weights, iters
