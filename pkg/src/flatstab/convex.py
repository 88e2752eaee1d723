"""Certified convex feasibility kernels.

Min-norm points (Wolfe), polytope intersection, flat stabbing, Caratheodory
reduction, and the scaled-dependency conic feasibility test that underlies
the dependency-consistency checkers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptySupport, InvalidInput, IterationLimit
from .fields import as_field_array, as_real_coords
from .geometry import AffineFlat, Polytope, flat_residual_transform
from .linprog import FeasibilityOutcome, LpProblem, lp_feasible, phase_one_merit

MINNORM_TOL = 1e-12
DEFAULT_STAB_TOL = 1e-6


@dataclass(frozen=True)
class MinNormResult:
    point: np.ndarray
    coefficients: np.ndarray
    iterations: int

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.point))


def min_norm_point(vertices, tol: float = MINNORM_TOL, max_iter: int = 100000) -> MinNormResult:
    """Nearest point of conv(vertices) to the origin, with convex coefficients."""
    V = np.atleast_2d(np.asarray(vertices, dtype=np.float64))
    if V.shape[0] == 0:
        raise InvalidInput("empty vertex list")
    try:
        x, w, iters = kernels.wolfe_min_norm(V, tol, max_iter)
    except RuntimeError as exc:
        raise IterationLimit(str(exc)) from exc
    return MinNormResult(point=x, coefficients=w, iterations=iters)


def polytopes_intersect(ps: list[Polytope]) -> FeasibilityOutcome:
    """LP oracle for a common point: the exact k=0 transversal test.

    A feasible outcome carries the common point (interleaved storage); an
    infeasible one carries the Farkas functional of the underlying LP.
    """
    if not ps:
        raise InvalidInput("empty family")
    field = ps[0].field
    d = ps[0].ambient_dim
    if any(p.field != field or p.ambient_dim != d for p in ps):
        raise InvalidInput("mixed fields or dimensions")
    D = d * field.real_dim
    m = len(ps)
    counts = [p.n_vertices for p in ps]
    ncols = sum(counts)
    offs = np.concatenate([[0], np.cumsum(counts)])
    rows = m + (m - 1) * D
    A = np.zeros((rows, ncols))
    b = np.zeros(rows)
    for i in range(m):
        A[i, offs[i] : offs[i + 1]] = 1.0
        b[i] = 1.0
    for i in range(1, m):
        r0 = m + (i - 1) * D
        A[r0 : r0 + D, offs[0] : offs[1]] = ps[0].vertices.T
        A[r0 : r0 + D, offs[i] : offs[i + 1]] = -ps[i].vertices.T
    out = lp_feasible(LpProblem(A, b, np.ones(ncols, dtype=bool)))
    if out.feasible:
        lam0 = out.point[offs[0] : offs[1]]
        common = lam0 @ ps[0].vertices
        return FeasibilityOutcome(True, point=common)
    return out


def nearest_point_on_flat(fl: AffineFlat, p: Polytope) -> tuple[np.ndarray, np.ndarray, float]:
    """(q, coefficients, distance): the point of p nearest to the flat."""
    residuals = flat_residual_transform(fl, p.vertices)
    res = min_norm_point(residuals)
    q = res.coefficients @ p.vertices
    return q, res.coefficients, res.norm


def flat_stabs(fl: AffineFlat, p: Polytope, tol: float = DEFAULT_STAB_TOL) -> bool:
    """True iff some point of p lies within distance tol of the flat."""
    if fl.ambient_dim != p.ambient_dim or fl.field != p.field:
        raise InvalidInput("flat and polytope live in different spaces")
    _, _, dist = nearest_point_on_flat(fl, p)
    return dist <= tol


def caratheodory_reduce(points, weights, tol: float = 1e-9):
    """Shrink a zero-sum convex combination to support size <= N+1 in R^N.

    Returns (indices, weights) with the weighted sum still zero.
    """
    P = np.atleast_2d(np.asarray(points, dtype=np.float64))
    w = np.asarray(weights, dtype=np.float64).copy()
    m, N = P.shape
    if w.shape != (m,):
        raise InvalidInput("weights must match points")
    if np.any(w < -tol) or abs(w.sum() - 1.0) > tol:
        raise InvalidInput("weights are not convex")
    if np.linalg.norm(w @ P) > tol:
        raise InvalidInput("weighted sum is not zero")
    idx = np.nonzero(w > 0)[0]
    w = w[idx]
    w /= w.sum()
    while idx.size > N + 1:
        # nontrivial c with c @ P[idx] = 0 and sum(c) = 0 exists: eliminate along it
        M = np.vstack([P[idx].T, np.ones(idx.size)])
        _, _, Vh = np.linalg.svd(M)
        c = Vh[-1]
        if np.max(c) <= 0:
            c = -c
        pos = c > 1e-14
        t = np.min(w[pos] / c[pos])
        w = w - t * c
        w[w < 1e-14] = 0.0
        keep = w > 0
        if keep.all():  # numerical failure to zero out: drop the smallest
            keep[np.argmin(w)] = False
        idx = idx[keep]
        w = w[keep]
        w = w / w.sum()
    return idx, w


def scaled_dependency_feasible(components: np.ndarray, family: list[Polytope]):
    """Feasibility of the scaled-dependency system for one coefficient tuple.

    ``components`` is a (t, n) array over F (complex128 for the complex
    field): t dependency coefficient vectors indexed by the family.  Encodes,
    with variables lam_{F,j} >= 0 and r_F = sum_j lam_{F,j},
    w_F = sum_j lam_{F,j} vertex_{F,j}:

        sum_F a^(i)_F r_F = 0,   sum_F a^(i)_F w_F = 0   for each i,

    plus the nontriviality normalization sum_{F in S} r_F = 1 over the
    support S of the tuple.  Returns (outcome, r, q) where q rows are
    realized points (interleaved storage); r and q are None when infeasible.
    """
    n = len(family)
    comp = np.atleast_2d(np.asarray(components))
    if comp.shape[1] != n:
        raise InvalidInput("tuple components must be indexed by the family")
    field = family[0].field
    d = family[0].ambient_dim
    rd = field.real_dim
    support = np.nonzero(np.max(np.abs(comp), axis=0) > 0)[0]
    if support.size == 0:
        raise EmptySupport("all tuple coefficients vanish")
    counts = [p.n_vertices for p in family]
    offs = np.concatenate([[0], np.cumsum(counts)])
    out = lp_feasible(_scaled_dependency_problem(comp, family, support))
    if not out.feasible:
        return out, None, None
    lam = out.point
    r = np.array([lam[offs[i] : offs[i + 1]].sum() for i in range(n)])
    q = np.zeros((n, d * rd))
    for i, p in enumerate(family):
        li = lam[offs[i] : offs[i + 1]]
        if r[i] > 1e-12:
            q[i] = (li @ p.vertices) / r[i]
        else:
            # unconstrained when r_F = 0: first vertex by convention
            q[i] = p.vertices[0]
    return out, r, q


def scaled_dependency_merit(components: np.ndarray, family: list[Polytope]) -> float:
    """Phase-one infeasibility merit of the scaled-dependency system (float only)."""
    n = len(family)
    comp = np.atleast_2d(np.asarray(components))
    support = np.nonzero(np.max(np.abs(comp), axis=0) > 0)[0]
    if support.size == 0:
        return 0.0
    out_prob = _scaled_dependency_problem(comp, family, support)
    return phase_one_merit(out_prob)


def _scaled_dependency_problem(comp, family, support) -> LpProblem:
    field = family[0].field
    d = family[0].ambient_dim
    rd = field.real_dim
    t = comp.shape[0]
    counts = [p.n_vertices for p in family]
    offs = np.concatenate([[0], np.cumsum(counts)])
    ncols = int(offs[-1])
    rows_per_block = (1 + d) * rd
    rows = t * rows_per_block + 1
    A = np.zeros((rows, ncols))
    b = np.zeros(rows)
    for fi, p in enumerate(family):
        Vf = as_field_array(field, p.vertices)
        cols = slice(offs[fi], offs[fi + 1])
        for i in range(t):
            a = comp[i, fi]
            if a == 0:
                continue
            r0 = i * rows_per_block
            A[r0 : r0 + rd, cols] += as_real_coords(field, np.full((p.n_vertices, 1), a)).T
            contrib = as_real_coords(field, a * Vf)
            A[r0 + rd : r0 + rows_per_block, cols] += contrib.T
    for fi in support:
        A[-1, offs[fi] : offs[fi + 1]] = 1.0
    b[-1] = 1.0
    return LpProblem(A, b, np.ones(ncols, dtype=bool))
