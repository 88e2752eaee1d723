"""Constructive k-transversal search.

The main engine minimizes g(V) = sum_F ||p_{V,F}||^2 over orthonormal
(d-k)-frames of the lifted space F^{d+1}, where p_{V,F} is the min-norm point
of the projected lifted set.  Zeros of g with e_{d+1} outside span(V) are
exactly the frames whose orthogonal complement slices out a k-transversal.
Every Found answer is re-verified by certificates; NotFound is inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact2d
from .consistency import PointAssignment, subfamily_bound
from .convex import caratheodory_reduce, min_norm_point, nearest_point_on_flat
from .errors import (
    AllProjectionsContainOrigin,
    DependentInput,
    InvalidInput,
    InvalidRange,
    SliceDegenerate,
)
from .fields import REAL, ScalarField, as_field_array, as_real_coords
from .geometry import (
    AffineFlat,
    Frame,
    Polytope,
    flat_from_orthogonal_frame,
    lift_to_slice,
    orthonormalize,
)

DEFAULT_G_TOL = 1e-12
DEFAULT_RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class StiefelState:
    frame: Frame
    g: float
    # per-set min-norm points in frame coordinates (interleaved storage)
    nearest: np.ndarray  # (n_sets, (d-k) * real_dim)
    weights: list  # convex coefficients over each set's vertices


@dataclass(frozen=True)
class EngineReport:
    found: bool
    flat: AffineFlat | None
    residual: float | None
    best_g: float
    frame: Frame
    iterations: int
    seed: int
    restart_log: tuple


def _lifted(family: list[Polytope]) -> list[Polytope]:
    return [lift_to_slice(p) for p in family]


def _project_vertices(frame_mat: np.ndarray, lifted: Polytope, field: ScalarField) -> np.ndarray:
    """Realified frame coordinates of every lifted vertex, one per row."""
    vf = as_field_array(field, lifted.vertices)
    coeffs = vf @ np.conj(frame_mat.T)
    return as_real_coords(field, coeffs)


def stiefel_objective(frame: Frame, family: list[Polytope], lifted=None) -> StiefelState:
    """g = sum of squared distances from the origin to the projected sets."""
    field = frame.field
    lifted = lifted if lifted is not None else _lifted(family)
    fm = frame.as_field_matrix()
    nearest = []
    weights = []
    g = 0.0
    for lp in lifted:
        proj = _project_vertices(fm, lp, field)
        res = min_norm_point(proj)
        nearest.append(res.point)
        weights.append(res.coefficients)
        g += float(res.point @ res.point)
    return StiefelState(frame=frame, g=g, nearest=np.stack(nearest), weights=weights)


def stiefel_euclidean_gradient(
    frame: Frame, family: list[Polytope], state: StiefelState | None = None, lifted=None
) -> np.ndarray:
    """Envelope gradient of g in the ambient (realified) coordinates.

    Holding each minimizing convex combination fixed, the per-set term is
    sum_i |<q_F, v_i>|^2 with q_F the combined lifted point, whose gradient
    in v_i is 2 * conj(<q_F, v_i>) * q_F.
    """
    field = frame.field
    lifted = lifted if lifted is not None else _lifted(family)
    if state is None:
        state = stiefel_objective(frame, family, lifted=lifted)
    n = frame.size
    rd = field.real_dim
    grad = np.zeros((n, frame.ambient_dim * rd))
    for lp, w, coeffs in zip(lifted, state.weights, state.nearest):
        qhat = as_field_array(field, w @ lp.vertices)  # combined lifted point
        c = as_field_array(field, coeffs)  # c_i = <q_hat, v_i>
        contrib = 2.0 * np.conj(c)[:, None] * qhat[None, :]
        grad += as_real_coords(field, contrib)
    return grad


def _tangent_project(frame: Frame, grad: np.ndarray) -> np.ndarray:
    """Project an ambient gradient onto the Stiefel tangent space at the frame."""
    field = frame.field
    X = frame.as_field_matrix()  # rows orthonormal
    G = as_field_array(field, grad)
    A = G @ np.conj(X.T)
    sym = (A + np.conj(A.T)) / 2.0
    return as_real_coords(field, G - sym @ X)


def stiefel_gradient(frame: Frame, family: list[Polytope], state=None) -> np.ndarray:
    """Riemannian (tangent-projected) gradient of the engine objective."""
    return _tangent_project(frame, stiefel_euclidean_gradient(frame, family, state=state))


@dataclass(frozen=True)
class EngineOpts:
    restarts: int = 16
    max_iters: int = 200
    tol: float = DEFAULT_G_TOL
    residual_tol: float = DEFAULT_RESIDUAL_TOL
    seed: int = 0


def _random_frame(rng, field: ScalarField, ambient: int, size: int) -> Frame:
    mat = rng.standard_normal((size, ambient * field.real_dim))
    return orthonormalize(mat, field)


def _polish_flat(flat: AffineFlat, family) -> AffineFlat | None:
    """Re-fit the flat to the witness points (best-fit k-flat by SVD)."""
    field = flat.field
    d = flat.ambient_dim
    witnesses = np.array([nearest_point_on_flat(flat, p)[0] for p in family])
    Q = as_field_array(field, witnesses)
    base = Q.mean(axis=0)
    _, _, vh = np.linalg.svd(Q - base, full_matrices=True)
    try:
        dirs = Frame(field, d, as_real_coords(field, vh[: flat.k]))
    except ValueError:
        return None
    return AffineFlat(field, d, as_real_coords(field, base), dirs)


def _try_recover(frame: Frame, family, residual_tol):
    try:
        flat = flat_from_orthogonal_frame(frame)
    except SliceDegenerate:
        return None
    for candidate in (flat, _polish_flat(flat, family)):
        if candidate is None:
            continue
        ok, certs = verify_transversal(candidate, family, residual_tol)
        if ok:
            residual = max(c[2] for c in certs) if certs else 0.0
            return candidate, residual
    return None


def find_transversal_stiefel(family: list[Polytope], k: int, opts: EngineOpts = EngineOpts()) -> EngineReport:
    """Multi-start retraction descent on the frame manifold.

    Found answers are certificate-verified; NotFound is not a nonexistence
    proof.
    """
    if not family:
        raise InvalidInput("empty family")
    field = family[0].field
    d = family[0].ambient_dim
    if not 0 <= k < d:
        raise InvalidRange(f"need 0 <= k < d, got k={k}, d={d}")
    lifted = _lifted(family)
    n = d - k
    rng = np.random.default_rng(opts.seed)
    best_state = None
    total_iters = 0
    log = []
    for restart in range(opts.restarts):
        frame = _random_frame(rng, field, d + 1, n)
        state = stiefel_objective(frame, family, lifted=lifted)
        step = 1.0
        recovered = None
        for _ in range(opts.max_iters):
            total_iters += 1
            if state.g < opts.tol:
                recovered = _try_recover(state.frame, family, opts.residual_tol)
                if recovered is not None:
                    break
                # residual not yet below tolerance: keep descending toward zero
            grad = _tangent_project(
                frame, stiefel_euclidean_gradient(frame, family, state=state, lifted=lifted)
            )
            gnorm2 = float(np.sum(grad * grad))
            if gnorm2 < 1e-24:
                break
            # Armijo backtracking with retraction by re-orthonormalization
            accepted = False
            while step > 1e-16:
                trial_vecs = frame.vectors - step * grad
                try:
                    trial = orthonormalize(trial_vecs, field)
                except Exception:
                    step *= 0.5
                    continue
                trial_state = stiefel_objective(trial, family, lifted=lifted)
                if trial_state.g <= state.g - 1e-4 * step * gnorm2:
                    frame, state = trial, trial_state
                    step = min(step * 2.0, 1e3)
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
        if best_state is None or state.g < best_state.g:
            best_state = state
        log.append((restart, state.g))
        if state.g < opts.tol:
            rec = recovered or _try_recover(state.frame, family, opts.residual_tol)
            if rec is None:
                # degenerate slice: seeded tangent kick, then one more polish pass
                kick = 1e-6 * rng.standard_normal(state.frame.vectors.shape)
                try:
                    kicked = orthonormalize(state.frame.vectors + kick, field)
                    kstate = stiefel_objective(kicked, family, lifted=lifted)
                    rec = _try_recover(kstate.frame, family, opts.residual_tol)
                except Exception:
                    rec = None
            if rec is not None:
                flat, residual = rec
                return EngineReport(
                    True, flat, residual, state.g, state.frame, total_iters, opts.seed, tuple(log)
                )
    # last chance: recovery from the best state even if g missed the cut
    rec = _try_recover(best_state.frame, family, opts.residual_tol)
    if rec is not None:
        flat, residual = rec
        return EngineReport(
            True, flat, residual, best_state.g, best_state.frame, total_iters, opts.seed, tuple(log)
        )
    return EngineReport(
        False, None, None, best_state.g, best_state.frame, total_iters, opts.seed, tuple(log)
    )


def test_map(frame: Frame, family: list[Polytope], assignment: PointAssignment) -> np.ndarray:
    """The equivariant blocks (sum_F <v_i, p_{V,F}>, sum_F <v_i, p_{V,F}> phi(F)).

    Returns a (d-k, (k+1)*real_dim) real array, one realified F^{k+1} block
    per frame vector.
    """
    field = frame.field
    state = stiefel_objective(frame, family)
    n = frame.size
    k = assignment.k
    rd = field.real_dim
    phis = np.stack([assignment.assigned(i) for i in range(len(family))])
    phif = as_field_array(field, phis) if k else np.zeros((len(family), 0))
    blocks = np.zeros((n, (k + 1) * rd))
    for i in range(n):
        # <v_i, p_{V,F}> is the conjugate of the stored frame coefficient
        ci = np.conj(as_field_array(field, state.nearest)[:, i])
        block = np.concatenate([[np.sum(ci)], ci @ phif]) if k else np.array([np.sum(ci)])
        blocks[i] = as_real_coords(field, block)
    return blocks


def extract_caratheodory_subfamily(
    frame: Frame,
    family: list[Polytope],
    assignment: PointAssignment,
    map_tol: float = 1e-6,
):
    """Small subfamily and positive weights realizing the test-map zero.

    Returns (indices, weights, components) where components are the induced
    dependency-tuple coefficients a^(i)_F = weight_F * <v_i, p_{V,F}>.
    """
    field = frame.field
    d = family[0].ambient_dim
    k = assignment.k
    state = stiefel_objective(frame, family)
    tm = test_map(frame, family, assignment)
    if float(np.linalg.norm(tm)) > map_tol:
        raise InvalidInput("test map is not at a zero")
    norms = np.linalg.norm(state.nearest, axis=1)
    active = np.nonzero(norms > 1e-9)[0]
    if active.size == 0:
        raise AllProjectionsContainOrigin("flat recovery applies instead")
    rd = field.real_dim
    coeff_f = as_field_array(field, state.nearest)  # (n_sets, d-k) over F
    phis = np.stack([assignment.assigned(i) for i in range(len(family))])
    phif = as_field_array(field, phis) if k else np.zeros((len(family), 0))
    pts = []
    for fi in active:
        ci = np.conj(coeff_f[fi])  # <v_i, p_{V,F}>
        block = np.concatenate([ci, (ci[:, None] * phif[fi][None, :]).ravel()])
        pts.append(as_real_coords(field, block))
    pts = np.stack(pts)
    # center so the uniform combination sums to zero exactly
    pts = pts - pts.mean(axis=0)
    w0 = np.full(active.size, 1.0 / active.size)
    idx, w = caratheodory_reduce(pts, w0)
    chosen = active[idx]
    bound = subfamily_bound(k, d, field)
    assert chosen.size <= bound
    components = np.zeros((frame.size, chosen.size), dtype=coeff_f.dtype)
    for col, (fi, wf) in enumerate(zip(chosen, w)):
        components[:, col] = wf * np.conj(coeff_f[fi])
    return chosen, w, components


def verify_transversal(flat: AffineFlat, family: list[Polytope], tol: float = DEFAULT_RESIDUAL_TOL):
    """Conjunction of per-set stab checks; keeps the per-set certificates."""
    certs = []
    ok = True
    for p in family:
        q, lam, dist = nearest_point_on_flat(flat, p)
        stabbed = dist <= tol
        ok = ok and stabbed
        certs.append((stabbed, lam, dist))
    return ok, certs


def hyperplane_transversal_2d_exact(family: list[Polytope]) -> AffineFlat | None:
    """Exact line-transversal oracle for planar polytopes (critical-direction sweep)."""
    if any(p.field != REAL or p.ambient_dim != 2 for p in family):
        raise InvalidInput("exact 2d oracle needs real planar polytopes")
    sets = [[exact2d.fr_point(v) for v in p.vertices] for p in family]
    res = exact2d.line_transversal(sets)
    if res is None:
        return None
    u, c = res
    uu = float(u[0] * u[0] + u[1] * u[1])
    base = np.array([float(c * u[0]) / uu, float(c * u[1]) / uu])
    direction = np.array([[-float(u[1]), float(u[0])]])
    direction /= np.linalg.norm(direction)
    return AffineFlat(REAL, 2, base, Frame(REAL, 2, direction))


def _rational_rank(rows: list[list]) -> int:
    """Exact rank by Gaussian elimination; entries support Fraction arithmetic."""
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    col = 0
    while rank < len(mat) and col < ncols:
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [v / pv for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


class _QI:
    """Gaussian-rational scalar (re + im*i with Fraction parts)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __eq__(self, other):
        if other == 0:
            return self.re == 0 and self.im == 0
        return self.re == other.re and self.im == other.im

    def __ne__(self, other):
        return not self.__eq__(other)

    def __sub__(self, other):
        return _QI(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return _QI(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        den = other.re * other.re + other.im * other.im
        return self * _QI(other.re / den, -other.im / den)


def point_family_transversal_exact(points: np.ndarray, k: int, field: ScalarField = REAL) -> bool:
    """A k-flat through all singleton points exists iff their affine F-rank <= k."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[0] <= 1:
        return True
    if field.is_complex:
        rows = []
        for p in pts[1:]:
            diff = p - pts[0]
            rows.append([_QI(Fraction(float(diff[2 * j])), Fraction(float(diff[2 * j + 1]))) for j in range(diff.size // 2)])
        return _rational_rank(rows) <= k
    rows = [[Fraction(float(v)) for v in (p - pts[0])] for p in pts[1:]]
    return _rational_rank(rows) <= k


def alternating_flat_fit(family: list[Polytope], k: int, opts: EngineOpts = EngineOpts()) -> EngineReport:
    """Baseline engine: alternate nearest points and affine principal refits.

    The summed squared distance is non-increasing by construction; a strict
    increase beyond 1e-12 indicates a bug and raises.
    """
    if not family:
        raise InvalidInput("empty family")
    field = family[0].field
    d = family[0].ambient_dim
    if not 0 <= k < d:
        raise InvalidRange(f"need 0 <= k < d, got k={k}, d={d}")
    rng = np.random.default_rng(opts.seed)
    rd = field.real_dim
    best = None
    total_iters = 0
    log = []
    for restart in range(opts.restarts):
        base = rng.standard_normal(d * rd)
        dirs = (
            _random_frame(rng, field, d, k)
            if k
            else Frame(field, d, np.zeros((0, d * rd)))
        )
        flat = AffineFlat(field, d, base, dirs)
        prev = np.inf
        for _ in range(opts.max_iters):
            total_iters += 1
            qs, dists = [], []
            for p in family:
                q, _, dist = nearest_point_on_flat(flat, p)
                qs.append(q)
                dists.append(dist)
            obj = float(np.sum(np.square(dists)))
            if obj > prev + 1e-12:
                raise AssertionError("alternating fit objective increased")
            improved = prev - obj
            prev = obj
            if obj < opts.tol:
                break
            qarr = np.stack(qs)
            center = qarr.mean(axis=0)
            if k:
                qf = as_field_array(field, qarr - center)
                _, _, Vh = np.linalg.svd(qf, full_matrices=True)
                top = as_real_coords(field, Vh[:k])
                try:
                    dirs = orthonormalize(top, field)
                except DependentInput:
                    # degenerate point cloud: nudge to recover k directions
                    top = top + 1e-8 * rng.standard_normal(top.shape)
                    dirs = orthonormalize(top, field)
                flat = AffineFlat(field, d, center, dirs)
            else:
                flat = AffineFlat(field, d, center, dirs)
            if improved < 1e-15 and obj > opts.tol:
                break
        ok, certs = verify_transversal(flat, family, opts.residual_tol)
        log.append((restart, prev))
        if ok:
            residual = max(c[2] for c in certs) if certs else 0.0
            fake_frame = Frame(field, d, np.zeros((0, d * rd)))
            return EngineReport(True, flat, residual, prev, fake_frame, total_iters, opts.seed, tuple(log))
        if best is None or prev < best[0]:
            best = (prev, flat)
    fake_frame = Frame(field, d, np.zeros((0, d * rd)))
    return EngineReport(False, None, None, best[0], fake_frame, total_iters, opts.seed, tuple(log))
