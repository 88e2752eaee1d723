"""Polytopes, orthonormal frames, affine flats, and lifting/projection primitives.

All coordinates are interleaved real storage (see :mod:`flatstab.fields`).
Every type is immutable after construction and every operation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DependentInput, DimensionMismatch, SliceDegenerate
from .fields import ScalarField, apply_J, as_field_array, as_real_coords, herm

ORTHO_TOL = 1e-10
RANK_TOL = 1e-9


def _check_storage(field: ScalarField, arr: np.ndarray, d: int) -> None:
    if arr.shape[-1] != d * field.real_dim:
        raise DimensionMismatch(
            f"expected storage length {d * field.real_dim}, got {arr.shape[-1]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coordinates")


@dataclass(frozen=True)
class Polytope:
    """Compact convex set given by its vertex list (V-representation)."""

    field: ScalarField
    ambient_dim: int
    vertices: np.ndarray  # (n_vertices, ambient_dim * real_dim)

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=np.float64))
        if v.shape[0] == 0:
            raise ValueError("polytope needs at least one vertex")
        _check_storage(self.field, v, self.ambient_dim)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]


@dataclass(frozen=True)
class Frame:
    """Ordered F-orthonormal tuple of vectors in F^ambient_dim.

    The empty frame (size 0) is allowed; it spans the zero subspace.
    """

    field: ScalarField
    ambient_dim: int
    vectors: np.ndarray  # (n, ambient_dim * real_dim)

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64)
        if v.ndim != 2:
            v = v.reshape(-1, self.ambient_dim * self.field.real_dim)
        _check_storage(self.field, v, self.ambient_dim)
        fa = as_field_array(self.field, v)
        gram = fa @ np.conj(fa.T)
        if v.shape[0] and np.max(np.abs(gram - np.eye(v.shape[0]))) > 100 * ORTHO_TOL:
            raise ValueError("frame vectors are not orthonormal")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    def as_field_matrix(self) -> np.ndarray:
        """(n, ambient_dim) matrix over F, one frame vector per row."""
        return as_field_array(self.field, self.vectors)


@dataclass(frozen=True)
class AffineFlat:
    """k-dimensional affine subspace: basepoint plus orthonormal directions.

    For the complex field the direction span is closed under the complex
    structure J by construction (directions are stored as complex vectors).
    """

    field: ScalarField
    ambient_dim: int
    basepoint: np.ndarray
    directions: Frame

    def __post_init__(self):
        b = np.asarray(self.basepoint, dtype=np.float64).ravel()
        _check_storage(self.field, b, self.ambient_dim)
        if self.directions.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("direction frame lives in the wrong space")
        if self.directions.field != self.field:
            raise DimensionMismatch("direction frame over the wrong field")
        b.setflags(write=False)
        object.__setattr__(self, "basepoint", b)

    @property
    def k(self) -> int:
        """F-dimension of the flat."""
        return self.directions.size


def lift_to_slice(p: Polytope) -> Polytope:
    """Embed the polytope into the affine slice F^d + e_{d+1} of F^{d+1}."""
    n = p.n_vertices
    rd = p.field.real_dim
    out = np.zeros((n, (p.ambient_dim + 1) * rd))
    out[:, : p.ambient_dim * rd] = p.vertices
    out[:, p.ambient_dim * rd] = 1.0  # real part of the last F-coordinate
    return Polytope(p.field, p.ambient_dim + 1, out)


def delift(p: Polytope) -> Polytope:
    """Drop the last F-coordinate; inverse of :func:`lift_to_slice`."""
    rd = p.field.real_dim
    return Polytope(p.field, p.ambient_dim - 1, p.vertices[:, : (p.ambient_dim - 1) * rd])


def orthonormalize(vs, field: ScalarField) -> Frame:
    """Gram-Schmidt over F.  Raises DependentInput below the rank threshold."""
    arr = np.atleast_2d(np.asarray(vs, dtype=np.float64))
    fa = as_field_array(field, arr)
    m = fa.shape[0]
    if m:
        sv = np.linalg.svd(fa, compute_uv=False)
        if sv.size < m or sv[-1] < RANK_TOL:
            raise DependentInput("input vectors are numerically dependent")
    out = np.array(fa, dtype=np.complex128 if field.is_complex else np.float64)
    for i in range(m):
        for _ in range(2):  # re-orthogonalize once for stability
            for j in range(i):
                out[i] -= herm(field, out[i], out[j]) * out[j]
        nrm = np.linalg.norm(out[i])
        if nrm < RANK_TOL:
            raise DependentInput("input vectors are numerically dependent")
        out[i] /= nrm
    d = fa.shape[1]
    return Frame(field, d, as_real_coords(field, out).reshape(m, d * field.real_dim))


def project_to_frame(fr: Frame, x) -> np.ndarray:
    """Coefficients (<x, v_1>, ..., <x, v_n>) in interleaved real storage."""
    xa = np.asarray(x, dtype=np.float64).ravel()
    _check_storage(fr.field, xa, fr.ambient_dim)
    fa = fr.as_field_matrix()
    xf = as_field_array(fr.field, xa)
    coeffs = np.array([herm(fr.field, xf, v) for v in fa])
    return as_real_coords(fr.field, coeffs)


def project_rows_to_frame(fr: Frame, rows: np.ndarray) -> np.ndarray:
    """Vectorized :func:`project_to_frame` for a stack of vectors (one per row)."""
    fa = fr.as_field_matrix()
    xf = as_field_array(fr.field, np.asarray(rows, dtype=np.float64))
    coeffs = xf @ np.conj(fa.T)
    return as_real_coords(fr.field, coeffs)


def reconstruct_from_frame(fr: Frame, coeffs) -> np.ndarray:
    """Sum c_i v_i back in ambient interleaved storage."""
    cf = as_field_array(fr.field, np.asarray(coeffs, dtype=np.float64).ravel())
    fa = fr.as_field_matrix()
    return as_real_coords(fr.field, cf @ fa)


def flat_from_orthogonal_frame(fr: Frame) -> AffineFlat:
    """The k-flat {x in F^d : <(x,1), v_i> = 0 for all i}, d = ambient - 1.

    Raises SliceDegenerate when e_{d+1} lies in span(fr), in which case the
    orthogonal complement misses the affine slice entirely.
    """
    D = fr.ambient_dim
    d = D - 1
    V = fr.as_field_matrix()  # (n, D)
    e_last = np.zeros(D, dtype=V.dtype)
    e_last[-1] = 1.0
    coeffs = np.array([herm(fr.field, e_last, v) for v in V])
    residual = e_last - coeffs @ V
    if np.linalg.norm(residual) < RANK_TOL:
        raise SliceDegenerate("lifting direction lies in the frame span")
    # <(x,1), v_i> = 0  <=>  conj(v_i[:d]) . x = -conj(v_i[d])
    M = np.conj(V[:, :d])
    rhs = -np.conj(V[:, d])
    base, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    _, sv, Vh = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(sv > RANK_TOL))
    null_rows = np.conj(Vh[rank:])
    dirs = Frame(fr.field, d, as_real_coords(fr.field, null_rows))
    return AffineFlat(fr.field, d, as_real_coords(fr.field, base), dirs)


def flat_distance(fl: AffineFlat, x) -> float:
    """Euclidean distance from x to the flat (realified metric)."""
    xa = np.asarray(x, dtype=np.float64).ravel()
    _check_storage(fl.field, xa, fl.ambient_dim)
    r = as_field_array(fl.field, xa - fl.basepoint)
    fa = fl.directions.as_field_matrix()
    if fa.shape[0]:
        coeffs = np.array([herm(fl.field, r, v) for v in fa])
        r = r - coeffs @ fa
    return float(np.linalg.norm(r))


def flat_contains_point(fl: AffineFlat, x, tol: float) -> bool:
    return flat_distance(fl, x) <= tol


def flat_coordinates(fl: AffineFlat, x) -> np.ndarray:
    """F^k coordinates of x in the flat's (basepoint, directions) chart."""
    xa = np.asarray(x, dtype=np.float64).ravel()
    r = as_field_array(fl.field, xa - fl.basepoint)
    fa = fl.directions.as_field_matrix()
    coeffs = np.array([herm(fl.field, r, v) for v in fa])
    return as_real_coords(fl.field, coeffs)


def flat_point(fl: AffineFlat, coords) -> np.ndarray:
    """Inverse chart: basepoint + sum coord_i * direction_i."""
    return fl.basepoint + reconstruct_from_frame(fl.directions, coords)


def flat_residual_transform(fl: AffineFlat, rows: np.ndarray) -> np.ndarray:
    """Map each row x to (I - P)(x - b): the normal component relative to the flat.

    Distances to the flat equal norms of the transformed vectors, so nearest
    points of a polytope to the flat reduce to a min-norm-point computation
    over the transformed vertices.
    """
    r = as_field_array(fl.field, np.asarray(rows, dtype=np.float64) - fl.basepoint)
    fa = fl.directions.as_field_matrix()
    if fa.shape[0]:
        r = r - (r @ np.conj(fa.T)) @ fa
    return as_real_coords(fl.field, r)


def complex_flat_J_residual(fl: AffineFlat) -> float:
    """Max residual of J(direction) against the real direction span.

    Zero (up to rounding) for complex flats by construction; meaningful as a
    diagnostic for externally supplied data.
    """
    dirs = fl.directions.vectors
    if dirs.shape[0] == 0:
        return 0.0
    jd = apply_J(dirs)
    span = dirs.reshape(dirs.shape[0], -1)
    j_span = np.vstack([span, apply_J(span)])
    # orthonormal real basis of the realified direction span
    q, _ = np.linalg.qr(j_span.T)
    proj = jd @ q @ q.T
    return float(np.max(np.linalg.norm(jd - proj, axis=1)))
