"""Equality-form LP feasibility with machine-checkable certificates.

Problems are A x = b with a nonnegativity mask over the variables.  The
solver is a phase-one primal simplex with Bland's rule (deterministic,
cycle-free).  Feasible answers carry the point; infeasible answers carry a
Farkas functional y with y^T A <= 0 on nonnegative variables, y^T A = 0 on
free variables and y^T b > 0.  Farkas certificates are always produced by an
exact-rational re-solve so that they re-validate at tight tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NumericalFailure

FEAS_TOL = 1e-8
CERT_TOL = 1e-10
_PIVOT_TOL = 1e-9


@dataclass(frozen=True)
class LpProblem:
    """A x = b with x_j >= 0 where nonneg[j] is true, x_j free otherwise."""

    A: np.ndarray
    b: np.ndarray
    nonneg: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        b = np.asarray(self.b, dtype=np.float64).ravel()
        nn = np.asarray(self.nonneg, dtype=bool).ravel()
        if A.shape[0] != b.size or A.shape[1] != nn.size:
            raise ValueError("inconsistent LP dimensions")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("non-finite LP data")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "nonneg", nn)


@dataclass(frozen=True)
class FeasibilityOutcome:
    feasible: bool
    point: np.ndarray | None = None
    farkas: np.ndarray | None = None
    phase_one_value: float = 0.0


def _split_free(prob: LpProblem):
    """Standard form: free variables become differences of two nonnegatives."""
    free = ~prob.nonneg
    if not free.any():
        return prob.A, None
    A_std = np.hstack([prob.A, -prob.A[:, free]])
    return A_std, np.nonzero(free)[0]


def _merge_free(prob: LpProblem, x_std: np.ndarray, free_idx) -> np.ndarray:
    x = x_std[: prob.A.shape[1]].copy()
    if free_idx is not None:
        x[free_idx] -= x_std[prob.A.shape[1] :]
    return x


def _phase1_float(A: np.ndarray, b: np.ndarray, max_pivots: int = 20000):
    """Phase-one simplex, all variables >= 0.  Returns (value, x, y) or None on stall."""
    m, n = A.shape
    signs = np.where(b < 0, -1.0, 1.0)
    Af = A * signs[:, None]
    bf = b * signs
    T = np.zeros((m, n + m + 1))
    T[:, :n] = Af
    T[:, n : n + m] = np.eye(m)
    T[:, -1] = bf
    basis = list(range(n, n + m))
    # reduced-cost row for min sum(artificials)
    obj = np.zeros(n + m + 1)
    obj[:n] = -Af.sum(axis=0)
    obj[-1] = -bf.sum()
    for _ in range(max_pivots):
        neg = np.nonzero(obj[: n + m] < -_PIVOT_TOL)[0]
        if neg.size == 0:
            break
        j = int(neg[0])  # Bland: lowest index enters
        col = T[:, j]
        rows = np.nonzero(col > _PIVOT_TOL)[0]
        if rows.size == 0:
            return None  # phase-one is bounded below; numerical trouble
        ratios = T[rows, -1] / col[rows]
        rmin = ratios.min()
        cand = rows[ratios <= rmin + 1e-12]
        r = int(cand[np.argmin([basis[i] for i in cand])])  # Bland tie-break
        piv = T[r, j]
        T[r] /= piv
        upd = T[:, j].copy()
        upd[r] = 0.0
        T -= np.outer(upd, T[r])
        obj -= obj[j] * T[r]
        basis[r] = j
    else:
        return None
    value = -obj[-1]
    x = np.zeros(n + m)
    for i, bi in enumerate(basis):
        x[bi] = T[i, -1]
    y_flipped = 1.0 - obj[n : n + m]
    y = y_flipped * signs
    return value, x[:n], y


def _phase1_exact(A_rows, b_col):
    """Exact-rational phase-one simplex with Bland's rule.  Always terminates."""
    m = len(b_col)
    n = len(A_rows[0]) if m else 0
    zero, one = Fraction(0), Fraction(1)
    signs = [(-one if bi < 0 else one) for bi in b_col]
    T = []
    for i in range(m):
        row = [signs[i] * aij for aij in A_rows[i]]
        row += [one if k == i else zero for k in range(m)]
        row.append(signs[i] * b_col[i])
        T.append(row)
    obj = [zero] * (n + m + 1)
    for j in range(n):
        obj[j] = -sum(T[i][j] for i in range(m))
    obj[-1] = -sum(T[i][-1] for i in range(m))
    basis = list(range(n, n + m))
    while True:
        j = next((k for k in range(n + m) if obj[k] < 0), None)
        if j is None:
            break
        best_r, best_ratio, best_var = None, None, None
        for i in range(m):
            if T[i][j] > 0:
                ratio = T[i][-1] / T[i][j]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < best_var)
                ):
                    best_r, best_ratio, best_var = i, ratio, basis[i]
        if best_r is None:
            raise NumericalFailure("exact phase-one unbounded (cannot happen)")
        r = best_r
        piv = T[r][j]
        T[r] = [v / piv for v in T[r]]
        for i in range(m):
            if i != r and T[i][j] != 0:
                f = T[i][j]
                T[i] = [a - f * c for a, c in zip(T[i], T[r])]
        if obj[j] != 0:
            f = obj[j]
            obj = [a - f * c for a, c in zip(obj, T[r])]
        basis[r] = j
    value = -obj[-1]
    x = [zero] * (n + m)
    for i, bi in enumerate(basis):
        x[bi] = T[i][-1]
    y = [(one - obj[n + i]) * signs[i] for i in range(m)]
    return value, x[:n], y


def validate_feasible(prob: LpProblem, x: np.ndarray, tol: float = FEAS_TOL) -> bool:
    if x is None or not np.all(np.isfinite(x)):
        return False
    if np.max(np.abs(prob.A @ x - prob.b), initial=0.0) > tol:
        return False
    return bool(np.all(x[prob.nonneg] >= -tol))


def validate_farkas(prob: LpProblem, y: np.ndarray, tol: float = CERT_TOL) -> bool:
    if y is None or not np.all(np.isfinite(y)):
        return False
    z = y @ prob.A
    if np.any(z[prob.nonneg] > tol):
        return False
    if np.any(np.abs(z[~prob.nonneg]) > tol):
        return False
    return bool(y @ prob.b > FEAS_TOL)


def _exact_resolve(prob: LpProblem, free_idx) -> FeasibilityOutcome:
    A_std, _ = _split_free(prob)
    A_rows = [[Fraction(v) for v in row] for row in A_std]
    b_col = [Fraction(v) for v in prob.b]
    value, x_std, y = _phase1_exact(A_rows, b_col)
    if value <= FEAS_TOL:
        # value == 0: exactly feasible.  0 < value <= FEAS_TOL: the float data
        # is consistent only up to roundoff; the phase-one optimum bounds the
        # residual, so the point is feasible at the declared 1e-8 tolerance.
        x = _merge_free(prob, np.array([float(v) for v in x_std]), free_idx)
        if not validate_feasible(prob, x):
            raise NumericalFailure("exact feasible point fails float validation")
        return FeasibilityOutcome(True, point=x, phase_one_value=float(value))
    margin = sum(yi * bi for yi, bi in zip(y, b_col))
    scales = [s for s in (margin, max(abs(v) for v in y)) if s != 0]
    for scale in scales:
        y_arr = np.array([float(v / scale) for v in y])
        if validate_farkas(prob, y_arr):
            return FeasibilityOutcome(False, farkas=y_arr, phase_one_value=float(value))
    raise NumericalFailure("exact Farkas certificate fails float validation")


def _nnls_point(A_std: np.ndarray, b: np.ndarray):
    """Nonnegative least-squares residual: robust feasible-side decision."""
    from scipy.optimize import nnls

    try:
        x_std, rnorm = nnls(A_std, b)
    except Exception:  # pragma: no cover - solver breakdown
        return None, float("inf")
    return x_std, float(rnorm)


def lp_feasible(prob: LpProblem) -> FeasibilityOutcome:
    """Decide A x = b, x >= 0 on masked variables, with a validated certificate."""
    A_std, free_idx = _split_free(prob)
    x_std, rnorm = _nnls_point(A_std, prob.b)
    if rnorm <= FEAS_TOL:
        x = _merge_free(prob, x_std, free_idx)
        if validate_feasible(prob, x):
            return FeasibilityOutcome(True, point=x, phase_one_value=0.0)
    res = _phase1_float(A_std, prob.b)
    if res is not None:
        value, x_std, _y = res
        if value <= FEAS_TOL:
            x = _merge_free(prob, x_std, free_idx)
            if validate_feasible(prob, x):
                return FeasibilityOutcome(True, point=x, phase_one_value=0.0)
    # infeasible or numerically unconvincing: certify exactly
    return _exact_resolve(prob, free_idx)


def phase_one_merit(prob: LpProblem) -> float:
    """Float-only infeasibility merit, 0 when feasible.

    The merit is the nonnegative least-squares residual min ||A x - b|| over
    x >= 0 (free variables split), which is continuous in the problem data.
    No certificates; used as the objective of the tuple search.
    """
    A_std, _ = _split_free(prob)
    _, rnorm = _nnls_point(A_std, prob.b)
    return rnorm
