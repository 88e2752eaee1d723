"""Executable dependency-consistency conditions and ordering checkers.

The general checker quantifies over bounded subfamilies and over tuples of
affine dependencies on the assigned points; violations are certified by
Farkas functionals of the scaled-dependency system.  Consistency can only be
affirmed up to the sampling budget (the verdict name says so).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import exact2d
from .convex import (
    nearest_point_on_flat,
    polytopes_intersect,
    scaled_dependency_feasible,
    scaled_dependency_merit,
)
from .errors import (
    FieldMismatch,
    InvalidRange,
    NotADependency,
    NotATransversal,
    NotDisjoint,
    NumericalFailure,
    TooLarge,
)
from .fields import REAL, ScalarField, as_field_array, as_real_coords
from .geometry import AffineFlat, Polytope, flat_coordinates
from .linprog import validate_farkas

DEP_TOL = 1e-9
MERIT_THRESHOLD = 1e-7


@dataclass(frozen=True)
class PointAssignment:
    """phi: family index -> point of P, with P a finite subset of F^k."""

    field: ScalarField
    k: int
    points: np.ndarray  # (|P|, k * real_dim)
    phi: tuple

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if self.k < 0:
            raise InvalidRange("k must be nonnegative")
        if pts.shape[1] != self.k * self.field.real_dim:
            raise ValueError("points have the wrong storage length")
        phi = tuple(int(i) for i in self.phi)
        if any(i < 0 or i >= pts.shape[0] for i in phi):
            raise ValueError("phi target out of range")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "phi", phi)

    def assigned(self, family_index: int) -> np.ndarray:
        return self.points[self.phi[family_index]]


@dataclass(frozen=True)
class DependencyTuple:
    """d-k affine dependencies on the assigned points of one subfamily.

    ``components`` is a (t, |subfamily|) array over F (complex128 when the
    field is complex), column j belonging to family index subfamily[j].
    """

    subfamily: tuple
    components: np.ndarray

    @property
    def size(self) -> int:
        return self.components.shape[0]


@dataclass(frozen=True)
class TupleCheck:
    satisfied: bool
    r: np.ndarray | None = None
    q: np.ndarray | None = None
    farkas: np.ndarray | None = None


@dataclass(frozen=True)
class ConsistencyVerdict:
    consistent: bool
    samples_used: int = 0
    max_merit: float = 0.0
    subfamily: tuple | None = None
    violating_tuple: DependencyTuple | None = None
    farkas: np.ndarray | None = None


@dataclass(frozen=True)
class SamplingBudget:
    samples: int = 4096
    restarts: int = 32
    seed: int = 0
    local_steps: int = 40


@dataclass(frozen=True)
class TransversalWitness:
    flat: AffineFlat
    points: np.ndarray  # (n, d * real_dim): q_F on the flat
    coefficients: list
    assignment: PointAssignment


def subfamily_bound(k: int, d: int, field: ScalarField) -> int:
    """(k+1)(d-k) dim_R(F) + 1: the subfamily size cap of the condition."""
    if not 0 <= k < d:
        raise InvalidRange(f"need 0 <= k < d, got k={k}, d={d}")
    return (k + 1) * (d - k) * field.real_dim + 1


def dependency_space(assignment: PointAssignment, subfamily) -> np.ndarray:
    """F-orthonormal basis of the affine dependencies of the assigned points.

    Rows are basis vectors indexed by the subfamily; shape (dim_F D, |sub|)
    over F.  Empty when only the trivial dependence exists.
    """
    sub = tuple(subfamily)
    if not sub:
        raise InvalidRange("subfamily must be nonempty")
    field = assignment.field
    pts = np.stack([assignment.assigned(i) for i in sub])  # (ns, k*rd)
    pf = as_field_array(field, pts)  # (ns, k) over F
    ns = len(sub)
    dtype = np.complex128 if field.is_complex else np.float64
    M = np.zeros((assignment.k + 1, ns), dtype=dtype)
    M[0] = 1.0
    if assignment.k:
        M[1:] = pf.T
    _, sv, Vh = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(sv > DEP_TOL))
    return np.conj(Vh[rank:])


def real_tuple_basis(basis: np.ndarray, field: ScalarField) -> np.ndarray:
    """R-orthonormal basis of D as a real vector space (rows over F)."""
    if not field.is_complex:
        return basis
    return np.vstack([basis, 1j * basis]) if basis.size else basis


def tuple_membership_residual(tup: DependencyTuple, assignment: PointAssignment) -> float:
    """Max residual of the affine-dependence equations for every component."""
    field = assignment.field
    pts = np.stack([assignment.assigned(i) for i in tup.subfamily])
    pf = as_field_array(field, pts)  # (ns, k)
    res = 0.0
    for a in np.atleast_2d(tup.components):
        res = max(res, abs(np.sum(a)))
        if assignment.k:
            res = max(res, float(np.max(np.abs(a @ pf))))
    return res


def check_tuple(tup: DependencyTuple, family: list[Polytope], assignment: PointAssignment) -> TupleCheck:
    """Decide the inner condition for one dependency tuple, with certificates."""
    comp = np.atleast_2d(tup.components)
    if np.max(np.abs(comp)) == 0:
        raise NotADependency("tuple is entirely trivial")
    if tuple_membership_residual(tup, assignment) > DEP_TOL * max(1.0, float(np.max(np.abs(comp)))):
        raise NotADependency("tuple is not an affine dependence of the assigned points")
    subfam = [family[i] for i in tup.subfamily]
    out, r, q = scaled_dependency_feasible(comp, subfam)
    if out.feasible:
        return TupleCheck(True, r=r, q=q)
    return TupleCheck(False, farkas=out.farkas)


def _enumerate_subfamilies(n: int, bound: int, exhaustive: bool):
    if exhaustive:
        for size in range(1, min(n, bound) + 1):
            yield from itertools.combinations(range(n), size)
    else:
        # support subsumption: tuples on smaller subfamilies embed with zeros
        yield from itertools.combinations(range(n), min(n, bound))


def check_dependency_consistency(
    family: list[Polytope],
    assignment: PointAssignment,
    budget: SamplingBudget = SamplingBudget(),
    exhaustive: bool = False,
) -> ConsistencyVerdict:
    """Search for a certified violating tuple; consistent only up to resolution.

    Sound on the Inconsistent side (the Farkas certificate re-validates);
    one-sided on the consistent side, which exhausts the budget.
    """
    n = len(family)
    field = family[0].field
    d = family[0].ambient_dim
    k = assignment.k
    bound = subfamily_bound(k, d, field)
    t = d - k
    rng = np.random.default_rng(budget.seed)
    samples_used = 0
    max_merit = 0.0
    for sub in _enumerate_subfamilies(n, bound, exhaustive):
        basis = dependency_space(assignment, sub)
        rbasis = real_tuple_basis(basis, field)
        nb = rbasis.shape[0]
        if nb == 0:
            continue
        subfam = [family[i] for i in sub]

        def make_components(coeffs):
            # coeffs: (t, nb) real -> (t, |sub|) over F
            return coeffs @ rbasis

        def merit_of(coeffs):
            return scaled_dependency_merit(make_components(coeffs), subfam)

        def certify(coeffs):
            comp = make_components(coeffs)
            try:
                out, _, _ = scaled_dependency_feasible(comp, subfam)
            except NumericalFailure:
                return None  # uncertifiable candidate: treat as a miss
            if out.feasible:
                return None
            return DependencyTuple(tuple(sub), comp), out.farkas

        best_coeffs = None
        violation = None
        for _ in range(budget.samples):
            coeffs = rng.standard_normal((t, nb))
            coeffs /= np.linalg.norm(coeffs)
            samples_used += 1
            m = merit_of(coeffs)
            if m > max_merit:
                max_merit = m
                best_coeffs = coeffs
            if m > MERIT_THRESHOLD:
                violation = certify(coeffs)
                if violation is not None:
                    break
        if violation is None and budget.restarts:
            # multi-start local search on the infeasibility merit
            starts = [best_coeffs] if best_coeffs is not None else []
            while len(starts) < budget.restarts:
                c = rng.standard_normal((t, nb))
                starts.append(c / np.linalg.norm(c))
            for c0 in starts[: budget.restarts]:
                c = c0.copy()
                m = merit_of(c)
                step = 0.5
                for _ in range(budget.local_steps):
                    cand = c + step * rng.standard_normal(c.shape)
                    cand /= np.linalg.norm(cand)
                    mc = merit_of(cand)
                    samples_used += 1
                    if mc > m:
                        c, m = cand, mc
                    else:
                        step *= 0.7
                max_merit = max(max_merit, m)
                if m > MERIT_THRESHOLD:
                    violation = certify(c)
                    if violation is not None:
                        break
        if violation is not None:
            tup, farkas = violation
            return ConsistencyVerdict(
                False,
                samples_used=samples_used,
                max_merit=max_merit,
                subfamily=tuple(sub),
                violating_tuple=tup,
                farkas=farkas,
            )
    return ConsistencyVerdict(True, samples_used=samples_used, max_merit=max_merit)


@dataclass(frozen=True)
class SeparationCounterexample:
    first: tuple
    second: tuple


def check_separation_consistency(
    family: list[Polytope], assignment: PointAssignment
) -> SeparationCounterexample | None:
    """Hull-disjointness transfer test over pairs with |F1| + |F2| <= k + 2.

    None means consistent (Ok); otherwise the first failing pair is returned.
    Real field only.
    """
    field = family[0].field
    if field.is_complex:
        raise FieldMismatch("separation consistency is a real-field condition")
    k = assignment.k
    n = len(family)
    d = family[0].ambient_dim
    cap = k + 2
    idx = range(n)
    for total in range(2, cap + 1):
        for s1 in range(1, total):
            s2 = total - s1
            if s2 < s1:
                continue  # unordered pairs
            for f1 in itertools.combinations(idx, s1):
                rest = [i for i in idx if i not in f1]
                for f2 in itertools.combinations(rest, s2):
                    if s1 == s2 and f2 < f1:
                        continue
                    hull1 = Polytope(field, d, np.vstack([family[i].vertices for i in f1]))
                    hull2 = Polytope(field, d, np.vstack([family[i].vertices for i in f2]))
                    if polytopes_intersect([hull1, hull2]).feasible:
                        continue
                    p1 = Polytope(field, k, np.stack([assignment.assigned(i) for i in f1]))
                    p2 = Polytope(field, k, np.stack([assignment.assigned(i) for i in f2]))
                    if polytopes_intersect([p1, p2]).feasible:
                        return SeparationCounterexample(f1, f2)
    return None


def witness_from_transversal(
    family: list[Polytope], flat: AffineFlat, tol: float = 1e-8
) -> TransversalWitness:
    """Per-set points on the transversal plus the induced point assignment."""
    qs = []
    coeffs = []
    for p in family:
        q, lam, dist = nearest_point_on_flat(flat, p)
        if dist > tol:
            raise NotATransversal(f"flat misses a set by {dist:.3e}")
        qs.append(q)
        coeffs.append(lam)
    qs = np.stack(qs)
    points = np.stack([flat_coordinates(flat, q) for q in qs])
    assignment = PointAssignment(flat.field, flat.k, points, tuple(range(len(family))))
    return TransversalWitness(flat=flat, points=qs, coefficients=coeffs, assignment=assignment)


def _require_disjoint(family: list[Polytope]) -> None:
    for i, j in itertools.combinations(range(len(family)), 2):
        if polytopes_intersect([family[i], family[j]]).feasible:
            raise NotDisjoint(f"sets {i} and {j} intersect")


def _fr_sets(family: list[Polytope]):
    return [[exact2d.fr_point(v) for v in p.vertices] for p in family]


def hadwiger_order_check(family: list[Polytope]) -> tuple | None:
    """None when every triple has a line transversal in index order, else the triple."""
    if any(p.field != REAL or p.ambient_dim != 2 for p in family):
        raise FieldMismatch("Hadwiger checks need real planar polytopes")
    _require_disjoint(family)
    sets = _fr_sets(family)
    for i, j, l in itertools.combinations(range(len(family)), 3):
        if not exact2d.ordered_triple_line(sets[i], sets[j], sets[l]):
            return (i, j, l)
    return None


def find_hadwiger_order(family: list[Polytope]) -> tuple | None:
    """First ordering (lexicographic) whose every triple passes, else None.

    By Hadwiger's theorem the answer is an ordering iff a line transversal
    exists (pairwise-disjoint planar families).
    """
    n = len(family)
    if n > 9:
        raise TooLarge("factorial enumeration is capped at n = 9")
    if any(p.field != REAL or p.ambient_dim != 2 for p in family):
        raise FieldMismatch("Hadwiger checks need real planar polytopes")
    _require_disjoint(family)
    if n <= 2:
        return tuple(range(n))
    sets = _fr_sets(family)
    # order of a triple only depends on its middle element
    middle_ok: dict[tuple, set] = {}
    for a, b, c in itertools.combinations(range(n), 3):
        ok = set()
        for mid in (a, b, c):
            lo, hi = sorted(set((a, b, c)) - {mid})
            if exact2d.ordered_triple_line(sets[lo], sets[mid], sets[hi]):
                ok.add(mid)
        middle_ok[(a, b, c)] = ok
    for perm in itertools.permutations(range(n)):
        good = True
        for tri in itertools.combinations(perm, 3):
            key = tuple(sorted(tri))
            if tri[1] not in middle_ok[key]:
                good = False
                break
        if good:
            return perm
    return None
