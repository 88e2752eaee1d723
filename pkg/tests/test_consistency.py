import numpy as np
import pytest

from flatstab.consistency import (
    DependencyTuple,
    PointAssignment,
    SamplingBudget,
    check_dependency_consistency,
    check_separation_consistency,
    check_tuple,
    dependency_space,
    find_hadwiger_order,
    hadwiger_order_check,
    subfamily_bound,
    witness_from_transversal,
)
from flatstab.convex import _scaled_dependency_problem, polytopes_intersect
from flatstab.errors import (
    FieldMismatch,
    InvalidRange,
    NotADependency,
    NotATransversal,
    NotDisjoint,
    TooLarge,
)
from flatstab.fields import COMPLEX, REAL
from flatstab.geometry import AffineFlat, Frame, Polytope
from flatstab.linprog import validate_farkas
from flatstab.scenes import CORNER_CENTERS, _octagon


def test_subfamily_bound_formula():
    # (k+1)(d-k) * dim_R(F) + 1
    assert subfamily_bound(1, 3, REAL) == 5
    assert subfamily_bound(1, 3, COMPLEX) == 9
    assert subfamily_bound(0, 4, REAL) == 5
    with pytest.raises(InvalidRange):
        subfamily_bound(3, 3, REAL)
    with pytest.raises(InvalidRange):
        subfamily_bound(-1, 2, REAL)


def _seg2(a, b):
    return Polytope(REAL, 2, np.array([a, b], dtype=np.float64))


def _helly_violation_family():
    # pairwise intersecting segments with empty triple intersection
    return [
        _seg2((-4, 0), (4, 0)),
        _seg2((0, -4), (0, 4)),
        _seg2((3, 0), (0, 3)),
    ]


def test_dependency_space_same_point():
    asg = PointAssignment(REAL, 1, np.array([[0.5]]), (0, 0))
    basis = dependency_space(asg, (0, 1))
    assert basis.shape == (1, 2)
    v = basis[0] / basis[0, 0]
    assert np.allclose(v, [1.0, -1.0])


def test_dependency_space_independent_points():
    asg = PointAssignment(REAL, 2, np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), (0, 1, 2))
    basis = dependency_space(asg, (0, 1, 2))
    assert basis.shape[0] == 0


def test_dependency_space_generic_dimension():
    # k + 2 generic points in F^k give a one-dimensional dependency space
    for field, k in ((REAL, 2), (COMPLEX, 2)):
        rng = np.random.default_rng(3)
        pts = rng.standard_normal((k + 2, k * field.real_dim))
        asg = PointAssignment(field, k, pts, tuple(range(k + 2)))
        basis = dependency_space(asg, tuple(range(k + 2)))
        assert basis.shape[0] == 1  # dim_F D = 1


def test_check_tuple_helly_satisfied():
    fam = [_seg2((-1, 0), (1, 0)), _seg2((0, -1), (0, 1)), _seg2((-1, -1), (1, 1))]
    asg = PointAssignment(REAL, 0, np.zeros((1, 0)), (0, 0, 0))
    tup = DependencyTuple((0, 1, 2), np.array([[1.0, -0.5, -0.5], [0.5, 0.5, -1.0]]))
    res = check_tuple(tup, fam, asg)
    assert res.satisfied
    assert np.all(res.r >= -1e-10)


def test_check_tuple_violated():
    fam = [Polytope(REAL, 1, np.array([[0.0]])), Polytope(REAL, 1, np.array([[1.0]]))]
    asg = PointAssignment(REAL, 0, np.zeros((1, 0)), (0, 0))
    res = check_tuple(DependencyTuple((0, 1), np.array([[1.0, -1.0]])), fam, asg)
    assert not res.satisfied
    assert res.farkas is not None


def test_check_tuple_rejects_non_dependency():
    fam = [Polytope(REAL, 1, np.array([[0.0]])), Polytope(REAL, 1, np.array([[1.0]]))]
    asg = PointAssignment(REAL, 1, np.array([[0.0], [1.0]]), (0, 1))
    # sums to zero but fails sum a_F phi(F) = 0
    with pytest.raises(NotADependency):
        check_tuple(DependencyTuple((0, 1), np.array([[1.0, -1.0]])), fam, asg)


def test_consistency_helly_violation_certified():
    fam = _helly_violation_family()
    asg = PointAssignment(REAL, 0, np.zeros((1, 0)), (0, 0, 0))
    verdict = check_dependency_consistency(fam, asg, SamplingBudget(seed=0))
    assert not verdict.consistent
    assert verdict.subfamily == (0, 1, 2)
    # re-validate the certificate against an independently assembled problem
    sub = [fam[i] for i in verdict.subfamily]
    prob = _scaled_dependency_problem(
        np.asarray(verdict.violating_tuple.components),
        sub,
        list(range(len(sub))),
    )
    assert validate_farkas(prob, verdict.farkas)


def test_consistency_planted_consistent():
    from flatstab.scenes import GenSpec, gen_planted

    sc = gen_planted(GenSpec(seed=4, d=2, k=1, n=4))
    wit = witness_from_transversal(list(sc.sets), sc.planted)
    verdict = check_dependency_consistency(
        list(sc.sets), wit.assignment, SamplingBudget(samples=64, restarts=4, seed=1)
    )
    assert verdict.consistent
    assert verdict.samples_used > 0


def test_pruned_and_exhaustive_agree():
    fam = _helly_violation_family()
    asg = PointAssignment(REAL, 0, np.zeros((1, 0)), (0, 0, 0))
    b = SamplingBudget(samples=64, restarts=4, seed=2)
    v1 = check_dependency_consistency(fam, asg, b, exhaustive=False)
    v2 = check_dependency_consistency(fam, asg, b, exhaustive=True)
    assert v1.consistent == v2.consistent == False  # noqa: E712

    good = [_seg2((-1, 0), (1, 0)), _seg2((0, -1), (0, 1))]
    asg2 = PointAssignment(REAL, 0, np.zeros((1, 0)), (0, 0))
    w1 = check_dependency_consistency(good, asg2, b, exhaustive=False)
    w2 = check_dependency_consistency(good, asg2, b, exhaustive=True)
    assert w1.consistent and w2.consistent


def test_separation_counterexample():
    fam = [_seg2((0, 0), (1, 0)), _seg2((0, 2), (1, 2))]  # disjoint segments
    asg = PointAssignment(REAL, 1, np.array([[0.5]]), (0, 0))  # same image point
    bad = check_separation_consistency(fam, asg)
    assert bad is not None
    assert set(bad.first) | set(bad.second) == {0, 1}


def test_separation_ok_distinct_images():
    fam = [_seg2((0, 0), (1, 0)), _seg2((0, 2), (1, 2))]
    asg = PointAssignment(REAL, 1, np.array([[0.0], [1.0]]), (0, 1))
    assert check_separation_consistency(fam, asg) is None


def test_separation_rejects_complex():
    fam = [Polytope(COMPLEX, 1, np.array([[0.0, 0.0]]))]
    asg = PointAssignment(COMPLEX, 0, np.zeros((1, 0)), (0,))
    with pytest.raises(FieldMismatch):
        check_separation_consistency(fam, asg)


def test_witness_k0_common_point():
    fam = [_seg2((-1, 0), (1, 0)), _seg2((0, -1), (0, 1))]
    flat = AffineFlat(REAL, 2, np.array([0.0, 0.0]), Frame(REAL, 2, np.zeros((0, 2))))
    wit = witness_from_transversal(fam, flat)
    assert np.allclose(wit.points, 0.0, atol=1e-8)
    assert wit.assignment.points.shape[1] == 0


def test_witness_points_on_flat():
    from flatstab.scenes import GenSpec, gen_planted

    sc = gen_planted(GenSpec(seed=8, d=2, k=1, n=5))
    wit = witness_from_transversal(list(sc.sets), sc.planted)
    from flatstab.geometry import flat_distance

    for q in wit.points:
        assert flat_distance(sc.planted, q) < 1e-8


def test_witness_rejects_non_transversal():
    fam = [Polytope(REAL, 2, np.array([[0.0, 5.0]]))]
    flat = AffineFlat(REAL, 2, np.array([0.0, 0.0]), Frame(REAL, 2, np.array([[1.0, 0.0]])))
    with pytest.raises(NotATransversal):
        witness_from_transversal(fam, flat)


def _stacked_segments(n):
    return [_seg2((-1, float(i)), (1, float(i))) for i in range(n)]


def test_hadwiger_ordered_segments_ok():
    assert hadwiger_order_check(_stacked_segments(3)) is None


def test_hadwiger_vacuous_for_pairs():
    assert hadwiger_order_check(_stacked_segments(2)) is None


def test_hadwiger_not_disjoint():
    fam = [_seg2((-1, 0), (1, 0)), _seg2((0, -1), (0, 1))]
    with pytest.raises(NotDisjoint):
        hadwiger_order_check(fam)


def _corner_family():
    return [Polytope(REAL, 2, _octagon(cx, cy)) for cx, cy in CORNER_CENTERS]


def test_hadwiger_corner_family_has_no_order():
    fam = _corner_family()
    assert hadwiger_order_check(fam) == (0, 1, 2)
    assert find_hadwiger_order(fam) is None


def test_find_hadwiger_order_succeeds():
    order = find_hadwiger_order(_stacked_segments(4))
    assert order is not None
    assert hadwiger_order_check([_stacked_segments(4)[i] for i in order]) is None


def test_find_hadwiger_order_singleton_and_cap():
    fam = [_seg2((0, 0), (1, 0))]
    assert find_hadwiger_order(fam) == (0,)
    with pytest.raises(TooLarge):
        find_hadwiger_order(_stacked_segments(10))
