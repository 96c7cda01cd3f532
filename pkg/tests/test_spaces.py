import numpy as np
import pytest

import tropmeas as tm
from tropmeas.spaces import (
    FiniteMetricSpace,
    InvalidSpaceError,
    diameter,
    index_of_measure,
    lift,
    lift_extend,
    validate,
)


@pytest.fixture
def two_point():
    return FiniteMetricSpace(["a", "b"], [[0, 1], [1, 0]])


def test_valid_two_point_space(two_point):
    assert validate(two_point) is None
    assert diameter(two_point) == 1.0


def test_singleton_space_has_zero_diameter():
    sp = FiniteMetricSpace(["a"], [[0]])
    assert diameter(sp) == 0.0


def test_symmetry_violation_reported():
    sp = FiniteMetricSpace(["a", "b"], [[0, 1], [2, 0]], check=False)
    v = validate(sp)
    assert v is not None and v.axiom == "symmetry"
    assert "a" in v.message and "b" in v.message


def test_triangle_violation_reported():
    d = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    sp = FiniteMetricSpace(["a", "b", "c"], d, check=False)
    v = validate(sp)
    assert v is not None and v.axiom == "triangle"


def test_zero_diagonal_and_identity_checks():
    sp = FiniteMetricSpace(["a", "b"], [[0.5, 1], [1, 0]], check=False)
    assert validate(sp).axiom == "zero-diagonal"
    sp = FiniteMetricSpace(["a", "b"], [[0, 0], [0, 0]], check=False)
    assert validate(sp).axiom == "identity-of-indiscernibles"


def test_negative_distance_reported():
    sp = FiniteMetricSpace(["a", "b"], [[0, -1], [-1, 0]], check=False)
    assert validate(sp).axiom == "nonnegativity"


def test_constructor_rejects_invalid_level0():
    with pytest.raises(InvalidSpaceError):
        FiniteMetricSpace(["a", "b"], [[0, 1], [2, 0]])
    with pytest.raises(InvalidSpaceError):
        FiniteMetricSpace(["a", "a"], [[0, 1], [1, 0]])
    with pytest.raises(InvalidSpaceError):
        FiniteMetricSpace(["a"], [[0, 1]])
    with pytest.raises(InvalidSpaceError):
        FiniteMetricSpace([], [])


def test_level0_diameter_is_computed_not_supplied():
    with pytest.raises(InvalidSpaceError):
        FiniteMetricSpace(["a", "b"], [[0, 1], [1, 0]], truncation_diam=5.0)


def test_unknown_label():
    sp = FiniteMetricSpace(["a", "b"], [[0, 1], [1, 0]])
    assert sp.index("b") == 1
    with pytest.raises(KeyError):
        sp.index("z")


@pytest.fixture
def worked():
    sp = FiniteMetricSpace(["a", "b"], [[0, 2], [2, 0]])
    m1 = tm.make_measure(sp, [("a", 0.0), ("b", -1.0)])
    m2 = tm.make_measure(sp, [("a", -3.0), ("b", 0.0)])
    return sp, m1, m2


def test_lift_of_diracs_reproduces_ground_distance(worked):
    sp, _, _ = worked
    L = lift(sp, [tm.dirac(sp, "a"), tm.dirac(sp, "b")])
    assert len(L) == 2
    assert L.dist[0, 1] == 2.0
    assert L.level == 1


def test_lift_merges_duplicates(worked):
    sp, m1, _ = worked
    L = lift(sp, [m1, m1])
    assert len(L) == 1


def test_lift_worked_pair_distance(worked):
    sp, m1, m2 = worked
    L = lift(sp, [m1, m2])
    assert L.dist[0, 1] == 2.0  # min(diam 2, transport value 3)


def test_lift_preserves_truncation_diameter(worked):
    sp, m1, m2 = worked
    L = lift(sp, [m1, m2])
    assert diameter(L) == diameter(sp)
    # sampled max distance (2.0) stays below a larger ground diameter too
    sp3 = FiniteMetricSpace(["a", "b", "c"], [[0, 1, 3], [1, 0, 3], [3, 3, 0]])
    mus = [tm.dirac(sp3, "a"), tm.dirac(sp3, "b")]
    L3 = lift(sp3, mus)
    assert L3.dist.max() == 1.0
    assert diameter(L3) == 3.0


def test_lift_output_passes_validation(worked):
    sp, m1, m2 = worked
    L = lift(sp, [m1, m2, tm.dirac(sp, "a")], check=True)
    assert validate(L) is None


def test_lift_validates_on_random_spaces():
    rng = np.random.default_rng(5)
    for _ in range(25):
        sp = tm.gen_space(int(rng.integers(3, 6)), rng)
        mus = [tm.gen_measure(sp, 4, rng) for _ in range(5)]
        L = lift(sp, mus)
        assert validate(L) is None


def test_lift_is_order_insensitive_up_to_relabeling(worked):
    sp, m1, m2 = worked
    m3 = tm.dirac(sp, "a")
    a = lift(sp, [m1, m2, m3])
    b = lift(sp, [m3, m1, m2])
    assert sorted(map(tuple, a.dist.tolist())) == sorted(map(tuple, b.dist.tolist()))
    assert {id(p) for p in a.points} == {id(p) for p in b.points}


def test_lift_rejects_foreign_measures(worked):
    sp, m1, _ = worked
    other = FiniteMetricSpace(["a", "b"], [[0, 2], [2, 0]])
    with pytest.raises(tm.SpaceMismatchError):
        lift(other, [m1])
    with pytest.raises(InvalidSpaceError):
        lift(sp, [])


def test_lift_extend_matches_full_lift(worked):
    sp, m1, m2 = worked
    base = lift(sp, [m1])
    ext = lift_extend(base, [m2, m1])
    full = lift(sp, [m1, m2])
    assert np.array_equal(ext.dist, full.dist)
    assert lift_extend(base, [m1]) is base


def test_index_of_measure(worked):
    sp, m1, m2 = worked
    L = lift(sp, [m1, m2])
    assert index_of_measure(L, m1) == 0
    assert index_of_measure(L, m2) == 1
    with pytest.raises(ValueError):
        index_of_measure(L, tm.dirac(sp, "a"))
