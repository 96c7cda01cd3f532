import itertools

import numpy as np
import pytest

import tropmeas as tm
from tropmeas.transport import (
    ORACLE_CELL_LIMIT,
    Coupling,
    SupportPattern,
    bottleneck_distance,
    bottleneck_distance_bruteforce,
    cost,
    distance_to_dirac,
    distance_to_diracs,
    measure_distance,
    pattern_feasible,
)


@pytest.fixture
def worked():
    sp = tm.FiniteMetricSpace(["a", "b"], [[0, 2], [2, 0]])
    m1 = tm.make_measure(sp, [("a", 0.0), ("b", -1.0)])
    m2 = tm.make_measure(sp, [("a", -3.0), ("b", 0.0)])
    return sp, m1, m2


def test_cost_examples(worked):
    sp, m1, m2 = worked
    # same point, weights 0 and -3: |gap| + 0
    assert cost(0, 0, m1, m2) == 3.0
    # same weights, distance 2
    assert cost(0, 1, m1, m2) == 2.0
    d = tm.dirac(sp, "a")
    assert cost(0, 0, d, d) == 0.0


def test_pattern_feasible_full_pattern_always(worked):
    _, m1, m2 = worked
    assert pattern_feasible(SupportPattern.full(m1, m2), m1, m2)


def test_pattern_feasible_dirac_pair(worked):
    sp, _, _ = worked
    assert pattern_feasible([(0, 0)], tm.dirac(sp, "a"), tm.dirac(sp, "b"))


def test_pattern_feasible_uncovered_row():
    sp = tm.FiniteMetricSpace(["a", "b", "c"], [[0, 2, 3], [2, 0, 1], [3, 1, 0]])
    m1 = tm.make_measure(sp, [("a", 0.0), ("b", -1.0)])
    m2 = tm.dirac(sp, "c")
    assert not pattern_feasible([(0, 0)], m1, m2)  # row b uncovered
    assert pattern_feasible([(0, 0), (1, 0)], m1, m2)


def test_pattern_feasible_weight_witness_required():
    sp = tm.FiniteMetricSpace(["a", "b"], [[0, 2], [2, 0]])
    m1 = tm.make_measure(sp, [("a", 0.0), ("b", -1.0)])
    m2 = tm.make_measure(sp, [("a", 0.0), ("b", -2.0)])
    # row b (weight -1) relates only to column b (weight -2 < -1): the row
    # marginal cannot be attained even though the row is nonempty
    assert not pattern_feasible([(0, 0), (1, 1)], m1, m2)


def test_empty_pattern_rejected(worked):
    _, m1, m2 = worked
    with pytest.raises(ValueError):
        SupportPattern(frozenset())
    assert not pattern_feasible([], m1, m2)


def test_bottleneck_worked_example(worked):
    _, m1, m2 = worked
    assert bottleneck_distance(m1, m2) == 3.0
    assert bottleneck_distance_bruteforce(m1, m2) == 3.0


def test_bottleneck_self_distance_zero(worked):
    _, m1, m2 = worked
    assert bottleneck_distance(m1, m1) == 0.0
    assert bottleneck_distance(m2, m2) == 0.0


def test_bottleneck_dirac_target_closed_form(worked):
    sp, m1, _ = worked
    # transport value against a Dirac is max_i (|w_i| + d(x_i, x0))
    assert bottleneck_distance(m1, tm.dirac(sp, "a")) == 3.0
    assert bottleneck_distance(m1, tm.dirac(sp, "b")) == 2.0


def test_rho_worked_example(worked):
    _, m1, m2 = worked
    assert measure_distance(m1, m2) == 2.0  # min(diam 2, 3)


def test_rho_of_diracs_is_ground_distance(worked):
    sp, _, _ = worked
    assert measure_distance(tm.dirac(sp, "a"), tm.dirac(sp, "b")) == 2.0


def test_rho_identity(worked):
    _, m1, _ = worked
    assert measure_distance(m1, m1) == 0.0


def test_distance_to_dirac_examples(worked):
    sp, _, m2 = worked
    assert distance_to_dirac(tm.dirac(sp, "a"), "a") == 0.0
    assert distance_to_dirac(m2, "a") == 2.0  # min(2, max(3, 2))


def test_distance_to_dirac_equals_rho_exactly():
    rng = np.random.default_rng(11)
    for _ in range(500):
        sp = tm.gen_space(int(rng.integers(3, 7)), rng)
        mu = tm.gen_measure(sp, 4, rng)
        x0 = int(rng.integers(len(sp)))
        assert distance_to_dirac(mu, x0) == measure_distance(mu, tm.dirac(sp, x0))


def test_distance_to_diracs_examples(worked):
    sp, _, m2 = worked
    assert distance_to_diracs(tm.dirac(sp, "a")) == 0.0
    assert distance_to_diracs(m2) == 2.0
    rng = np.random.default_rng(12)
    for _ in range(100):
        space = tm.gen_space(4, rng)
        mu = tm.gen_measure(space, 4, rng)
        assert distance_to_diracs(mu) <= space.truncation_diam


def test_oracle_agrees_on_random_instances():
    rng = np.random.default_rng(13)
    for _ in range(150):
        sp = tm.gen_space(int(rng.integers(3, 7)), rng)
        m1 = tm.gen_measure(sp, 4, rng)
        m2 = tm.gen_measure(sp, 4, rng)
        assert bottleneck_distance(m1, m2) == bottleneck_distance_bruteforce(m1, m2)


def test_oracle_size_guard():
    sp = tm.gen_space(6, np.random.default_rng(0))
    m1 = tm.gen_measure(sp, 6, np.random.default_rng(1), min_support=5)
    m2 = tm.gen_measure(sp, 6, np.random.default_rng(2), min_support=5)
    assert m1.support_size * m2.support_size > ORACLE_CELL_LIMIT
    with pytest.raises(ValueError):
        bottleneck_distance_bruteforce(m1, m2)


def test_pattern_monotonicity_sample(worked):
    # adding a pair to a feasible pattern never decreases its worst cost
    _, m1, m2 = worked
    cells = list(itertools.product(range(2), range(2)))
    for r in range(1, 5):
        for sub in itertools.combinations(cells, r):
            if not pattern_feasible(sub, m1, m2):
                continue
            base = max(cost(j, k, m1, m2) for j, k in sub)
            for extra in cells:
                if extra in sub:
                    continue
                grown = max(cost(j, k, m1, m2) for j, k in (*sub, extra))
                assert grown >= base


def test_symmetry_is_bitwise():
    rng = np.random.default_rng(14)
    for _ in range(300):
        sp = tm.gen_space(int(rng.integers(3, 7)), rng)
        m1 = tm.gen_measure(sp, 4, rng)
        m2 = tm.gen_measure(sp, 4, rng)
        assert measure_distance(m1, m2) == measure_distance(m2, m1)


def test_rho_zero_iff_structurally_equal():
    rng = np.random.default_rng(15)
    for _ in range(300):
        sp = tm.gen_space(4, rng)
        m1 = tm.gen_measure(sp, 4, rng)
        m2 = tm.gen_measure(sp, 4, rng)
        d = measure_distance(m1, m2)
        assert (d == 0.0) == (m1 == m2)


def test_triangle_inequality_sample():
    rng = np.random.default_rng(16)
    for _ in range(400):
        sp = tm.gen_space(int(rng.integers(3, 7)), rng)
        a, b, c = (tm.gen_measure(sp, 4, rng) for _ in range(3))
        assert measure_distance(a, c) <= (
            measure_distance(a, b) + measure_distance(b, c) + 1e-9
        )


def test_space_mismatch_rejected(worked):
    sp, m1, _ = worked
    other = tm.FiniteMetricSpace(["a", "b"], [[0, 2], [2, 0]])
    m_other = tm.dirac(other, "a")
    with pytest.raises(tm.SpaceMismatchError):
        bottleneck_distance(m1, m_other)
    with pytest.raises(tm.SpaceMismatchError):
        measure_distance(m1, m_other)


def test_coupling_validation_catches_violations(worked):
    _, m1, m2 = worked
    good = tm.couple_with_dirac(m1, "a")
    assert good.validate() is None
    # cap violation: pair weight above min of marginals
    bad = Coupling(good.mu1, good.mu2, ((0, 0, 0.0), (1, 0, -0.5)))
    assert "marginal" in bad.validate()
    # missing row
    bad = Coupling(good.mu1, good.mu2, ((0, 0, 0.0),))
    assert "row marginal" in bad.validate()
    # duplicate pair
    bad = Coupling(good.mu1, good.mu2, ((0, 0, 0.0), (0, 0, 0.0), (1, 0, -1.0)))
    assert "duplicate" in bad.validate()


def test_induced_pair_weights_are_normalized(worked):
    _, m1, m2 = worked
    c = tm.couple_with_dirac(m1, "b")
    assert max(g for _, _, g in c.pairs) == 0.0
    assert c.validate() is None
