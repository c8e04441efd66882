import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dcsbm import (
    CommunityAssignment,
    ConnectivityMatrix,
    DegreeParams,
    InvalidMatrix,
    InvalidSystem,
    ExpectedMatrix,
    MatrixKind,
    ParameterSystem,
    assignment_from_labels,
    check_min_size,
    community_sizes,
    expected_adjacency,
    offdiag_project,
    system,
    validate_system,
)
from dcsbm.random_systems import random_system


def example1_first():
    return system([1, 2, 2], [2.0, 2.0, 2.0], [[0.05, 0.025], [0.025, 0.05]])


def brute_force_expected(sys):
    # triple-loop oracle, no vectorization shared with the implementation
    n, out = sys.n, np.zeros((sys.n, sys.n))
    for i in range(n):
        for j in range(n):
            out[i, j] = sys.thetas[i] * sys.thetas[j] * sys.B[sys.labels[i] - 1, sys.labels[j] - 1]
    return out


def test_expected_adjacency_example1_printed_values():
    delta = expected_adjacency(example1_first()).m
    target = np.array([[0.2, 0.1, 0.1], [0.1, 0.2, 0.2], [0.1, 0.2, 0.2]])
    assert np.abs(delta - target).max() <= 1e-15


def test_expected_adjacency_single_node():
    delta = expected_adjacency(system([1], [1.0], [[0.37]]))
    assert delta.m.shape == (1, 1)
    assert delta.m[0, 0] == 0.37


def test_expected_adjacency_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(20):
        s = random_system(rng, 6, 2, min_size=1)
        got = expected_adjacency(s).m
        assert np.abs(got - brute_force_expected(s)).max() <= 1e-14


def test_expected_adjacency_exactly_symmetric():
    rng = np.random.default_rng(3)
    for _ in range(20):
        K = int(rng.integers(1, 5))
        s = random_system(rng, int(rng.integers(K, 30)), K)
        m = expected_adjacency(s).m
        assert np.array_equal(m, m.T)


def test_expected_adjacency_has_rank_k():
    rng = np.random.default_rng(5)
    for _ in range(10):
        K = int(rng.integers(1, 5))
        s = random_system(rng, 20, K, min_size=1)
        sv = np.linalg.svd(expected_adjacency(s).m, compute_uv=False)
        assert sv[K - 1] > 1e-10 * sv[0]
        if K < 20:
            assert sv[K] <= 1e-10 * sv[0]


def test_offdiag_project_zeroes_diagonal_only():
    delta = expected_adjacency(example1_first())
    pd = offdiag_project(delta)
    assert pd.kind is MatrixKind.OFFDIAG
    assert np.all(np.diag(pd.m) == 0.0)
    off = ~np.eye(3, dtype=bool)
    assert np.array_equal(pd.m[off], delta.m[off])


def test_offdiag_project_idempotent_and_linear():
    rng = np.random.default_rng(17)
    x = rng.normal(size=(5, 5))
    x = x + x.T
    y = rng.normal(size=(5, 5))
    y = y + y.T
    px = offdiag_project(ExpectedMatrix(x, MatrixKind.FULL)).m
    assert np.array_equal(offdiag_project(ExpectedMatrix(px, MatrixKind.OFFDIAG)).m, px)
    py = offdiag_project(ExpectedMatrix(y, MatrixKind.FULL)).m
    combo = offdiag_project(ExpectedMatrix(2.0 * x + 0.5 * y, MatrixKind.FULL)).m
    assert np.array_equal(combo, 2.0 * px + 0.5 * py)


def test_offdiag_project_zero_matrix_fixed_point():
    z = ExpectedMatrix(np.zeros((3, 3)), MatrixKind.FULL)
    assert np.array_equal(offdiag_project(z).m, np.zeros((3, 3)))


def test_expected_matrix_rejects_asymmetry_and_nonzero_diag():
    with pytest.raises(InvalidMatrix):
        ExpectedMatrix(np.array([[0.0, 1.0], [0.9, 0.0]]), MatrixKind.FULL)
    with pytest.raises(InvalidMatrix):
        ExpectedMatrix(np.array([[1.0, 0.5], [0.5, 0.0]]), MatrixKind.OFFDIAG)


def test_community_sizes_fixtures():
    assert community_sizes(CommunityAssignment([1, 2, 2], 2)).tolist() == [1, 2]
    assert community_sizes(CommunityAssignment([1, 1, 2, 2], 2)).tolist() == [2, 2]
    assert community_sizes(CommunityAssignment([1] * 5, 1)).tolist() == [5]


def test_check_min_size_conditions():
    ex2 = CommunityAssignment([1, 1, 2, 2], 2)
    assert check_min_size(ex2, 2)
    assert not check_min_size(ex2, 3)
    ex1 = CommunityAssignment([1, 2, 2], 2)
    assert not check_min_size(ex1, 2)
    balanced = CommunityAssignment([1, 1, 1, 2, 2, 2, 3, 3, 3], 3)
    assert check_min_size(balanced, 3)
    with pytest.raises(ValueError):
        check_min_size(ex1, 0)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=30))
def test_check_min_size_one_always_holds(raw):
    z, _ = assignment_from_labels(raw)
    assert check_min_size(z, 1)
    assert community_sizes(z).sum() == z.n


def test_assignment_from_labels_remaps_and_records():
    z, mapping = assignment_from_labels(["b", "a", "b", "c"])
    assert z.labels.tolist() == [1, 2, 1, 3]
    assert mapping == {"b": 1, "a": 2, "c": 3}
    z2, mapping2 = assignment_from_labels([1, 2, 2])
    assert mapping2 == {1: 1, 2: 2}
    z3, mapping3 = assignment_from_labels([3, 7, 7])
    assert z3.labels.tolist() == [1, 2, 2]
    assert mapping3 == {3: 1, 7: 2}


def test_labels_must_be_contiguous_range():
    with pytest.raises(InvalidSystem):
        CommunityAssignment([0, 1], 2)
    with pytest.raises(InvalidSystem):
        CommunityAssignment([1, 3], 2)


def test_dimension_mismatches_rejected():
    with pytest.raises(InvalidSystem):
        system([1, 2], [1.0], [[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(InvalidSystem):
        system([1, 1], [1.0, 1.0], [[1.0, 0.0], [0.0, 1.0]])


def test_validate_system_reports():
    ex3_second = system([1, 2, 2], [1.0, 1.0, 1.0], [[0.2, 0.0], [0.0, 0.1]])
    assert validate_system(ex3_second).valid

    bad_theta = system([1, 2, 2], [1.0, 0.0, 1.0], [[0.2, 0.0], [0.0, 0.1]])
    report = validate_system(bad_theta)
    assert not report.valid
    assert any("degree parameter must be positive" in v for v in report.violations)

    rank_one = system([1, 2], [1.0, 1.0], [[1.0, 1.0], [1.0, 1.0]])
    report = validate_system(rank_one)
    assert not report.valid
    assert any("rank deficient" in v for v in report.violations)

    asym = system([1, 2], [1.0, 1.0], [[1.0, 0.3], [0.2, 1.0]])
    assert any("symmetric" in v for v in validate_system(asym).violations)

    hole = ParameterSystem(
        CommunityAssignment([1, 1], 2),
        DegreeParams([1.0, 1.0]),
        ConnectivityMatrix(np.eye(2)),
    )
    assert any("no members in community 2" in v for v in validate_system(hole).violations)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_membership_matrix_one_hot(seed):
    rng = np.random.default_rng(seed)
    K = int(rng.integers(1, 6))
    n = int(rng.integers(K, 40))
    s = random_system(rng, n, K)
    Z = s.z.membership_matrix()
    assert Z.shape == (n, K)
    assert np.array_equal(Z.sum(axis=1), np.ones(n))
    assert np.array_equal(Z.argmax(axis=1) + 1, s.labels)
