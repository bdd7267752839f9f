import itertools
import math

import numpy as np
import pytest

from medianlattice import (
    BudgetExceededError,
    cardinality_bound,
    enumerate_index_set,
    frequency_weight,
    linear_frequency_weight,
)

from conftest import make_params


def brute_index_set(params, L):
    """Box scan straight from the definition: linear weight strictly below L."""
    if L <= 1.0:
        return []
    box = int(math.ceil(L)) + 1
    members = []
    for h in itertools.product(range(-box, box + 1), repeat=params.d):
        if linear_frequency_weight(h, params) < L:
            members.append(h)
    return sorted(members)


def test_one_dim_example():
    A = enumerate_index_set(make_params(), 2.5)
    assert [tuple(r) for r in A.members] == [(-2,), (-1,), (0,), (1,), (2,)]
    assert len(A) == 5


def test_two_dim_example():
    A = enumerate_index_set(make_params(d=2, gamma=(1.0, 1.0)), 2.5)
    got = {tuple(r) for r in A.members}
    assert len(A) == 21
    assert (2, 1) in got and (-1, 2) in got and (1, -2) in got
    assert (2, 2) not in got and (3, 0) not in got


def test_empty_and_singleton_thresholds():
    p = make_params()
    assert len(enumerate_index_set(p, 1.0)) == 0
    assert len(enumerate_index_set(p, 0.5)) == 0
    assert len(enumerate_index_set(p, 0.0)) == 0
    assert len(enumerate_index_set(p, -3.0)) == 0
    # with gamma = 1 the frequencies 0 and +-1 all carry weight exactly 1,
    # so any threshold above 1 admits all three at once
    A = enumerate_index_set(p, 1.0 + 1e-9)
    assert [tuple(r) for r in A.members] == [(-1,), (0,), (1,)]
    # a singleton {0} needs a weight gap, i.e. gamma < 1
    A = enumerate_index_set(make_params(gamma=0.25), 1.5)
    assert [tuple(r) for r in A.members] == [(0,)]


def test_membership_is_strict():
    # h = 3 has linear weight exactly 3 and must be excluded at L = 3
    A = enumerate_index_set(make_params(), 3.0)
    assert (3,) not in A
    assert (-2,) in A and (2,) in A


def test_boundary_tolerance_is_conservative():
    p = make_params()
    # within the log-space tolerance of the threshold: treated as a tie, excluded
    A = enumerate_index_set(p, 2.0 * (1.0 + 1e-14))
    assert [tuple(r) for r in A.members] == [(-1,), (0,), (1,)]
    # clearly above the threshold: included
    A = enumerate_index_set(p, 2.0 * (1.0 + 1e-9))
    assert (2,) in A


@pytest.mark.parametrize("d,gamma,alpha,L", [
    (1, (1.0,), 1.0, 7.3),
    (2, (1.0, 0.5), 1.0, 4.7),
    (2, (0.7, 0.2), 0.75, 6.1),
    (3, (1.0, 0.5, 0.25), 1.5, 3.9),
    (3, (0.3, 0.3, 0.3), 1.0, 9.4),
])
def test_matches_box_scan(d, gamma, alpha, L):
    p = make_params(d=d, alpha=alpha, gamma=gamma)
    A = enumerate_index_set(p, L)
    assert [tuple(r) for r in A.members] == brute_index_set(p, L)


def test_symmetry_and_downward_closure(rng):
    p = make_params(d=2, alpha=1.0, gamma=(0.8, 0.4))
    A = enumerate_index_set(p, 11.0)
    got = {tuple(r) for r in A.members}
    for h in got:
        assert tuple(-v for v in h) in got
        # shrinking any coordinate toward zero cannot leave the set
        for j in range(2):
            if h[j] != 0:
                closer = list(h)
                closer[j] -= int(np.sign(h[j]))
                assert tuple(closer) in got


def test_members_in_lexicographic_order():
    A = enumerate_index_set(make_params(d=2, gamma=(1.0, 1.0)), 4.5)
    rows = [tuple(r) for r in A.members]
    assert rows == sorted(rows)


def test_r_values_match_members():
    p = make_params(d=2, alpha=1.5, gamma=(0.9, 0.5))
    A = enumerate_index_set(p, 5.0)
    expected = [frequency_weight(tuple(r), p) for r in A.members]
    np.testing.assert_allclose(A.r_values, expected, rtol=1e-13)


def test_lookup_helpers():
    A = enumerate_index_set(make_params(d=2, gamma=(1.0, 1.0)), 2.5)
    assert (1, 1) in A
    assert (5, 5) not in A
    i = A.position((1, 1))
    assert tuple(A.members[i]) == (1, 1)
    with pytest.raises(KeyError):
        A.position((9, 9))
    mask = A.contains_array([[0, 0], [2, 2], [0, 1]])
    assert mask.tolist() == [True, False, True]
    assert tuple(A.members[A.zero_position]) == (0, 0)
    assert A.max_projection() == 2


def test_empty_set_helpers():
    A = enumerate_index_set(make_params(), 0.5)
    assert len(A) == 0
    assert A.zero_position is None
    assert A.max_projection() == 0
    assert not A.contains_array([[0]]).any()


def test_to_csv_roundtrip(tmp_path):
    A = enumerate_index_set(make_params(d=2, alpha=1.0, gamma=(1.0, 0.5)), 3.5)
    path = tmp_path / "index.csv"
    A.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0].split(",") == ["h_1", "h_2", "r_value"]
    assert len(lines) == len(A) + 1
    for line, row, r in zip(lines[1:], A.members, A.r_values):
        f1, f2, fr = line.split(",")
        assert (int(f1), int(f2)) == tuple(row)
        assert float(fr) == float(r)


def test_cardinality_bound_value():
    # N2 = e makes the denominator 1 + tau exactly
    assert cardinality_bound(97, 1.0, math.e) == pytest.approx(49.0)
    with pytest.raises(ValueError):
        cardinality_bound(97, 1.0, 1.0)
    with pytest.raises(ValueError):
        cardinality_bound(97, 0.0, 2.0)


def test_enumeration_budget_guard():
    with pytest.raises(BudgetExceededError):
        enumerate_index_set(make_params(), 1e12)
