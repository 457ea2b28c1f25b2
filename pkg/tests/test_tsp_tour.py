import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttpk.errors import CapabilityError, DomainError
from ttpk.instance import generate
from ttpk.tsp_tour import (_exact_matching, christofides, exact_tour, minimum_spanning_tree,
                           one_tree_bound, tour_length)


def brute_force_tour(m):
    """Minimum over all (n-1)! orders that fix vertex 0."""
    return min(tour_length(m, (0,) + p) for p in itertools.permutations(range(1, m.n)))


def bitmask_matching(m, odd):
    """Exact minimum-weight perfect matching by DP over subsets."""
    odd = list(odd)
    memo = {}

    def best(mask):
        if mask == 0:
            return 0
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        val = min(int(m.scaled[odd[i], odd[j]]) + best(rest ^ (1 << j))
                  for j in range(len(odd)) if (rest >> j) & 1)
        memo[mask] = val
        return val

    return best((1 << len(odd)) - 1)


def test_four_team_tour_length(four):
    assert tour_length(four, (0, 2, 1, 3)) == 8


def test_four_team_exact_matches_three_tours(four):
    tours = [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)]
    assert exact_tour(four).length == min(tour_length(four, t) for t in tours) == 6


def test_tour_length_rejects_non_permutation(four):
    with pytest.raises(DomainError):
        tour_length(four, (0, 1, 1, 3))


def test_reverse_and_rotation_invariant():
    m = generate("euclidean-random", 8, seed=2)
    order = (3, 1, 4, 0, 5, 7, 2, 6)
    base = tour_length(m, order)
    assert tour_length(m, order[::-1]) == base
    assert tour_length(m, order[3:] + order[:3]) == base


@pytest.mark.parametrize("n", [4, 6, 10, 20])
def test_unit_tours_have_length_n(n):
    m = generate("unit", n)
    assert christofides(m).length == n
    if n <= 10:
        assert exact_tour(m).length == n


def test_circle_tour_is_circumference():
    assert christofides(generate("circle", 8)).length == 8


def test_exact_tour_limit():
    with pytest.raises(CapabilityError):
        exact_tour(generate("unit", 18), limit=16)


def test_christofides_order_is_permutation():
    t = christofides(generate("euclidean-random", 14, seed=4))
    assert sorted(t.order) == list(range(14))
    assert t.order[0] == 0


def test_euclidean_twelve_seed_three():
    m = generate("euclidean-random", 12, seed=3)
    assert christofides(m).length <= Fraction(3, 2) * exact_tour(m).length


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 4).map(lambda x: 2 * x), seed=st.integers(0, 10_000))
def test_held_karp_matches_brute_force(n, seed):
    m = generate("euclidean-random", n, seed)
    t = exact_tour(m)
    assert t.length == tour_length(m, t.order) == brute_force_tour(m)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 7).map(lambda x: 2 * x), seed=st.integers(0, 10_000))
def test_matching_agrees_with_bitmask_dp(n, seed):
    m = generate("euclidean-random", n, seed)
    degree = [0] * n
    for a, b in minimum_spanning_tree(m):
        degree[a] += 1
        degree[b] += 1
    odd = [v for v in range(n) if degree[v] % 2]
    pairs = _exact_matching(m, odd)
    assert sorted(v for p in pairs for v in p) == odd
    assert sum(int(m.scaled[a, b]) for a, b in pairs) == bitmask_matching(m, odd)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 6).map(lambda x: 2 * x), seed=st.integers(0, 10_000))
def test_tree_bounds_below_optimum(n, seed):
    m = generate("euclidean-random", n, seed)
    opt = exact_tour(m).length
    mst = sum(m.d(a, b) for a, b in minimum_spanning_tree(m))
    assert mst <= one_tree_bound(m) <= opt <= christofides(m).length
    assert christofides(m).length <= Fraction(3, 2) * opt


def test_greedy_matching_flag_still_gives_a_tour():
    m = generate("euclidean-random", 10, seed=5)
    t = christofides(m, exact_matching=False)
    assert sorted(t.order) == list(range(10))


def test_tour_json_is_one_based(four):
    js = exact_tour(four).to_json()
    assert sorted(js["order"]) == [1, 2, 3, 4]
    assert js["length"] == 6
