from itertools import combinations

import pytest

from locality_lab.core import verify
from locality_lab.numerics import derived_lower_bound, log_star
from locality_lab.search import SearchExhausted, enumerate_valid, min_colours, sample_valid
from locality_lab.speedup import iterate_speedup
from oracles import brute_enumerate_valid, brute_min_colours, brute_valid

# min colours for k = 2, 3 and n = 1..8, from the layered brute-force oracle in
# oracles.py. For k = 3 the oracle is run up to n = 6 plus the c = 2 case at
# n = 7; n = 8 follows because a valid table over 1..8 restricts to 1..7.
K2 = {1: 1, 2: 1, 3: 2, 4: 2, 5: 3, 6: 3, 7: 3, 8: 3}
K3 = {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 2, 7: 3, 8: 3}


@pytest.mark.parametrize("n", range(1, 9))
def test_unary_needs_n_colours(n):
    r = min_colours(n, 1)
    assert r.min_colours == n
    assert verify(r.witness).is_valid


def test_examples():
    assert min_colours(5, 1, 5).min_colours == 5
    assert min_colours(2, 2).min_colours == 1
    assert min_colours(4, 2).min_colours == 2


def test_n4_k2_brute_force():
    # every 2-colouring of the six pairs; at least one valid, none with one colour
    assert any(True for _ in brute_enumerate_valid(4, 2, 2))
    assert not brute_enumerate_valid(4, 2, 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_k2_values(n):
    assert min_colours(n, 2).min_colours == K2[n]


@pytest.mark.parametrize("n", range(1, 9))
def test_k3_values(n):
    assert min_colours(n, 3).min_colours == K3[n]


@pytest.mark.parametrize("n", range(3, 7))
def test_k3_layered_oracle(n):
    assert brute_min_colours(n, 3, 3) == K3[n]


def test_k3_two_colours_fail_at_seven():
    assert brute_min_colours(7, 3, 2) is None
    w = min_colours(7, 3).witness
    assert w.c == 3
    assert brute_valid(w.as_dict(), 7, 3)


def test_exhaustion_report():
    # c_max below the lower bound: nothing to search
    with pytest.raises(SearchExhausted) as info:
        min_colours(5, 1, 3)
    assert info.value.c_max == 3
    assert info.value.nodes_explored == 0
    with pytest.raises(SearchExhausted) as info:
        min_colours(8, 3, 2)
    assert info.value.nodes_explored > 0


def test_arity_beyond_n():
    r = min_colours(2, 3)
    assert r.min_colours == 1 and len(r.witness) == 0


def test_witness_and_lower_bound_on_grid():
    for n in range(1, 9):
        for k in range(1, 4):
            r = min_colours(n, k)
            assert verify(r.witness).is_valid
            assert r.witness.c == r.min_colours
            assert r.min_colours >= r.derived_lower_bound == derived_lower_bound(n, k)
            if r.min_colours <= 3:
                assert k + 1 >= log_star(n)
            trace = iterate_speedup(r.witness)
            assert trace.base.holds


def test_monotonicity():
    grid = {(n, k): min_colours(n, k).min_colours for n in range(1, 9) for k in range(1, 4)}
    for n in range(1, 9):
        for k in range(1, 3):
            assert grid[n, k + 1] <= grid[n, k]
    for k in range(1, 4):
        for n in range(1, 8):
            assert grid[n, k] <= grid[n + 1, k]


def test_deterministic():
    a = min_colours(8, 2)
    b = min_colours(8, 2)
    assert a.witness == b.witness and a.nodes_explored == b.nodes_explored


def test_canonical_witness_starts_with_one():
    for n in range(3, 8):
        w = min_colours(n, 2).witness
        seen = 0
        for v in w.table:
            assert v <= seen + 1
            seen = max(seen, v)


def test_enumerate_examples():
    assert list(enumerate_valid(3, 2, 1)) == []
    tables = [f.table for f in enumerate_valid(2, 1, 2)]
    assert tables == [(1, 2), (2, 1)]


@pytest.mark.parametrize("n,k,c", [
    (3, 2, 2), (4, 2, 2), (4, 2, 3), (5, 2, 2), (5, 2, 3),
    (4, 3, 2), (4, 3, 3), (5, 3, 2), (5, 3, 3), (4, 1, 4), (5, 4, 2),
])
def test_enumerate_matches_brute_force(n, k, c):
    assert [f.table for f in enumerate_valid(n, k, c)] == brute_enumerate_valid(n, k, c)


def test_sampling_is_seeded_and_valid():
    a = [f.table for f in sample_valid(7, 3, 3, 10, seed=5)]
    b = [f.table for f in sample_valid(7, 3, 3, 10, seed=5)]
    assert a == b and len(a) == 10
    keys = list(combinations(range(1, 8), 3))
    for table in a:
        assert brute_valid(dict(zip(keys, table)), 7, 3)


def test_sampling_empty_space():
    assert list(sample_valid(5, 2, 2, 3)) == []
