import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdesigns import families, hamming, symmetric
from graphdesigns.errors import BudgetExceeded, DesignError
from graphdesigns.search import (SearchProblem, canonical_representative, enumerate_minimal, mask_to_set,
                                 minimal_sets, search_smallest, set_to_mask, subset_matrix, union_closure_audit)


def _brute_smallest(n, tester, max_size):
    for size in range(1, max_size + 1):
        found = [c for c in itertools.combinations(range(n), size) if tester(c)]
        if found:
            return found
    return []


def _sum_zero_problem(values, **kw):
    return SearchProblem(tester=lambda d: sum(values[v] for v in d) == 0, n=len(values), **kw)


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=9))
@settings(max_examples=60, deadline=None)
def test_smallest_matches_brute_force(values):
    prob = _sum_zero_problem(values)
    res = search_smallest(prob, len(values))
    assert res.found == _brute_smallest(len(values), prob.tester, len(values))
    assert res.exhausted


@pytest.mark.parametrize("n, q, upto", [(3, 2, 1), (3, 2, 2), (2, 3, 1), (4, 2, 2), (2, 4, 1)])
def test_pruned_search_matches_unpruned(n, q, upto):
    g = hamming.build_hamming(n, q)
    pruned = families.search_problem(g, "laplacian", upto, hints=False)
    plain = families.search_problem(g, "laplacian", upto, hints=False)
    plain.incremental = None
    a = search_smallest(pruned, g.n)
    b = search_smallest(plain, g.n)
    assert a.found == b.found and a.found
    assert a.nodes_expanded <= b.nodes_expanded


def test_gram_pruning_matches_unpruned():
    g = symmetric.cayley_graph(4, [symmetric.transpositions(4)])
    pruned = families.search_problem(g, "first-part", 1)
    plain = families.search_problem(g, "first-part", 1)
    plain.incremental = None
    a = search_smallest(pruned, 8)
    b = search_smallest(plain, 8)
    assert a.found == b.found and len(a.found[0]) == 4
    perms = symmetric.all_perms(4)
    assert all(symmetric.t_wise_uniform_check([perms[v] for v in d], 1, 4) for d in a.found)
    idx = symmetric.perm_index(4)
    v4 = tuple(sorted(idx[s] for s in symmetric.perms_from_text(symmetric.S4_V, 4)))
    assert v4 in a.found


def test_cube_smallest_design():
    g = hamming.build_hamming(3, 2)
    res = search_smallest(families.search_problem(g, "laplacian", 2), 8)
    assert res.found == [(0, 3, 5, 6), (1, 2, 4, 7)]
    assert [r.size for r in res.sizes] == [4]


def test_hints_skip_impossible_sizes():
    g = hamming.build_hamming(4, 2)
    prob = families.search_problem(g, "random-walk", 3)
    assert prob.modulus == 4
    res = search_smallest(prob, 16)
    assert len(res.found) == 16 and all(len(d) == 4 for d in res.found)


def test_symmetry_reduces_to_orbit_representatives():
    g = hamming.build_hamming(3, 2)
    full = search_smallest(families.search_problem(g, "laplacian", 1), 8)
    sym = search_smallest(families.search_problem(g, "laplacian", 1, symmetry=True), 8)
    group = hamming.translation_group(3, 2)
    orbits = {canonical_representative(d, group) for d in full.found}
    assert sorted(orbits) == sym.found
    assert all(0 in d for d in sym.found)


def test_symmetry_group_must_be_transitive():
    with pytest.raises(DesignError):
        SearchProblem(tester=lambda d: True, n=3, symmetry_group=[(0, 1, 2), (0, 2, 1)])


@pytest.mark.parametrize("workers", [1, 2, 3])
def test_worker_count_does_not_change_output(workers):
    g = hamming.build_hamming(4, 2)
    ref = search_smallest(families.search_problem(g, "laplacian", 2, budget=50), 16)
    res = search_smallest(families.search_problem(g, "laplacian", 2, budget=50), 16, workers=workers)
    assert res.summary() == ref.summary() and res.found == ref.found


def test_budget_is_reported():
    g = hamming.build_hamming(4, 2)
    prob = families.search_problem(g, "laplacian", 2, budget=5, hints=False)
    res = search_smallest(prob, 16)
    assert not res.exhausted and not res.found
    with pytest.raises(BudgetExceeded) as exc:
        search_smallest(prob, 16, strict=True)
    assert exc.value.used > 0


def test_seed_certifies_existence_under_budget():
    g = hamming.build_hamming(7, 2)
    seed = [hamming.word_to_index(w, 2) for w in hamming.hadamard_to_design(hamming.sylvester(3))]
    prob = families.search_problem(g, "laplacian", 2, budget=2000, symmetry=True, seeds=[seed])
    res = search_smallest(prob, 8)
    assert res.sizes[0].size == 4 and res.sizes[0].exhausted and res.sizes[0].found == 0
    assert res.found == [tuple(sorted(seed))] and not res.exhausted


def test_bad_seed_is_ignored():
    prob = _sum_zero_problem([1, 1, -1], seeds=[(0, 1)])
    assert search_smallest(prob, 3).found == [(0, 2), (1, 2)]


def test_minimal_enumeration_and_union_closure():
    g = hamming.build_hamming(2, 2)
    prob = families.search_problem(g, "reverse", 1, hints=False)
    res = enumerate_minimal(prob, 4)
    expected = hamming.minimal_reverse_enumeration(2, 2)
    assert res.found == expected.minimal
    assert union_closure_audit(res.found, res.all_designs)
    with pytest.raises(BudgetExceeded):
        enumerate_minimal(families.search_problem(g, "reverse", 1, hints=False, budget=2), 4)


def test_minimal_sets():
    assert minimal_sets([(0, 1, 2), (0, 1), (2,), (1, 2)]) == [(0, 1), (2,)]
    assert not union_closure_audit([(0, 1)], [(0, 1, 2)])


@given(st.sets(st.integers(0, 20)))
def test_mask_round_trip(s):
    assert set(mask_to_set(set_to_mask(s))) == s


def test_subset_matrix_bits():
    rows = subset_matrix(3)
    assert rows.shape == (7, 3)
    assert rows[4].tolist() == [1, 0, 1]
    assert np.array_equal(rows[2:4], subset_matrix(3, 3, 5))
