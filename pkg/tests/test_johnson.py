import itertools
from collections import Counter
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdesigns import johnson as jn
from graphdesigns.errors import DesignError

PARAMS = [(2, 1), (4, 1), (4, 2), (5, 2), (6, 2), (6, 3), (7, 2), (7, 3), (8, 3), (8, 4)]


def _float_design(n, k, design, selected, tol=1e-9):
    """Oracle: dense eigenvectors of J(n, k) grouped by rounded eigenvalue."""
    g = jn.build_johnson(n, k)
    vals, vecs = np.linalg.eigh(g.laplacian_matrix().astype(float))
    lams = [t * (n + 1 - t) for t in selected]
    cols = vecs[:, np.isin(np.round(vals).astype(int), lams)]
    idx = [jn.colex_rank(s) for s in design]
    return bool(np.all(np.abs(cols[idx].mean(axis=0) - cols.mean(axis=0)) <= tol))


@given(st.integers(1, 9), st.data())
def test_colex_rank_round_trip(n, data):
    k = data.draw(st.integers(1, n))
    subsets = jn.k_subsets(n, k)
    assert [jn.colex_rank(s) for s in subsets] == list(range(comb(n, k)))
    r = data.draw(st.integers(0, comb(n, k) - 1))
    assert jn.colex_rank(jn.colex_unrank(r, k)) == r


def test_colex_order_examples():
    assert jn.k_subsets(4, 2) == [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]
    assert jn.parse_subset("1,3,4") == (1, 3, 4) == jn.parse_subset("431")
    assert jn.format_subset((1, 10)) == "1,10"
    assert jn.complement((1, 3), 5) == (2, 4, 5)


@pytest.mark.parametrize("n, k", [p for p in PARAMS if 2 * p[1] <= p[0]])
def test_graph_is_intersection_k_minus_one(n, k):
    g = jn.build_johnson(n, k)
    verts = jn.k_subsets(n, k)
    a = np.array([[int(len(set(s) & set(t)) == k - 1) for t in verts] for s in verts])
    assert (g.adjacency_matrix() == a).all()


@pytest.mark.parametrize("n, k", [p for p in PARAMS if 2 * p[1] <= p[0]])
def test_spectrum_matches_dense(n, k):
    s = jn.johnson_spectrum(n, k)
    vals = np.round(np.linalg.eigvalsh(jn.build_johnson(n, k).laplacian_matrix().astype(float))).astype(int)
    assert Counter(vals.tolist()) == {lam: mu for _, lam, mu in s.entries}
    for t, lam, _ in s.entries:
        assert lam == k * (n - k) - jn.eberlein_e1(n, k, t)


def test_j42_spectrum():
    assert [(lam, mu) for _, lam, mu in jn.johnson_spectrum(4, 2).entries] == [(0, 1), (4, 3), (6, 2)]


def test_build_rejects_large_k():
    with pytest.raises(DesignError):
        jn.build_johnson(5, 3)


def test_fano_plane():
    assert jn.block_design_check(7, 3, jn.FANO_PLANE, 2) == (True, 1)
    assert jn.block_design_check(7, 3, jn.FANO_PLANE, 1) == (True, 3)
    cert = jn.is_phi_design_johnson(7, 3, jn.FANO_PLANE, [1, 2])
    assert cert.verdict
    assert not jn.is_phi_design_johnson(7, 3, jn.FANO_PLANE, [3]).verdict


def test_complements_use_the_smaller_graph():
    blocks = [jn.complement(b, 7) for b in jn.FANO_PLANE]
    cert = jn.is_phi_design_johnson(7, 4, blocks, [1, 2])
    assert cert.verdict and cert.fact("relabeled") == "complements in J(7,3)"
    assert jn.block_design_check(7, 4, blocks, 2) == (True, 2)


@given(st.sampled_from([(4, 2), (5, 2), (6, 3), (6, 2)]), st.data())
@settings(max_examples=80, deadline=None)
def test_exact_test_matches_float(nk, data):
    n, k = nk
    design = data.draw(st.sets(st.sampled_from(jn.k_subsets(n, k)), min_size=1))
    selected = data.draw(st.sets(st.integers(1, k), min_size=1))
    assert jn.is_phi_design_johnson(n, k, design, selected).verdict == _float_design(n, k, design, selected)


@given(st.sampled_from([(5, 2), (6, 3), (7, 3)]), st.integers(1, 3), st.data())
@settings(max_examples=60, deadline=None)
def test_block_design_matches_count(nk, t, data):
    n, k = nk
    t = min(t, k)
    design = data.draw(st.sets(st.sampled_from(jn.k_subsets(n, k)), min_size=1))
    counts = {sum(1 for b in design if set(T) <= set(b)) for T in itertools.combinations(range(1, n + 1), t)}
    ok, lam = jn.block_design_check(n, k, design, t)
    assert ok == (len(counts) == 1)
    if ok:
        assert lam == counts.pop()


@pytest.mark.parametrize("n, k, t", [(4, 2, 1), (4, 2, 2), (5, 2, 1), (5, 2, 2)])
def test_t_designs_are_graphical_designs(n, k, t):
    rep = jn.johnson_equivalence(n, k, t)
    assert rep.holds and rep.subsets == 2 ** comb(n, k) - 1


def test_stars_up_to_56_vertices():
    count = 0
    for n in range(2, 9):
        for k in range(1, n + 1):
            if comb(n, k) > 56:
                continue
            for t in range(k + 1):
                for T in itertools.combinations(range(1, n + 1), t):
                    assert jn.star_check(n, k, T).verdict
                    count += 1
    assert count > 500


def test_star_is_not_a_design_one_level_down():
    # the star of a point has first-eigenspace component
    assert not jn.is_phi_design_johnson(6, 3, jn.star(6, 3, (1,)), [1]).verdict
    assert len(jn.star(6, 3, (1, 2))) == 4


@pytest.mark.parametrize("n, k", [(4, 2), (5, 2)])
def test_minimal_reverse_designs(n, k):
    rep = jn.minimal_reverse_enumeration_johnson(n, k)
    assert rep.holds and len(rep.minimal) == 2 * n


@pytest.mark.parametrize("n, k, t", [(5, 2, 1), (6, 3, 2)])
def test_incidence_matrix(n, k, t):
    b = jn.incidence_b(n, k, t)
    assert b.shape == (comb(n, k), comb(n, t))
    assert (b.sum(axis=1) == comb(k, t)).all()
    assert (b.sum(axis=0) == comb(n - t, k - t)).all()


def test_validation():
    with pytest.raises(DesignError):
        jn.is_phi_design_johnson(5, 2, [(1, 2), (1, 2)], [1])
    with pytest.raises(DesignError):
        jn.is_phi_design_johnson(5, 2, [(1, 6)], [1])
    with pytest.raises(DesignError):
        jn.is_phi_design_johnson(5, 2, [(1, 2)], [3])
    with pytest.raises(DesignError):
        jn.is_phi_design_johnson(5, 2, [], [1])
