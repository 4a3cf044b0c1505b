import itertools
from collections import Counter
from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdesigns import symmetric as sy
from graphdesigns.errors import DesignError

perms4 = st.permutations(range(1, 5)).map(tuple)
perms6 = st.permutations(range(1, 7)).map(tuple)

# rows (4), (3,1), (2,2), (2,1,1), (1^4); columns e, (12), (12)(34), (123), (1234)
S4_TABLE = {
    (4,): (1, 1, 1, 1, 1),
    (3, 1): (3, 1, -1, 0, -1),
    (2, 2): (2, 0, 2, -1, 0),
    (2, 1, 1): (3, -1, -1, 0, 1),
    (1, 1, 1, 1): (1, -1, 1, 1, -1),
}
S4_CLASSES = ((1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,))


def _syt_count(p):
    """Oracle: count standard Young tableaux by removing corners recursively."""
    p = tuple(x for x in p if x)
    if sum(p) <= 1:
        return 1
    total = 0
    for i, x in enumerate(p):
        if i + 1 == len(p) or p[i + 1] < x:
            total += _syt_count(p[:i] + (x - 1,) + p[i + 1:])
    return total


@given(perms6, perms6, perms6)
def test_group_laws(a, b, c):
    assert sy.compose(sy.compose(a, b), c) == sy.compose(a, sy.compose(b, c))
    assert sy.compose(a, sy.inverse(a)) == sy.identity(6)
    assert sy.sign(sy.compose(a, b)) == sy.sign(a) * sy.sign(b)
    assert sy.cycle_type(sy.compose(sy.compose(b, a), sy.inverse(b))) == sy.cycle_type(a)


@given(perms6)
def test_format_parse_round_trip(a):
    assert sy.parse_perm(sy.format_perm(a), 6) == a
    assert sy.parse_perm("".join(map(str, a)), 6) == a


def test_parse_examples():
    assert sy.parse_perm("(123)", 3) == (2, 3, 1)
    assert sy.parse_perm("(1 2 3)", 4) == (2, 3, 1, 4)
    # right-to-left: (12)(23) sends 3 -> 2 -> 1
    assert sy.parse_perm("(12)(23)", 3) == (2, 3, 1)
    assert sy.parse_perm("e", 3) == (1, 2, 3)
    assert sy.format_perm((2, 1, 4, 3)) == "(12)(34)"
    for bad in ("(12", "(14)", "(11)", "132x", "12"):
        with pytest.raises((DesignError, ValueError)):
            sy.parse_perm(bad, 3)


@pytest.mark.parametrize("n", range(1, 9))
def test_partitions_and_dimensions(n):
    ps = sy.partitions(n)
    assert ps[0] == (n,) and ps[-1] == (1,) * n
    assert ps == sorted(ps, reverse=True)
    assert sum(sy.hook_dimension(p) ** 2 for p in ps) == factorial(n)
    for p in ps:
        assert sy.hook_dimension(p) == _syt_count(p)
    assert sum(sy.class_size(mu) for mu in ps) == factorial(n)


def test_s4_table():
    for p, row in S4_TABLE.items():
        assert tuple(sy.character(p, mu) for mu in S4_CLASSES) == row


@pytest.mark.parametrize("n", range(2, 8))
def test_character_orthogonality_and_known_rows(n):
    ps = sy.partitions(n)
    for p in ps:
        for q in ps:
            inner = sum(sy.class_size(mu) * sy.character(p, mu) * sy.character(q, mu) for mu in ps)
            assert inner == (factorial(n) if p == q else 0)
    for mu in ps:
        fixed = sum(1 for x in mu if x == 1)
        assert sy.character((n - 1, 1), mu) == fixed - 1
        assert sy.character((1,) * n, mu) == (-1) ** (n - len(mu))
        assert sy.character((n,), mu) == 1
    assert sy.character_table(n).orthogonality_audit()


CLASS_SETS = [(3, ["2,1"]), (3, ["3"]), (4, ["2,1,1"]), (4, ["3,1"]), (4, ["2,2", "4"]), (5, ["2,1,1,1"]),
              (5, ["3,1,1", "5"])]


@pytest.mark.parametrize("n, classes", CLASS_SETS)
def test_cayley_eigenvalues_match_dense(n, classes):
    g = sy.cayley_graph(n, classes)
    vals = np.round(np.linalg.eigvalsh(g.laplacian_matrix().astype(float)), 6)
    got = Counter(vals.tolist())
    want = Counter()
    for p in sy.partitions(n):
        want[round(float(sy.cayley_laplacian_eigenvalue(p, classes)), 6)] += sy.hook_dimension(p) ** 2
    assert got == want
    adj = Counter(np.round(np.linalg.eigvalsh(g.adjacency_matrix().astype(float)), 6).tolist())
    want_adj = Counter()
    for p in sy.partitions(n):
        want_adj[round(float(sy.cayley_eigenvalue(p, classes)), 6)] += sy.hook_dimension(p) ** 2
    assert adj == want_adj


@pytest.mark.parametrize("n", range(2, 9))
def test_content_formula(n):
    for p in sy.partitions(n):
        assert sy.transposition_adjacency_eigenvalue(p) == sy.cayley_eigenvalue(p, [sy.transpositions(n)])
        assert sy.transposition_laplacian_eigenvalue(p) == sy.cayley_laplacian_eigenvalue(p, [sy.transpositions(n)])


def test_s3_table_values():
    ps = sy.partitions(3)
    assert [sy.cayley_laplacian_eigenvalue(p, ["2,1"]) for p in ps] == [0, 3, 6]
    assert [sy.cayley_laplacian_eigenvalue(p, ["3"]) for p in ps] == [0, 3, 0]
    assert not sy.cayley_graph(3, ["3"]).is_connected()
    with pytest.raises(DesignError):
        sy.cayley_graph(3, ["1,1,1"])


def _isotypic_projector(n, p):
    perms = sy.all_perms(n)
    d = sy.hook_dimension(p)
    return np.array([[d * sy.character(p, sy.cycle_type(sy.compose(sy.inverse(s), t))) for t in perms]
                     for s in perms], dtype=float) / factorial(n)


@pytest.mark.parametrize("n", [3, 4])
def test_isotypic_projectors(n):
    mats = {p: _isotypic_projector(n, p) for p in sy.partitions(n)}
    for m in mats.values():
        assert np.allclose(m @ m, m)
    assert np.allclose(sum(mats.values()), np.identity(factorial(n)))


@given(st.sets(perms4, min_size=1))
@settings(max_examples=60, deadline=None)
def test_gram_sum_is_scaled_projection_norm(design):
    idx = [sy.perm_index(4)[s] for s in design]
    x = np.zeros(24)
    x[idx] = 1
    for p in sy.partitions(4):
        norm2 = x @ _isotypic_projector(4, p) @ x
        g = sy.gram_sum(design, p)
        assert g >= 0
        assert abs(g - norm2 * 24 / sy.hook_dimension(p)) < 1e-9
        assert sy.averages_phi_p(design, p) == (abs(norm2) < 1e-9)


def _brute_uniform(design, t, n):
    tuples = list(itertools.permutations(range(1, n + 1), t))
    for src in tuples:
        c = Counter(tuple(s[i - 1] for i in src) for s in design)
        if len(c) != len(tuples) or len(set(c.values())) != 1:
            return False
    return True


@given(st.sets(perms4, min_size=1), st.integers(1, 4))
@settings(max_examples=80, deadline=None)
def test_t_wise_uniform_matches_count(design, t):
    assert sy.t_wise_uniform_check(design, t, 4) == _brute_uniform(design, t, 4)


@given(st.sets(perms4, min_size=1), st.integers(1, 4))
@settings(max_examples=80, deadline=None)
def test_t_uniform_iff_first_part_design(design, t):
    parts = sy.first_part_partitions(4, t)
    assert sy.t_wise_uniform_check(design, t, 4) == all(sy.gram_sum(design, p) == 0 for p in parts)


def test_named_s4_sets():
    for items in (sy.S4_C, sy.S4_V, sy.S4_V_UNION):
        d = sy.perms_from_text(items, 4)
        assert sy.t_wise_uniform_check(d, 1, 4)
    a4 = sy.alternating_group(4)
    assert sy.t_wise_uniform_check(a4, 2, 4)
    assert sy.averaged_partitions(a4, 4) == [(3, 1), (2, 2), (2, 1, 1)]


@pytest.mark.parametrize("items", sy.S4_LAPLACIAN_ONLY)
def test_laplacian_only_sets(items):
    d = sy.perms_from_text(items, 4)
    assert len(d) == 12
    av = sy.averaged_partitions(d, 4)
    assert {(3, 1), (2, 2)} <= set(av) and (2, 1, 1) not in av
    assert not sy.t_wise_uniform_check(d, 2, 4)
    # the Laplacian order of the transposition graph puts (2,2) right after (3,1)
    lam = {p: sy.transposition_laplacian_eigenvalue(p) for p in sy.partitions(4)}
    assert sorted(lam, key=lam.get)[1:3] == [(3, 1), (2, 2)]


@pytest.mark.parametrize("n", [3])
@pytest.mark.parametrize("t", [1, 2, 3])
def test_first_part_equivalence_exhaustive(n, t):
    rep = sy.first_part_design_equivalence(n, t)
    assert rep.holds and rep.exhaustive and rep.subsets == 2**6 - 1


def test_first_part_equivalence_s4_t2():
    rep = sy.first_part_design_equivalence(4, 2)
    assert rep.holds
    idx = sy.perm_index(4)
    a4 = tuple(sorted(idx[s] for s in sy.alternating_group(4)))
    proper = [s for s in rep.uniform_sets if len(s) < 24]
    assert sorted(proper) == sorted([a4, tuple(sorted(set(range(24)) - set(a4)))])


@pytest.mark.parametrize("n, t", [(5, 1), (5, 2), (6, 3)])
def test_first_part_equivalence_sampled(n, t):
    rep = sy.first_part_design_equivalence(n, t, samples=20, seed=3)
    assert rep.holds and not rep.exhaustive
    assert len(rep.uniform_sets) >= 2


@pytest.mark.parametrize("n", [6, 7, 8, 9, 10])
def test_order_conflict_witness(n):
    p, q = sy.order_conflict_witness(n)
    assert p[0] > q[0]
    assert sy.transposition_laplacian_eigenvalue(p) >= sy.transposition_laplacian_eigenvalue(q)


def test_order_witness_n7():
    p, q = sy.order_conflict_witness(7)
    assert (p, q) == ((4, 1, 1, 1), (3, 3, 1))
    assert (sy.transposition_adjacency_eigenvalue(p), sy.transposition_adjacency_eigenvalue(q)) == (0, 1)
    with pytest.raises(DesignError):
        sy.order_conflict_witness(5)


def test_clumping_scan_s6():
    scan = sy.clumping_scan(6)
    assert len(scan) == 10
    assert all(count < 11 for _, count in scan)


@pytest.mark.parametrize("n, t", [(4, 2), (4, 3), (5, 2), (5, 3), (5, 4)])
def test_cosets_average_small_first_parts(n, t):
    rng = np.random.default_rng(n * 10 + t)
    perms = sy.all_perms(n)
    for _ in range(3):
        left = perms[rng.integers(len(perms))]
        right = perms[rng.integers(len(perms))]
        coset = sy.symmetric_coset(n, t, left, right)
        assert len(coset) == factorial(t)
        assert sy.averaged_partitions(coset, n) == sy.coset_averaged_partitions(n, t)


def test_point_coset_and_birkhoff():
    assert len(sy.point_coset(4, 2, 3)) == 6
    for n in (3, 4):
        rep = sy.birkhoff_minimal_enumeration(n)
        assert rep.holds and len(rep.minimal) == n * n


@given(st.lists(perms6, min_size=1, max_size=8, unique=True), st.data())
@settings(max_examples=30, deadline=None)
def test_gram_state_prefix_bound_is_sound(design, data):
    parts = [p for p in sy.partitions(6) if p[0] >= 4]
    if any(sy.gram_sum(design, p) for p in parts):
        return
    state = sy.GramState(6, parts)
    idx = sorted(sy.perm_index(6)[s] for s in design)
    for i, v in enumerate(idx):
        state.push(v)
        assert state.feasible(len(idx) - i - 1)


def test_gram_matrix_matches_sum():
    d = sy.alternating_group(4)
    x = np.zeros(24, dtype=np.int64)
    x[[sy.perm_index(4)[s] for s in d]] = 1
    for p in sy.partitions(4):
        assert int(x @ sy.gram_matrix(4, p) @ x) == sy.gram_sum(d, p)
    assert Fraction(sy.cayley_eigenvalue((2, 2), ["2,1,1"])) == 0
