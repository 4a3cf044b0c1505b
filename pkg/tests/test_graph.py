import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdesigns.errors import DesignError
from graphdesigns.graph import (Certificate, Family, Graph, Residual, SpectrumSketch, averages, averages_sum_zero,
                                budget_from_env, canonical_form, complete_graph, cycle_graph, dense_spectrum,
                                design_to_text, float_design_test, graph_to_text, indicator,
                                is_design_by_projectors, lagrange_eigenspace_project, matrix_apply, parse_design, parse_graph,
                                path_graph, projector_matrix, rational_eigenbasis, rational_nullspace,
                                verify_spectrum)

# C6 Laplacian: 2 - 2cos(2 pi k / 6) = 0, 1, 3, 4 with multiplicities 1, 2, 2, 1
C6_SPECTRUM = SpectrumSketch((0, 1, 3, 4), (1, 2, 2, 1))


@st.composite
def connected_graphs(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    # random spanning tree plus extra edges keeps the graph connected
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return Graph.from_edges(n, sorted(edges))


def test_rejects_bad_graphs():
    with pytest.raises(DesignError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(DesignError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(DesignError):
        Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(DesignError):
        Graph(2, [[1], []])
    assert not Graph.from_edges(4, [(0, 1), (2, 3)], require_connected=False).is_connected()


@given(connected_graphs())
def test_matrices_agree_with_neighbors(g):
    a = g.adjacency_matrix()
    assert (a == a.T).all() and a.trace() == 0
    assert a.sum() == 2 * g.num_edges()
    lap = g.laplacian_matrix()
    assert (lap.sum(axis=1) == 0).all()
    assert list(np.diag(lap)) == g.degrees()


@given(connected_graphs(), st.data())
def test_exact_apply_matches_numpy(g, data):
    v = data.draw(st.lists(st.integers(-5, 5), min_size=g.n, max_size=g.n))
    for source in ("laplacian", "adjacency"):
        assert [int(x) for x in matrix_apply(g, v, source)] == list(g.matrix(source) @ np.array(v))


@given(connected_graphs())
def test_graph_file_round_trip(g):
    h = parse_graph(graph_to_text(g))
    assert h == g and h.family is None


def test_family_header_round_trip():
    g = Graph.from_edges(3, [(0, 1), (1, 2)], Family("hamming", (3, 2)))
    text = graph_to_text(g)
    assert text.splitlines()[0] == "c family hamming 3 2"
    assert text.splitlines()[1] == "p 3 2"
    assert parse_graph(text).family == Family("hamming", (3, 2))


@pytest.mark.parametrize("text", ["e 1 2\n", "p 3 1\ne 1 4\n", "p 3 2\ne 1 2\n", "p 2 1\nx 1 2\n", "c only\n"])
def test_malformed_graph_files(text):
    with pytest.raises(DesignError):
        parse_graph(text)


def test_design_files():
    assert parse_design("3\n1  # comment\n\n2\n") == [0, 1, 2]
    assert design_to_text([2, 0]) == "1\n3\n"
    with pytest.raises(DesignError):
        parse_design("1\n1\n")
    with pytest.raises(DesignError):
        parse_design("5\n", n=4)
    with pytest.raises(DesignError):
        parse_design("0\n")


def test_budget_env(monkeypatch):
    monkeypatch.setenv("GRAPHDESIGNS_BUDGET", "123")
    assert budget_from_env() == 123
    monkeypatch.delenv("GRAPHDESIGNS_BUDGET")
    assert budget_from_env(7) == 7


def test_spectrum_sketch_validation():
    with pytest.raises(DesignError):
        SpectrumSketch((1, 0), (1, 1))
    with pytest.raises(DesignError):
        SpectrumSketch((0, 1), (1,))
    assert C6_SPECTRUM.total == 6 and C6_SPECTRUM.index_of(3) == 2


def test_verify_spectrum_cycle():
    g = cycle_graph(6)
    assert verify_spectrum(g, C6_SPECTRUM)
    assert not verify_spectrum(g, SpectrumSketch((0, 1, 3, 4), (1, 1, 3, 1)))
    assert not verify_spectrum(g, SpectrumSketch((0, 2, 3, 4), (1, 2, 2, 1)))


def _float_projector(g, lam):
    vals, vecs = np.linalg.eigh(g.laplacian_matrix().astype(float))
    cols = vecs[:, np.abs(vals - lam) < 1e-8]
    return cols @ cols.T


@pytest.mark.parametrize("ell", range(4))
def test_projector_matrix_matches_eigh(ell):
    g = cycle_graph(6)
    num, den = projector_matrix(g, C6_SPECTRUM, ell)
    p = np.array(num, dtype=float) / den
    assert np.allclose(p, _float_projector(g, float(C6_SPECTRUM.eigenvalues[ell])))


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), st.integers(0, 3))
def test_lagrange_projection_matches_eigh(v, ell):
    g = cycle_graph(6)
    got = np.array([float(x) for x in lagrange_eigenspace_project(g, C6_SPECTRUM, ell, v)])
    want = _float_projector(g, float(C6_SPECTRUM.eigenvalues[ell])) @ np.array(v, dtype=float)
    assert np.allclose(got, want)


@given(st.sets(st.integers(0, 5), min_size=1), st.sets(st.integers(1, 3), min_size=1))
@settings(max_examples=60)
def test_projector_test_agrees_with_float_test(design, selected):
    g = cycle_graph(6)
    exact = is_design_by_projectors(g, C6_SPECTRUM, selected, design)
    spec = dense_spectrum(g)
    cols = [j for j, lam in enumerate(spec.eigenvalues)
            if any(abs(lam - float(C6_SPECTRUM.eigenvalues[s])) < 1e-8 for s in selected)]
    assert exact.verdict == float_design_test(g, design, cols, spec).verdict
    assert exact.consistent()


def test_alternate_vertices_of_c6():
    # {0, 2, 4} kills every eigenspace except the top one (the alternating vector)
    g = cycle_graph(6)
    assert is_design_by_projectors(g, C6_SPECTRUM, [1, 2], [0, 2, 4]).verdict
    cert = is_design_by_projectors(g, C6_SPECTRUM, [3], [0, 2, 4])
    assert not cert.verdict and cert.counterexample == "eigenspace theta=4"


def test_averages_helpers():
    g = cycle_graph(4)
    phi = [1, -1, 1, -1]
    assert averages(g, phi, [0, 1]) and not averages(g, phi, [0, 2])
    assert averages_sum_zero([Fraction(1), Fraction(-1), Fraction(1), Fraction(-1)], [0, 3])
    assert indicator(4, [1, 3]) == [0, 1, 0, 1]
    with pytest.raises(DesignError):
        averages(g, phi, [])


@given(connected_graphs(max_n=7))
@settings(max_examples=40)
def test_dense_spectrum_is_orthonormal_and_reproducible(g):
    s = dense_spectrum(g)
    assert np.allclose(s.vectors.T @ s.vectors, np.identity(g.n), atol=1e-9)
    assert np.allclose(g.laplacian_matrix() @ s.vectors, s.vectors * s.eigenvalues, atol=1e-8)
    assert np.array_equal(dense_spectrum(g).vectors, s.vectors)
    assert sum(len(idx) for _, idx in s.clusters()) == g.n


def test_rational_nullspace():
    basis = rational_nullspace([[1, 2, 3], [2, 4, 6]])
    assert len(basis) == 2
    for v in basis:
        assert v[0] + 2 * v[1] + 3 * v[2] == 0


@pytest.mark.parametrize("g, rational", [(complete_graph(4), True), (cycle_graph(4), True),
                                         (cycle_graph(6), True), (cycle_graph(5), False), (path_graph(3), False)])
def test_rational_eigenbasis(g, rational):
    out = rational_eigenbasis(g)
    assert (out is not None) == rational
    if out:
        a = g.adjacency_matrix()
        assert sum(len(b) for _, b in out) == g.n
        for lam, basis in out:
            for v in basis:
                assert all(x == 0 for x in (a @ np.array(v, dtype=object)) - lam * np.array(v, dtype=object))


def test_canonical_form_detects_relabeling():
    g = cycle_graph(5)
    perm = [3, 0, 4, 1, 2]
    h = Graph.from_edges(5, [(perm[u], perm[v]) for u, v in g.edges()])
    assert canonical_form(g) == canonical_form(h)
    assert canonical_form(g) != canonical_form(path_graph(5))


def test_triangle_free():
    assert cycle_graph(5).is_triangle_free()
    assert not complete_graph(3).is_triangle_free()


def test_certificate_text_is_stable():
    cert = Certificate(False, "sel", [Residual("a", True, 0), Residual("b", False, 3e-15), Residual("c", False, 0.5)],
                       [("flag", True), ("size", 4)], "x")
    assert cert.text() == ("verdict: false\nselector: sel\nresidual a: exact 0\nresidual b: float <1e-12\n"
                           "residual c: float 5.000e-01\nfact flag: true\nfact size: 4\ncounterexample: x\n")
    assert cert.fact("size") == 4 and not cert
    with pytest.raises(KeyError):
        cert.fact("missing")


def test_graph_equality_and_edges():
    g = Graph.from_edges(3, [(2, 1), (0, 1)])
    assert g.edges() == [(0, 1), (1, 2)]
    assert g == path_graph(3) and g != complete_graph(3)
    assert list(itertools.chain.from_iterable(g.neighbors)) == [1, 0, 2, 1]
