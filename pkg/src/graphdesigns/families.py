"""Family-aware eigenspace selection, design tests and search problems.

A graph file's ``c family`` header picks the exact route; the header is
checked against the edges before it is trusted.  Graphs without a header
use the float route on a dense eigendecomposition.

Orders (``upto`` counts eigenspaces, or vectors for the Mycielskian order):

* ``laplacian``: smallest nonzero Laplacian eigenvalues first;
* ``reverse``: largest first (for Cayley graphs, reverse first-part order);
* ``first-part``: Cayley graphs only, partitions with p_1 >= n - upto;
* ``random-walk``: Hamming graphs, decreasing |AD^-1 eigenvalue|;
* ``mycielskian``: Mycielskian graphs, lifted pairs then the cubic triple.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd

import numpy as np

from graphdesigns import hamming, johnson, mycielski, symmetric
from graphdesigns.errors import DesignError
from graphdesigns.graph import (DEFAULT_BUDGET, DEFAULT_TOL, Certificate, Graph, Residual, dense_spectrum,
                                eigenspace_residual)
from graphdesigns.search import SearchProblem

ORDERS = ("laplacian", "reverse", "first-part", "random-walk", "mycielskian")


@dataclass
class Selection:
    kind: str                  # family kind or "generic"
    label: str
    params: tuple


def _fam(g: Graph):
    return g.family.kind if g.family is not None else "generic"


def check_family(g: Graph) -> str:
    """Confirm the header describes this graph; returns the family kind."""
    kind = _fam(g)
    p = g.family.params if g.family else ()
    if kind == "hamming":
        ok = g == hamming.build_hamming(*p)
    elif kind == "johnson":
        ok = g == johnson.build_johnson(*p)
    elif kind == "cayley":
        ok = g == symmetric.cayley_graph(p[0], str(p[1]).split(";"))
    elif kind == "mycielskian":
        ok = g == mycielski.mycielskian(base_of_mycielskian(g)).graph
    elif kind == "generic":
        ok = True
    else:
        raise DesignError(f"unknown family {kind!r}")
    if not ok:
        raise DesignError(f"family header {g.family.header()!r} does not match the edges")
    return kind


def base_of_mycielskian(g: Graph) -> Graph:
    n = g.family.params[0]
    edges = [(u, v) for u, v in g.edges() if v < n]
    return Graph.from_edges(n, edges)


def _upto_range(upto, total):
    if not 1 <= upto <= total:
        raise DesignError(f"upto must lie in 1..{total}")


def hamming_weights(n: int, q: int, order: str, upto: int) -> list[int]:
    _upto_range(upto, n)
    if order == "laplacian":
        return list(range(1, upto + 1))
    if order == "reverse":
        return list(range(n - upto + 1, n + 1))
    if order == "random-walk":
        # AD^-1 eigenvalue of weight w is 1 - q w / ((q - 1) n); ties go to the negative side
        vals = {w: Fraction((q - 1) * n - q * w, (q - 1) * n) for w in range(1, n + 1)}
        seq = sorted(vals, key=lambda w: (-abs(vals[w]), vals[w]))
        return sorted(seq[:upto])
    raise DesignError(f"order {order!r} does not apply to Hamming graphs")


def johnson_indices(k: int, order: str, upto: int) -> list[int]:
    _upto_range(upto, k)
    if order == "laplacian":
        return list(range(1, upto + 1))
    if order == "reverse":
        return list(range(k - upto + 1, k + 1))
    raise DesignError(f"order {order!r} does not apply to Johnson graphs")


def cayley_partitions(n: int, classes, order: str, upto: int) -> list[tuple[int, ...]]:
    nontrivial = symmetric.partitions(n)[1:]
    if order == "first-part":
        _upto_range(upto, n)
        return [p for p in nontrivial if p[0] >= n - upto]
    if order == "reverse":
        _upto_range(upto, n)
        return [p for p in nontrivial if p[0] <= upto]
    if order == "laplacian":
        lam = {p: symmetric.cayley_laplacian_eigenvalue(p, classes) for p in nontrivial}
        levels = sorted(set(lam.values()))
        _upto_range(upto, len(levels))
        keep = set(levels[:upto])
        return [p for p in nontrivial if lam[p] in keep]
    raise DesignError(f"order {order!r} does not apply to Cayley graphs")


def _generic_clusters(g: Graph, order: str, upto: int):
    spec = dense_spectrum(g)
    clusters = spec.clusters()[1:]
    _upto_range(upto, len(clusters))
    if order == "laplacian":
        chosen = clusters[:upto]
    elif order == "reverse":
        chosen = clusters[-upto:]
    else:
        raise DesignError(f"order {order!r} needs a family header")
    return spec, chosen


def design_test(g: Graph, design, order: str, upto: int, tol: float = DEFAULT_TOL) -> Certificate:
    """Test a 0-indexed vertex set against the first ``upto`` eigenspaces of ``order``."""
    design = sorted(set(design))
    if not design:
        raise DesignError("a design must be nonempty")
    if design[0] < 0 or design[-1] >= g.n:
        raise DesignError("vertex out of range")
    kind = check_family(g)
    if kind == "hamming":
        n, q = g.family.params
        words = [hamming.index_to_word(v, n, q) for v in design]
        return hamming.is_phi_design(words, hamming_weights(n, q, order, upto), n, q)
    if kind == "johnson":
        n, k = g.family.params
        blocks = [johnson.colex_unrank(v, k) for v in design]
        return johnson.is_phi_design_johnson(n, k, blocks, johnson_indices(k, order, upto))
    if kind == "cayley":
        n = g.family.params[0]
        classes = str(g.family.params[1]).split(";")
        perms = symmetric.all_perms(n)
        return symmetric.phi_p_certificate([perms[v] for v in design],
                                           cayley_partitions(n, classes, order, upto), n)
    if kind == "mycielskian":
        if order != "mycielskian":
            raise DesignError("Mycielskian graphs use the mycielskian order")
        base = base_of_mycielskian(g)
        w = mycielski.mycielskian_order_vectors(base)
        _upto_range(upto, w.shape[1])
        cert = Certificate(True, f"Mycielskian order vectors 1..{upto}", tol=tol)
        for j in range(upto):
            res = float(abs(w[design, j].mean() - w[:, j].mean()))
            cert.residuals.append(Residual(f"vector {j + 1}", False, res))
            if res > tol and cert.verdict:
                cert.verdict = False
                cert.counterexample = f"vector {j + 1}"
        cert.facts.append(("design_size", len(design)))
        return cert
    spec, chosen = _generic_clusters(g, order, upto)
    cert = Certificate(True, f"{order} Laplacian eigenspaces 1..{upto}", tol=tol)
    for lam, idx in chosen:
        res = eigenspace_residual(spec, idx, design)
        cert.residuals.append(Residual(f"lambda={lam:.6f}", False, res))
        if res > tol and cert.verdict:
            cert.verdict = False
            cert.counterexample = f"lambda={lam:.6f}"
    cert.facts.append(("design_size", len(design)))
    return cert


def _lcm(a, b):
    return a * b // gcd(a, b)


def search_problem(g: Graph, order: str, upto: int, budget: int = DEFAULT_BUDGET,
                   symmetry: bool = False, hints: bool = True, seeds=()) -> SearchProblem:
    """Exact search problem for the family of ``g``, with sound size hints."""
    kind = check_family(g)
    modulus, group, incremental = 1, None, None
    if kind == "hamming":
        n, q = g.family.params
        weights = hamming_weights(n, q, order, upto)
        words = hamming.all_words(n, q)

        def tester(d):
            return bool(hamming.is_phi_design([words[v] for v in d], weights, n, q))

        def incremental(size):
            return hamming.CharacterSumState(n, q, weights)
        if hints and order == "laplacian":
            modulus = q**upto
        if hints and order == "random-walk" and q == 2 and weights == hamming.random_walk_weights(n):
            modulus = 2**n // gcd(n, 2**n)
        if symmetry:
            group = hamming.translation_group(n, q)
    elif kind == "johnson":
        n, k = g.family.params
        sel = johnson_indices(k, order, upto)
        verts = johnson.k_subsets(n, k)

        def tester(d):
            return bool(johnson.is_phi_design_johnson(n, k, [verts[v] for v in d], sel))
        if hints and order == "laplacian":
            for i in range(1, upto + 1):
                modulus = _lcm(modulus, comb(n, i) // gcd(comb(n, i), comb(k, i)))
    elif kind == "cayley":
        n = g.family.params[0]
        classes = str(g.family.params[1]).split(";")
        parts = cayley_partitions(n, classes, order, upto)
        perms = symmetric.all_perms(n)
        mats = [symmetric.gram_matrix(n, p) for p in parts] if n <= symmetric.MATRIX_N else None

        def tester(d):
            if mats is not None:
                idx = list(d)
                return all(int(m[np.ix_(idx, idx)].sum()) == 0 for m in mats)
            return all(symmetric.gram_sum([perms[v] for v in d], p) == 0 for p in parts)
        if mats is not None:
            def incremental(size):
                return symmetric.GramState(n, parts)
        if hints and order == "first-part":
            modulus = factorial(n) // factorial(n - upto)
    else:
        def tester(d):
            return bool(design_test(g, d, order, upto))
    return SearchProblem(tester=tester, n=g.n, modulus=modulus, budget=budget, incremental=incremental,
                         seeds=seeds, symmetry_group=group, name=f"{kind} {order} upto {upto}")
