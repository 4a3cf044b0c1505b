"""Named, deterministic reproduction cases.

Each case returns ``(text, ok)``.  The text holds only verdicts, counts
and residuals (never timings), so two runs give identical bytes.
"""
from __future__ import annotations

import itertools
from math import comb

import numpy as np

from graphdesigns import families, hamming, johnson, mycielski, symmetric
from graphdesigns.exact import golden_ratio
from graphdesigns.graph import Graph, canonical_form, complete_graph, cycle_graph
from graphdesigns.search import search_smallest

D1 = ("000", "111")
D2 = ("000", "011", "101", "110")
RANDOM_WALK_DESIGN = ("0000", "0001", "1110", "1111")


class _Out:
    def __init__(self):
        self.lines: list[str] = []
        self.ok = True

    def add(self, line: str) -> None:
        self.lines.append(line)

    def check(self, label: str, cond) -> None:
        cond = bool(cond)
        self.ok = self.ok and cond
        self.lines.append(f"check {label}: {'ok' if cond else 'FAILED'}")

    def cert(self, title: str, cert) -> None:
        self.lines.append(f"[{title}]")
        self.lines.extend(cert.text().rstrip("\n").split("\n"))

    def result(self):
        return "\n".join(self.lines) + "\n", self.ok


def _words(items):
    return [hamming.parse_word(x, 2) for x in items]


# --- Hamming ---------------------------------------------------------------

def case_cube_d1(workers=1):
    o = _Out()
    c1 = hamming.is_phi_design(_words(D1), [1], 3, 2)
    c2 = hamming.is_phi_design(_words(D1), [1, 2], 3, 2)
    o.cert("D1 weights 1", c1)
    o.cert("D1 weights 1..2", c2)
    o.check("D1 averages weight 1", c1.verdict)
    o.check("D1 fails weight 2", not c2.verdict)
    return o.result()


def case_cube_d2(workers=1):
    o = _Out()
    c = hamming.is_phi_design(_words(D2), [1, 2], 3, 2)
    o.cert("D2 weights 1..2", c)
    ok, lam = hamming.oa_check(_words(D2), 2, 3, 2)
    o.add(f"orthogonal array (2,3,2): {ok} index {lam}")
    o.check("D2 averages weights 1..2", c.verdict)
    o.check("D2 is an orthogonal array of index 1", ok and lam == 1)
    return o.result()


OA_CASES = ((3, 2, 1), (3, 2, 2), (3, 2, 3), (2, 3, 1), (2, 3, 2), (2, 4, 2))


def case_oa_equivalence(workers=1):
    o = _Out()
    for n, q, t in OA_CASES:
        rep = hamming.oa_design_equivalence(n, q, t)
        o.add(f"H({n},{q}) t={t}: subsets {rep.subsets} agreements {rep.agreements} "
              f"designs {rep.positives} discrepancy {rep.discrepancy}")
        o.check(f"three-way agreement n={n} q={q} t={t}", rep.holds)
    return o.result()


def case_hadamard(workers=1):
    o = _Out()
    h4 = hamming.design_to_hadamard(_words(D2))
    o.check("D2 gives a Hadamard matrix of order 4", hamming.is_hadamard(h4) and h4.shape == (4, 4))
    h8 = hamming.sylvester(3)
    o.check("Sylvester order 8 is Hadamard", hamming.is_hadamard(h8))
    design = hamming.hadamard_to_design(h8)
    o.add("design: " + " ".join(hamming.format_word(w) for w in design))
    cert = hamming.is_phi_design(design, [1, 2], 7, 2)
    o.cert("Sylvester design weights 1..2", cert)
    o.check("size-8 design averages weights 1..2", cert.verdict and len(design) == 8)
    back = hamming.design_to_hadamard(design)
    o.check("design maps back to a Hadamard matrix", hamming.is_hadamard(back))
    for name, d, n in (("D2", _words(D2), 3), ("Sylvester", design, 7)):
        sb = hamming.size_bound_check(d, n)
        o.cert(f"size bound {name}", sb)
        o.check(f"size bound {name}", sb.verdict)
    g = hamming.build_hamming(7, 2)
    prob = families.search_problem(g, "laplacian", 2, budget=200_000, symmetry=True)
    res = search_smallest(prob, 7, workers=workers)
    o.add("search H(7,2) weights 1..2 sizes below 8")
    o.add(res.summary().rstrip("\n"))
    o.check("no design of size below 8", res.exhausted and not res.found)
    return o.result()


SUBCUBE_PARAMS = [(n, q) for n in range(1, 5) for q in (2, 3)]


def case_reverse_subcubes(workers=1):
    o = _Out()
    for n, q in SUBCUBE_PARAMS:
        count = 0
        for t in range(1, n + 1):
            for coords in itertools.combinations(range(1, n + 1), t):
                for pattern in itertools.product(range(q), repeat=t):
                    d = hamming.subcube(n, q, coords, pattern)
                    c = hamming.is_phi_design(d, range(t + 1, n + 1), n, q)
                    count += 1
                    if not c.verdict:
                        o.check(f"subcube {coords} {pattern} of H({n},{q})", False)
        o.add(f"H({n},{q}): {count} subcubes checked")
    for n, q in ((2, 2), (3, 2), (2, 3)):
        rep = hamming.minimal_reverse_enumeration(n, q)
        o.add(f"H({n},{q}) reverse designs {rep.designs} minimal {len(rep.minimal)} expected {len(rep.expected)}")
        o.check(f"minimal reverse designs of H({n},{q}) are the fixed-coordinate sets", rep.holds)
    return o.result()


def case_random_walk(workers=1):
    o = _Out()
    cert = hamming.random_walk_extremal_check(4, _words(RANDOM_WALK_DESIGN))
    o.cert("random-walk extremal", cert)
    o.check("extremal with one neighbor each", cert.verdict and ("neighbor_count", 1) in cert.facts)
    g = hamming.build_hamming(4, 2)
    prob = families.search_problem(g, "random-walk", 3, hints=False)
    res = search_smallest(prob, 16, workers=workers)
    o.add(res.summary().rstrip("\n"))
    o.add("first: " + " ".join(hamming.format_word(hamming.index_to_word(v, 4, 2)) for v in res.found[0]))
    o.check("minimum extremal size is 4 = 2^(n-t)", res.exhausted and len(res.found[0]) == 4)
    return o.result()


def case_radon(workers=1):
    o = _Out()
    for q in (2, 3, 4):
        for t in (1, 2):
            k = hamming.radon_kernel(t, q)
            brute = hamming.radon_kernel_bruteforce(t, q)
            o.check(f"kernel q={q} t={t} matches direct count", np.array_equal(k, brute))
            pats = list(itertools.product(range(q), repeat=t))
            worst = 0.0
            positive = True
            for y in pats:
                chi = np.array([np.exp(2j * np.pi * sum(a * b for a, b in zip(x, y)) / q) for x in pats])
                lam = hamming.radon_kernel_eigenvalue(y, q)
                worst = max(worst, float(np.max(np.abs(brute @ chi - lam * chi))))
                positive = positive and lam > 0
            o.add(f"q={q} t={t}: eigenvalues {sorted(set(hamming.radon_kernel_eigenvalue(y, q) for y in pats))}")
            o.check(f"closed form q={q} t={t} within 1e-6", worst <= 1e-6)
            o.check(f"eigenvalues positive q={q} t={t}", positive)
    return o.result()


# --- Johnson ---------------------------------------------------------------

def case_johnson_spectrum(workers=1):
    o = _Out()
    s = johnson.johnson_spectrum(4, 2)
    o.add("J(4,2): " + " ".join(f"{lam}x{m}" for _, lam, m in s.entries))
    o.check("J(4,2) spectrum 0, 4 (x3), 6 (x2)", [(lam, m) for _, lam, m in s.entries] == [(0, 1), (4, 3), (6, 2)])
    vals = np.round(np.linalg.eigvalsh(johnson.build_johnson(4, 2).laplacian_matrix().astype(float)), 9)
    o.check("dense Laplacian agrees", sorted(vals.tolist()) == [0, 4, 4, 4, 6, 6])
    return o.result()


def case_johnson_equivalence(workers=1):
    o = _Out()
    for n, k in ((4, 2), (5, 2)):
        for t in (1, 2):
            rep = johnson.johnson_equivalence(n, k, t)
            o.add(f"J({n},{k}) t={t}: subsets {rep.subsets} agreements {rep.agreements} designs {rep.positives}")
            o.check(f"t-design iff graphical design J({n},{k}) t={t}", rep.holds)
    return o.result()


def case_fano(workers=1):
    o = _Out()
    ok, lam = johnson.block_design_check(7, 3, johnson.FANO_PLANE, 2)
    o.add(f"block design 2-(7,3,{lam}): {ok}")
    o.check("Fano plane is a 2-(7,3,1) design", ok and lam == 1)
    c = johnson.is_phi_design_johnson(7, 3, johnson.FANO_PLANE, [1, 2])
    o.cert("Fano eigenspaces 1..2", c)
    o.check("Fano plane averages eigenspaces 1..2 of J(7,3)", c.verdict)
    return o.result()


def case_johnson_stars(workers=1):
    o = _Out()
    total = 0
    for n in range(2, 9):
        for k in range(1, n + 1):
            if comb(n, k) > 56:
                continue
            for t in range(0, k + 1):
                for T in itertools.combinations(range(1, n + 1), t):
                    total += 1
                    if not johnson.star_check(n, k, T).verdict:
                        o.check(f"star {T} in J({n},{k})", False)
    o.add(f"stars checked: {total}")
    o.check("every star averages the reverse eigenspaces", o.ok)
    return o.result()


def case_johnson_minimal(workers=1):
    o = _Out()
    for n, k in ((4, 2), (5, 2)):
        rep = johnson.minimal_reverse_enumeration_johnson(n, k)
        o.add(f"J({n},{k}) reverse designs {rep.designs} minimal {len(rep.minimal)}")
        o.check(f"minimal reverse designs of J({n},{k}) are stars and complements", rep.holds)
    return o.result()


# --- symmetric group -------------------------------------------------------

def case_s3_table(workers=1):
    o = _Out()
    parts = symmetric.partitions(3)
    lt = [symmetric.cayley_laplacian_eigenvalue(p, [(2, 1)]) for p in parts]
    ld = [symmetric.cayley_laplacian_eigenvalue(p, [(3,)]) for p in parts]
    o.add("partitions: " + " ".join(symmetric.format_partition(p) for p in parts))
    o.add("transpositions: " + " ".join(map(str, lt)))
    o.add("derangements: " + " ".join(map(str, ld)))
    o.check("transposition values 0 3 6", lt == [0, 3, 6])
    o.check("derangement values 0 3 0", ld == [0, 3, 0])
    return o.result()


def case_s4_uniform(workers=1):
    o = _Out()
    for name, items in (("C", symmetric.S4_C), ("V", symmetric.S4_V), ("V u (12)C", symmetric.S4_V_UNION)):
        d = symmetric.perms_from_text(items, 4)
        c = symmetric.phi_p_certificate(d, symmetric.first_part_partitions(4, 1), 4)
        o.cert(name, c)
        o.check(f"{name} is 1-uniform", symmetric.t_wise_uniform_check(d, 1, 4) and c.verdict)
    a4 = symmetric.alternating_group(4)
    o.check("A4 is 2-uniform", symmetric.t_wise_uniform_check(a4, 2, 4))
    av = symmetric.averaged_partitions(a4, 4)
    o.add("A4 averages: " + " ".join(symmetric.format_partition(p) for p in av))
    o.check("A4 averages exactly (3,1) (2,2) (2,1,1)", av == [(3, 1), (2, 2), (2, 1, 1)])
    return o.result()


def case_first_part(workers=1):
    o = _Out()
    for n in (3, 4):
        for t in range(1, n + 1):
            rep = symmetric.first_part_design_equivalence(n, t)
            o.add(f"S{n} t={t}: subsets {rep.subsets} agreements {rep.agreements} uniform {len(rep.uniform_sets)}")
            o.check(f"t-uniform iff first-part design n={n} t={t}", rep.holds and rep.exhaustive)
            if n == 4 and t == 2:
                a4 = tuple(sorted(symmetric.perm_index(4)[s] for s in symmetric.alternating_group(4)))
                comp = tuple(sorted(set(range(24)) - set(a4)))
                proper = sorted(s for s in rep.uniform_sets if len(s) < 24)
                o.check("proper 2-uniform sets of S4 are A4 and its complement", proper == sorted([a4, comp]))
    return o.result()


def case_s4_laplacian_only(workers=1):
    o = _Out()
    for i, items in enumerate(symmetric.S4_LAPLACIAN_ONLY, 1):
        d = symmetric.perms_from_text(items, 4)
        av = symmetric.averaged_partitions(d, 4)
        o.add(f"set {i}: size {len(d)} averages " + " ".join(symmetric.format_partition(p) for p in av))
        o.check(f"set {i} averages (3,1) and (2,2)", len(d) == 12 and {(3, 1), (2, 2)} <= set(av))
        o.check(f"set {i} fails (2,1,1)", (2, 1, 1) not in av)
        o.check(f"set {i} is not 2-uniform", not symmetric.t_wise_uniform_check(d, 2, 4))
    return o.result()


def case_order_witness(workers=1):
    o = _Out()
    p, q = symmetric.order_conflict_witness(7)
    lp = symmetric.transposition_laplacian_eigenvalue(p)
    lq = symmetric.transposition_laplacian_eigenvalue(q)
    ap = symmetric.transposition_adjacency_eigenvalue(p)
    aq = symmetric.transposition_adjacency_eigenvalue(q)
    o.add(f"p={symmetric.format_partition(p)} laplacian {lp} adjacency {ap}")
    o.add(f"q={symmetric.format_partition(q)} laplacian {lq} adjacency {aq}")
    o.check("witness (4,1,1,1) and (3,3,1)", (p, q) == ((4, 1, 1, 1), (3, 3, 1)))
    o.check("adjacency values 0 and 1", (ap, aq) == (0, 1))
    o.check("first part order and Laplacian order disagree", p[0] > q[0] and lp > lq)
    return o.result()


def case_gram_nonnegative(workers=1, pairs=10_000, seed=0):
    o = _Out()
    n = 5
    rng = np.random.default_rng(seed)
    parts = symmetric.partitions(n)
    mats = [symmetric.gram_matrix(n, p).astype(np.int64) for p in parts]
    nf = mats[0].shape[0]
    worst = None
    for _ in range(pairs):
        x = (rng.random(nf) < rng.random()).astype(np.int64)
        if not x.any():
            x[rng.integers(nf)] = 1
        j = int(rng.integers(len(parts)))
        v = int(x @ mats[j] @ x)
        worst = v if worst is None else min(worst, v)
    o.add(f"S{n}: {pairs} random (set, partition) pairs, smallest Gram sum {worst}")
    o.check("Gram sums are nonnegative", worst >= 0)
    return o.result()


# --- Mycielskian -----------------------------------------------------------

def case_mycielski_grotzsch(workers=1):
    o = _Out()
    m = mycielski.mycielskian(cycle_graph(5))
    o.add(f"M(C5): {m.graph.n} vertices {m.graph.num_edges()} edges")
    o.check("M(C5) has 11 vertices and 20 edges", m.graph.n == 11 and m.graph.num_edges() == 20)
    o.check("M(C5) is triangle-free", m.graph.is_triangle_free())
    cert = mycielski.central_vertex_check(cycle_graph(5))
    o.cert("central vertex of M(C5)", cert)
    o.check("central vertex averages 2n-2 = 8 eigenvectors", cert.verdict and ("averaged_eigenvectors", 8) in cert.facts)
    k2 = mycielski.mycielskian(Graph.from_edges(2, [(0, 1)])).graph
    o.check("M(K2) is C5", canonical_form(k2) == canonical_form(cycle_graph(5)))
    phi, phibar = golden_ratio()
    o.add(f"phi + phibar = {phi + phibar}; phi * phibar = {phi * phibar}")
    o.check("phi + phibar = 1 and phi * phibar = -1",
            (phi + phibar - 1).is_zero() and (phi * phibar + 1).is_zero())
    return o.result()


def _bases():
    c4 = cycle_graph(4)
    return (("K3", complete_graph(3)), ("C4", c4), ("K4", complete_graph(4)))


def case_mycielski_lifts(workers=1):
    o = _Out()
    for name, g in _bases():
        m = mycielski.mycielskian(g)
        pairs = mycielski.lift_eigenpairs(g)
        exact = all(p.exact for p in pairs)
        zero = all(mycielski.lift_is_exact_eigenpair(m, p) for p in pairs)
        for p in pairs:
            o.add(f"{name} lift {p.base_index} {p.variant}: eigenvalue {p.eigenvalue}")
        o.check(f"{name} lifts are exact with zero residual", exact and zero)
    for name, g in _bases() + (("C5", cycle_graph(5)),):
        ok, dev = mycielski.spectrum_completeness(g)
        o.add(f"{name} spectrum deviation {'<1e-12' if dev < 1e-12 else f'{dev:.3e}'}")
        o.check(f"{name} predicted spectrum matches dense within 1e-8", ok)
    return o.result()


def case_mycielski_audit(workers=1):
    o = _Out()
    for name, g in (("K3", complete_graph(3)), ("C4", cycle_graph(4))):
        a = mycielski.design_size_audit(g)
        sizes = sorted({len(d) for d in a.qualifying})
        o.add(f"M({name}): {a.subsets} subsets, designs {len(a.qualifying)} sizes {sizes} beyond {len(a.beyond)}")
        o.check(f"M({name}) designs are {{u}} or have at least n vertices", a.holds)
    return o.result()


def case_mycielski_closure(workers=1):
    o = _Out()
    for name, g in (("C5", cycle_graph(5)), ("M(K3)", mycielski.mycielskian(complete_graph(3)).graph)):
        ok, premises = mycielski.conjugate_closure_exhaustive(g)
        o.add(f"{name}: satisfied premises {premises}")
        o.check(f"{name} conjugate closure holds on every subset", ok)
    return o.result()


CASES = {
    "cube-d1": case_cube_d1,
    "cube-d2": case_cube_d2,
    "oa-equivalence": case_oa_equivalence,
    "hadamard": case_hadamard,
    "reverse-subcubes": case_reverse_subcubes,
    "random-walk": case_random_walk,
    "radon": case_radon,
    "johnson-spectrum": case_johnson_spectrum,
    "johnson-equivalence": case_johnson_equivalence,
    "fano": case_fano,
    "johnson-stars": case_johnson_stars,
    "johnson-minimal": case_johnson_minimal,
    "s3-table": case_s3_table,
    "s4-uniform": case_s4_uniform,
    "first-part": case_first_part,
    "s4-laplacian-only": case_s4_laplacian_only,
    "order-witness": case_order_witness,
    "gram-nonnegative": case_gram_nonnegative,
    "mycielski-grotzsch": case_mycielski_grotzsch,
    "mycielski-lifts": case_mycielski_lifts,
    "mycielski-audit": case_mycielski_audit,
    "mycielski-closure": case_mycielski_closure,
}

CRITERIA = {
    1: ("cube-d1", "cube-d2"),
    2: ("oa-equivalence",),
    3: ("hadamard",),
    4: ("reverse-subcubes",),
    5: ("random-walk",),
    6: ("radon",),
    7: ("johnson-spectrum", "johnson-equivalence", "fano", "johnson-stars", "johnson-minimal"),
    8: ("s3-table", "s4-uniform", "first-part", "s4-laplacian-only", "order-witness", "gram-nonnegative"),
    9: ("mycielski-grotzsch", "mycielski-lifts", "mycielski-audit", "mycielski-closure"),
}


def run_case(name: str, workers: int = 1) -> tuple[str, bool]:
    from graphdesigns.errors import DesignError
    if name not in CASES:
        raise DesignError(f"unknown case {name!r}; try --list")
    text, ok = CASES[name](workers=workers)
    return f"case: {name}\n" + text + f"verdict: {'true' if ok else 'false'}\n", ok
