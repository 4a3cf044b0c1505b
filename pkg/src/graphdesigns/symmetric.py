"""Permutations, characters of S_n, normal Cayley graphs and Gram-sum design tests.

Permutations are one-line tuples of images of 1..n.  Composition is
``(s t)(i) = s(t(i))``, so ``compose(s, t)`` applies ``t`` first.  Vertices
of Cayley graphs are the permutations in lexicographic order of their
one-line form.

A set D averages the eigenvectors rho_p^{ij} exactly when the matrix sum of
rho_p over D vanishes.  Its squared Frobenius norm equals the integer
``sum_{s, t in D} chi_p(s^-1 t)``, which is what every test here computes.
"""
from __future__ import annotations

import itertools
import random
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

from graphdesigns.errors import DesignError
from graphdesigns.graph import DEFAULT_BUDGET, Certificate, Family, Graph, Residual
from graphdesigns.search import check_budget, mask_to_set, minimal_sets, union_closure_audit

Perm = tuple[int, ...]
Partition = tuple[int, ...]

MAX_TABLE_N = 9
MATRIX_N = 6          # largest n for which the |S_n| x |S_n| Gram matrices are cached


# --- permutations ----------------------------------------------------------

def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def is_perm(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(1, len(p) + 1))


def compose(s: Perm, t: Perm) -> Perm:
    """(s t)(i) = s(t(i))."""
    return tuple(s[x - 1] for x in t)


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, x in enumerate(s, 1):
        out[x - 1] = i
    return tuple(out)


def cycles(s: Perm) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for i in range(1, len(s) + 1):
        if i in seen:
            continue
        c = [i]
        seen.add(i)
        j = s[i - 1]
        while j != i:
            c.append(j)
            seen.add(j)
            j = s[j - 1]
        out.append(tuple(c))
    return out


def cycle_type(s: Perm) -> Partition:
    return tuple(sorted((len(c) for c in cycles(s)), reverse=True))


def sign(s: Perm) -> int:
    return -1 if (len(s) - len(cycles(s))) % 2 else 1


def parse_perm(text: str, n: int) -> Perm:
    """Parse cycle notation ``(1 2 3)(4 5)`` / ``(123)`` / ``e``, or one-line ``23145``."""
    text = text.strip()
    if text in ("e", "()", "id"):
        return identity(n)
    if text.startswith("("):
        groups = re.findall(r"\(([^()]*)\)", text)
        if "".join("(" + g + ")" for g in groups).replace(" ", "") != text.replace(" ", ""):
            raise DesignError(f"bad cycle notation {text!r}")
        # cycles are composed right to left
        perm = identity(n)
        for g in groups:
            elems = [int(x) for x in (g.replace(",", " ").split() if (" " in g.strip() or "," in g) else list(g))]
            if len(set(elems)) != len(elems) or any(not 1 <= x <= n for x in elems):
                raise DesignError(f"bad cycle ({g}) for n={n}")
            c = list(range(1, n + 1))
            for a, b in zip(elems, elems[1:] + elems[:1]):
                c[a - 1] = b
            perm = compose(perm, tuple(c))
        return perm
    parts = text.replace(",", " ").split() if (" " in text or "," in text) else list(text)
    p = tuple(int(x) for x in parts)
    if len(p) != n or not is_perm(p):
        raise DesignError(f"{text!r} is not a permutation of 1..{n}")
    return p


def format_perm(s: Perm) -> str:
    """Cycle notation with fixed points dropped; ``e`` for the identity."""
    cs = [c for c in cycles(s) if len(c) > 1]
    if not cs:
        return "e"
    sep = "" if len(s) <= 9 else " "
    return "".join("(" + sep.join(map(str, c)) + ")" for c in cs)


def all_perms(n: int) -> list[Perm]:
    return list(itertools.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def perm_index(n: int) -> dict:
    return {p: i for i, p in enumerate(all_perms(n))}


# --- partitions and characters ---------------------------------------------

def partitions(n: int) -> list[Partition]:
    """Partitions of n in reverse lexicographic order, (n) first."""
    out = []

    def rec(rem, mx, cur):
        if rem == 0:
            out.append(tuple(cur))
            return
        for k in range(min(rem, mx), 0, -1):
            cur.append(k)
            rec(rem - k, k, cur)
            cur.pop()

    rec(n, n, [])
    return out


def parse_partition(text: str) -> Partition:
    p = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip())
    if not p or any(x <= 0 for x in p) or list(p) != sorted(p, reverse=True):
        raise DesignError(f"{text!r} is not a partition")
    return p


def format_partition(p: Partition) -> str:
    return ",".join(map(str, p))


def _check_partition(p: Sequence[int]) -> Partition:
    p = tuple(p)
    if not p or any(x <= 0 for x in p) or list(p) != sorted(p, reverse=True):
        raise DesignError(f"{p} is not a partition")
    return p


def hook_dimension(p: Sequence[int]) -> int:
    p = _check_partition(p)
    n = sum(p)
    conj = [sum(1 for x in p if x > j) for j in range(p[0])]
    hooks = 1
    for i, row in enumerate(p):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return factorial(n) // hooks


def class_size(mu: Sequence[int]) -> int:
    n = sum(mu)
    z = 1
    for k, m in Counter(mu).items():
        z *= k**m * factorial(m)
    return factorial(n) // z


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], mu: tuple[int, ...]) -> int:
    # Murnaghan-Nakayama on a beta-set: removing a rim hook of length r moves
    # one bead down r places; the sign counts beads jumped over.
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    occupied = set(beta)
    total = 0
    for b in beta:
        if b - r >= 0 and b - r not in occupied:
            jumped = sum(1 for c in beta if b - r < c < b)
            new = tuple(sorted((occupied - {b}) | {b - r}, reverse=True))
            total += (-1) ** jumped * _mn(new, rest)
    return total


def character(p: Sequence[int], mu: Sequence[int]) -> int:
    """chi_p on the class of cycle type mu."""
    p = _check_partition(p)
    mu = _check_partition(tuple(sorted(mu, reverse=True)))
    if sum(p) != sum(mu):
        raise DesignError("partition and class have different n")
    k = len(p)
    beta = tuple(p[i] + (k - 1 - i) for i in range(k))
    return _mn(beta, mu)


@dataclass(frozen=True)
class CharTable:
    n: int
    partitions: tuple[Partition, ...]
    classes: tuple[Partition, ...]
    values: tuple[tuple[int, ...], ...]

    def __call__(self, p, mu) -> int:
        return self.values[self.partitions.index(tuple(p))][self.classes.index(tuple(mu))]

    def orthogonality_audit(self) -> bool:
        sizes = [class_size(mu) for mu in self.classes]
        nf = factorial(self.n)
        for a, ra in enumerate(self.values):
            for b, rb in enumerate(self.values):
                s = sum(z * x * y for z, x, y in zip(sizes, ra, rb))
                if s != (nf if a == b else 0):
                    return False
        for a in range(len(self.classes)):
            for b in range(len(self.classes)):
                s = sum(r[a] * r[b] for r in self.values)
                if s != (nf // sizes[a] if a == b else 0):
                    return False
        return True

    def text(self) -> str:
        lines = ["classes " + " ".join(format_partition(m) for m in self.classes)]
        for p, row in zip(self.partitions, self.values):
            lines.append(f"{format_partition(p)}: " + " ".join(map(str, row)))
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def character_table(n: int) -> CharTable:
    if not 1 <= n <= MAX_TABLE_N:
        raise DesignError(f"character tables are built for 1 <= n <= {MAX_TABLE_N}")
    ps = tuple(partitions(n))
    vals = tuple(tuple(character(p, mu) for mu in ps) for p in ps)
    return CharTable(n, ps, ps, vals)


# --- Cayley graphs and eigenvalues -----------------------------------------

def _classes(n: int, classes) -> list[Partition]:
    out = []
    for c in classes:
        c = parse_partition(c) if isinstance(c, str) else _check_partition(tuple(c))
        if sum(c) != n:
            raise DesignError(f"class {c} is not a cycle type of S_{n}")
        if c == (1,) * n:
            raise DesignError("the identity cannot be in a connection set")
        out.append(c)
    return sorted(set(out), reverse=True)


def transpositions(n: int) -> Partition:
    return (2,) + (1,) * (n - 2)


@lru_cache(maxsize=16)
def _cayley_cached(n: int, classes: tuple) -> Graph:
    perms = all_perms(n)
    idx = perm_index(n)
    conn = [x for x in perms if cycle_type(x) in classes]
    nbrs = [[idx[compose(g, x)] for x in conn] for g in perms]
    fam = Family("cayley", (n, ";".join(format_partition(c) for c in classes)))
    return Graph(len(perms), nbrs, fam, require_connected=False)


def cayley_graph(n: int, classes, limit: int = 5040) -> Graph:
    """Cayley graph of S_n whose connection set is a union of conjugacy classes.

    Disconnected graphs are allowed here (the 3-cycle graph on S_3 is two triangles).
    """
    cls = tuple(_classes(n, classes))
    if factorial(n) > limit:
        raise DesignError(f"S_{n} has {factorial(n)} vertices, limit is {limit}")
    return _cayley_cached(n, cls)


def cayley_eigenvalue(p: Sequence[int], classes) -> Fraction:
    """Adjacency eigenvalue on Phi_p: sum over connection classes of |C| chi_p(C) / d_p."""
    p = _check_partition(p)
    n = sum(p)
    cls = _classes(n, classes)
    return sum((Fraction(class_size(c) * character(p, c), hook_dimension(p)) for c in cls), Fraction(0))


def cayley_laplacian_eigenvalue(p: Sequence[int], classes) -> Fraction:
    n = sum(p)
    deg = sum(class_size(c) for c in _classes(n, classes))
    return deg - cayley_eigenvalue(p, classes)


def transposition_adjacency_eigenvalue(p: Sequence[int]) -> int:
    """Content formula: (1/2) sum p_i (p_i - 2i + 1)."""
    p = _check_partition(p)
    return sum(x * (x - 2 * i + 1) for i, x in enumerate(p, 1)) // 2


def transposition_laplacian_eigenvalue(p: Sequence[int]) -> int:
    return comb(sum(p), 2) - transposition_adjacency_eigenvalue(p)


# --- Gram test -------------------------------------------------------------

def _as_perms(design, n: int) -> list[Perm]:
    out = []
    for s in design:
        s = parse_perm(s, n) if isinstance(s, str) else tuple(s)
        if len(s) != n or not is_perm(s):
            raise DesignError(f"{s} is not a permutation of 1..{n}")
        out.append(s)
    if len(set(out)) != len(out):
        raise DesignError("repeated permutation in design")
    return sorted(out)


def gram_sum(design, p: Sequence[int]) -> int:
    """sum over s, t in D of chi_p(s^-1 t): the squared norm of sum rho_p over D."""
    p = _check_partition(p)
    n = sum(p)
    d = _as_perms(design, n)
    if not d:
        raise DesignError("a design must be nonempty")
    if n <= MATRIX_N:
        idx = perm_index(n)
        x = np.zeros(factorial(n), dtype=np.int64)
        x[[idx[s] for s in d]] = 1
        return int(x @ gram_matrix(n, p) @ x)
    invs = [inverse(s) for s in d]
    types = Counter(cycle_type(compose(si, t)) for si in invs for t in d)
    return sum(m * character(p, mu) for mu, m in types.items())


def averages_phi_p(design, p: Sequence[int]) -> bool:
    return gram_sum(design, p) == 0


def phi_p_certificate(design, parts: Iterable[Sequence[int]], n: int) -> Certificate:
    d = _as_perms(design, n)
    parts = [_check_partition(p) for p in parts]
    cert = Certificate(True, "partitions " + " ".join(format_partition(p) for p in parts))
    for p in parts:
        g = gram_sum(d, p)
        cert.residuals.append(Residual(f"gram {format_partition(p)}", True, g))
        if g and cert.verdict:
            cert.verdict = False
            cert.counterexample = format_partition(p)
    cert.facts.append(("design_size", len(d)))
    return cert


def averaged_partitions(design, n: int) -> list[Partition]:
    """Nontrivial partitions p whose Phi_p the design averages."""
    d = _as_perms(design, n)
    return [p for p in partitions(n)[1:] if gram_sum(d, p) == 0]


@lru_cache(maxsize=None)
def class_index_matrix(n: int) -> np.ndarray:
    """C[i, j] = position in partitions(n) of the cycle type of s_i^-1 s_j."""
    perms = all_perms(n)
    pos = {mu: k for k, mu in enumerate(partitions(n))}
    # s_i^-1 s_j depends only on the row's inverse, so build row by row
    return np.array([[pos[cycle_type(compose(si, t))] for t in perms] for si in map(inverse, perms)],
                    dtype=np.int8)


@lru_cache(maxsize=None)
def gram_matrix(n: int, p: Partition) -> np.ndarray:
    """G[i, j] = chi_p(s_i^-1 s_j) over S_n in lexicographic order."""
    chi = np.array([character(p, mu) for mu in partitions(n)], dtype=np.int64)
    return chi[class_index_matrix(n)]


# --- t-wise uniformity -----------------------------------------------------

def t_wise_uniform_check(design, t: int, n: int | None = None) -> bool:
    """count(i -> j) * n! == |D| * (n - t)! for all ordered distinct t-tuples i, j."""
    if n is None:
        first = next(iter(design))
        n = len(first) if not isinstance(first, str) else None
        if n is None:
            raise DesignError("n is needed for string permutations")
    d = _as_perms(design, n)
    if not 1 <= t <= n:
        raise DesignError(f"t must lie in 1..{n}")
    tuples = list(itertools.permutations(range(1, n + 1), t))
    target = len(d) * factorial(n - t)
    counts = Counter()
    for s in d:
        for i in tuples:
            counts[(i, tuple(s[x - 1] for x in i))] += 1
    nf = factorial(n)
    return all(counts[(i, j)] * nf == target for i in tuples for j in tuples)


def first_part_partitions(n: int, t: int) -> list[Partition]:
    """Nontrivial partitions with p_1 >= n - t."""
    return [p for p in partitions(n)[1:] if p[0] >= n - t]


def _uniform_matrix(n: int, t: int) -> np.ndarray:
    """Rows: perms; columns: (i, j) tuple pairs; entry 1 if s maps i to j."""
    perms = all_perms(n)
    tuples = list(itertools.permutations(range(1, n + 1), t))
    pos = {(i, j): c for c, (i, j) in enumerate(itertools.product(tuples, tuples))}
    m = np.zeros((len(perms), len(pos)), dtype=np.int64)
    for r, s in enumerate(perms):
        for i in tuples:
            m[r, pos[(i, tuple(s[x - 1] for x in i))]] = 1
    return m


def _uniform_keys(n, t, masks_rows):
    m = _uniform_matrix(n, t)
    nf, tf = factorial(n), factorial(n - t)
    counts = masks_rows @ m
    size = masks_rows.sum(axis=1)
    return counts * nf - size[:, None] * tf


def _half_rows(bits: int) -> np.ndarray:
    masks = np.arange(1 << bits, dtype=np.int64)
    return ((masks[:, None] >> np.arange(bits, dtype=np.int64)) & 1).astype(np.int64)


def uniform_masks_mitm(n: int, t: int) -> set[int]:
    """All nonempty t-uniform subsets of S_n as bitmasks, by a meet-in-the-middle join."""
    nf = factorial(n)
    lo = nf // 2
    hi = nf - lo
    ra, rb = _half_rows(lo), _half_rows(hi)
    m = _uniform_matrix(n, t)
    tf = factorial(n - t)
    ka = (ra @ m[:lo]) * nf - ra.sum(axis=1)[:, None] * tf
    kb = (rb @ m[lo:]) * nf - rb.sum(axis=1)[:, None] * tf
    table: dict[bytes, list[int]] = {}
    for i, row in enumerate(ka):
        table.setdefault((-row).tobytes(), []).append(i)
    out = set()
    for j, row in enumerate(kb):
        for i in table.get(row.tobytes(), ()):
            mask = i | (j << lo)
            if mask:
                out.add(mask)
    return out


def gram_zero_masks_mitm(n: int, parts: Sequence[Partition], chunk: int = 512) -> set[int]:
    """All nonempty subsets of S_n with zero Gram sum for every partition in ``parts``.

    The quadratic form 1_D^T G 1_D is split over the two halves of S_n;
    float64 is exact here since every value is an integer below 2^53.
    """
    nf = factorial(n)
    lo = nf // 2
    hi = nf - lo
    ra, rb = _half_rows(lo).astype(np.float64), _half_rows(hi).astype(np.float64)
    forms = []
    for p in parts:
        g = gram_matrix(n, tuple(p)).astype(np.float64)
        gaa, gbb, gab = g[:lo, :lo], g[lo:, lo:], g[:lo, lo:]
        qa = np.einsum("ij,jk,ik->i", ra, gaa, ra)
        qb = np.einsum("ij,jk,ik->i", rb, gbb, rb)
        forms.append((qa, qb, ra @ gab))
    out = set()
    for start in range(0, len(ra), chunk):
        stop = min(start + chunk, len(ra))
        ok = np.ones((stop - start, len(rb)), dtype=bool)
        for qa, qb, ag in forms:
            q = qa[start:stop, None] + qb[None, :] + 2.0 * (ag[start:stop] @ rb.T)
            ok &= q == 0
        ii, jj = np.nonzero(ok)
        for i, j in zip(ii.tolist(), jj.tolist()):
            mask = (start + i) | (j << lo)
            if mask:
                out.add(mask)
    return out


def subgroup_closure(gens: Iterable[Perm], n: int) -> list[Perm]:
    e = identity(n)
    gens = list(gens)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                h = compose(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(seen)


def alternating_group(n: int) -> list[Perm]:
    return [s for s in all_perms(n) if sign(s) == 1]


@dataclass
class FirstPartReport:
    n: int
    t: int
    subsets: int
    agreements: int
    uniform_sets: list
    exhaustive: bool
    discrepancy: tuple | None = None

    @property
    def holds(self) -> bool:
        return self.discrepancy is None and self.agreements == self.subsets


def _known_positives(n: int) -> list[tuple[list[Perm], int]]:
    """(set, t) pairs known to be t-uniform: sharply transitive groups and A_n."""
    out = [(all_perms(n), n), (alternating_group(n), n - 2)]
    cyc = tuple(list(range(2, n + 1)) + [1])
    out.append((subgroup_closure([cyc], n), 1))
    if n == 5:
        # x -> 2x + 0 on Z/5 (points relabelled 1..5) with the 5-cycle: AGL(1, 5)
        mult = tuple(((2 * (i - 1)) % 5) + 1 for i in range(1, 6))
        out.append((subgroup_closure([cyc, mult], 5), 2))
    if n == 6:
        # PGL(2, 5) on the projective line {0..4, inf}: sharply 3-transitive
        def lin(f):
            return tuple(f(i) for i in range(1, 7))
        shift = lin(lambda i: 6 if i == 6 else (i % 5) + 1)
        scale = lin(lambda i: 6 if i == 6 else ((2 * (i - 1)) % 5) + 1)

        def inv_map(i):
            if i == 6:
                return 1
            if i == 1:
                return 6
            x = i - 1
            return (pow(x, 3, 5) * 4) % 5 + 1   # x -> -1/x
        out.append((subgroup_closure([shift, scale, lin(inv_map)], 6), 3))
    return out


def first_part_design_equivalence(n: int, t: int, samples: int = 2000, seed: int = 0,
                                  budget: int = DEFAULT_BUDGET) -> FirstPartReport:
    """Check t-uniform iff averaging every Phi_p with p_1 >= n - t.

    n <= 3 runs over all subsets directly; n = 4 uses meet-in-the-middle
    joins over all 2^24 subsets; n = 5, 6 use a seeded sample that always
    includes known uniform sets and one-element perturbations of them.
    """
    if not 1 <= t <= n:
        raise DesignError(f"t must lie in 1..{n}")
    parts = first_part_partitions(n, t)
    nf = factorial(n)
    perms = all_perms(n)
    if n <= 4:
        check_budget((1 << nf) - 1, budget, f"S_{n} subset enumeration")
        uni = uniform_masks_mitm(n, t)
        gram = gram_zero_masks_mitm(n, parts) if parts else set(range(1, 1 << nf))
        total = (1 << nf) - 1
        diff = sorted(uni ^ gram)
        rep = FirstPartReport(n, t, total, total - len(diff),
                              sorted(mask_to_set(m) for m in uni), True)
        if diff:
            m = diff[0]
            rep.discrepancy = (tuple(format_perm(perms[i]) for i in mask_to_set(m)), m in uni, m in gram)
        return rep
    rng = random.Random(seed)
    cands: list[list[Perm]] = []
    for s, _ in _known_positives(n):
        cands.append(s)
        if len(s) < nf:
            outside = [x for x in perms if x not in set(s)]
            cands.append(sorted(s[1:] + [rng.choice(outside)]))
    for _ in range(samples):
        k = rng.randrange(1, nf + 1)
        cands.append(sorted(rng.sample(perms, k)))
    agree = 0
    uniform = []
    rep = FirstPartReport(n, t, len(cands), 0, uniform, False)
    for s in cands:
        a = t_wise_uniform_check(s, t, n)
        b = all(gram_sum(s, p) == 0 for p in parts)
        if a:
            uniform.append(tuple(perm_index(n)[x] for x in s))
        if a == b:
            agree += 1
        elif rep.discrepancy is None:
            rep.discrepancy = (tuple(format_perm(x) for x in s), a, b)
    rep.agreements = agree
    return rep


# --- orders ----------------------------------------------------------------

def order_conflict_witness(n: int) -> tuple[Partition, Partition]:
    """p with larger first part than q but transposition Laplacian eigenvalue >= that of q."""
    if n < 6:
        raise DesignError("the first part and Laplacian orders agree for n < 6")
    if n % 2:
        m = (n - 1) // 2
        p, q = (m + 1,) + (1,) * m, (m, m, 1)
    else:
        m = (n - 2) // 2
        p, q = (m + 1,) + (1,) * (m + 1), (m, m, 2)
    assert p[0] > q[0] and transposition_laplacian_eigenvalue(p) >= transposition_laplacian_eigenvalue(q)
    return p, q


def clumping_scan(n: int) -> list[tuple[Partition, int]]:
    """For each nontrivial class, the number of distinct Laplacian eigenvalues over all p."""
    ps = partitions(n)
    out = []
    for c in ps[:-1]:
        vals = {cayley_laplacian_eigenvalue(p, [c]) for p in ps}
        out.append((c, len(vals)))
    return out


# --- cosets ----------------------------------------------------------------

def coset_averaged_partitions(n: int, t: int) -> list[Partition]:
    """Partitions p with p_1 < t: the Phi_p averaged by every coset of a copy of S_t.

    The indicator of S_t induces the trivial character, whose constituents
    all have first part at least t (branching rule).
    """
    return [p for p in partitions(n) if p[0] < t]


def symmetric_coset(n: int, t: int, left: Perm | None = None, right: Perm | None = None) -> list[Perm]:
    """left * S_t * right, where S_t permutes {1..t} and fixes {t+1..n}."""
    if not 1 <= t < n:
        raise DesignError("need 1 <= t < n")
    left = left or identity(n)
    right = right or identity(n)
    sub = [tuple(list(s) + list(range(t + 1, n + 1))) for s in itertools.permutations(range(1, t + 1))]
    return sorted(compose(compose(left, s), right) for s in sub)


def point_coset(n: int, i: int, j: int) -> list[Perm]:
    """{s : s(i) = j}, a coset of a copy of S_{n-1}."""
    return [s for s in all_perms(n) if s[i - 1] == j]


@dataclass
class BirkhoffReport:
    designs: int
    minimal: list
    expected: list
    unions_ok: bool

    @property
    def holds(self) -> bool:
        return sorted(self.minimal) == sorted(self.expected) and self.unions_ok


def birkhoff_minimal_enumeration(n: int, budget: int = DEFAULT_BUDGET) -> BirkhoffReport:
    """All designs averaging Phi_p with p_1 < n - 1; minimal ones should be the n^2 point cosets."""
    nf = factorial(n)
    check_budget((1 << nf) - 1, budget, f"S_{n} subset enumeration")
    parts = [p for p in partitions(n) if p[0] < n - 1]
    masks = gram_zero_masks_mitm(n, parts)
    designs = [mask_to_set(m) for m in sorted(masks)]
    minimal = minimal_sets(designs)
    idx = perm_index(n)
    expected = sorted({tuple(sorted(idx[s] for s in point_coset(n, i, j)))
                       for i in range(1, n + 1) for j in range(1, n + 1)})
    return BirkhoffReport(len(designs), minimal, expected, union_closure_audit(minimal, designs))


# --- named sets ------------------------------------------------------------

S4_C = ("e", "(1234)", "(13)(24)", "(1432)")
S4_V = ("e", "(12)(34)", "(13)(24)", "(14)(23)")
S4_V_UNION = ("e", "(12)(34)", "(13)(24)", "(14)(23)", "(12)", "(234)", "(1324)", "(143)")
S4_LAPLACIAN_ONLY = (
    ("e", "(14)", "(24)", "(34)", "(123)", "(1243)", "(1423)", "(1234)", "(132)", "(1324)", "(1342)", "(1432)"),
    ("e", "(1243)", "(14)(23)", "(1342)", "(12)", "(143)", "(1324)", "(234)", "(13)", "(243)", "(1234)", "(142)"),
)


def perms_from_text(items: Iterable[str], n: int) -> list[Perm]:
    return _as_perms([parse_perm(x, n) for x in items], n)


class GramState:
    """Incremental Gram sums for search pruning.

    With r elements still to add, the final matrix sum differs from the
    partial one by at most r * sqrt(d_p) in Frobenius norm, so a partial
    Gram sum above r^2 d_p cannot reach zero.
    """

    def __init__(self, n: int, parts: Sequence[Partition]):
        self.mats = [gram_matrix(n, tuple(p)) for p in parts]
        self.dims = [hook_dimension(p) for p in parts]
        self.chosen: list[int] = []
        self.vals = [[0] * len(parts)]

    def push(self, v: int) -> None:
        new = []
        for g, cur in zip(self.mats, self.vals[-1]):
            cross = int(g[v, self.chosen].sum()) if self.chosen else 0
            new.append(cur + 2 * cross + int(g[v, v]))
        self.chosen.append(v)
        self.vals.append(new)

    def pop(self) -> None:
        self.chosen.pop()
        self.vals.pop()

    def feasible(self, remaining: int) -> bool:
        return all(val <= remaining * remaining * d for val, d in zip(self.vals[-1], self.dims))
