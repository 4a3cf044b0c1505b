"""Johnson graphs J(n, k): spectrum, exact design tests, block designs and stars.

Vertices are the k-subsets of {1..n} ranked in colex order: S = {s_1 < ... < s_k}
has index sum C(s_i - 1, i).  Laplacian eigenspace t (t = 0..k) has eigenvalue
t(n + 1 - t).  These are pairwise distinct when k <= n/2, so the Lagrange
projector of the graph itself decides design membership exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

from graphdesigns.errors import DesignError
from graphdesigns.graph import (DEFAULT_BUDGET, Certificate, Family, Graph, SpectrumSketch,
                                dense_spectrum, is_design_by_projectors, projector_matrix)
from graphdesigns.search import check_budget, mask_to_set, minimal_sets, subset_matrix, union_closure_audit

KSubset = tuple[int, ...]

DEFAULT_VERTEX_LIMIT = 4096

FANO_PLANE: tuple[KSubset, ...] = ((1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (1, 5, 6), (2, 6, 7), (1, 3, 7))


# --- subsets ---------------------------------------------------------------

def colex_rank(s: Sequence[int]) -> int:
    return sum(comb(x - 1, i + 1) for i, x in enumerate(sorted(s)))


def colex_unrank(r: int, k: int) -> KSubset:
    out = []
    for i in range(k, 0, -1):
        x = i
        while comb(x, i) <= r:
            x += 1
        out.append(x)
        r -= comb(x - 1, i)
    return tuple(sorted(out))


def k_subsets(n: int, k: int) -> list[KSubset]:
    """All k-subsets of {1..n} in colex order."""
    return sorted(itertools.combinations(range(1, n + 1), k), key=lambda s: s[::-1])


def parse_subset(text: str) -> KSubset:
    text = text.strip()
    parts = text.split(",") if "," in text else list(text)
    return tuple(sorted(int(p) for p in parts if p.strip()))


def format_subset(s: Sequence[int]) -> str:
    return ",".join(map(str, s))


def _as_subsets(design, n: int, k: int) -> list[KSubset]:
    out = []
    for s in design:
        s = parse_subset(s) if isinstance(s, str) else tuple(sorted(s))
        if len(s) != k or len(set(s)) != k or any(not 1 <= x <= n for x in s):
            raise DesignError(f"{s} is not a {k}-subset of 1..{n}")
        out.append(s)
    if len(set(out)) != len(out):
        raise DesignError("repeated block in design")
    return sorted(out, key=lambda s: s[::-1])


def complement(s: Sequence[int], n: int) -> KSubset:
    return tuple(x for x in range(1, n + 1) if x not in set(s))


# --- graph and spectrum ----------------------------------------------------

@lru_cache(maxsize=32)
def build_johnson(n: int, k: int, limit: int = DEFAULT_VERTEX_LIMIT) -> Graph:
    if not 1 <= k or 2 * k > n:
        raise DesignError("J(n, k) is built for 1 <= k <= n/2")
    if comb(n, k) > limit:
        raise DesignError(f"J({n},{k}) has {comb(n, k)} vertices, limit is {limit}")
    verts = k_subsets(n, k)
    nbrs = []
    for s in verts:
        row = []
        ss = set(s)
        for out in s:
            for inn in range(1, n + 1):
                if inn not in ss:
                    row.append(colex_rank((ss - {out}) | {inn}))
        nbrs.append(row)
    return Graph(len(verts), nbrs, Family("johnson", (n, k)))


@dataclass(frozen=True)
class JohnsonSpectrum:
    n: int
    k: int
    entries: tuple[tuple[int, int, int], ...]   # (t, lambda_t, mu_t)

    def sketch(self) -> SpectrumSketch:
        return SpectrumSketch(tuple(e[1] for e in self.entries), tuple(e[2] for e in self.entries), "laplacian")


def johnson_spectrum(n: int, k: int) -> JohnsonSpectrum:
    if not 0 <= k or 2 * k > n:
        raise DesignError("spectrum formula is stated for k <= n/2")
    entries = []
    for t in range(k + 1):
        mu = Fraction(n - 2 * t + 1, n - t + 1) * comb(n, t)
        entries.append((t, t * (n + 1 - t), int(mu)))
    return JohnsonSpectrum(n, k, tuple(entries))


def eberlein_e1(n: int, k: int, t: int) -> int:
    """Adjacency eigenvalue of eigenspace t."""
    if not 0 <= t <= k:
        raise DesignError("need 0 <= t <= k")
    return (k - t) * (n - k - t) - t


# --- design tests ----------------------------------------------------------

def _normalise(n: int, k: int, blocks: list[KSubset]):
    if 2 * k <= n:
        return k, blocks, False
    return n - k, sorted((complement(s, n) for s in blocks), key=lambda s: s[::-1]), True


def is_phi_design_johnson(n: int, k: int, design, selected: Iterable[int]) -> Certificate:
    """Exact projector test that ``design`` averages eigenspaces t in ``selected``.

    For k > n/2 the blocks are replaced by their complements in J(n, n - k).
    """
    blocks = _as_subsets(design, n, k)
    if not blocks:
        raise DesignError("a design must be nonempty")
    kk, blocks, flipped = _normalise(n, k, blocks)
    selected = sorted(set(selected))
    if any(not 1 <= t <= kk for t in selected):
        raise DesignError(f"eigenspace indices must lie in 1..{kk}")
    g = build_johnson(n, kk)
    spec = johnson_spectrum(n, kk).sketch()
    cert = is_design_by_projectors(g, spec, selected, [colex_rank(s) for s in blocks],
                                   label=f"J({n},{kk}) eigenspaces {selected}")
    if flipped:
        cert.facts.append(("relabeled", f"complements in J({n},{kk})"))
    return cert


def block_design_check(n: int, k: int, design, t: int) -> tuple[bool, int | None]:
    """Is every t-subset of {1..n} in the same number of blocks?"""
    if not 0 <= t <= k:
        raise DesignError("need 0 <= t <= k")
    blocks = _as_subsets(design, n, k)
    counts = {T: 0 for T in itertools.combinations(range(1, n + 1), t)}
    for b in blocks:
        for T in itertools.combinations(b, t):
            counts[T] += 1
    vals = set(counts.values())
    if len(vals) == 1:
        return True, vals.pop()
    return False, None


# --- batched testers -------------------------------------------------------

def _int_matrix(num):
    big = max((abs(int(x)) for x in num.flat), default=0)
    return np.array(num, dtype=np.int64) if big < 2**40 else num


def projector_mask(rows: np.ndarray, n: int, k: int, selected: Iterable[int]) -> np.ndarray:
    """Exact projector test over many indicator rows of J(n, k), k <= n/2."""
    g = build_johnson(n, k)
    spec = johnson_spectrum(n, k).sketch()
    ok = np.ones(rows.shape[0], dtype=bool)
    for t in selected:
        num, _ = projector_matrix(g, spec, t)
        ok &= ~(rows @ _int_matrix(num).T).astype(bool).any(axis=1)
    return ok


def block_design_mask(rows: np.ndarray, n: int, k: int, t: int) -> np.ndarray:
    verts = k_subsets(n, k)
    ts = list(itertools.combinations(range(1, n + 1), t))
    contain = np.array([[1 if set(T) <= set(s) else 0 for T in ts] for s in verts], dtype=np.int64)
    counts = rows @ contain
    return (counts == counts[:, :1]).all(axis=1)


def float_design_mask(rows: np.ndarray, n: int, k: int, selected: Iterable[int], tol: float = 1e-8) -> np.ndarray:
    g = build_johnson(n, k)
    spec = dense_spectrum(g)
    lams = {johnson_spectrum(n, k).entries[t][1] for t in selected}
    cols = [j for j, lam in enumerate(spec.eigenvalues) if any(abs(lam - x) < 1e-6 for x in lams)]
    vecs = spec.vectors[:, cols]
    size = rows.sum(axis=1)
    means = (rows @ vecs) / size[:, None]
    return (np.abs(means - vecs.mean(axis=0)) <= tol).all(axis=1)


@dataclass
class JohnsonEquivalenceReport:
    subsets: int
    agreements: int
    positives: int
    discrepancy: tuple | None = None

    @property
    def holds(self) -> bool:
        return self.discrepancy is None and self.agreements == self.subsets


def johnson_equivalence(n: int, k: int, t: int, budget: int = DEFAULT_BUDGET) -> JohnsonEquivalenceReport:
    """Exhaustive check: t-design iff exact projector design iff float averaging."""
    size = comb(n, k)
    check_budget((1 << size) - 1, budget, f"J({n},{k}) subset enumeration")
    rows = subset_matrix(size)
    a = block_design_mask(rows, n, k, t)
    b = projector_mask(rows, n, k, range(1, t + 1))
    c = float_design_mask(rows, n, k, range(1, t + 1))
    agree = (a == b) & (b == c)
    rep = JohnsonEquivalenceReport(len(rows), int(agree.sum()), int(b.sum()))
    bad = np.flatnonzero(~agree)
    if bad.size:
        i = int(bad[0])
        verts = k_subsets(n, k)
        rep.discrepancy = (tuple(format_subset(verts[v]) for v in mask_to_set(i + 1)),
                           bool(a[i]), bool(b[i]), bool(c[i]))
    return rep


# --- stars and incidence ---------------------------------------------------

def star(n: int, k: int, T: Sequence[int]) -> list[KSubset]:
    """All k-subsets containing T."""
    T = set(T)
    if len(T) > k or any(not 1 <= x <= n for x in T):
        raise DesignError("T must be a subset of 1..n with at most k elements")
    return [s for s in k_subsets(n, k) if T <= set(s)]


def star_check(n: int, k: int, T: Sequence[int]) -> Certificate:
    """The star of T averages every eigenspace above |T| (empty collection when |T| >= min(k, n - k))."""
    t = len(set(T))
    top = min(k, n - k)
    sel = range(t + 1, top + 1)
    blocks = star(n, k, T)
    if t >= top:
        cert = Certificate(True, f"J({n},{k}) eigenspaces []")
        cert.facts.append(("design_size", len(blocks)))
        return cert
    return is_phi_design_johnson(n, k, blocks, sel)


def incidence_b(n: int, k: int, t: int) -> np.ndarray:
    """B_t(S, T) = 1 iff T is inside S; rows colex k-subsets, columns colex t-subsets."""
    if not 0 <= t <= k <= n:
        raise DesignError("need 0 <= t <= k <= n")
    rows = k_subsets(n, k)
    cols = k_subsets(n, t)
    return np.array([[1 if set(T) <= set(S) else 0 for T in cols] for S in rows], dtype=np.int64)


@dataclass
class JohnsonMinimalReport:
    designs: int
    minimal: list
    expected: list
    unions_ok: bool

    @property
    def holds(self) -> bool:
        return sorted(self.minimal) == sorted(self.expected) and self.unions_ok


def minimal_reverse_enumeration_johnson(n: int, k: int, budget: int = DEFAULT_BUDGET) -> JohnsonMinimalReport:
    """All designs averaging eigenspaces 2..k; minimal ones should be the stars D_i and complements."""
    size = comb(n, k)
    check_budget((1 << size) - 1, budget, f"J({n},{k}) subset enumeration")
    rows = subset_matrix(size)
    ok = projector_mask(rows, n, k, range(2, k + 1))
    designs = [mask_to_set(int(i) + 1) for i in np.flatnonzero(ok)]
    minimal = minimal_sets(designs)
    expected = set()
    for i in range(1, n + 1):
        st = {colex_rank(s) for s in star(n, k, (i,))}
        expected.add(tuple(sorted(st)))
        expected.add(tuple(sorted(set(range(size)) - st)))
    return JohnsonMinimalReport(len(designs), minimal, sorted(expected), union_closure_audit(minimal, designs))


def design_indices(design, n: int, k: int) -> list[int]:
    return sorted(colex_rank(s) for s in _as_subsets(design, n, k))
