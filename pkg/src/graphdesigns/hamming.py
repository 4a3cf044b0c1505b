"""Hamming graphs H(n, q): character tests, orthogonal arrays, Hadamard matrices.

Vertices are words in (Z/qZ)^n.  A word's vertex index is its base-q value
with the first digit most significant, so ``001`` in H(3, 2) is vertex 1.
Coordinate arguments (count tables, subcubes, projections) are 1-indexed:
coordinate 1 is the first digit.

The character ``chi_y(x) = w^(y.x)`` spans the Laplacian eigenspace of
eigenvalue ``q|y|``; a set averages that eigenspace iff every character sum
over it vanishes, and character sums are decided exactly in Z[w].
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Sequence

import numpy as np

from graphdesigns.errors import DesignError
from graphdesigns.exact import CyclotomicInt, cyclo_from_power_sums, divisors, euler_phi, reduction_matrix
from graphdesigns.graph import (DEFAULT_BUDGET, Certificate, Family, Graph, Residual, SpectrumSketch)
from graphdesigns.search import (check_budget, mask_to_set, minimal_sets, set_to_mask, subset_matrix,
                                 union_closure_audit)

Word = tuple[int, ...]

DEFAULT_VERTEX_LIMIT = 1 << 16


# --- words -----------------------------------------------------------------

def word_to_index(word: Sequence[int], q: int) -> int:
    idx = 0
    for d in word:
        idx = idx * q + d
    return idx


def index_to_word(idx: int, n: int, q: int) -> Word:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        idx, out[i] = divmod(idx, q)
    return tuple(out)


def parse_word(text: str, q: int | None = None) -> Word:
    text = text.strip()
    word = tuple(int(p) for p in text.split(",")) if "," in text else tuple(int(c) for c in text)
    if q is not None and any(not 0 <= d < q for d in word):
        raise DesignError(f"word {text!r} has a digit outside 0..{q - 1}")
    return word


def format_word(word: Sequence[int]) -> str:
    if any(d > 9 for d in word):
        return ",".join(map(str, word))
    return "".join(map(str, word))


def weight(word: Sequence[int]) -> int:
    return sum(1 for d in word if d)


def all_words(n: int, q: int) -> list[Word]:
    return list(itertools.product(range(q), repeat=n))


def words_of_weight(n: int, q: int, w: int) -> list[Word]:
    return [y for y in all_words(n, q) if weight(y) == w]


def _as_words(design: Iterable, n: int | None = None, q: int | None = None) -> list[Word]:
    out = []
    for x in design:
        if isinstance(x, str):
            x = parse_word(x, q)
        out.append(tuple(x))
    if n is not None and any(len(x) != n for x in out):
        raise DesignError(f"all words must have length {n}")
    if q is not None and any(not 0 <= d < q for x in out for d in x):
        raise DesignError(f"digit outside 0..{q - 1}")
    if len(set(out)) != len(out):
        raise DesignError("repeated word in design")
    return sorted(out)


# --- graph and spectrum ----------------------------------------------------

@lru_cache(maxsize=32)
def build_hamming(n: int, q: int, limit: int = DEFAULT_VERTEX_LIMIT) -> Graph:
    if n < 1 or q < 2:
        raise DesignError("H(n, q) needs n >= 1 and q >= 2")
    size = q**n
    if size > limit:
        raise DesignError(f"H({n},{q}) has {size} vertices, limit is {limit}")
    nbrs = []
    for idx in range(size):
        x = index_to_word(idx, n, q)
        row = []
        for i in range(n):
            for a in range(q):
                if a != x[i]:
                    row.append(word_to_index(x[:i] + (a,) + x[i + 1:], q))
        nbrs.append(row)
    return Graph(size, nbrs, Family("hamming", (n, q)))


def hamming_spectrum(n: int, q: int) -> SpectrumSketch:
    """Laplacian eigenvalue q*w with multiplicity C(n, w)(q-1)^w for w = 0..n."""
    return SpectrumSketch(tuple(q * w for w in range(n + 1)),
                          tuple(comb(n, w) * (q - 1) ** w for w in range(n + 1)), "laplacian")


def character_vector(y: Sequence[int], n: int, q: int) -> np.ndarray:
    """Complex values of chi_y on all vertices, in index order."""
    words = np.array(all_words(n, q), dtype=np.int64).reshape(-1, n)
    return np.exp(2j * np.pi * ((words @ np.asarray(y, dtype=np.int64)) % q) / q)


# --- character sums --------------------------------------------------------

def character_sum(design: Iterable[Sequence[int]], y: Sequence[int], q: int) -> CyclotomicInt:
    """Exact sum of w^(y.x) over the design."""
    counts = [0] * q
    for x in design:
        if len(x) != len(y):
            raise DesignError("word lengths differ")
        counts[sum(a * b for a, b in zip(x, y)) % q] += 1
    return cyclo_from_power_sums(q, counts)


def is_phi_design(design, weights: Iterable[int], n: int, q: int) -> Certificate:
    """Exact test that ``design`` averages every chi_y with |y| in ``weights``.

    Stops at the first failing character (by weight, then lexicographic y)
    and records it as the witness.
    """
    words = _as_words(design, n, q)
    if not words:
        raise DesignError("a design must be nonempty")
    weights = sorted(set(weights))
    if any(not 1 <= w <= n for w in weights):
        raise DesignError(f"weights must lie in 1..{n}")
    cert = Certificate(True, f"H({n},{q}) weights {weights}")
    for w in weights:
        for y in words_of_weight(n, q, w):
            s = character_sum(words, y, q)
            if not s.is_zero():
                cert.verdict = False
                cert.residuals.append(Residual(f"weight {w}", True, str(s)))
                cert.counterexample = format_word(y)
                break
        else:
            cert.residuals.append(Residual(f"weight {w}", True, 0))
            continue
        break
    cert.facts.append(("design_size", len(words)))
    return cert


# --- counting functions and orthogonal arrays ------------------------------

@dataclass(frozen=True)
class CountTable:
    coords: tuple[int, ...]
    counts: dict

    def total(self) -> int:
        return sum(self.counts.values())

    def is_constant(self) -> bool:
        return len(set(self.counts.values())) == 1


def count_table(design, coords: Sequence[int], q: int) -> CountTable:
    """Number of words of ``design`` showing each pattern on ``coords`` (1-indexed)."""
    coords = tuple(coords)
    counts = {a: 0 for a in itertools.product(range(q), repeat=len(coords))}
    for x in _as_words(design, q=q):
        if any(not 1 <= i <= len(x) for i in coords):
            raise DesignError(f"coordinate outside 1..{len(x)}")
        counts[tuple(x[i - 1] for i in coords)] += 1
    return CountTable(coords, counts)


def oa_check(design, t: int, n: int, q: int) -> tuple[bool, int | None]:
    """Is ``design`` an orthogonal array of strength t?  Returns (verdict, index)."""
    words = _as_words(design, n, q)
    if not 1 <= t <= n:
        raise DesignError(f"strength must lie in 1..{n}")
    size = len(words)
    if size == 0 or size % q**t:
        return False, None
    lam = size // q**t
    for coords in itertools.combinations(range(1, n + 1), t):
        table = count_table(words, coords, q)
        if any(c != lam for c in table.counts.values()):
            return False, None
    return True, lam


def divisibility_check(design, t: int, q: int) -> bool:
    """Does q^t divide |D|?  Accepts a design or its size."""
    size = design if isinstance(design, int) else len(list(design))
    return size % q**t == 0


def projection(design, coords: Sequence[int]) -> list[Word]:
    """Multiset projection onto 1-indexed ``coords`` (duplicates kept)."""
    words = [parse_word(x) if isinstance(x, str) else tuple(x) for x in design]
    return sorted(tuple(x[i - 1] for i in coords) for x in words)


# --- hyperplanes -----------------------------------------------------------

@lru_cache(maxsize=None)
def hyperplanes(t: int, q: int) -> tuple[tuple[int, ...], ...]:
    """All nonempty hyperplanes {a : b.a = c} of (Z/qZ)^t as pattern index tuples."""
    pats = list(itertools.product(range(q), repeat=t))
    seen = set()
    out = []
    for b in itertools.product(range(q), repeat=t):
        for c in range(q):
            h = tuple(i for i, a in enumerate(pats) if sum(x * y for x, y in zip(a, b)) % q == c)
            if h and h not in seen:
                seen.add(h)
                out.append(h)
    return tuple(out)


def hyperplane_average_check(design, n: int, q: int, t: int) -> bool:
    """Does every counting function average |D|/q^t over every nonempty hyperplane?"""
    words = _as_words(design, n, q)
    if not 1 <= t <= n:
        raise DesignError(f"strength must lie in 1..{n}")
    size = len(words)
    pats = list(itertools.product(range(q), repeat=t))
    for coords in itertools.combinations(range(1, n + 1), t):
        table = count_table(words, coords, q)
        vals = [table.counts[a] for a in pats]
        for h in hyperplanes(t, q):
            if q**t * sum(vals[i] for i in h) != size * len(h):
                return False
    return True


# --- batched exhaustive testers --------------------------------------------

def _word_array(n, q):
    return np.array(all_words(n, q), dtype=np.int64).reshape(-1, n)


def phi_design_mask(rows: np.ndarray, weights: Iterable[int], n: int, q: int) -> np.ndarray:
    """Vectorised exact character test over many indicator rows."""
    words = _word_array(n, q)
    red = np.array(reduction_matrix(q), dtype=np.int64)
    ok = np.ones(rows.shape[0], dtype=bool)
    for w in sorted(set(weights)):
        for y in words_of_weight(n, q, w):
            onehot = np.eye(q, dtype=np.int64)[(words @ np.array(y)) % q]
            coeffs = (rows @ onehot) @ red
            ok &= ~coeffs.any(axis=1)
    return ok


def _pattern_onehots(n, q, t):
    words = _word_array(n, q)
    place = q ** np.arange(t - 1, -1, -1)
    eye = np.eye(q**t, dtype=np.int64)
    for coords in itertools.combinations(range(n), t):
        yield eye[words[:, list(coords)] @ place]


def oa_mask(rows: np.ndarray, t: int, n: int, q: int) -> np.ndarray:
    size = rows.sum(axis=1)
    ok = np.ones(rows.shape[0], dtype=bool)
    for onehot in _pattern_onehots(n, q, t):
        counts = rows @ onehot
        ok &= (counts * q**t == size[:, None]).all(axis=1)
    return ok


def hyperplane_mask(rows: np.ndarray, t: int, n: int, q: int) -> np.ndarray:
    size = rows.sum(axis=1)
    ok = np.ones(rows.shape[0], dtype=bool)
    hp = hyperplanes(t, q)
    for onehot in _pattern_onehots(n, q, t):
        counts = rows @ onehot
        for h in hp:
            ok &= counts[:, list(h)].sum(axis=1) * q**t == size * len(h)
    return ok


@dataclass
class EquivalenceReport:
    subsets: int
    agreements: int
    positives: int
    discrepancy: tuple | None = None

    @property
    def holds(self) -> bool:
        return self.discrepancy is None and self.agreements == self.subsets


def oa_design_equivalence(n: int, q: int, t: int, budget: int = DEFAULT_BUDGET) -> EquivalenceReport:
    """Exhaustive three-way comparison over every nonempty subset of H(n, q)."""
    size = q**n
    check_budget((1 << size) - 1, budget, f"H({n},{q}) subset enumeration")
    words = all_words(n, q)
    rows = subset_matrix(size)
    a = oa_mask(rows, t, n, q)
    b = phi_design_mask(rows, range(1, t + 1), n, q)
    c = hyperplane_mask(rows, t, n, q)
    agree = (a == b) & (b == c)
    report = EquivalenceReport(len(rows), int(agree.sum()), int(b.sum()))
    bad = np.flatnonzero(~agree)
    if bad.size:
        i = int(bad[0])
        report.discrepancy = (tuple(format_word(words[v]) for v in mask_to_set(i + 1)),
                              bool(a[i]), bool(b[i]), bool(c[i]))
    return report


# --- Hadamard matrices -----------------------------------------------------

def is_hadamard(h) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.size == 0:
        return False
    if not np.isin(h, (1, -1)).all():
        return False
    return bool((h @ h.T == h.shape[0] * np.eye(h.shape[0], dtype=h.dtype)).all())


def sylvester(k: int) -> np.ndarray:
    h = np.array([[1]], dtype=np.int64)
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return h


def design_to_hadamard(design) -> np.ndarray:
    """Map a size-4l strength-2 design of H(4l-1, 2) to a 4l x 4l Hadamard matrix.

    Rows follow the sorted design; 0 -> 1, 1 -> -1, then an all-ones column.
    """
    words = _as_words(design, q=2)
    if not words:
        raise DesignError("empty design")
    n = len(words[0])
    order = len(words)
    if (n + 1) % 4 or order != n + 1:
        raise DesignError(f"need n = 4l - 1 and |D| = 4l, got n={n}, |D|={order}")
    if not is_phi_design(words, (1, 2), n, 2):
        raise DesignError("design does not average the first two eigenspaces")
    h = 1 - 2 * np.array(words, dtype=np.int64)
    return np.hstack([h, np.ones((order, 1), dtype=np.int64)])


def hadamard_to_design(h) -> list[Word]:
    """Normalise the first row to ones, drop it, and read columns as words."""
    h = np.asarray(h, dtype=np.int64)
    if not is_hadamard(h):
        raise DesignError("matrix is not Hadamard")
    order = h.shape[0]
    if order < 4 or order % 4:
        raise DesignError(f"order {order} is not a positive multiple of 4")
    h = h * h[0]
    words = [tuple(int(b) for b in col) for col in ((1 - h[1:]) // 2).T]
    words = sorted(words)
    if not is_phi_design(words, (1, 2), order - 1, 2):
        raise DesignError("conversion did not yield a design")
    return words


def size_bound_check(design, n: int) -> Certificate:
    """Verify a strength-2 design of H(n, 2) and record |D| > n and 4 | |D|.

    Also records the zero-count audit: relative to the first word, the
    number of agreeing coordinates z_k of the other words satisfies
    sum z_k = n(2l - 1) and sum z_k(z_k - 1) = n(n - 1)(l - 1).
    """
    words = _as_words(design, n, 2)
    cert = is_phi_design(words, (1, 2), n, 2) if words else Certificate(False, "empty")
    size = len(words)
    cert.tested_selector = f"size bounds for H({n},2) weights [1, 2]"
    cert.facts.append(("is_design", cert.verdict))
    cert.facts.append(("size_exceeds_n", size > n))
    cert.facts.append(("size_divisible_by_4", size % 4 == 0))
    if cert.verdict and size % 4 == 0:
        ell = size // 4
        base = words[0]
        z = [sum(1 for a, b in zip(base, w) if a == b) for w in words[1:]]
        cert.facts.append(("zero_count_sum", sum(z) == n * (2 * ell - 1)))
        cert.facts.append(("zero_pair_sum", sum(k * (k - 1) for k in z) == n * (n - 1) * (ell - 1)))
    cert.verdict = cert.verdict and size > n and size % 4 == 0
    return cert


# --- reverse order ---------------------------------------------------------

def subcube(n: int, q: int, coords: Sequence[int], pattern: Sequence[int]) -> list[Word]:
    """Words agreeing with ``pattern`` on 1-indexed ``coords``: a copy of H(n - t, q)."""
    coords = tuple(coords)
    if len(coords) != len(pattern) or len(set(coords)) != len(coords):
        raise DesignError("coords and pattern must match in length, coords distinct")
    if any(not 1 <= i <= n for i in coords) or any(not 0 <= a < q for a in pattern):
        raise DesignError(f"coordinates must lie in 1..{n} and digits in 0..{q - 1}")
    return [x for x in all_words(n, q) if all(x[i - 1] == a for i, a in zip(coords, pattern))]


@dataclass
class MinimalReport:
    designs: int
    minimal: list
    expected: list
    unions_ok: bool

    @property
    def holds(self) -> bool:
        return sorted(self.minimal) == sorted(self.expected) and self.unions_ok


def minimal_reverse_enumeration(n: int, q: int, budget: int = DEFAULT_BUDGET) -> MinimalReport:
    """Brute-force all designs averaging weights 2..n and compare minimal ones with the D_{i,a}."""
    size = q**n
    check_budget((1 << size) - 1, budget, f"H({n},{q}) subset enumeration")
    rows = subset_matrix(size)
    ok = phi_design_mask(rows, range(2, n + 1), n, q)
    designs = [mask_to_set(int(i) + 1) for i in np.flatnonzero(ok)]
    minimal = minimal_sets(designs)
    expected = sorted({tuple(sorted(word_to_index(x, q) for x in subcube(n, q, (i,), (a,))))
                       for i in range(1, n + 1) for a in range(q)})
    return MinimalReport(len(designs), minimal, expected, union_closure_audit(minimal, designs))


# --- random-walk order -----------------------------------------------------

def random_walk_weights(n: int) -> list[int]:
    """Weights averaged by an extremal random-walk design of H(n, 2), n even."""
    return [w for w in range(1, n + 1) if 2 * w != n]


def random_walk_extremal_check(n: int, design) -> Certificate:
    if n % 2:
        raise DesignError("random-walk extremal designs need even n")
    words = _as_words(design, n, 2)
    cert = is_phi_design(words, random_walk_weights(n), n, 2)
    cert.tested_selector = f"H({n},2) random-walk extremal (all weights except {n // 2})"
    g = build_hamming(n, 2)
    members = {word_to_index(x, 2) for x in words}
    m_num = n * len(words)
    m_int = m_num % 2**n == 0 and m_num > 0
    cert.facts.append(("neighbor_count_integral", m_int))
    if m_int:
        m = m_num // 2**n
        counts = [sum(1 for u in g.neighbors[v] if u in members) for v in range(g.n)]
        uniform = all(c == m for c in counts)
        cert.facts.append(("neighbor_count", m))
        cert.facts.append(("every_vertex_has_m_neighbors", uniform))
    else:
        uniform = False
    cert.verdict = cert.verdict and m_int and uniform
    return cert


# --- Radon kernel ----------------------------------------------------------

def _g(vec, q):
    g = q
    for v in vec:
        g = gcd(g, v % q)
    return g


def radon_kernel(t: int, q: int, limit: int = 4096) -> np.ndarray:
    """K(a*, a) = g_q(a* - a) q^(t-1), rows/columns in base-q pattern order."""
    if q**t > limit:
        raise DesignError(f"kernel order {q**t} exceeds limit {limit}")
    pats = list(itertools.product(range(q), repeat=t))
    return np.array([[_g([x - y for x, y in zip(s, a)], q) * q ** (t - 1) for a in pats] for s in pats],
                    dtype=np.int64)


def radon_kernel_bruteforce(t: int, q: int) -> np.ndarray:
    """K(a*, a) = #{b : b.a* = b.a}, counted directly."""
    pats = list(itertools.product(range(q), repeat=t))
    return np.array([[sum(1 for b in pats
                          if sum(x * y for x, y in zip(b, s)) % q == sum(x * y for x, y in zip(b, a)) % q)
                      for a in pats] for s in pats], dtype=np.int64)


def radon_kernel_eigenvalue(y: Sequence[int], q: int) -> int:
    """Eigenvalue of chi_y: q^(t-1) * sum over q' | g_q(y) of phi(q/q') q'^t."""
    t = len(y)
    g = _g(y, q)
    return q ** (t - 1) * sum(euler_phi(q // d) * d**t for d in divisors(g))


# --- float cross-check helpers ---------------------------------------------

def float_character_sum(design, y: Sequence[int], q: int) -> complex:
    w = np.exp(2j * np.pi / q)
    return complex(sum(w ** (sum(a * b for a, b in zip(x, y)) % q) for x in design))


def design_indices(design, q: int) -> list[int]:
    return sorted(word_to_index(x, q) for x in design)


def index_design(indices: Iterable[int], n: int, q: int) -> list[Word]:
    return sorted(index_to_word(i, n, q) for i in indices)


class CharacterSumState:
    """Incremental character sums for search pruning.

    A completion adds at most ``remaining`` unit vectors to each partial sum,
    so any partial sum of modulus above ``remaining`` cannot reach zero.
    """

    def __init__(self, n: int, q: int, weights: Iterable[int]):
        ys = [y for w in sorted(set(weights)) for y in words_of_weight(n, q, w)]
        self.table = np.array([character_vector(y, n, q) for y in ys])
        self.stack = [np.zeros(len(ys), dtype=complex)]

    def push(self, v: int) -> None:
        self.stack.append(self.stack[-1] + self.table[:, v])

    def pop(self) -> None:
        self.stack.pop()

    def feasible(self, remaining: int) -> bool:
        return bool(np.abs(self.stack[-1]).max(initial=0.0) <= remaining + 1e-9)


def translation_group(n: int, q: int) -> list[tuple[int, ...]]:
    """Vertex permutations x -> x + s for every s (transitive on H(n, q))."""
    words = all_words(n, q)
    return [tuple(word_to_index(tuple((a + b) % q for a, b in zip(x, s)), q) for x in words) for s in words]


def subset_fraction_mean(design, y, q):
    """Mean of chi_y over the design, as a complex float (diagnostics)."""
    return float_character_sum(design, y, q) / len(design)


__all__ = [name for name in dir() if not name.startswith("_") and name not in {
    "annotations", "itertools", "dataclass", "Fraction", "lru_cache", "comb", "gcd", "Iterable",
    "Sequence", "np"}]
