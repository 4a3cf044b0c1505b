"""Graphs, Laplacian/adjacency application, and the generic design tests.

Two routes decide whether a vertex set averages an eigenspace:

* the exact route applies the Lagrange interpolation projector
  ``prod_{m != l} (M - theta_m I) / (theta_l - theta_m)`` in rational
  arithmetic, which needs the distinct eigenvalues of ``M`` up front;
* the float route diagonalises ``M`` with numpy and compares means.

The exact route is basis free; the float route reports per-vector residuals
for a deterministic eigenbasis (see :func:`dense_spectrum`).
"""
from __future__ import annotations

import io
import itertools
import math
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from graphdesigns.errors import DesignError

DEFAULT_TOL = 1e-8
DEFAULT_DENSE_LIMIT = 2048
DEFAULT_BUDGET = 2**24


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("GRAPHDESIGNS_BUDGET")
    return int(raw) if raw else default


@dataclass(frozen=True)
class Family:
    kind: str
    params: tuple = ()

    def header(self) -> str:
        return " ".join(["c family", self.kind, *map(str, self.params)])


class Graph:
    """Finite simple undirected graph on vertices ``0..n-1``.

    Construction checks simplicity and symmetry and, unless
    ``require_connected=False``, connectivity.
    """

    def __init__(self, n: int, neighbors: Sequence[Iterable[int]], family: Family | None = None,
                 require_connected: bool = True):
        if n < 1:
            raise DesignError("graph needs at least one vertex")
        if len(neighbors) != n:
            raise DesignError("neighbor list length must equal n")
        nbrs = []
        for v, row in enumerate(neighbors):
            row = sorted(row)
            if len(set(row)) != len(row):
                raise DesignError(f"parallel edge at vertex {v}")
            if v in row:
                raise DesignError(f"loop at vertex {v}")
            if row and (row[0] < 0 or row[-1] >= n):
                raise DesignError(f"neighbor of {v} out of range")
            nbrs.append(tuple(row))
        for v, row in enumerate(nbrs):
            for u in row:
                if v not in nbrs[u]:
                    raise DesignError(f"adjacency not symmetric at ({v}, {u})")
        self.n = n
        self.neighbors: tuple[tuple[int, ...], ...] = tuple(nbrs)
        self.family = family
        if require_connected and not self.is_connected():
            raise DesignError("graph is disconnected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], family: Family | None = None,
                   require_connected: bool = True) -> "Graph":
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise DesignError(f"loop at vertex {u}")
            if v in nbrs[u]:
                raise DesignError(f"parallel edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, nbrs, family, require_connected)

    def __repr__(self):
        tag = f", family={self.family.kind}{self.family.params}" if self.family else ""
        return f"Graph(n={self.n}, m={self.num_edges()}{tag})"

    def __eq__(self, other):
        return isinstance(other, Graph) and self.neighbors == other.neighbors

    def __hash__(self):
        return hash(self.neighbors)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def degrees(self) -> list[int]:
        return [len(r) for r in self.neighbors]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) == 1

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.neighbors[u] if u < v]

    def is_connected(self) -> bool:
        seen = {0}
        todo = deque([0])
        while todo:
            v = todo.popleft()
            for u in self.neighbors[v]:
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        return len(seen) == self.n

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for v, row in enumerate(self.neighbors):
            a[v, list(row)] = 1
        return a

    def laplacian_matrix(self) -> np.ndarray:
        a = self.adjacency_matrix()
        return np.diag(a.sum(axis=1)) - a

    def matrix(self, source: str = "laplacian") -> np.ndarray:
        if source == "laplacian":
            return self.laplacian_matrix()
        if source == "adjacency":
            return self.adjacency_matrix()
        raise DesignError(f"unknown matrix {source!r}")

    def is_triangle_free(self) -> bool:
        nb = [set(r) for r in self.neighbors]
        return not any(nb[u] & nb[v] for u, v in self.edges())


# --- exact application -----------------------------------------------------

def _check_len(g: Graph, v):
    if len(v) != g.n:
        raise DesignError(f"vector length {len(v)} does not match {g.n} vertices")


def adjacency_apply(g: Graph, v):
    _check_len(g, v)
    return [sum((v[u] for u in row), Fraction(0)) for row in g.neighbors]


def laplacian_apply(g: Graph, v):
    """Return ``(D - A) v`` exactly."""
    _check_len(g, v)
    return [len(row) * v[x] - sum((v[u] for u in row), Fraction(0))
            for x, row in enumerate(g.neighbors)]


def matrix_apply(g: Graph, v, source: str = "laplacian"):
    if source == "laplacian":
        return laplacian_apply(g, v)
    if source == "adjacency":
        return adjacency_apply(g, v)
    raise DesignError(f"unknown matrix {source!r}")


def indicator(n: int, design: Iterable[int]) -> list[Fraction]:
    v = [Fraction(0)] * n
    for x in design:
        v[x] = Fraction(1)
    return v


# --- the averaging definition ----------------------------------------------

def _nonempty(design) -> list[int]:
    design = sorted(set(design))
    if not design:
        raise DesignError("a design must be nonempty")
    return design


def averages(g: Graph, phi, design, tol: float = DEFAULT_TOL) -> bool:
    """Float test: does the mean of ``phi`` over ``design`` match its global mean?"""
    design = _nonempty(design)
    phi = np.asarray(phi, dtype=float)
    _check_len(g, phi)
    return abs(phi[design].mean() - phi.mean()) <= tol


def averages_sum_zero(phi, design) -> bool:
    """Exact test for an eigenvector orthogonal to the all-ones vector."""
    return sum((phi[x] for x in design), 0) == 0


# --- spectra and certificates ----------------------------------------------

@dataclass(frozen=True)
class SpectrumSketch:
    eigenvalues: tuple[Fraction, ...]
    multiplicities: tuple[int, ...]
    source: str = "laplacian"

    def __post_init__(self):
        vals = tuple(Fraction(x) for x in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", vals)
        if len(vals) != len(self.multiplicities):
            raise DesignError("eigenvalue and multiplicity lists differ in length")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DesignError("eigenvalues must be strictly increasing")
        if self.source not in ("laplacian", "adjacency"):
            raise DesignError(f"unknown spectrum source {self.source!r}")

    @property
    def total(self) -> int:
        return sum(self.multiplicities)

    def index_of(self, value) -> int:
        return self.eigenvalues.index(Fraction(value))


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        # rounding noise differs between BLAS builds; keep certificates stable
        return "<1e-12" if abs(x) < 1e-12 else f"{x:.3e}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(y) for y in x) + "]"
    return str(x)


@dataclass
class Residual:
    label: str
    exact: bool
    value: object  # Fraction/int/str when exact, float otherwise

    def is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        if self.exact:
            return self.value == 0 or self.value == "0"
        return abs(self.value) <= tol


@dataclass
class Certificate:
    """Structured verdict of a design test.

    ``text()`` renders a key/value record with a fixed field order, so equal
    inputs give byte-identical output.
    """

    verdict: bool
    tested_selector: str
    residuals: list[Residual] = field(default_factory=list)
    facts: list[tuple[str, object]] = field(default_factory=list)
    counterexample: object = None
    tol: float = DEFAULT_TOL

    def __bool__(self):
        return self.verdict

    def fact(self, name: str):
        for k, v in self.facts:
            if k == name:
                return v
        raise KeyError(name)

    def consistent(self) -> bool:
        return not self.verdict or all(r.is_zero(self.tol) for r in self.residuals)

    def text(self) -> str:
        out = io.StringIO()
        out.write(f"verdict: {_fmt(self.verdict)}\n")
        out.write(f"selector: {self.tested_selector}\n")
        for r in self.residuals:
            kind = "exact" if r.exact else "float"
            out.write(f"residual {r.label}: {kind} {_fmt(r.value)}\n")
        for k, v in self.facts:
            out.write(f"fact {k}: {_fmt(v)}\n")
        if self.counterexample is not None:
            out.write(f"counterexample: {_fmt(self.counterexample)}\n")
        return out.getvalue()


# --- exact projector route -------------------------------------------------

def lagrange_eigenspace_project(g: Graph, spectrum: SpectrumSketch, ell: int, v) -> list[Fraction]:
    """Project ``v`` onto eigenspace ``ell`` of ``spectrum`` exactly."""
    _check_len(g, v)
    thetas = spectrum.eigenvalues
    if len(set(thetas)) != len(thetas):
        raise DesignError("projector needs pairwise distinct eigenvalues")
    if not 0 <= ell < len(thetas):
        raise DesignError(f"eigenspace index {ell} out of range")
    w = [Fraction(x) for x in v]
    denom = Fraction(1)
    for m, th in enumerate(thetas):
        if m == ell:
            continue
        mw = matrix_apply(g, w, spectrum.source)
        w = [a - th * b for a, b in zip(mw, w)]
        denom *= thetas[ell] - th
    return [x / denom for x in w]


def projector_matrix(g: Graph, spectrum: SpectrumSketch, ell: int) -> tuple[np.ndarray, int]:
    """Integer matrix ``N`` and positive ``d`` with ``N / d`` the exact eigenspace projector.

    Entries are python ints in an object array, so there is no overflow.
    """
    thetas = spectrum.eigenvalues
    if len(set(thetas)) != len(thetas):
        raise DesignError("projector needs pairwise distinct eigenvalues")
    m = np.array(g.matrix(spectrum.source), dtype=object)
    p = np.identity(g.n, dtype=object) * Fraction(1)
    for k, th in enumerate(thetas):
        if k != ell:
            p = (m - np.identity(g.n, dtype=object) * th).dot(p) / (thetas[ell] - th)
    den = 1
    for x in p.flat:
        x = Fraction(x)
        den = den * x.denominator // math.gcd(den, x.denominator)
    num = np.array([[int(Fraction(x) * den) for x in row] for row in p], dtype=object)
    return num, den


def verify_spectrum(g: Graph, spectrum: SpectrumSketch) -> bool:
    """Check the claimed distinct eigenvalues and multiplicities exactly.

    The product of all ``M - theta I`` must annihilate every basis vector,
    and the trace of each projector must equal its multiplicity.
    """
    if spectrum.total != g.n:
        return False
    traces = [Fraction(0)] * len(spectrum.eigenvalues)
    for i in range(g.n):
        e = [Fraction(0)] * g.n
        e[i] = Fraction(1)
        w = e
        for th in spectrum.eigenvalues:
            mw = matrix_apply(g, w, spectrum.source)
            w = [a - th * b for a, b in zip(mw, w)]
        if any(w):
            return False
        for ell in range(len(spectrum.eigenvalues)):
            traces[ell] += lagrange_eigenspace_project(g, spectrum, ell, e)[i]
    return all(t == m for t, m in zip(traces, spectrum.multiplicities))


def is_design_by_projectors(g: Graph, spectrum: SpectrumSketch, selected: Iterable[int], design,
                            label: str | None = None) -> Certificate:
    """Exact test: the indicator of ``design`` has no component in each selected eigenspace.

    Residuals are the squared norms ``1_D . P 1_D`` (zero exactly when the
    projection vanishes).
    """
    design = _nonempty(design)
    selected = sorted(set(selected))
    v = indicator(g.n, design)
    cert = Certificate(True, label or f"eigenspaces {selected} of {spectrum.source}")
    for ell in selected:
        p = lagrange_eigenspace_project(g, spectrum, ell, v)
        norm2 = sum((p[x] for x in design), Fraction(0))
        cert.residuals.append(Residual(f"theta={spectrum.eigenvalues[ell]}", True, norm2))
        if any(p):
            cert.verdict = False
            if cert.counterexample is None:
                cert.counterexample = f"eigenspace theta={spectrum.eigenvalues[ell]}"
    cert.facts.append(("design_size", len(design)))
    return cert


# --- float route -----------------------------------------------------------

@dataclass
class DenseSpectrum:
    eigenvalues: np.ndarray      # ascending, one per column of vectors
    vectors: np.ndarray          # orthonormal columns in canonical form
    source: str = "laplacian"

    def clusters(self, tol: float = 1e-8) -> list[tuple[float, list[int]]]:
        """Group column indices into eigenspaces of numerically equal eigenvalues."""
        out: list[tuple[float, list[int]]] = []
        for i, lam in enumerate(self.eigenvalues):
            if out and abs(lam - out[-1][0]) <= tol * max(1.0, abs(lam)):
                out[-1][1].append(i)
            else:
                out.append((float(lam), [i]))
        return [(float(np.mean(self.eigenvalues[idx])), idx) for _, idx in out]


def _canonical_basis(q: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of span(q) independent of the input basis."""
    m = q.shape[1]
    if m == 1:
        v = q[:, 0].copy()
    else:
        # reduced row echelon form of q^T is a property of the subspace
        r = q.T.copy()
        row = 0
        for col in range(r.shape[1]):
            if row == m:
                break
            piv = row + int(np.argmax(np.abs(r[row:, col])))
            if abs(r[piv, col]) <= tol:
                continue
            r[[row, piv]] = r[[piv, row]]
            r[row] /= r[row, col]
            for k in range(m):
                if k != row:
                    r[k] -= r[k, col] * r[row]
            row += 1
        basis, _ = np.linalg.qr(r.T)
        v = basis
    if v.ndim == 1:
        v = v[:, None] / np.linalg.norm(v)
    for j in range(v.shape[1]):
        nz = np.flatnonzero(np.abs(v[:, j]) > tol)
        if nz.size and v[nz[0], j] < 0:
            v[:, j] = -v[:, j]
    return v


def dense_spectrum(g: Graph, source: str = "laplacian", limit: int = DEFAULT_DENSE_LIMIT,
                   tol: float = 1e-8) -> DenseSpectrum:
    """Full symmetric eigendecomposition with a reproducible eigenbasis."""
    if g.n > limit:
        raise DesignError(f"{g.n} vertices exceeds the dense limit {limit}")
    vals, vecs = np.linalg.eigh(g.matrix(source).astype(float))
    spec = DenseSpectrum(vals, vecs, source)
    out = np.empty_like(vecs)
    for lam, idx in spec.clusters(tol):
        out[:, idx] = _canonical_basis(vecs[:, idx])
        vals[idx] = lam
    return DenseSpectrum(vals, out, source)


def float_design_test(g: Graph, design, columns: Iterable[int], spectrum: DenseSpectrum | None = None,
                      tol: float = DEFAULT_TOL, label: str | None = None) -> Certificate:
    """Float test of the averaging definition on chosen eigenvector columns."""
    design = _nonempty(design)
    spectrum = spectrum or dense_spectrum(g)
    columns = list(columns)
    cert = Certificate(True, label or f"{spectrum.source} eigenvectors {columns}", tol=tol)
    for j in columns:
        phi = spectrum.vectors[:, j]
        res = float(abs(phi[design].mean() - phi.mean()))
        cert.residuals.append(Residual(f"vector {j} (lambda={spectrum.eigenvalues[j]:.6f})", False, res))
        if res > tol and cert.verdict:
            cert.verdict = False
            cert.counterexample = f"vector {j}"
    cert.facts.append(("design_size", len(design)))
    return cert


def eigenspace_residual(spectrum: DenseSpectrum, idx: Sequence[int], design) -> float:
    """Basis-free float residual: norm of the mean-difference vector over an eigenspace."""
    design = _nonempty(design)
    vecs = spectrum.vectors[:, list(idx)]
    diff = vecs[design].mean(axis=0) - vecs.mean(axis=0)
    return float(np.linalg.norm(diff))


# --- exact linear algebra helpers ------------------------------------------

def rational_nullspace(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right nullspace of a rational matrix (RREF back-substitution)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, len(a)) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for r in range(len(a)):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(v)
    return basis


def rational_eigenbasis(g: Graph, source: str = "adjacency", tol: float = 1e-9):
    """Exact eigenpairs when every eigenvalue is an integer, else ``None``.

    Returns a list of ``(eigenvalue, vectors)`` in ascending eigenvalue order.
    """
    vals = np.linalg.eigvalsh(g.matrix(source).astype(float))
    distinct = sorted({int(round(x)) for x in vals})
    if any(abs(x - round(x)) > tol for x in vals):
        return None
    m = g.matrix(source)
    out = []
    for lam in distinct:
        rows = [[Fraction(int(m[i, j]) - (lam if i == j else 0)) for j in range(g.n)] for i in range(g.n)]
        basis = rational_nullspace(rows)
        expected = int(np.sum(np.abs(vals - lam) <= 1e-6))
        if len(basis) != expected:
            return None
        out.append((Fraction(lam), basis))
    return out


# --- graph identity --------------------------------------------------------

def canonical_form(g: Graph, limit: int = 9) -> tuple[tuple[int, int], ...]:
    """Lexicographically least sorted edge list over all relabelings (brute force)."""
    if g.n > limit:
        raise DesignError(f"brute-force canonical form limited to {limit} vertices")
    best = None
    edges = g.edges()
    for perm in itertools.permutations(range(g.n)):
        cand = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or cand < best:
            best = cand
    return best


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], Family("cycle", (n,)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2), Family("complete", (n,)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], Family("path", (n,)))


# --- file formats ----------------------------------------------------------

def write_graph(g: Graph, stream) -> None:
    if g.family is not None:
        stream.write(g.family.header() + "\n")
    edges = g.edges()
    stream.write(f"p {g.n} {len(edges)}\n")
    for u, v in edges:
        stream.write(f"e {u + 1} {v + 1}\n")


def graph_to_text(g: Graph) -> str:
    buf = io.StringIO()
    write_graph(g, buf)
    return buf.getvalue()


def parse_graph(text: str, require_connected: bool = True) -> Graph:
    n = m = None
    edges = []
    family = None
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "c":
            if len(parts) >= 3 and parts[1] == "family":
                family = Family(parts[2], tuple(_param(p) for p in parts[3:]))
            continue
        if parts[0] == "p":
            if n is not None or len(parts) != 3:
                raise DesignError(f"line {lineno}: malformed problem line")
            n, m = int(parts[1]), int(parts[2])
        elif parts[0] == "e":
            if n is None or len(parts) != 3:
                raise DesignError(f"line {lineno}: edge before problem line or malformed")
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise DesignError(f"line {lineno}: endpoint out of range")
            edges.append((u - 1, v - 1))
        else:
            raise DesignError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise DesignError("missing problem line")
    if len(edges) != m:
        raise DesignError(f"expected {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges, family, require_connected)


def _param(p: str):
    try:
        return int(p)
    except ValueError:
        return p


def parse_design(text: str, n: int | None = None) -> list[int]:
    """One 1-indexed vertex id per line; returns sorted 0-indexed ids."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#")[0].strip()
        if not line or line.startswith("c "):
            continue
        v = int(line)
        if v < 1 or (n is not None and v > n):
            raise DesignError(f"line {lineno}: vertex {v} out of range")
        out.append(v - 1)
    if len(set(out)) != len(out):
        raise DesignError("repeated vertex in design")
    return sorted(out)


def design_to_text(design: Iterable[int]) -> str:
    return "".join(f"{v + 1}\n" for v in sorted(design))
