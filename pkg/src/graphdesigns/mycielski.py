"""Mycielskians of regular graphs and their adjacency designs.

Layout of M(G) for a base graph on n vertices: indices 0..n-1 are V,
n..2n-1 are the shadow copies V', and 2n is the central vertex u.

For a base eigenpair (mu, x) with x orthogonal to the all-ones vector,
``[x, -phibar x, 0]`` has eigenvalue phi*mu and ``[x, -phi x, 0]`` has
eigenvalue phibar*mu.  The last three eigenvalues are the roots t of
``t^3 - d t^2 - (n + d^2) t + d n`` with eigenvectors
``[(t^2 - n)/d * 1, t * 1, n]``.

Mycielskian order lists the lifted pairs by ascending base eigenvalue, each
pair as (phi*mu, phibar*mu), then the three cubic vectors by ascending root.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from graphdesigns.errors import DesignError
from graphdesigns.exact import QuadSurd, golden_ratio
from graphdesigns.graph import (DEFAULT_BUDGET, DEFAULT_TOL, Certificate, Family, Graph, Residual,
                                dense_spectrum, rational_eigenbasis)
from graphdesigns.search import check_budget, mask_to_set, subset_matrix

PHI, PHIBAR = golden_ratio()


@dataclass(frozen=True)
class MycielskiGraph:
    base: Graph
    graph: Graph

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def u_index(self) -> int:
        return 2 * self.base.n

    def block_matrix(self) -> np.ndarray:
        """[[A, A, 0], [A, 0, 1], [0, 1^T, 0]] built from the base adjacency matrix."""
        a = self.base.adjacency_matrix()
        n = self.n
        z = np.zeros((n, n), dtype=a.dtype)
        ones = np.ones((n, 1), dtype=a.dtype)
        top = np.hstack([a, a, np.zeros((n, 1), dtype=a.dtype)])
        mid = np.hstack([a, z, ones])
        bot = np.hstack([np.zeros((1, n), dtype=a.dtype), ones.T, np.zeros((1, 1), dtype=a.dtype)])
        return np.vstack([top, mid, bot])


def mycielskian(g: Graph) -> MycielskiGraph:
    n = g.n
    edges = []
    for i, j in g.edges():
        edges += [(i, j), (n + i, j), (i, n + j)]
    edges += [(2 * n, n + j) for j in range(n)]
    family = Family("mycielskian", (n,))
    return MycielskiGraph(g, Graph.from_edges(2 * n + 1, edges, family, require_connected=False))


def _require_regular(g: Graph) -> int:
    if not g.is_regular():
        raise DesignError("base graph must be regular")
    if not g.is_connected():
        raise DesignError("base graph must be connected")
    return g.degree(0)


# --- base eigenpairs and lifts ---------------------------------------------

@dataclass
class BasePair:
    eigenvalue: object          # Fraction (exact) or float
    vector: list                # Fractions or floats
    exact: bool


def base_eigenpairs(g: Graph) -> list[BasePair]:
    """Adjacency eigenpairs of g other than the all-ones one, ascending eigenvalue.

    Exact rational bases are used when every eigenvalue is an integer;
    otherwise the deterministic float basis of :func:`dense_spectrum`.
    """
    d = _require_regular(g)
    exact = rational_eigenbasis(g, "adjacency")
    out = []
    if exact is not None:
        for lam, basis in exact:
            if lam == d:
                continue
            out += [BasePair(lam, list(v), True) for v in basis]
        return out
    spec = dense_spectrum(g, "adjacency")
    top = int(np.argmax(spec.eigenvalues))
    for j, lam in enumerate(spec.eigenvalues):
        if j != top:
            out.append(BasePair(float(lam), [float(x) for x in spec.vectors[:, j]], False))
    return out


@dataclass
class LiftedEigenpair:
    base_index: int
    base_eigenvalue: object
    variant: str                 # "golden" (phi*mu) or "conjugate" (phibar*mu)
    vector: list                 # QuadSurd entries when exact, floats otherwise
    eigenvalue: object           # QuadSurd or float
    exact: bool

    def as_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.vector])


def lift_eigenpairs(g: Graph, base_pairs: Sequence[BasePair] | None = None) -> list[LiftedEigenpair]:
    if base_pairs is None:
        base_pairs = base_eigenpairs(g)
    else:
        _require_regular(g)
    out = []
    for i, bp in enumerate(base_pairs):
        for variant, scale, coef in (("golden", PHI, PHIBAR), ("conjugate", PHIBAR, PHI)):
            if bp.exact:
                vec = [QuadSurd.lift(x) for x in bp.vector] + [-coef * x for x in bp.vector] + [QuadSurd()]
                lam = scale * bp.eigenvalue
            else:
                c, s = float(coef), float(scale)
                vec = list(bp.vector) + [-c * x for x in bp.vector] + [0.0]
                lam = s * bp.eigenvalue
            out.append(LiftedEigenpair(i, bp.eigenvalue, variant, vec, lam, bp.exact))
    return out


def lift_residual(m: MycielskiGraph, pair: LiftedEigenpair):
    """A w - lambda w: exactly zero (QuadSurd) or a float max-norm."""
    g = m.graph
    if pair.exact:
        res = []
        for v in range(g.n):
            s = QuadSurd()
            for u in g.neighbors[v]:
                s = s + pair.vector[u]
            res.append(s - pair.eigenvalue * pair.vector[v])
        return res
    w = pair.as_float()
    return float(np.max(np.abs(g.adjacency_matrix() @ w - pair.eigenvalue * w)))


def lift_is_exact_eigenpair(m: MycielskiGraph, pair: LiftedEigenpair, tol: float = DEFAULT_TOL) -> bool:
    r = lift_residual(m, pair)
    if pair.exact:
        return all(x.is_zero() for x in r)
    return r <= tol


# --- cubic triple ----------------------------------------------------------

def cubic_coefficients(n: int, d: int) -> tuple[int, int, int, int]:
    return (1, -d, -(n + d * d), d * n)


def cubic_roots(n: int, d: int) -> list[float]:
    return sorted(float(r.real) for r in np.roots(cubic_coefficients(n, d)))


def cubic_eigenvector(n: int, d: int, t: float) -> np.ndarray:
    return np.array([(t * t - n) / d] * n + [t] * n + [float(n)])


def predicted_spectrum(g: Graph) -> list[float]:
    d = _require_regular(g)
    vals = [float(p.eigenvalue) for p in lift_eigenpairs(g)]
    return sorted(vals + cubic_roots(g.n, d))


def spectrum_completeness(g: Graph, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    m = mycielskian(g)
    numeric = np.linalg.eigvalsh(m.graph.adjacency_matrix().astype(float))
    dev = float(np.max(np.abs(np.array(predicted_spectrum(g)) - numeric)))
    return dev <= tol, dev


def mycielskian_order_vectors(g: Graph) -> np.ndarray:
    """Columns: the 2n+1 eigenvectors of M(g) in Mycielskian order (unit length)."""
    d = _require_regular(g)
    cols = [p.as_float() for p in lift_eigenpairs(g)]
    cols += [cubic_eigenvector(g.n, d, t) for t in cubic_roots(g.n, d)]
    w = np.array(cols).T
    return w / np.linalg.norm(w, axis=0)


# --- design statements -----------------------------------------------------

def central_vertex_check(g: Graph) -> Certificate:
    """{u} averages every lifted eigenvector: each vanishes at u and sums to zero."""
    m = mycielskian(g)
    d = _require_regular(g)
    pairs = lift_eigenpairs(g)
    u = m.u_index
    cert = Certificate(True, f"central vertex of M(G), G {d}-regular on {g.n} vertices")
    averaged = 0
    for k, p in enumerate(pairs):
        if p.exact:
            at_u = p.vector[u]
            total = QuadSurd()
            for x in p.vector:
                total = total + x
            ok = at_u.is_zero() and total.is_zero() and lift_is_exact_eigenpair(m, p)
            cert.residuals.append(Residual(f"lift {k} {p.variant}", True, 0 if ok else str(total)))
        else:
            w = p.as_float()
            res = max(abs(w[u]), abs(w.sum()))
            ok = res <= DEFAULT_TOL and lift_is_exact_eigenpair(m, p)
            cert.residuals.append(Residual(f"lift {k} {p.variant}", False, res))
        averaged += ok
        if not ok and cert.verdict:
            cert.verdict = False
            cert.counterexample = f"lift {k}"
    cert.facts.append(("averaged_eigenvectors", averaged))
    cert.facts.append(("total_eigenvectors", 2 * g.n + 1))
    cert.facts.append(("expected_2n_minus_2", averaged == 2 * g.n - 2))
    cert.facts.append(("exceptional_eigenvalues", " ".join(f"{t:.10f}" for t in cubic_roots(g.n, d))))
    cert.verdict = cert.verdict and averaged == 2 * g.n - 2
    return cert


@dataclass
class Restriction:
    on_v: bool
    on_vprime: bool
    vacuous: bool


def _lift_sum(vec, design):
    total = QuadSurd()
    for v in design:
        total = total + vec[v]
    return total


def restrict_design(m: MycielskiGraph, design, i: int, tol: float = DEFAULT_TOL) -> Restriction:
    """Given D averaging both lifts of base vector i, test D cap V and D cap V' against x_i."""
    design = sorted(set(design))
    if not design:
        raise DesignError("a design must be nonempty")
    pairs = [p for p in lift_eigenpairs(m.base) if p.base_index == i]
    if not pairs:
        raise DesignError(f"no base eigenvector {i}")
    n = m.n
    for p in pairs:
        if p.exact:
            if not _lift_sum(p.vector, design).is_zero():
                raise DesignError("design does not average both lifted eigenvectors")
        elif abs(p.as_float()[design].sum()) > tol:
            raise DesignError("design does not average both lifted eigenvectors")
    x = base_eigenpairs(m.base)[i].vector
    in_v = [v for v in design if v < n]
    in_vp = [v - n for v in design if n <= v < 2 * n]
    if not in_v and not in_vp:
        return Restriction(True, True, True)

    def zero(idx):
        s = sum((x[v] for v in idx), Fraction(0) if pairs[0].exact else 0.0)
        return s == 0 if pairs[0].exact else abs(s) <= tol
    return Restriction(zero(in_v), zero(in_vp), False)


@dataclass
class SizeAudit:
    subsets: int
    qualifying: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    beyond: list = field(default_factory=list)
    exact_confirmed: bool = True

    @property
    def holds(self) -> bool:
        return not self.violations and self.exact_confirmed and all(len(d) == len(set(d)) for d in self.beyond)


def _average_mask(rows: np.ndarray, w: np.ndarray, tol: float) -> np.ndarray:
    size = rows.sum(axis=1)
    means = (rows @ w) / size[:, None]
    return np.abs(means - w.mean(axis=0)) <= tol


def design_size_audit(g: Graph, budget: int = DEFAULT_BUDGET, tol: float = DEFAULT_TOL) -> SizeAudit:
    """Every design of the first 2n-2 vectors is {u} or has at least n vertices;
    averaging any further vector forces the full vertex set."""
    m = mycielskian(g)
    total = m.graph.n
    if total > 13:
        raise DesignError("exhaustive audit is limited to 13 vertices")
    check_budget((1 << total) - 1, budget, "Mycielskian subset enumeration")
    n = g.n
    w = mycielskian_order_vectors(g)
    rows = subset_matrix(total)
    avg = _average_mask(rows, w, tol)
    first = avg[:, : 2 * n - 2].all(axis=1)
    more = first & avg[:, 2 * n - 2:].any(axis=1)
    audit = SizeAudit(len(rows))
    pairs = lift_eigenpairs(g)
    for i in np.flatnonzero(first):
        d = mask_to_set(int(i) + 1)
        audit.qualifying.append(d)
        if d != (m.u_index,) and len(d) < n:
            audit.violations.append(d)
        if pairs and pairs[0].exact and not all(_lift_sum(p.vector, d).is_zero() for p in pairs):
            audit.exact_confirmed = False
    for i in np.flatnonzero(more):
        d = mask_to_set(int(i) + 1)
        audit.beyond.append(d)
        if len(d) != total:
            audit.violations.append(d)
    return audit


# --- conjugate closure -----------------------------------------------------

def irrational_factors(g: Graph) -> list[list[float]]:
    """Numeric roots of each irreducible factor of degree > 1 of the adjacency characteristic polynomial."""
    x = sympy.Symbol("x")
    poly = sympy.Matrix(g.adjacency_matrix().tolist()).charpoly(x)
    out = []
    for fac, _ in sympy.factor_list(poly.as_expr())[1]:
        p = sympy.Poly(fac, x)
        if p.degree() > 1:
            out.append(sorted(float(sympy.re(r)) for r in sympy.Poly(p).nroots(n=30)))
    return out


def _eigenspace_columns(spec, value, tol=1e-6):
    return [j for j, lam in enumerate(spec.eigenvalues) if abs(lam - value) <= tol]


def conjugate_closure_check(g: Graph, alpha: float, design, tol: float = DEFAULT_TOL) -> bool:
    """If ``design`` averages the alpha-eigenspace, it averages every conjugate's eigenspace."""
    design = sorted(set(design))
    if not design:
        raise DesignError("a design must be nonempty")
    conj = next((f for f in irrational_factors(g) if any(abs(r - alpha) <= 1e-6 for r in f)), None)
    if conj is None:
        raise DesignError(f"{alpha} is not an irrational adjacency eigenvalue; use the exact test")
    spec = dense_spectrum(g, "adjacency")
    rows = np.zeros((1, g.n))
    rows[0, design] = 1

    def averages(value):
        cols = _eigenspace_columns(spec, value)
        return bool(_average_mask(rows, spec.vectors[:, cols], tol).all())
    return (not averages(alpha)) or all(averages(r) for r in conj)


def conjugate_closure_exhaustive(g: Graph, budget: int = DEFAULT_BUDGET, tol: float = DEFAULT_TOL) -> tuple[bool, int]:
    """Run the closure implication over every nonempty subset and every irrational eigenvalue.

    Returns (holds, number of (subset, eigenvalue) premises that were satisfied).
    """
    check_budget((1 << g.n) - 1, budget, "subset enumeration")
    spec = dense_spectrum(g, "adjacency")
    rows = subset_matrix(g.n).astype(float)
    premises = 0
    for roots in irrational_factors(g):
        masks = [_average_mask(rows, spec.vectors[:, _eigenspace_columns(spec, r)], tol).all(axis=1)
                 for r in roots]
        for a in masks:
            premises += int(a.sum())
            for b in masks:
                if (a & ~b).any():
                    return False, premises
    return True, premises
