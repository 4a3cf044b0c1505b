"""Exact search for smallest and inclusion-minimal designs.

Candidates are visited as lexicographically increasing vertex tuples.  A
problem may supply an incremental state that bounds partial sums (character
sums, Gram sums, tuple counts); a branch is cut only when the bound proves
no completion can pass the tester.

Subtrees are keyed by their first vertex.  Every subtree runs with the same
node cap and results are merged in subtree order, so the output does not
depend on how many worker processes were used.
"""
from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from typing import Callable, Iterable, Protocol, Sequence

import numpy as np

from graphdesigns.errors import BudgetExceeded, DesignError
from graphdesigns.graph import DEFAULT_BUDGET


class IncrementalState(Protocol):
    def push(self, v: int) -> None: ...

    def pop(self) -> None: ...

    def feasible(self, remaining: int) -> bool: ...


@dataclass
class SearchProblem:
    tester: Callable[[tuple[int, ...]], bool]
    n: int
    modulus: int = 1
    lower_bound: int = 1
    budget: int = DEFAULT_BUDGET
    incremental: Callable[[int], IncrementalState] | None = None
    seeds: Sequence[Sequence[int]] = ()
    symmetry_group: Sequence[Sequence[int]] | None = None
    certify: Callable[[tuple[int, ...]], object] | None = None
    name: str = ""

    def __post_init__(self):
        if self.budget <= 0:
            raise DesignError("search budget must be positive")
        if self.modulus < 1:
            raise DesignError("divisibility modulus must be positive")
        if self.symmetry_group is not None:
            orbit = {g[0] for g in self.symmetry_group}
            if len(orbit) != self.n:
                raise DesignError("symmetry breaking by anchoring vertex 0 needs a transitive group")

    def sizes(self, max_size: int) -> list[int]:
        lo = max(1, self.lower_bound)
        return [s for s in range(lo, max_size + 1) if s % self.modulus == 0]


@dataclass
class SizeReport:
    size: int
    exhausted: bool
    found: int
    nodes: int


@dataclass
class SearchResult:
    found: list[tuple[int, ...]] = field(default_factory=list)
    exhausted: bool = True
    nodes_expanded: int = 0
    sizes: list[SizeReport] = field(default_factory=list)
    all_designs: list[tuple[int, ...]] = field(default_factory=list)
    certificates: list = field(default_factory=list)

    def summary(self) -> str:
        lines = [f"exhausted: {'true' if self.exhausted else 'false'}",
                 f"nodes_expanded: {self.nodes_expanded}",
                 f"designs_found: {len(self.found)}"]
        for r in self.sizes:
            lines.append(f"size {r.size}: found={r.found} exhausted={'true' if r.exhausted else 'false'} nodes={r.nodes}")
        return "\n".join(lines) + "\n"


class _Stop(Exception):
    pass


def _subtree(problem: SearchProblem, size: int, first: int) -> tuple[list[tuple[int, ...]], int, bool]:
    """All designs of ``size`` whose smallest vertex is ``first``."""
    n = problem.n
    cap = problem.budget
    state = problem.incremental(size) if problem.incremental else None
    found: list[tuple[int, ...]] = []
    chosen = [first]
    nodes = 0

    def rec(start: int):
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise _Stop
        depth = len(chosen)
        if depth == size:
            cand = tuple(chosen)
            if problem.tester(cand):
                found.append(cand)
            return
        need = size - depth
        for v in range(start, n - need + 1):
            if state is not None:
                state.push(v)
                ok = state.feasible(need - 1)
                if ok:
                    chosen.append(v)
                    rec(v + 1)
                    chosen.pop()
                state.pop()
            else:
                chosen.append(v)
                rec(v + 1)
                chosen.pop()

    try:
        if state is not None:
            state.push(first)
            if state.feasible(size - 1):
                rec(first + 1)
            else:
                nodes += 1
            state.pop()
        else:
            rec(first + 1)
    except _Stop:
        return found, nodes, False
    return found, nodes, True


_ACTIVE: SearchProblem | None = None


def _worker(args):
    size, first = args
    return _subtree(_ACTIVE, size, first)


def _run_size(problem: SearchProblem, size: int, workers: int):
    global _ACTIVE
    firsts = [0] if problem.symmetry_group is not None else list(range(problem.n - size + 1))
    tasks = [(size, f) for f in firsts]
    if workers > 1 and len(tasks) > 1:
        _ACTIVE = problem
        try:
            with multiprocessing.get_context("fork").Pool(workers) as pool:
                parts = pool.map(_worker, tasks, chunksize=1)
        finally:
            _ACTIVE = None
    else:
        parts = [_subtree(problem, size, f) for f in firsts]
    found, nodes, complete = [], 0, True
    for sub_found, sub_nodes, sub_complete in parts:
        nodes += sub_nodes
        found.extend(sub_found)
        if not sub_complete or nodes > problem.budget:
            complete = False
            break
    return found, nodes, complete


def canonical_representative(design: Sequence[int], group: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return min(tuple(sorted(g[v] for v in design)) for g in group)


def _dedupe(found, group):
    if group is None:
        return found
    reps = {}
    for d in found:
        reps.setdefault(canonical_representative(d, group), d)
    return sorted(reps)


def search_smallest(problem: SearchProblem, max_size: int, workers: int = 1,
                    strict: bool = False) -> SearchResult:
    """Designs of the smallest feasible size up to ``max_size``.

    Seeds of a given size are verified before that size is searched, so a
    known construction still certifies existence when the search itself is
    cut short by the budget.  With ``strict`` a budget overrun raises.
    """
    result = SearchResult()
    for size in problem.sizes(max_size):
        seeded = sorted({tuple(sorted(s)) for s in problem.seeds if len(s) == size and problem.tester(tuple(sorted(s)))})
        found, nodes, complete = _run_size(problem, size, workers)
        result.nodes_expanded += nodes
        merged = sorted(set(found) | set(seeded))
        merged = _dedupe(merged, problem.symmetry_group)
        result.sizes.append(SizeReport(size, complete, len(merged), nodes))
        if not complete:
            result.exhausted = False
            if strict:
                raise BudgetExceeded(f"search budget {problem.budget} exceeded at size {size}", nodes)
        if merged:
            result.found = merged
            break
        if not complete:
            break
    if problem.certify:
        result.certificates = [problem.certify(d) for d in result.found]
    return result


def minimal_sets(designs: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Inclusion-minimal members of a family of sets."""
    family = sorted({tuple(sorted(d)) for d in designs}, key=lambda d: (len(d), d))
    keep: list[frozenset] = []
    out = []
    for d in family:
        s = frozenset(d)
        if not any(k < s for k in keep):
            keep.append(s)
            out.append(d)
    return sorted(out)


def enumerate_minimal(problem: SearchProblem, max_size: int, workers: int = 1) -> SearchResult:
    """All inclusion-minimal designs of size at most ``max_size``."""
    result = SearchResult()
    everything = []
    for size in problem.sizes(max_size):
        found, nodes, complete = _run_size(problem, size, workers)
        result.nodes_expanded += nodes
        result.sizes.append(SizeReport(size, complete, len(found), nodes))
        everything.extend(found)
        if not complete:
            raise BudgetExceeded(f"minimal-design enumeration exceeded budget at size {size}", result.nodes_expanded)
    result.all_designs = sorted(everything)
    result.found = minimal_sets(everything)
    if problem.certify:
        result.certificates = [problem.certify(d) for d in result.found]
    return result


def union_closure_audit(minimals: Iterable[Sequence[int]], all_found: Iterable[Sequence[int]]) -> bool:
    """True iff each found design is the union of the minimal designs inside it."""
    mins = [frozenset(m) for m in minimals]
    for d in all_found:
        s = frozenset(d)
        inside = [m for m in mins if m <= s]
        if not inside or frozenset().union(*inside) != s:
            return False
    return True


# --- bitmask helpers for exhaustive runs -----------------------------------

def subset_matrix(n: int, start: int = 1, stop: int | None = None) -> np.ndarray:
    """Rows are the indicator vectors of bitmasks ``start..stop-1`` (bit i = vertex i)."""
    if stop is None:
        stop = 1 << n
    masks = np.arange(start, stop, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int64)


def mask_to_set(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def set_to_mask(design: Iterable[int]) -> int:
    m = 0
    for v in design:
        m |= 1 << v
    return m


def check_budget(count: int, budget: int, what: str) -> None:
    if count > budget:
        raise BudgetExceeded(f"{what} needs {count} evaluations, budget is {budget}", count)
