"""Command-line entry point.

Exit codes: 0 verdict true / success, 1 verdict false, 2 usage or input
error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from graphdesigns import families, hamming, johnson, mycielski, repro, symmetric
from graphdesigns.errors import BudgetExceeded, DesignError
from graphdesigns.graph import (Certificate, budget_from_env, complete_graph, cycle_graph, dense_spectrum,
                                graph_to_text, parse_design, parse_graph, path_graph)
from graphdesigns.search import search_smallest

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(message)


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DesignError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str | None, text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text)


def _lines(text: str) -> list[str]:
    return [ln.split("#")[0].strip() for ln in text.splitlines() if ln.split("#")[0].strip()]


def _verdict(ok: bool) -> int:
    return EXIT_TRUE if ok else EXIT_FALSE


# --- verbs -----------------------------------------------------------------

def cmd_gen(a, out):
    fam = a.family
    if fam == "hamming":
        g = hamming.build_hamming(a.n, a.q)
    elif fam == "johnson":
        g = johnson.build_johnson(a.n, a.k)
    elif fam == "cayley":
        if not a.classes:
            raise DesignError("cayley needs --classes, e.g. 2,1,1;3,1")
        g = symmetric.cayley_graph(a.n, a.classes.split(";"))
    elif fam == "cycle":
        g = cycle_graph(a.n)
    elif fam == "complete":
        g = complete_graph(a.n)
    elif fam == "path":
        g = path_graph(a.n)
    else:
        raise DesignError(f"unknown family {fam!r}")
    _write(a.out, graph_to_text(g), out)
    return EXIT_TRUE


def cmd_spectrum(a, out):
    g = parse_graph(_read(a.graph), require_connected=False)
    kind = families.check_family(g)
    lines = []
    if kind == "hamming" and a.source == "laplacian":
        s = hamming.hamming_spectrum(*g.family.params)
        lines += [f"eigenvalue {lam} multiplicity {m} exact" for lam, m in zip(s.eigenvalues, s.multiplicities)]
    elif kind == "johnson" and a.source == "laplacian":
        s = johnson.johnson_spectrum(*g.family.params)
        lines += [f"eigenvalue {lam} multiplicity {m} exact index {t}" for t, lam, m in s.entries]
    elif kind == "cayley" and a.source == "laplacian":
        n = g.family.params[0]
        classes = str(g.family.params[1]).split(";")
        for p in symmetric.partitions(n):
            lam = symmetric.cayley_laplacian_eigenvalue(p, classes)
            d = symmetric.hook_dimension(p)
            lines.append(f"eigenvalue {lam} multiplicity {d * d} exact partition {symmetric.format_partition(p)}")
    else:
        spec = dense_spectrum(g, a.source)
        for lam, idx in spec.clusters():
            lines.append(f"eigenvalue {lam:.10f} multiplicity {len(idx)} float")
    out.write(f"source: {a.source}\n" + "\n".join(lines) + "\n")
    return EXIT_TRUE


def cmd_verify(a, out):
    g = parse_graph(_read(a.graph), require_connected=False)
    design = parse_design(_read(a.design), g.n)
    cert = families.design_test(g, design, a.order, a.upto)
    out.write(cert.text())
    return _verdict(cert.verdict)


def cmd_oa(a, out):
    words = [hamming.parse_word(x, a.q) for x in _lines(_read(a.design))]
    ok, lam = hamming.oa_check(words, a.t, a.n, a.q)
    cert = hamming.is_phi_design(words, range(1, a.t + 1), a.n, a.q)
    cert.facts.append(("orthogonal_array", ok))
    if ok:
        cert.facts.append(("index", lam))
    cert.facts.append(("size_divisible_by_q_t", hamming.divisibility_check(len(words), a.t, a.q)))
    out.write(cert.text())
    return _verdict(ok and cert.verdict)


def cmd_blockdesign(a, out):
    blocks = [johnson.parse_subset(x) for x in _lines(_read(a.design))]
    ok, lam = johnson.block_design_check(a.n, a.k, blocks, a.t)
    if 2 * a.k <= a.n or 2 * (a.n - a.k) <= a.n:
        kk = min(a.k, a.n - a.k)
        cert = johnson.is_phi_design_johnson(a.n, a.k, blocks, range(1, min(a.t, kk) + 1))
    else:
        cert = Certificate(ok, "block design")
    cert.facts.append(("block_design", ok))
    if ok:
        cert.facts.append(("lambda", lam))
    out.write(cert.text())
    return _verdict(ok and cert.verdict)


def cmd_twise(a, out):
    perms = [symmetric.parse_perm(x, a.n) for x in _lines(_read(a.design))]
    ok = symmetric.t_wise_uniform_check(perms, a.t, a.n)
    cert = symmetric.phi_p_certificate(perms, symmetric.first_part_partitions(a.n, a.t), a.n)
    cert.facts.append(("t_wise_uniform", ok))
    out.write(cert.text())
    return _verdict(ok and cert.verdict)


def _matrix_text(h) -> str:
    return "".join(" ".join(f"{int(x):d}" for x in row) + "\n" for row in h)


def cmd_hadamard(a, out):
    if a.to_design:
        h = np.array([[int(x) for x in ln.split()] for ln in _lines(_read(a.to_design))], dtype=np.int64)
        words = hamming.hadamard_to_design(h)
        _write(a.out, "".join(hamming.format_word(w) + "\n" for w in words), out)
    else:
        words = [hamming.parse_word(x, 2) for x in _lines(_read(a.from_design))]
        h = hamming.design_to_hadamard(words)
        if not hamming.is_hadamard(h):
            return EXIT_FALSE
        _write(a.out, _matrix_text(h), out)
    return EXIT_TRUE


def cmd_mycielskify(a, out):
    g = parse_graph(_read(a.graph))
    m = mycielski.mycielskian(g)
    report = []
    if g.is_regular():
        d = g.degree(0)
        for p in mycielski.lift_eigenpairs(g):
            ok = mycielski.lift_is_exact_eigenpair(m, p)
            val = str(p.eigenvalue) if p.exact else f"{p.eigenvalue:.10f}"
            report.append(f"lift {p.base_index} {p.variant}: eigenvalue {val} "
                          f"{'exact' if p.exact else 'float'} {'ok' if ok else 'FAILED'}")
        report.append("cubic: " + " ".join(map(str, mycielski.cubic_coefficients(g.n, d))))
        report += [f"cubic root {t:.10f}" for t in mycielski.cubic_roots(g.n, d)]
    else:
        report.append("base graph is not regular: no lift report")
    text = graph_to_text(m.graph)
    if a.out:
        _write(a.out, text, out)
        out.write("\n".join(report) + "\n")
    else:
        out.write(text + "c " + "\nc ".join(report) + "\n")
    return EXIT_TRUE


def cmd_search(a, out):
    g = parse_graph(_read(a.graph), require_connected=False)
    seeds = []
    for s in a.seed_design or []:
        seeds.append(parse_design(_read(s), g.n))
    problem = families.search_problem(g, a.order, a.upto, budget=a.budget, symmetry=a.symmetry,
                                      hints=not a.no_hints, seeds=seeds)
    if a.modulus:
        problem.modulus = a.modulus
    res = search_smallest(problem, a.max_size or g.n, workers=a.workers)
    out.write(res.summary())
    for d in res.found:
        out.write("design: " + " ".join(str(v + 1) for v in d) + "\n")
    if res.found:
        out.write(families.design_test(g, res.found[0], a.order, a.upto).text())
    if res.found:
        return EXIT_TRUE
    return EXIT_FALSE if res.exhausted else EXIT_BUDGET


def cmd_repro(a, out):
    if a.list or not a.case:
        out.write("".join(name + "\n" for name in repro.CASES))
        return EXIT_TRUE if a.list else EXIT_USAGE
    text, ok = repro.run_case(a.case, workers=a.workers)
    out.write(text)
    return _verdict(ok)


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphdesigns", description="Graphical designs: exact tests, conversions and search.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", help="write a family graph file")
    s.add_argument("--family", required=True, choices=["hamming", "johnson", "cayley", "cycle", "complete", "path"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--classes", help="cycle types separated by ';', e.g. 2,1,1;3,1")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("spectrum", help="print the spectrum (exact for family graphs)")
    s.add_argument("--graph", required=True)
    s.add_argument("--source", choices=["laplacian", "adjacency"], default="laplacian")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("verify", help="test a design file against an eigenspace order")
    s.add_argument("--graph", required=True)
    s.add_argument("--design", required=True)
    s.add_argument("--order", choices=families.ORDERS, default="laplacian")
    s.add_argument("--upto", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oa", help="orthogonal array check of a word file")
    for f in ("--n", "--q", "--t"):
        s.add_argument(f, type=int, required=True)
    s.add_argument("--design", required=True)
    s.set_defaults(func=cmd_oa)

    s = sub.add_parser("blockdesign", help="t-(n,k,lambda) check of a block file")
    for f in ("--n", "--k", "--t"):
        s.add_argument(f, type=int, required=True)
    s.add_argument("--design", required=True)
    s.set_defaults(func=cmd_blockdesign)

    s = sub.add_parser("twise", help="t-wise uniformity check of a permutation file")
    for f in ("--n", "--t"):
        s.add_argument(f, type=int, required=True)
    s.add_argument("--design", required=True)
    s.set_defaults(func=cmd_twise)

    s = sub.add_parser("hadamard", help="convert between Hadamard matrices and designs")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-design", metavar="H")
    g.add_argument("--from-design", metavar="D")
    s.add_argument("--out")
    s.set_defaults(func=cmd_hadamard)

    s = sub.add_parser("mycielskify", help="write the Mycielskian and its lift report")
    s.add_argument("--graph", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_mycielskify)

    s = sub.add_parser("search", help="exact search for smallest designs")
    s.add_argument("--graph", required=True)
    s.add_argument("--order", choices=families.ORDERS, default="laplacian")
    s.add_argument("--upto", type=int, default=1)
    s.add_argument("--max-size", type=int)
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--symmetry", action="store_true", help="anchor vertex 0 and report one design per orbit")
    s.add_argument("--no-hints", action="store_true", help="do not skip sizes by divisibility")
    s.add_argument("--modulus", type=int, help="override the size divisibility hint")
    s.add_argument("--seed-design", action="append", help="design file verified as a seed")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("repro", help="replay a named acceptance case")
    s.add_argument("--case")
    s.add_argument("--list", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_repro)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if getattr(a, "budget", 0) is None:
            a.budget = budget_from_env()
        return a.func(a, out)
    except _Usage as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (DesignError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
