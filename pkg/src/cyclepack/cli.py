"""Command-line entry point: ``cyclepack solve|kernelize|lsct|generate|verify``.

Exit codes: 0 yes (or success), 1 no (or failed verification), 2 error.
Machine output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import edkernel, oracle, reductions
from .graph import EDGE, VERTEX, WeightedGraph, clean
from .instance import (
    FormatError,
    ProblemInstance,
    fmt_rational,
    format_instance,
    format_solution,
    parse_instance,
    parse_rational,
    parse_solution,
)
from .lsct import build_lsct
from .planar import NonPlanarError
from .scp import SeparationConfig, solve_scp_planar
from .xp import DEFAULT_CAP, solve_minsum, solve_minvector


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(args) -> ProblemInstance:
    inst = parse_instance(_read(args.instance))
    problem, k, budgets = inst.problem, inst.k, list(inst.budgets)
    if getattr(args, "mode", None):
        base = problem.removesuffix("-ed")
        if base in ("minsum", "minvec", "scp"):
            problem = base + ("-ed" if args.mode == EDGE else "")
    if getattr(args, "k", None) is not None:
        k = args.k
    if getattr(args, "budgets", None):
        budgets = [parse_rational(t) for t in args.budgets.split(",")]
    if getattr(args, "ell", None) is not None:
        budgets = [parse_rational(args.ell)]
    if not problem.startswith(("minsum", "minvec")):
        budgets = []
    return ProblemInstance(problem, inst.graph, k, tuple(budgets), inst.comments)


# -- solve ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    t0 = time.perf_counter()
    inst = _load(args)
    g, k = inst.graph, inst.k
    timings = {"parse": time.perf_counter() - t0}
    report: dict = {"problem": inst.problem, "k": k, "seed": args.seed}
    trace: list[str] | None = [] if args.trace else None
    t1 = time.perf_counter()
    cuts = ()
    total = None
    if inst.problem.startswith("minsum"):
        pack = solve_minsum(g, k, inst.ell, inst.mode, args.cap)
        cycles = pack.cycles if pack else ()
        answer = pack is not None
    elif inst.problem.startswith("minvec"):
        pack = solve_minvector(g, inst.budgets, inst.mode, args.cap)
        cycles = pack.cycles if pack else ()
        answer = pack is not None
    elif inst.problem == "scp":
        cfg = SeparationConfig(k, rng_seed=args.seed, exhaustive_mode=args.exhaustive)
        if args.trials is not None:
            cfg = SeparationConfig(k, args.seed, args.trials, args.exhaustive)
        res = solve_scp_planar(g, k, cfg, trace=trace, jobs=args.jobs)
        cycles = res.packing.cycles if res.packing else ()
        answer = res.answer
        report.update(trials=res.trials, signatures=res.signatures, exact=res.exact, failure_bound=res.failure_bound)
    elif inst.problem == "scp-ed":
        kr = edkernel.kernelize_ed(g, k)
        report["rules"] = _rule_counts(kr.log)
        pack = edkernel.solve_scp_ed_planar(g, k)
        cycles = pack.cycles if pack else ()
        answer = pack is not None
    else:
        cp = edkernel.solve_min_cut_packing_planar(g, k)
        answer = cp is not None
        cycles = ()
        if cp:
            cuts = cp.cuts
            total = cp.weight * len(cp.cuts)
    timings["solve"] = time.perf_counter() - t1
    text = format_solution(answer, cycles, cuts, total)
    _emit(text, args.out)
    if trace:
        for line in trace:
            print(line, file=sys.stderr)
    if args.report:
        report.update(verdict="yes" if answer else "no", witness=args.out or "stdout", timings=timings)
        Path(args.report).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0 if answer else 1


def _rule_counts(log) -> dict[str, int]:
    out: dict[str, int] = {}
    for line in log:
        tag = line.split()[0]
        if tag in ("rr1", "rr2", "rr3", "prune"):
            out[tag] = out.get(tag, 0) + 1
    return out


# -- kernelize -----------------------------------------------------------------------


def _sentinel(k: int) -> ProblemInstance:
    tri = WeightedGraph(3, ((0, 1, 1), (1, 2, 1), (0, 2, 1)))
    return ProblemInstance("scp-ed", tri, k)


def cmd_kernelize(args) -> int:
    inst = _load(args)
    res = edkernel.kernelize_ed(inst.graph, inst.k)
    if res.kind == edkernel.YES:
        out, note = _sentinel(1), "trivial-yes"
    elif res.kind == edkernel.NO:
        out, note = _sentinel(2), "trivial-no"
    else:
        kern = res.kernel
        out, note = ProblemInstance("scp-ed", kern.graph, kern.k), "kernel"
    _emit(format_instance(out, [note]), args.out)
    side = "".join(line + "\n" for line in res.log)
    if args.log:
        Path(args.log).write_text(side)
    elif args.out:
        Path(args.out + ".log").write_text(side)
    else:
        sys.stderr.write(side)
    return 0


# -- lsct ----------------------------------------------------------------------------


def cmd_lsct(args) -> int:
    inst = parse_instance(_read(args.instance))
    c = clean(inst.graph)
    if not c.edges:
        raise CliError("graph has no cycles")
    _, tree = build_lsct(c)
    _emit(tree.to_dot() if args.dot else tree.to_jsonl(c), args.out)
    return 0


# -- generate ------------------------------------------------------------------------


def _comments(params: dict) -> list[str]:
    return [json.dumps(params, sort_keys=True, default=str)]


def _graph_json(g: WeightedGraph) -> list:
    return [[u, v, fmt_rational(w)] for u, v, w in g.edges]


def _dsf_text(d: reductions.DsfInstance, params: dict) -> str:
    return "".join(f"c {c}\n" for c in _comments(params)) + d.to_text()


def cmd_generate(args) -> int:
    r, s = args.reduction, args.seed
    if args.n is None:
        args.n = {"is-mincut": 5, "dsf-scp": 8}.get(r, 12)
    if r == "random-planar":
        g = reductions.gen_random_planar(args.n, args.density, (1, args.max_weight), s)
        params = {"reduction": r, "n": args.n, "density": args.density, "max_weight": args.max_weight, "seed": s}
        text = format_instance(ProblemInstance("scp", g, args.k), _comments(params))
    elif r == "mcc-minsum":
        src, classes = reductions.sample_mcc(2, 2, 0.5, s)
        red = reductions.gen_mcc_to_minsum(src, classes)
        params = {
            "reduction": r, "seed": s, "source_edges": _graph_json(src), "classes": classes,
            "gamma": red.gamma, "nu": red.nu, "delta": red.delta,
        }
        text = format_instance(ProblemInstance("minsum", red.graph, red.k, (Fraction(red.L),)), _comments(params))
    elif r == "is-mincut":
        src = reductions.sample_graph(args.n, 0.5, s)
        H, k, lam = reductions.gen_is_to_mincutpack(src, args.k)
        params = {"reduction": r, "seed": s, "source_edges": _graph_json(src), "source_n": src.n, "min_cut": lam}
        text = format_instance(ProblemInstance("mincut-pack", H, k), _comments(params))
    elif r == "sat-dsf":
        cnf = reductions.sample_cnf34(3, 4, s, unsat=args.unsat)
        d = reductions.gen_sat34_to_dsf(cnf, 3)
        text = _dsf_text(d, {"reduction": r, "seed": s, "cnf": cnf, "nvars": 3, "length": len(d)})
    elif r == "dsf-or":
        cnfs = [reductions.sample_cnf34(3, 4, 2 * s + j, unsat=bool((s >> j) & 1)) for j in range(2)]
        d = reductions.compose_dsf_or([reductions.gen_sat34_to_dsf(c, 3) for c in cnfs])
        text = _dsf_text(d, {"reduction": r, "seed": s, "cnfs": cnfs, "length": len(d)})
    else:
        d = reductions.sample_dsf(args.n, 2, s)
        red = reductions.gen_dsf_to_scp(d)
        params = {"reduction": r, "seed": s, "word": "".join(d.word), "padded": "".join(red.word), "girth": red.girth}
        text = format_instance(ProblemInstance("scp", red.graph, red.k), _comments(params))
    _emit(text, args.out)
    return 0


# -- verify --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    inst = _load(args)
    sol = parse_solution(_read(args.solution))
    ok, msg = oracle.verify_solution(inst.problem, inst.graph, inst.k, inst.budgets, sol)
    print(("pass" if ok else "fail") + f": {msg}")
    return 0 if ok else 1


# -- argument parsing ------------------------------------------------------------------


def _instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("instance", help="instance file ('-' for stdin)")
    p.add_argument("--k", type=int, help="override the packing size")
    p.add_argument("--ell", help="override the min-sum budget")
    p.add_argument("--budgets", help="comma-separated min-vector budgets")
    p.add_argument("--mode", choices=(VERTEX, EDGE), help="disjointness mode override")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclepack", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide an instance and print a solution")
    _instance_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, help="cap on random separations (scp)")
    p.add_argument("--exhaustive", action="store_true", help="try every separation (scp)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="path census cap (minsum/minvec)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (scp)")
    p.add_argument("--trace", action="store_true", help="print branching lines on stderr")
    p.add_argument("--report", help="write a JSON run report here")
    p.add_argument("--out", "-o", help="solution file (default stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kernelize", help="kernel for edge-disjoint shortest cycle packing")
    _instance_flags(p)
    p.add_argument("--out", "-o")
    p.add_argument("--log", help="rule log file (default <out>.log, else stderr)")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("lsct", help="print the laminar shortest cycle tree")
    p.add_argument("instance")
    p.add_argument("--dot", action="store_true", help="DOT instead of JSON lines")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_lsct)

    p = sub.add_parser("generate", help="write a generated instance")
    p.add_argument(
        "--reduction",
        required=True,
        choices=("mcc-minsum", "is-mincut", "sat-dsf", "dsf-or", "dsf-scp", "random-planar"),
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, help="size: vertices (default 12, is-mincut 5) or word length (dsf-scp, default 8)")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--density", type=float, default=0.7)
    p.add_argument("--max-weight", type=int, default=1)
    p.add_argument("--unsat", action="store_true", help="plant an unsatisfiable core (sat-dsf)")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    _instance_flags(p)
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, FormatError, NonPlanarError, ValueError, oracle.GuardExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
