"""Problem instances and the plain-text instance / solution formats.

Instance::

    c <comment>                      (any number, anywhere)
    p <problem> <n> <m> <k> [<budget>...]
    e <u> <v> <num>/<den>            (m lines, 0-based vertices)

Solution::

    RESULT yes|no
    c v0 v1 ... v_{t-1}              (one per cycle, canonical form)
    cut u-v u-v ...                  (mincut-pack only, one per cut-set)
    total <num>/<den>
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import EDGE, VERTEX, Cycle, WeightedGraph

PROBLEMS = ("minsum", "minsum-ed", "minvec", "minvec-ed", "scp", "scp-ed", "mincut-pack")


class FormatError(ValueError):
    pass


def fmt_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational {tok!r}") from None


def problem_mode(problem: str) -> str:
    return EDGE if problem.endswith("-ed") or problem == "mincut-pack" else VERTEX


def budget_count(problem: str, k: int) -> int:
    if problem.startswith("minsum"):
        return 1
    if problem.startswith("minvec"):
        return k
    return 0


@dataclass(frozen=True)
class ProblemInstance:
    problem: str
    graph: WeightedGraph
    k: int
    budgets: tuple[Fraction, ...] = ()
    comments: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise FormatError(f"unknown problem {self.problem!r}")
        if self.k < 0:
            raise FormatError("k must be non-negative")
        b = tuple(Fraction(x) for x in self.budgets)
        object.__setattr__(self, "budgets", b)
        want = budget_count(self.problem, self.k)
        if len(b) != want:
            raise FormatError(f"{self.problem} needs {want} budget(s), got {len(b)}")

    @property
    def mode(self) -> str:
        return problem_mode(self.problem)

    @property
    def ell(self) -> Fraction:
        return self.budgets[0]


def parse_instance(text: str) -> ProblemInstance:
    header = None
    edges = []
    comments = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        toks = line.split()
        tag = toks[0]
        if tag == "c":
            comments.append(line[1:].strip())
        elif tag == "p":
            if header is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            if len(toks) < 5:
                raise FormatError(f"line {lineno}: header needs 'p <problem> <n> <m> <k>'")
            header = toks[1:]
        elif tag == "e":
            if header is None:
                raise FormatError(f"line {lineno}: edge before header")
            if len(toks) != 4:
                raise FormatError(f"line {lineno}: edge needs 'e <u> <v> <num>/<den>'")
            try:
                u, v = int(toks[1]), int(toks[2])
            except ValueError:
                raise FormatError(f"line {lineno}: bad vertex id") from None
            edges.append((u, v, parse_rational(toks[3])))
        else:
            raise FormatError(f"line {lineno}: unknown line type {tag!r}")
    if header is None:
        raise FormatError("missing 'p' header")
    problem = header[0]
    if problem not in PROBLEMS:
        raise FormatError(f"unknown problem {problem!r}")
    try:
        n, m, k = int(header[1]), int(header[2]), int(header[3])
    except ValueError:
        raise FormatError("header counts must be integers") from None
    budgets = [parse_rational(t) for t in header[4:]]
    if len(edges) != m:
        raise FormatError(f"header says {m} edges, found {len(edges)}")
    try:
        g = WeightedGraph(n, tuple(edges))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return ProblemInstance(problem, g, k, tuple(budgets), tuple(comments))


def format_instance(inst: ProblemInstance, comments: Iterable[str] = ()) -> str:
    g = inst.graph
    lines = [f"c {c}" for c in comments]
    head = ["p", inst.problem, str(g.n), str(g.m), str(inst.k)]
    head += [fmt_rational(b) for b in inst.budgets]
    lines.append(" ".join(head))
    for u, v, w in g.edges:
        lines.append(f"e {u} {v} {fmt_rational(w)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Solution:
    answer: bool
    cycles: tuple[tuple[int, ...], ...] = ()
    cuts: tuple[tuple[tuple[int, int], ...], ...] = ()
    total: Fraction | None = None


def format_solution(answer: bool, cycles: Sequence[Cycle] = (), cuts=(), total=None) -> str:
    lines = [f"RESULT {'yes' if answer else 'no'}"]
    if answer:
        for c in cycles:
            lines.append("c " + " ".join(map(str, c.vertices)))
        for cut in cuts:
            lines.append("cut " + " ".join(f"{u}-{v}" for u, v in sorted(cut)))
        if total is None:
            total = sum((c.weight for c in cycles), Fraction(0))
        lines.append(f"total {fmt_rational(total)}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> Solution:
    answer = None
    cycles = []
    cuts = []
    total = None
    for raw in text.splitlines():
        toks = raw.split()
        if not toks:
            continue
        if toks[0] == "RESULT":
            if len(toks) != 2 or toks[1] not in ("yes", "no"):
                raise FormatError(f"bad RESULT line {raw!r}")
            answer = toks[1] == "yes"
        elif toks[0] == "c":
            try:
                cycles.append(tuple(int(t) for t in toks[1:]))
            except ValueError:
                raise FormatError(f"bad cycle line {raw!r}") from None
        elif toks[0] == "cut":
            cut = []
            for t in toks[1:]:
                a, _, b = t.partition("-")
                try:
                    cut.append((int(a), int(b)))
                except ValueError:
                    raise FormatError(f"bad cut edge {t!r}") from None
            cuts.append(tuple(cut))
        elif toks[0] == "total":
            if len(toks) != 2:
                raise FormatError(f"bad total line {raw!r}")
            total = parse_rational(toks[1])
        else:
            raise FormatError(f"unknown solution line {raw!r}")
    if answer is None:
        raise FormatError("missing RESULT line")
    return Solution(answer, tuple(cycles), tuple(cuts), total)
