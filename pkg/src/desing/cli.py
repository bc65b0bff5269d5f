"""Command line front end.

Exit codes: 0 success or verified, 1 a negative verdict (not permissible,
spaces differ, trick mismatch, unresolved), 2 an error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .charts import LabelMint
from .driver import ResolutionError, redsing, replay
from .equivalence import equiv_bounded
from .groebner import GroebnerFuelExceeded, dimension, groebner
from .idealistic import (
    IdealisticSpace,
    PreconditionError,
    blowup,
    delta,
    delta_along,
    is_nonsingular,
    is_permissible_center,
    normalize,
    singular_ideal,
)
from .monomial import FuelExceeded, LogState, monomial_resolve
from .parsing import PolySyntaxError
from .poly import CoordSubspace, format_poly
from .problem import (
    ProblemError,
    dumps,
    load_problem,
    parse_rational,
    rational_text,
    resolution_to_json,
    space_to_json,
    trace_from_json,
)
from .projection import (
    NoMaximalContact,
    ProjectionContext,
    adjust,
    coefficient_ideals,
    cofactorial_order,
    extract_log_factor,
)
from .trick import trick_validate

OK, NEGATIVE, ERROR = 0, 1, 2


class Report:
    """Collects a JSON document and a text rendering of the same facts."""

    def __init__(self, emit: str):
        self.emit = emit
        self.doc: dict = {}
        self.lines: list[str] = []

    def put(self, key: str, value, text: str | None = None):
        self.doc[key] = value
        if text is not None:
            self.lines.append(text)

    def text(self, line: str):
        self.lines.append(line)

    def write(self, out):
        if self.emit == "json":
            out.write(dumps(self.doc))
        else:
            out.write("\n".join(self.lines) + "\n")


def _point(text: str, n: int) -> tuple[Fraction, ...]:
    pt = tuple(parse_rational(c.strip()) for c in text.split(","))
    if len(pt) != n:
        raise ProblemError(f"point needs {n} coordinates, got {len(pt)}")
    return pt


def _names(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _space_lines(space: IdealisticSpace, indent: str = "  ") -> list[str]:
    names = space.chart.variables
    if space.void:
        return [indent + "(no points)"]
    out = [f"{indent}({format_poly(mi.f, names)}, {mi.d})" for mi in space.ideals]
    if space.chart.divisor:
        div = ", ".join(f"{lab.id}:{names[v]}" for lab, v in space.chart.divisor)
        out.append(f"{indent}divisor {div}")
    return out


def cmd_order(args, rep: Report) -> int:
    space = load_problem(args.file).space
    chart = space.chart
    if args.along:
        center = CoordSubspace(chart.indices(_names(args.along)))
        value = delta_along(space, center)
        where = "{" + ",".join(_names(args.along)) + "}"
    else:
        pt = _point(args.point, chart.nvars) if args.point else (Fraction(0),) * chart.nvars
        value = delta(space, pt)
        where = "(" + ",".join(rational_text(c) for c in pt) + ")"
    rep.put("where", where)
    rep.put("delta", str(value), str(value))
    return OK


def cmd_sing(args, rep: Report) -> int:
    space = load_problem(args.file).space
    names = space.chart.variables
    gb = groebner(singular_ideal(space))
    basis = [format_poly(g, names) for g in gb.elements]
    dim = dimension(singular_ideal(space))
    rep.put("basis", basis, "basis: [" + ", ".join(basis) + "]")
    rep.put("dimension", dim, f"dimension: {dim}")
    return OK


def cmd_blowup(args, rep: Report) -> int:
    space = load_problem(args.file).space
    chart = space.chart
    center = CoordSubspace(chart.indices(_names(args.center)))
    if not is_permissible_center(space, center):
        rep.put("permissible", False, "center is not permissible")
        return NEGATIVE
    mint = LabelMint(taken=[lab.id for lab in chart.labels])
    kids = blowup(space, center, mint)
    rep.put("permissible", True)
    rep.put("charts", {k: space_to_json(s) for k, s in kids.items()})
    for key, s in kids.items():
        rep.text(f"chart {s.chart.id}:")
        rep.lines.extend(_space_lines(s))
    return OK


def cmd_project(args, rep: Report) -> int:
    space = load_problem(args.file).space
    ctx = ProjectionContext(space, space.chart.index(args.z))
    lower = coefficient_ideals(ctx)
    rep.put("projected", space_to_json(lower), f"projected onto ({args.z} = 0):")
    rep.lines.extend(_space_lines(lower))
    return OK


def cmd_adjust(args, rep: Report) -> int:
    space = normalize(load_problem(args.file).space)
    z = extract_log_factor(space)
    mu = cofactorial_order(space, z)
    zt = "*".join(f"{lab}^{a}" if a > 1 else lab for lab, a in z.exponents if a) or "1"
    rep.put("Z", {lab: a for lab, a in z.exponents}, f"Z = {zt}")
    rep.put("mu", str(mu), f"mu = {mu}")
    m = args.m if args.m is not None else mu
    if not isinstance(m, int) or m < 1:
        rep.text("nothing to adjust")
        rep.put("adjusted", None)
        return OK
    adjusted = adjust(space, z, m)
    rep.put("m", m)
    rep.put("adjusted", space_to_json(adjusted), f"adjusted with m = {m}:")
    rep.lines.extend(_space_lines(adjusted))
    rep.put("nonsingular", is_nonsingular(adjusted), f"singular locus empty: {is_nonsingular(adjusted)}")
    return OK


def _log_state(space: IdealisticSpace) -> LogState:
    if len(space.ideals) != 1:
        raise ProblemError("the monomial game takes a single marked ideal")
    mi = space.ideals[0]
    terms = list(mi.f.terms.items())
    if len(terms) != 1:
        raise ProblemError("the ideal must be a monomial")
    mono, _ = terms[0]
    lm = space.chart.label_map()
    by_var = {v: lab for lab, v in lm.items()}
    exps = {}
    for i, a in enumerate(mono):
        if a and i not in by_var:
            raise ProblemError(f"variable {space.chart.variables[i]} is not a divisor component")
        if i in by_var:
            exps[by_var[i]] = a
    return LogState.of(exps, mi.d)


def cmd_monomial(args, rep: Report) -> int:
    state = _log_state(load_problem(args.file).space)
    tr = monomial_resolve(state, fuel=args.fuel)
    log = [{"path": list(p), "center": list(c)} for p, c in tr.log]
    rep.put("log", log)
    for p, c in tr.log:
        rep.text(f"{'/'.join(('root',) + p)}: blow up {{{','.join(c)}}}")
    leaves = [{k: v for k, v in s.as_dict().items()} for s in tr.leaves()]
    ok = all(not s.is_singular() for s in tr.leaves())
    rep.put("leaves", leaves)
    rep.put("resolved", ok, f"{len(tr.log)} steps, {len(leaves)} leaves, all subcritical: {ok}")
    return OK if ok else NEGATIVE


def cmd_trick(args, rep: Report) -> int:
    problem = load_problem(args.file)
    n = problem.space.nvars
    pt = _point(args.point, n) if args.point else (problem.seeds[0] if problem.seeds else (Fraction(0),) * n)
    tr = trick_validate(problem.space, pt)
    fr = lambda xs: [str(x) for x in xs]
    rep.put("e", str(tr.e), f"e = {tr.e}")
    rep.put("predicted", fr(tr.predicted), "predicted a_j: " + " ".join(fr(tr.predicted)))
    rep.put("observed", fr(tr.observed), "observed a_j:  " + " ".join(fr(tr.observed)))
    rep.put("j0", tr.j0, f"j0 = {tr.j0} (predicted {tr.predicted_j0})")
    rep.put("branches", ["divisor" if b else "point" for b in tr.branches])
    rep.put("steps", tr.steps)
    rep.lines.extend("  " + s for s in tr.steps)
    rep.put("lemma", [[str(a), str(b), str(c)] for a, b, c in tr.lemma])
    rep.put("matched", tr.matched, f"matched: {str(tr.matched).lower()}")
    return OK if tr.matched else NEGATIVE


def cmd_equiv(args, rep: Report) -> int:
    a = load_problem(args.file_a).space
    b = load_problem(args.file_b).space
    res = equiv_bounded(a, b, args.depth)
    rep.put("systems", res.systems)
    if res.equivalent:
        rep.put("verdict", "same-verdicts", f"same-verdicts ({res.systems} test systems)")
        return OK
    rep.put("verdict", "differ", "differ")
    rep.put("counterexample", [s.describe() for s in res.counterexample],
            "counterexample: " + " ".join(s.describe() for s in res.counterexample))
    return NEGATIVE


def _report_resolution(res, rep: Report) -> int:
    doc = resolution_to_json(res)
    rep.doc.update(doc)
    for e in res.trace:
        rep.text(f"[{e.phase}] {e.chart}: {e.step.describe()}")
    for leaf in doc["leaves"]:
        rep.text(f"leaf {leaf['chart']}: {'nonsingular' if leaf['nonsingular'] else 'SINGULAR'}")
    rep.text(f"verdict: {doc['verdict']}")
    return OK if doc["verdict"] == "resolved" else NEGATIVE


def cmd_resolve(args, rep: Report) -> int:
    space = load_problem(args.file).space
    try:
        res = redsing(space, fuel=args.fuel)
    except ResolutionError as exc:
        if type(exc) is not ResolutionError:
            raise
        rep.put("verdict", "unresolved", f"verdict: unresolved ({exc})")
        return NEGATIVE
    code = _report_resolution(res, rep)
    if args.trace_out:
        Path(args.trace_out).write_text(dumps(rep.doc["trace"]))
    return code


def cmd_replay(args, rep: Report) -> int:
    import json

    space = load_problem(args.file).space
    data = json.loads(Path(args.trace).read_text())
    if isinstance(data, dict):
        data = data["trace"]
    return _report_resolution(replay(space, trace_from_json(data)), rep)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="desing", description="Idealistic spaces: orders, blow-ups, projections, resolution.")
    p.add_argument("--emit", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--emit", choices=("text", "json"), default=argparse.SUPPRESS)
        sp.set_defaults(func=func)
        return sp

    sp = add("order", cmd_order, "order of the space at a point or along a coordinate subspace")
    sp.add_argument("file")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--point", help="comma separated rational coordinates")
    g.add_argument("--along", help="comma separated variables spanning the zero set")

    sp = add("sing", cmd_sing, "reduced Groebner basis and dimension of the singular locus")
    sp.add_argument("file")

    sp = add("blowup", cmd_blowup, "blow up a coordinate center")
    sp.add_argument("file")
    sp.add_argument("--center", required=True)

    sp = add("project", cmd_project, "coefficient ideals on a hyperplane")
    sp.add_argument("file")
    sp.add_argument("--z", required=True)

    sp = add("adjust", cmd_adjust, "logarithmic factor, cofactorial order and adjusted list")
    sp.add_argument("file")
    sp.add_argument("--m", type=int)

    sp = add("monomial", cmd_monomial, "run the monomial game on a divisor monomial")
    sp.add_argument("file")
    sp.add_argument("--fuel", type=int, default=100_000)

    sp = add("trick", cmd_trick, "simulate the order trick at a point")
    sp.add_argument("file")
    sp.add_argument("--point")

    sp = add("equiv", cmd_equiv, "compare two spaces on bounded test systems")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp.add_argument("--depth", type=int, default=3)

    sp = add("resolve", cmd_resolve, "resolve and verify every leaf")
    sp.add_argument("file")
    sp.add_argument("--fuel", type=int, default=20_000)
    sp.add_argument("--trace-out")

    sp = add("replay", cmd_replay, "rebuild a resolution from a saved trace")
    sp.add_argument("file")
    sp.add_argument("trace")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    rep = Report(args.emit)
    try:
        code = args.func(args, rep)
    except (ProblemError, PolySyntaxError, PreconditionError, KeyError, ValueError, OSError,
            ResolutionError, NoMaximalContact, FuelExceeded, GroebnerFuelExceeded) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return ERROR
    rep.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
