"""Problem files and JSON reports.

A problem file is JSON::

    {"variables": ["x", "y"],
     "divisor": [{"label": "H", "variable": "x", "origin": "old"}],
     "subspace": ["y"],
     "ideals": [{"poly": "x^3", "mark": 2}],
     "seeds": [["0", "0"]]}

``divisor``, ``subspace`` and ``seeds`` are optional. Origin ``new`` means
an exceptional component. Every number in an emitted document is exact
text (integers or ``p/q`` strings).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .charts import EXCEPTIONAL, OLD, Chart, DivisorLabel
from .driver import Resolution, Step, TraceEntry
from .idealistic import IdealisticSpace, MarkedIdeal, is_nonsingular
from .parsing import parse_poly
from .poly import format_poly

_ORIGINS = {"old": OLD, "new": EXCEPTIONAL, "exceptional": EXCEPTIONAL}


class ProblemError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    if isinstance(text, bool) or isinstance(text, float):
        raise ProblemError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ProblemError(f"not a rational number: {text!r}") from None


def rational_text(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class ProblemFile:
    space: IdealisticSpace
    seeds: list[tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.space.chart.variables


def _require(data: dict, key: str, kind):
    if key not in data:
        raise ProblemError(f"missing field {key!r}")
    if not isinstance(data[key], kind):
        raise ProblemError(f"field {key!r} has the wrong type")
    return data[key]


def problem_from_json(data: Any) -> ProblemFile:
    if not isinstance(data, dict):
        raise ProblemError("a problem is a JSON object")
    names = _require(data, "variables", list)
    if not names or not all(isinstance(v, str) for v in names):
        raise ProblemError("variables must be a non-empty list of names")
    if len(set(names)) != len(names):
        raise ProblemError("duplicate variable names")
    idx = {v: i for i, v in enumerate(names)}

    def var(v) -> int:
        if v not in idx:
            raise ProblemError(f"unknown variable {v!r}")
        return idx[v]

    divisor = []
    for entry in data.get("divisor") or []:
        origin = entry.get("origin", "old")
        if origin not in _ORIGINS:
            raise ProblemError(f"origin must be old or new, got {origin!r}")
        divisor.append((DivisorLabel(str(entry["label"]), _ORIGINS[origin]), var(entry["variable"])))
    zeroed = frozenset(var(v) for v in data.get("subspace") or []) or None
    try:
        chart = Chart(tuple(names), tuple(divisor), zeroed)
    except ValueError as exc:
        raise ProblemError(str(exc)) from None
    ideals = []
    for entry in _require(data, "ideals", list):
        mark = entry.get("mark")
        if not isinstance(mark, int) or isinstance(mark, bool) or mark < 1:
            raise ProblemError(f"mark must be an integer >= 1, got {mark!r}")
        ideals.append(MarkedIdeal(parse_poly(entry["poly"], names), mark))
    try:
        space = IdealisticSpace(chart, tuple(ideals))
    except ValueError as exc:
        raise ProblemError(str(exc)) from None
    seeds = []
    for pt in data.get("seeds") or []:
        if len(pt) != len(names):
            raise ProblemError("seed point has the wrong length")
        seeds.append(tuple(parse_rational(c) for c in pt))
    return ProblemFile(space, seeds)


def load_problem(path) -> ProblemFile:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    return problem_from_json(data)


def space_to_json(space: IdealisticSpace, seeds=()) -> dict:
    chart = space.chart
    out: dict = {"variables": list(chart.variables)}
    if chart.divisor:
        out["divisor"] = [
            {"label": lab.id, "variable": chart.variables[v], "origin": "old" if lab.origin == OLD else "new"}
            for lab, v in chart.divisor
        ]
    if chart.subspace:
        out["subspace"] = list(chart.names(chart.subspace))
    out["ideals"] = [{"poly": format_poly(mi.f, chart.variables), "mark": mi.d} for mi in space.ideals]
    if space.void:
        out["void"] = True
    if seeds:
        out["seeds"] = [[rational_text(c) for c in p] for p in seeds]
    return out


def problem_to_json(problem: ProblemFile) -> dict:
    return space_to_json(problem.space, problem.seeds)


def dumps(doc) -> str:
    """Canonical JSON text with sorted keys and a trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def trace_to_json(trace: list[TraceEntry]) -> list[dict]:
    return [e.to_json() for e in trace]


def trace_from_json(data: list[dict]) -> list[TraceEntry]:
    out = []
    for item in data:
        body = {k: v for k, v in item.items() if k not in ("chart", "phase")}
        out.append(TraceEntry(item["chart"], Step.from_json(body), item.get("phase", "")))
    return out


def resolution_to_json(res: Resolution) -> dict:
    leaves = []
    for node in res.tree.leaves():
        s = node.payload
        leaves.append({"chart": node.chart.id, "nonsingular": is_nonsingular(s), "space": space_to_json(s)})
    return {
        "input": space_to_json(res.space),
        "trace": trace_to_json(res.trace),
        "centers": [list(c) for c in res.centers()],
        "leaves": leaves,
        "verdict": "resolved" if all(l["nonsingular"] for l in leaves) else "unresolved",
    }
