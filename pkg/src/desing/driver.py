"""Resolution of idealistic spaces by blowing up coordinate centers.

The driver builds a plan: a tree whose nodes are steps (a blow-up, an
identity-division, or a coordinate change) and whose children are keyed
by chart. Lower-dimensional problems are solved on a hyperplane and the
resulting plan is lifted back by adding the hyperplane coordinate to
every center. Plans are then replayed on the original space, and every
leaf is checked to have an empty singular locus.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable

from .charts import OLD, ChartTree, LabelMint, restrict_to_subspace
from .groebner import GroebnerFuelExceeded, IdealBasis, dimension, is_empty_variety, univariate_generator
from .idealistic import (
    IdealisticSpace,
    MarkedIdeal,
    blowup,
    delta,
    in_singular_locus,
    is_nonsingular,
    is_permissible_center,
    normalize,
    singular_ideal,
    declare,
    substitute,
)
from .monomial import LogState, MonomialNode, monomial_resolve
from .parsing import parse_poly
from .poly import CoordSubspace, Poly, format_poly, rational_roots
from .projection import (
    ProjectionContext,
    adjust,
    cofactorial_order,
    coefficient_ideals,
    extract_log_factor,
    monic_candidates,
)


class ResolutionError(RuntimeError):
    """The driver could not finish; the message says which phase gave up."""


class UnsupportedInput(ResolutionError):
    """Input outside what the coordinate driver handles (e.g. irrational points)."""


class DriverFuelExceeded(ResolutionError):
    pass


@dataclass(frozen=True)
class Step:
    kind: str  # blowup | division | substitution | declare
    center: tuple[str, ...] = ()
    shifts: tuple[tuple[str, str], ...] = ()

    def describe(self) -> str:
        if self.kind == "substitution":
            return "substitute " + ", ".join(f"{v} -> {v} + ({s})" for v, s in self.shifts)
        if self.kind == "declare":
            return f"declare divisor {{{', '.join(self.center)}}}"
        return f"{self.kind} {{{', '.join(self.center)}}}"

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "substitution":
            out["shifts"] = {v: s for v, s in self.shifts}
        else:
            out["center"] = list(self.center)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Step":
        kind = data["kind"]
        if kind == "substitution":
            return cls(kind, shifts=tuple(sorted(data["shifts"].items())))
        if kind not in ("blowup", "division", "declare"):
            raise ValueError(f"unknown step kind {kind!r}")
        return cls(kind, center=tuple(data["center"]))


@dataclass
class Plan:
    step: Step | None = None
    phase: str = ""
    children: dict[str, "Plan"] = field(default_factory=dict)

    def count(self) -> int:
        return (1 if self.step else 0) + sum(c.count() for c in self.children.values())


def center_step(names: Iterable[str]) -> Step:
    names = tuple(sorted(names))
    return Step("division" if len(names) == 1 else "blowup", center=names)


def apply_step(space: IdealisticSpace, step: Step, mint: LabelMint) -> dict[str, IdealisticSpace]:
    """Children of ``space`` under ``step``, keyed as in the plan."""
    chart = space.chart
    if step.kind == "substitution":
        shifts = {chart.index(v): parse_poly(s, chart.variables) for v, s in step.shifts}
        return {"~": substitute(space, shifts)}
    if step.kind == "declare":
        return {"!": declare(space, chart.indices(step.center), mint)}
    center = CoordSubspace(chart.indices(step.center))
    return blowup(space, center, mint, check=True)


def lift(plan: Plan, extra: Iterable[str]) -> Plan:
    """Add ``extra`` coordinates to every center of a plan made on a hyperplane section."""
    extra = tuple(extra)
    if plan.step is None:
        return Plan()
    if plan.step.kind in ("substitution", "declare"):
        step = plan.step
    else:
        step = center_step(plan.step.center + extra)
    return Plan(step, plan.phase, {k: lift(c, extra) for k, c in plan.children.items()})


def _chain(steps: list[Step], phase: str, tail: Plan) -> Plan:
    for step in reversed(steps):
        tail = Plan(step, phase, {"~": tail})
    return tail


def _shift_step(space: IdealisticSpace, shifts: dict[int, Poly]) -> Step:
    names = space.chart.variables
    return Step("substitution", shifts=tuple(sorted((names[i], format_poly(p, names)) for i, p in shifts.items())))


class Driver:
    """Plans a resolution. ``fuel`` bounds the number of steps applied while planning."""

    def __init__(self, fuel: int = 20_000, check: bool = True, max_depth: int = 400):
        self.fuel = fuel
        self.used = 0
        self.check = check
        self.max_depth = max_depth
        self.depth = 0
        self.mint = LabelMint(prefix="T")

    # entry points

    def plan(self, space: IdealisticSpace) -> Plan:
        if space.zeroed:
            chart, mapping = restrict_to_subspace(space.chart, space.zeroed)
            n = chart.nvars
            low = IdealisticSpace(chart, [MarkedIdeal(mi.f.reindex(mapping, n), mi.d) for mi in space.ideals])
            return lift(self.resolve(low), space.chart.names(space.zeroed))
        return self.resolve(space)

    def resolve(self, space: IdealisticSpace, adjusted: bool = False) -> Plan:
        self.depth += 1
        try:
            if self.depth > self.max_depth:
                raise DriverFuelExceeded("recursion too deep")
            return self._resolve(space, adjusted)
        finally:
            self.depth -= 1

    # phases

    def _resolve(self, space: IdealisticSpace, adjusted: bool) -> Plan:
        if space.void or is_nonsingular(space):
            return Plan()
        v = self._permissible_hyperplane(space)
        if v is not None:
            plan = Plan(center_step([space.chart.variables[v]]), "hypersurface")
            return self._continue(plan, space, adjusted)
        if space.nvars == 1:
            return self._continue(self._base(space), space, adjusted)
        if adjusted:
            return self._adjusted(space)
        return self._general(space)

    def _permissible_hyperplane(self, space: IdealisticSpace) -> int | None:
        for v in range(space.nvars):
            if is_permissible_center(space, CoordSubspace.of(v)):
                return v
        return None

    def _base(self, space: IdealisticSpace) -> Plan:
        """One variable: move the smallest rational singular point to the origin."""
        g = univariate_generator(singular_ideal(space))
        roots = rational_roots(g)
        if not roots:
            raise UnsupportedInput(f"singular points are not rational: roots of {format_poly(g, space.chart.variables)}")
        p = roots[0]
        step = _shift_step(space, {0: Poly.const(p, 1)})
        return Plan(step, "base")

    def _general(self, space: IdealisticSpace) -> Plan:
        factors = self._undeclared_factors(space)
        if factors:
            plan = Plan(Step("declare", center=space.chart.names(factors)), "declare")
            return self._continue(plan, space, False)
        norm = normalize(space)
        z = extract_log_factor(norm)
        mu = cofactorial_order(norm, z)
        if mu == 0:
            return self._continue(self._monomial_plan(space, z, norm.ideals[0].d), space, False)
        adj = adjust(norm, z, mu, base=space)
        inner = self.resolve(adj, adjusted=True)
        return self._continue(inner, space, False, mu_bound=mu)

    @staticmethod
    def _undeclared_factors(space: IdealisticSpace) -> list[int]:
        """Coordinates dividing every ideal that are not yet divisor components."""
        chart = space.chart
        free = [v for v in chart.free_vars() if chart.label_at(v) is None]
        nonzero = [mi.f for mi in space.ideals if mi.f]
        return [v for v in free if all(min(m[v] for m in f.terms) > 0 for f in nonzero)]

    def _monomial_plan(self, space: IdealisticSpace, z, d: int) -> Plan:
        tree = monomial_resolve(LogState(z.exponents, d))
        names = space.chart.variables

        def convert(node: MonomialNode, labvar: dict[str, int]) -> Plan:
            if node.center is None:
                return Plan()
            plan = Plan(center_step(names[labvar[l]] for l in node.center), "monomial")
            for key, child in node.children.items():
                var = labvar[key]
                sub = dict(labvar)
                if len(node.center) > 1:
                    del sub[key]
                    sub[node.fresh] = var
                plan.children[names[var]] = convert(child, sub)
            return plan

        return convert(tree.root, space.chart.label_map())

    def _adjusted(self, space: IdealisticSpace) -> Plan:
        e = space.nvars
        sing = singular_ideal(space)
        if dimension(sing) == e - 1:
            return self._continue(self._rectify(space), space, True)
        chart = space.chart
        for lab, v in chart.divisor:
            if lab.origin == OLD and self._meets(sing, v):
                return self._continue(self._separate(space, v), space, True)
        try:
            mc = next(monic_candidates(space))
        except StopIteration:
            for lab, v in chart.divisor:
                if self._meets(sing, v):
                    return self._continue(self._separate(space, v), space, True)
            raise UnsupportedInput("no coordinate of maximal contact")
        lower = coefficient_ideals(mc.context(), check=self.check)
        below = self.resolve(lower)
        steps = [_shift_step(space, sh) for sh in mc.shifts]
        lifted = lift(below, [chart.variables[mc.z]])
        _relabel(lifted, "descend")
        plan = _chain(steps, "descend", lifted)
        return self._continue(plan, space, True)

    @staticmethod
    def _meets(sing: IdealBasis, v: int) -> bool:
        return not is_empty_variety(IdealBasis(list(sing.generators) + [Poly.var(v, sing.nvars)], sing.nvars))

    def _separate(self, space: IdealisticSpace, v: int) -> Plan:
        """Blow up until the divisor component on x_v misses the singular locus."""
        lower = coefficient_ideals(ProjectionContext(space, v), check=self.check)
        below = self.resolve(lower)
        if below.step is None:
            raise ResolutionError("component meets Sing but its projection is nonsingular")
        plan = lift(below, [space.chart.variables[v]])
        _relabel(plan, "separate")
        return plan

    def _rectify(self, space: IdealisticSpace) -> Plan:
        """Make a codimension-one component of Sing a coordinate hyperplane and divide by it."""
        for mc in monic_candidates(space):
            if is_permissible_center(mc.space, CoordSubspace.of(mc.z)):
                steps = [_shift_step(space, sh) for sh in mc.shifts]
                div = Plan(center_step([space.chart.variables[mc.z]]), "reduce")
                return _chain(steps, "reduce", div)
        raise UnsupportedInput("codimension-one part of Sing is not a rectifiable hypersurface")

    # replay while planning

    def _continue(self, plan: Plan, space: IdealisticSpace, adjusted: bool, mu_bound=None) -> Plan:
        """Apply ``plan`` to ``space`` and keep resolving at its leaves.

        ``mu_bound`` is the cofactor order of the round that produced the
        plan; it must drop at every singular leaf. A coordinate change that
        forgets a divisor component ends that comparison, since the order
        is then measured against a smaller divisor.
        """
        if plan.step is None:
            if mu_bound is not None and not space.void and not is_nonsingular(space):
                norm = normalize(space)
                mu = cofactorial_order(norm, extract_log_factor(norm))
                if not mu < mu_bound:
                    raise ResolutionError(f"cofactor order did not drop ({mu} >= {mu_bound})")
            return self.resolve(space, adjusted)
        self.used += 1
        if self.used > self.fuel:
            raise DriverFuelExceeded(f"planning used more than {self.fuel} steps")
        try:
            kids = apply_step(space, plan.step, self.mint)
        except ValueError as exc:
            raise ResolutionError(f"step {plan.step.describe()} failed in phase {plan.phase}: {exc}") from exc
        out = Plan(plan.step, plan.phase)
        for key, child in kids.items():
            if adjusted and self.check and not child.void and not adjusted_sample_check(child, [(0,) * child.nvars]):
                raise ResolutionError(f"adjusted space lost delta = 1 at the origin of {child.chart.id}")
            bound = mu_bound
            if plan.step.kind == "substitution" and len(child.chart.divisor) < len(space.chart.divisor):
                bound = None
            out.children[key] = self._continue(plan.children.get(key, Plan()), child, adjusted, bound)
        return out


def _relabel(plan: Plan, phase: str):
    if plan.step is not None:
        plan.phase = phase
        for c in plan.children.values():
            _relabel(c, phase)


@dataclass(frozen=True)
class TraceEntry:
    chart: str
    step: Step
    phase: str

    def to_json(self) -> dict:
        return {"chart": self.chart, "phase": self.phase, **self.step.to_json()}


@dataclass
class Resolution:
    space: IdealisticSpace
    plan: Plan
    tree: ChartTree
    trace: list[TraceEntry]

    def leaves(self) -> list[IdealisticSpace]:
        return [node.payload for node in self.tree.leaves()]

    def verified(self) -> bool:
        return all(is_nonsingular(s) for s in self.leaves())

    def centers(self) -> list[tuple[str, ...]]:
        return [t.step.center for t in self.trace if t.step.kind in ("blowup", "division")]


def materialize(space: IdealisticSpace, plan: Plan) -> Resolution:
    """Apply a plan in depth-first order with fresh, reproducible labels."""
    mint = LabelMint(prefix="E", taken=[lab.id for lab in space.chart.labels])
    tree = ChartTree(space.chart, space)
    trace: list[TraceEntry] = []
    stack = [(space.chart.id, plan)]
    while stack:
        nid, node = stack.pop()
        if node.step is None:
            continue
        kids = apply_step(tree.nodes[nid].payload, node.step, mint)
        entry = TraceEntry(nid, node.step, node.phase)
        tree.add_children(nid, entry, {k: (s.chart, s) for k, s in kids.items()})
        trace.append(entry)
        for key in reversed(list(tree.nodes[nid].children)):
            stack.append((tree.nodes[nid].children[key], node.children.get(key, Plan())))
    return Resolution(space, plan, tree, trace)


def replay(space: IdealisticSpace, trace: list[TraceEntry]) -> Resolution:
    """Rebuild the chart tree from a trace alone."""
    mint = LabelMint(prefix="E", taken=[lab.id for lab in space.chart.labels])
    tree = ChartTree(space.chart, space)
    for entry in trace:
        if entry.chart not in tree.nodes:
            raise ValueError(f"trace refers to unknown chart {entry.chart}")
        kids = apply_step(tree.nodes[entry.chart].payload, entry.step, mint)
        tree.add_children(entry.chart, entry, {k: (s.chart, s) for k, s in kids.items()})
    return Resolution(space, Plan(), tree, list(trace))


def redsing(space: IdealisticSpace, fuel: int = 20_000, check: bool = True) -> Resolution:
    """Plan, apply and verify a resolution of ``space``."""
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20_000))
    try:
        driver = Driver(fuel=fuel, check=check)
        try:
            plan = driver.plan(space)
        except GroebnerFuelExceeded as exc:
            raise DriverFuelExceeded(str(exc)) from exc
    finally:
        sys.setrecursionlimit(old_limit)
    res = materialize(space, plan)
    if not res.verified():
        bad = [n.chart.id for n in res.tree.leaves() if not is_nonsingular(n.payload)]
        raise ResolutionError(f"leaves still singular: {bad}")
    return res


def adjusted_sample_check(space: IdealisticSpace, points) -> bool:
    """delta equals 1 at every listed point of the singular locus."""
    return all(delta(space, p) == 1 for p in points if in_singular_locus(space, p))
