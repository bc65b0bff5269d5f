"""Finite test systems and bounded comparison of idealistic spaces.

A test system is a sequence of steps applied to every chart: coordinate
centers named by variables or divisor labels, and open projections. A
system is permissible for a space if every center is permissible in every
chart where it is nonempty.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .charts import LabelMint, center_from_labels
from .idealistic import IdealisticSpace, blowup, is_permissible_center, project
from .poly import CoordSubspace


@dataclass(frozen=True)
class TestStep:
    __test__ = False  # not a pytest class

    center: tuple[str, ...] = ()
    labels: tuple[str, ...] = ()
    projection: int = 0

    def __post_init__(self):
        kinds = sum(bool(x) for x in (self.center, self.labels, self.projection))
        if kinds != 1:
            raise ValueError("a test step is exactly one of: center, labels, projection")

    def describe(self) -> str:
        if self.projection:
            return f"project({self.projection})"
        if self.labels:
            return "labels{" + ",".join(self.labels) + "}"
        return "{" + ",".join(self.center) + "}"


@dataclass
class TestRun:
    __test__ = False

    ok: bool
    failed_at: int | None
    leaves: list[IdealisticSpace] = field(default_factory=list)


def _center_in(space: IdealisticSpace, step: TestStep) -> CoordSubspace | None:
    chart = space.chart
    if step.labels:
        return center_from_labels(chart, step.labels)
    if any(v not in chart.variables for v in step.center):
        return None
    return CoordSubspace(chart.indices(step.center))


def apply_test_step(leaves: list[IdealisticSpace], step: TestStep, mint: LabelMint) -> list[IdealisticSpace] | None:
    """Next leaves, or None if the step is not permissible in some chart."""
    if step.projection:
        return [project(s, step.projection) for s in leaves]
    out = []
    for s in leaves:
        center = _center_in(s, step)
        if center is None:
            out.append(s)
            continue
        if not is_permissible_center(s, center):
            return None
        out.extend(blowup(s, center, mint, check=False).values())
    return out


def run_test_system(space: IdealisticSpace, steps: Sequence[TestStep]) -> TestRun:
    mint = LabelMint(prefix="E", taken=[l.id for l in space.chart.labels])
    leaves = [space]
    for k, step in enumerate(steps):
        nxt = apply_test_step(leaves, step, mint)
        if nxt is None:
            return TestRun(False, k, leaves)
        leaves = nxt
    return TestRun(True, None, leaves)


def coordinate_candidates(variables: Sequence[str]) -> list[TestStep]:
    """Every coordinate subspace of the chart, then one open projection."""
    out = []
    for k in range(1, len(variables) + 1):
        for combo in combinations(variables, k):
            out.append(TestStep(center=tuple(combo)))
    out.append(TestStep(projection=1))
    return out


@dataclass
class EquivResult:
    equivalent: bool
    counterexample: list[TestStep] | None
    systems: int

    def describe(self) -> str:
        if self.equivalent:
            return f"no difference found in {self.systems} test systems"
        return "differ on " + " ".join(s.describe() for s in self.counterexample)


def equiv_bounded(
    a: IdealisticSpace,
    b: IdealisticSpace,
    depth: int,
    candidates: Callable[[Sequence[str]], list[TestStep]] = coordinate_candidates,
) -> EquivResult:
    """Compare permissibility verdicts of both spaces on all test systems up to ``depth`` steps.

    Systems are explored depth first; a prefix that both spaces reject is
    not extended.
    """
    if a.chart.variables != b.chart.variables:
        raise ValueError("spaces must live on the same chart")
    count = 0

    def walk(la, lb, ma, mb, prefix) -> list[TestStep] | None:
        nonlocal count
        if len(prefix) == depth:
            return None
        names = la[0].chart.variables
        for step in candidates(names):
            count += 1
            ma2, mb2 = _copy(ma), _copy(mb)
            na = apply_test_step(la, step, ma2)
            nb = apply_test_step(lb, step, mb2)
            if (na is None) != (nb is None):
                return prefix + [step]
            if na is None:
                continue
            found = walk(na, nb, ma2, mb2, prefix + [step])
            if found:
                return found
        return None

    cex = walk([a], [b], LabelMint(taken=[l.id for l in a.chart.labels]),
               LabelMint(taken=[l.id for l in b.chart.labels]), [])
    return EquivResult(cex is None, cex, count)


def _copy(m: LabelMint) -> LabelMint:
    return LabelMint(m.step, m.prefix, m.taken)
