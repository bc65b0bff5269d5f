"""Hironaka's trick: predicted orders along the moving divisor, and a simulation.

Take a point P with delta_P = e >= 1 and cross the space with a line
(coordinate t). Blow up the point P_1 = (P, 0), then repeatedly: if the
order a_j along the latest divisor D_j is at least 1 blow up D_j
(a division), otherwise blow up the point P_j where the t-axis meets D_j.
The predicted orders are a_2 = e - 1 and a_{j+1} = a_j - 1 or a_j + e - 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .charts import LabelMint, restrict_to_subspace
from .idealistic import (
    IdealisticSpace,
    MarkedIdeal,
    PreconditionError,
    blowup,
    delta,
    delta_along,
    is_permissible_center,
    project,
    translate,
)
from .poly import CoordSubspace


def predicted_orders(e: Fraction, limit: int = 10_000) -> list[Fraction]:
    """a_2, a_3, ..., ending with the first zero."""
    e = Fraction(e)
    if e < 1:
        raise PreconditionError("the trick needs delta >= 1 at the point")
    a = [e - 1]
    while a[-1] != 0:
        if len(a) > limit:
            raise RuntimeError("recurrence did not reach zero")
        a.append(a[-1] - 1 if a[-1] >= 1 else a[-1] + e - 1)
    return a


@dataclass
class TrickTrace:
    e: Fraction
    predicted: list[Fraction]
    observed: list[Fraction]
    lemma: list[tuple[Fraction, Fraction, Fraction]] = field(default_factory=list)
    steps: list[str] = field(default_factory=list)

    @property
    def j0(self) -> int:
        """First index j >= 2 with a_j = 0."""
        return 1 + len(self.observed)

    @property
    def predicted_j0(self) -> int:
        return 1 + len(self.predicted)

    @property
    def branches(self) -> list[bool]:
        """For j = 2 .. j0 - 1: was D_j blown up (a_j >= 1)?"""
        return [a >= 1 for a in self.observed[:-1]]

    @property
    def lemma_holds(self) -> bool:
        return all(dp >= dx + dd for dp, dx, dd in self.lemma)

    @property
    def matched(self) -> bool:
        return self.observed == self.predicted and self.lemma_holds


def trick_validate(space: IdealisticSpace, point: Sequence, limit: int = 1000) -> TrickTrace:
    """Simulate the trick at ``point`` and compare with the recurrence."""
    if space.zeroed:
        chart, mapping = restrict_to_subspace(space.chart, space.zeroed)
        n = chart.nvars
        point = [p for i, p in enumerate(point) if mapping[i] is not None]
        space = IdealisticSpace(chart, [MarkedIdeal(mi.f.reindex(mapping, n), mi.d) for mi in space.ideals])
    e = delta(space, point)
    predicted = predicted_orders(e)
    steps = []
    s = translate(space, {i: p for i, p in enumerate(point) if p})
    if any(point):
        steps.append(f"translate {tuple(str(p) for p in point)} to the origin")
    s = project(s, 1)
    t = s.nvars - 1
    steps.append(f"project: add {s.chart.variables[t]}")
    everything = CoordSubspace(frozenset(range(s.nvars)))
    base = CoordSubspace(frozenset(range(t))) if t else None
    mint = LabelMint(taken=[l.id for l in s.chart.labels])
    tname = s.chart.variables[t]

    def blow_point(sp: IdealisticSpace) -> IdealisticSpace:
        steps.append("blow up the point")
        return blowup(sp, everything, mint)[tname]

    s = blow_point(s)
    observed: list[Fraction] = []
    lemma = []
    d_t = CoordSubspace.of(t)
    for _ in range(limit):
        a = delta_along(s, d_t)
        observed.append(a)
        origin = (0,) * s.nvars
        dx = delta_along(s, base) if base else delta(s, origin)
        lemma.append((delta(s, origin), dx, a))
        if a == 0:
            break
        if a >= 1:
            if not is_permissible_center(s, d_t):
                raise AssertionError("divisor with order >= 1 is not permissible")
            steps.append("blow up the divisor")
            s = blowup(s, d_t, mint)[tname]
        else:
            s = blow_point(s)
    else:
        raise RuntimeError("simulation did not reach order zero")
    return TrickTrace(e, predicted, observed, lemma, steps)
