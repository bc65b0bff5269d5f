"""Independent routes used to cross-check the library."""
from __future__ import annotations

import random
from fractions import Fraction

from desing.charts import EXCEPTIONAL, Chart, DivisorLabel
from desing.idealistic import IdealisticSpace, MarkedIdeal, blowup
from desing.monomial import LogState, MonomialNode
from desing.poly import CoordSubspace, Poly


def monomial_space(state: LogState) -> IdealisticSpace:
    """The literal marked monomial prod x_D^a_D, one coordinate per label."""
    labels = [l for l, _ in state.exponents]
    chart = Chart(tuple(labels), tuple((DivisorLabel(l), i) for i, l in enumerate(labels)))
    mono = tuple(a for _, a in state.exponents)
    return IdealisticSpace(chart, (MarkedIdeal(Poly.monomial(mono), state.d),))


def exponents_by_label(space: IdealisticSpace) -> dict[str, int]:
    (mi,) = space.ideals
    ((mono, _),) = mi.f.terms.items()
    by_var = {v: lab.id for lab, v in space.chart.divisor}
    if any(a and i not in by_var for i, a in enumerate(mono)):
        raise AssertionError("exponent on a variable without a label")
    return {by_var[i]: mono[i] for i in by_var}


def analytic_children(space: IdealisticSpace, center: frozenset[str], fresh: str | None):
    """Blow up the literal monomial along the labelled center; children keyed by label."""
    lm = space.chart.label_map()
    c = CoordSubspace(frozenset(lm[l] for l in center))
    mint = lambda: DivisorLabel(fresh or "unused", EXCEPTIONAL, 0)
    out = {}
    for key, child in blowup(space, c, mint).items():
        out[space.chart.label_at(space.chart.index(key)).id] = child
    return out


def analytic_check(node: MonomialNode, space: IdealisticSpace | None = None) -> bool:
    """Walk a monomial trace, replaying each step on the literal monomial."""
    space = space or monomial_space(node.state)
    ok = exponents_by_label(space) == {k: v for k, v in node.state.as_dict().items()}
    if node.center is None:
        return ok
    kids = analytic_children(space, node.center, node.fresh)
    ok &= set(kids) == set(node.children)
    for key, child in node.children.items():
        ok &= analytic_check(child, kids[key])
    return ok


def random_log_state(rng: random.Random) -> LogState:
    k = rng.randint(1, 5)
    return LogState.of({f"D{i + 1}": rng.randint(0, 10) for i in range(k)}, rng.randint(1, 12))


def trick_recurrence(e: Fraction) -> list[Fraction]:
    """a_2 = e - 1; a_{j+1} = a_j - 1 if a_j >= 1 else a_j + e - 1; stops at 0."""
    a = [Fraction(e) - 1]
    while a[-1] != 0:
        a.append(a[-1] - 1 if a[-1] >= 1 else a[-1] + e - 1)
    return a
