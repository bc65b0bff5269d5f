"""Marked ideals on charts: singular loci and orders, plus controlled transforms."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from .charts import (
    Chart,
    ChartMap,
    LabelMint,
    blowup_charts,
    declare_divisor,
    division_chart,
    open_projection,
    substitution_chart,
)
from .groebner import IdealBasis, is_empty_variety
from .poly import INF, CoordSubspace, Poly, divide_exact, order_along_vars, order_at_point


class PreconditionError(ValueError):
    """An operation was called outside its domain."""


@dataclass(frozen=True)
class MarkedIdeal:
    f: Poly
    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"mark must be a positive integer, got {self.d!r}")


@dataclass(frozen=True)
class IdealisticSpace:
    """A finite list of marked ideals on a chart.

    ``void`` marks a chart that the immersed subspace does not meet; such
    a space has no points and no singular locus.
    """

    chart: Chart
    ideals: tuple[MarkedIdeal, ...]
    void: bool = False

    def __post_init__(self):
        object.__setattr__(self, "ideals", tuple(self.ideals))
        if self.void:
            return
        if not self.ideals:
            raise ValueError("an idealistic space needs at least one marked ideal")
        n = self.chart.nvars
        if any(mi.f.nvars != n for mi in self.ideals):
            raise ValueError("ideal does not live on the chart")
        if all(mi.f.is_zero() for mi in self.ideals):
            raise ValueError("at least one ideal must be nonzero")
        zeroed = self.chart.subspace or frozenset()
        if any(mi.f.support() & zeroed for mi in self.ideals):
            raise ValueError("ideals of an immersed space may not use its zeroed variables")

    @property
    def nvars(self) -> int:
        return self.chart.nvars

    @property
    def dim(self) -> int:
        """Dimension of the support (the immersed subspace, if any)."""
        return len(self.chart.free_vars())

    @property
    def zeroed(self) -> frozenset[int]:
        return self.chart.subspace or frozenset()

    def with_ideals(self, ideals: Iterable[MarkedIdeal]) -> "IdealisticSpace":
        return IdealisticSpace(self.chart, tuple(ideals))


def dedupe(ideals: Iterable[MarkedIdeal]) -> tuple[MarkedIdeal, ...]:
    """Drop zero ideals and repeats (up to a constant factor), keeping order."""
    seen = set()
    out = []
    for mi in ideals:
        if mi.f.is_zero():
            continue
        key = (mi.f.monic(), mi.d)
        if key not in seen:
            seen.add(key)
            out.append(mi)
    return tuple(out)


def _derivatives(f: Poly, free: Sequence[int], up_to: int) -> list[Poly]:
    """All partial derivatives of f of order at most ``up_to`` in the free variables."""
    out = [f]
    layer = {(): f}
    for _ in range(up_to):
        nxt = {}
        for alpha, g in layer.items():
            if g.is_zero():
                continue
            start = alpha[-1] if alpha else 0
            for pos in range(start, len(free)):
                h = g.diff(free[pos])
                if h:
                    nxt[alpha + (pos,)] = h
        out.extend(nxt.values())
        layer = nxt
    return out


def singular_ideal(space: IdealisticSpace) -> IdealBasis:
    """Generators whose common zeros are the singular locus.

    These are all derivatives of f_j of order below d_j, taken in the
    coordinates of the support, together with the zeroed variables.
    """
    n = space.nvars
    if space.void:
        return IdealBasis([Poly.one(n)], n)
    free = space.chart.free_vars()
    gens: list[Poly] = []
    seen = set()
    for mi in space.ideals:
        if mi.f.is_zero():
            continue
        for g in _derivatives(mi.f, free, mi.d - 1):
            k = g.monic()
            if k not in seen:
                seen.add(k)
                gens.append(g)
    for i in sorted(space.zeroed):
        gens.append(Poly.var(i, n))
    return IdealBasis(gens, n)


def is_nonsingular(space: IdealisticSpace) -> bool:
    return is_empty_variety(singular_ideal(space))


def in_singular_locus(space: IdealisticSpace, point: Sequence) -> bool:
    if space.void:
        return False
    if any(point[i] for i in space.zeroed):
        return False
    return all(order_at_point(mi.f, point) >= mi.d for mi in space.ideals)


def delta(space: IdealisticSpace, point: Sequence):
    """min_j order_P(f_j) / d_j at a rational point of the support."""
    if space.void:
        raise PreconditionError("the immersed subspace does not meet this chart")
    if len(point) != space.nvars:
        raise PreconditionError("point has the wrong dimension")
    if any(point[i] for i in space.zeroed):
        raise PreconditionError("point is not on the immersed subspace")
    return min(_ratio(order_at_point(mi.f, point), mi.d) for mi in space.ideals)


def _ratio(order, d: int):
    return INF if order is INF else Fraction(order, d)


def delta_along(space: IdealisticSpace, center: CoordSubspace):
    """Generic value of delta along a coordinate center inside the support."""
    if space.void:
        raise PreconditionError("the immersed subspace does not meet this chart")
    if not space.zeroed <= center.vars:
        raise PreconditionError("center is not contained in the immersed subspace")
    along = center.vars - space.zeroed
    return min(_ratio(order_along_vars(mi.f, along), mi.d) for mi in space.ideals)


def is_permissible_center(space: IdealisticSpace, center: CoordSubspace) -> bool:
    """Coordinate centers have normal crossings with the divisor; only Y in Sing is checked."""
    if space.void:
        return False
    if not space.zeroed <= center.vars:
        return False
    if center.vars == space.zeroed:
        # The whole support: permissible only if every ideal is zero.
        return all(mi.f.is_zero() for mi in space.ideals)
    return delta_along(space, center) >= 1


def normalize(space: IdealisticSpace) -> IdealisticSpace:
    """Equivalent space in which every mark equals the lcm of the marks."""
    d = lcm(*(mi.d for mi in space.ideals))
    return space.with_ideals(MarkedIdeal(mi.f ** (d // mi.d), d) for mi in space.ideals)


def is_normalized(space: IdealisticSpace) -> bool:
    return len({mi.d for mi in space.ideals}) == 1


def _transform(space: IdealisticSpace, child: Chart, cmap: ChartMap, void: bool = False) -> IdealisticSpace:
    if void or space.void:
        return IdealisticSpace(child, (), void=True)
    n = child.nvars
    images = dict(enumerate(cmap.images))
    out = []
    for mi in space.ideals:
        g = mi.f.substitute(images, n) if mi.f else Poly.zero(n)
        if cmap.kind in ("blowup", "division") and g:
            _, w = cmap.exceptional
            m = [0] * n
            m[w] = mi.d
            g = divide_exact(g, tuple(m))
        out.append(MarkedIdeal(g, mi.d))
    return IdealisticSpace(child, tuple(out))


def blowup(space: IdealisticSpace, center: CoordSubspace, mint: LabelMint, check: bool = True) -> dict[str, IdealisticSpace]:
    """Controlled transforms in every standard chart, keyed by the chart variable.

    A single-variable center is an identity-division step.
    """
    if check and not is_permissible_center(space, center):
        raise PreconditionError(f"center {space.chart.names(center.vars)} is not permissible")
    chart = space.chart
    if len(center.vars) == 1:
        (v,) = center.vars
        existing = chart.label_at(v)
        child, cmap = division_chart(chart, v, None if existing else mint())
        return {chart.variables[v]: _transform(space, child, cmap)}
    lab = mint()
    out = {}
    for child, cmap in blowup_charts(chart, center, lab):
        _, ell = cmap.exceptional
        void = space.zeroed and ell in space.zeroed
        out[chart.variables[ell]] = _transform(space, child, cmap, void=bool(void))
    return out


def project(space: IdealisticSpace, m: int = 1) -> IdealisticSpace:
    """Pull back along the projection from the product with an affine m-space."""
    child, cmap = open_projection(space.chart, m)
    return _transform(space, child, cmap)


def substitute(space: IdealisticSpace, shifts: Mapping[int, Poly]) -> IdealisticSpace:
    """Apply the coordinate change x_v -> x_v + shifts[v]."""
    child, cmap = substitution_chart(space.chart, shifts)
    return _transform(space, child, cmap)


def translate(space: IdealisticSpace, point: Mapping[int, Fraction]) -> IdealisticSpace:
    """Move ``point`` to the origin."""
    n = space.nvars
    shifts = {i: Poly.const(p, n) for i, p in point.items() if p}
    if not shifts:
        return space
    return substitute(space, shifts)


def declare(space: IdealisticSpace, variables, mint: LabelMint) -> IdealisticSpace:
    """Same ideals with the given coordinate hyperplanes added to the divisor."""
    child, cmap = declare_divisor(space.chart, variables, mint)
    return _transform(space, child, cmap)
