"""Adjusting a space by its logarithmic factor, then projecting along a maximal contact coordinate."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .charts import Chart, LabelMint, restrict_to_subspace
from .groebner import IdealBasis, is_empty_variety, same_variety
from .idealistic import (
    IdealisticSpace,
    MarkedIdeal,
    PreconditionError,
    _derivatives,
    blowup,
    dedupe,
    is_normalized,
    is_permissible_center,
    project,
    singular_ideal,
    substitute,
)
from .poly import NEG_INF, CoordSubspace, Poly, divide_exact, monomial_content, order_at_point


class ReducednessError(PreconditionError):
    """Every coefficient below the mark vanished: the hyperplane lies in Sing."""


class NoMaximalContact(RuntimeError):
    """No admissible coordinate made an ideal monic of the right degree."""


@dataclass(frozen=True)
class LogFactor:
    """Monomial in the divisor variables, stored as exponents per label."""

    exponents: tuple[tuple[str, int], ...]

    def monomial(self, chart: Chart) -> tuple[int, ...]:
        m = [0] * chart.nvars
        lm = chart.label_map()
        for lab, a in self.exponents:
            m[lm[lab]] = a
        return tuple(m)

    def is_trivial(self) -> bool:
        return all(a == 0 for _, a in self.exponents)


def _require_normalized(space: IdealisticSpace) -> int:
    if not is_normalized(space):
        raise PreconditionError("expected a space with a single common mark")
    return space.ideals[0].d


def extract_log_factor(space: IdealisticSpace) -> LogFactor:
    """Largest monomial in divisor variables dividing every ideal."""
    _require_normalized(space)
    chart = space.chart
    dvars = chart.divisor_vars()
    contents = [monomial_content(mi.f, dvars) for mi in space.ideals if mi.f]
    m = tuple(min(c[i] for c in contents) for i in range(chart.nvars))
    return LogFactor(tuple((lab.id, m[v]) for lab, v in chart.divisor))


def cofactors(space: IdealisticSpace, z: LogFactor) -> list[Poly]:
    m = z.monomial(space.chart)
    return [divide_exact(mi.f, m) if mi.f else mi.f for mi in space.ideals]


def cofactorial_order(space: IdealisticSpace, z: LogFactor):
    """Largest m such that the cofactors have order >= m at some singular point.

    Returns NEG_INF when the singular locus is empty.
    """
    _require_normalized(space)
    sing = singular_ideal(space)
    if is_empty_variety(sing):
        return NEG_INF
    js = [j for j in cofactors(space, z) if j]
    free = space.chart.free_vars()
    bound = min(j.degree() for j in js)
    m = 0
    while m < bound:
        gens = list(sing.generators)
        for j in js:
            gens.extend(_derivatives(j, free, m))
        if is_empty_variety(IdealBasis(gens, space.nvars)):
            return m
        m += 1
    return m


def adjust(space: IdealisticSpace, z: LogFactor, m: int, base: IdealisticSpace | None = None) -> IdealisticSpace:
    """Append (J_j, m) for every cofactor. ``base`` may supply an equivalent presentation."""
    if m < 1:
        raise PreconditionError("the adjusting mark must be positive")
    extra = [MarkedIdeal(j, m) for j in cofactors(space, z) if j]
    head = (base or space).ideals
    return (base or space).with_ideals(dedupe(list(head) + extra))


@dataclass(frozen=True)
class ProjectionContext:
    """A space and a hyperplane z = 0 to project onto."""

    source: IdealisticSpace
    z: int

    @property
    def over_divisor(self) -> bool:
        return self.source.chart.label_at(self.z) is not None

    def hyperplane_chart(self) -> tuple[Chart, list[int | None]]:
        return restrict_to_subspace(self.source.chart, [self.z])


def _coefficient_list(ctx: ProjectionContext) -> tuple[list[MarkedIdeal], Chart, list[int | None]]:
    space = ctx.source
    if space.void or space.zeroed:
        raise PreconditionError("project from a plain space on its own chart")
    chart, mapping = ctx.hyperplane_chart()
    n = chart.nvars
    out = []
    for mi in space.ideals:
        for s, g in mi.f.expand_in(ctx.z).items():
            if s < mi.d and g:
                out.append(MarkedIdeal(g.reindex(mapping, n).monic(), mi.d - s))
    return out, chart, mapping


def coefficient_ideals(ctx: ProjectionContext, check: bool = True) -> IdealisticSpace:
    """Project a space onto the hyperplane z = 0.

    Each f_j = sum_s G_js z^s contributes (G_js, d_j - s) for s < d_j,
    with G_js scaled to leading coefficient 1. With
    ``check`` the singular locus of the result is compared with the part
    of the source singular locus on the hyperplane.
    """
    ideals, chart, mapping = _coefficient_list(ctx)
    ideals = dedupe(ideals)
    if not ideals:
        raise ReducednessError("the hyperplane is contained in the singular locus")
    lower = IdealisticSpace(chart, ideals)
    if check:
        assert_projection_law(ctx, lower, mapping)
    return lower


def assert_projection_law(ctx: ProjectionContext, lower: IdealisticSpace, mapping: Sequence[int | None]):
    n = ctx.source.nvars
    back = [None] * lower.nvars
    for old, new in enumerate(mapping):
        if new is not None:
            back[new] = old
    zvar = Poly.var(ctx.z, n)
    up = [g.reindex(back, n) for g in singular_ideal(lower).generators] + [zvar]
    here = list(singular_ideal(ctx.source).generators) + [zvar]
    if not same_variety(IdealBasis(up, n), IdealBasis(here, n)):
        raise AssertionError("projection changed the singular locus on the hyperplane")


def _canonical(space: IdealisticSpace) -> set:
    return {(mi.f.monic(), mi.d) for mi in space.ideals if mi.f}


def projection_commutes(ctx: ProjectionContext, step: CoordSubspace | int) -> bool:
    """Compare project-then-transform with transform-then-project.

    ``step`` is a center containing z with at least one more variable,
    or an integer m for the open projection from an m-space.
    """
    space = ctx.source
    lower = coefficient_ideals(ctx, check=False)
    _, mapping = ctx.hyperplane_chart()
    if isinstance(step, int):
        a = project(lower, step)
        b_up = project(space, step)
        b = coefficient_ideals(ProjectionContext(b_up, ctx.z), check=False)
        return _canonical(a) == _canonical(b)
    if ctx.z not in step.vars or len(step.vars) < 2:
        raise PreconditionError("center must lie in the hyperplane and be smaller than it")
    if not is_permissible_center(space, step):
        raise PreconditionError("center is not permissible")
    low_center = CoordSubspace(frozenset(mapping[i] for i in step.vars if i != ctx.z))
    a_kids = blowup(lower, low_center, LabelMint())
    b_kids = blowup(space, step, LabelMint())
    for key, a in a_kids.items():
        b = b_kids[key]
        b_low = coefficient_ideals(ProjectionContext(b, ctx.z), check=False)
        if _canonical(a) != _canonical(b_low):
            return False
    return True


def tschirnhaus(f: Poly, z: int, d: int) -> tuple[Poly, Poly]:
    """Remove the z^(d-1) term of a z-monic polynomial of z-degree d.

    Returns the transformed polynomial (leading coefficient 1) and the
    shift s used in the substitution z -> z - s.
    """
    coeffs = f.expand_in(z)
    if max(coeffs, default=-1) != d:
        raise PreconditionError(f"expected z-degree exactly {d}")
    lead = coeffs[d]
    if not lead.is_constant():
        raise PreconditionError("leading coefficient in z is not constant")
    f = f.scale(1 / lead.constant_term())
    g1 = f.expand_in(z).get(d - 1, Poly.zero(f.nvars))
    shift = g1.scale(Fraction(1, d))
    if shift.is_zero():
        return f, shift
    g = f.substitute({z: Poly.var(z, f.nvars) - shift}, f.nvars)
    return g, shift


def is_monic_in(f: Poly, z: int, d: int) -> bool:
    coeffs = f.expand_in(z)
    return max(coeffs, default=-1) == d and coeffs[d].is_constant()


LAMBDA_LADDER = (1, -1, 2, -2, 3, -3)
COMBINED_SHEARS = ((1,), (1, 2, 3, 5), (1, -1, 2, -2))


@dataclass(frozen=True)
class MaximalContact:
    """Coordinate changes applied before projecting, and the chosen data."""

    shifts: tuple[dict[int, Poly], ...]
    space: IdealisticSpace
    z: int
    j: int

    def context(self) -> ProjectionContext:
        return ProjectionContext(self.space, self.z)


def monic_candidates(space: IdealisticSpace, only: Sequence[int] | None = None,
                     pre: Sequence[dict[int, Poly]] = ()) -> Iterator[MaximalContact]:
    """Coordinates in which some ideal reads z^d + (terms of lower z-degree), in search order.

    The ideal must be monic of z-degree equal to its mark, directly, after
    one shear x_i -> x_i + lambda * z of a non-divisor coordinate, or after
    shearing all non-divisor coordinates together.
    After the Tschirnhaus shift its (d-1)-st z-derivative is a constant
    times z, so the singular locus lies in z = 0. A divisor coordinate
    qualifies only if no coordinate change is needed.
    """
    if space.void or space.zeroed:
        raise PreconditionError("expected a plain space")
    n = space.nvars
    candidates = list(range(len(space.ideals))) if only is None else list(only)
    dvars = space.chart.divisor_vars()

    def finish(sp: IdealisticSpace, z: int, j: int, steps: list) -> MaximalContact | None:
        mi = sp.ideals[j]
        _, shift = tschirnhaus(mi.f, z, mi.d)
        if shift:
            if z in dvars:
                return None
            sh = {z: -shift}
            sp = substitute(sp, sh)
            steps = steps + [sh]
        return MaximalContact(tuple(steps), sp, z, j)

    for j in candidates:
        for z in range(n):
            mi = space.ideals[j]
            if is_monic_in(mi.f, z, mi.d):
                found = finish(space, z, j, list(pre))
                if found:
                    yield found
    for j in candidates:
        for z in range(n):
            for lam in LAMBDA_LADDER:
                for i in range(n):
                    if i == z or i in dvars:
                        continue
                    sh = {i: Poly.var(z, n).scale(lam)}
                    trial = substitute(space, sh)
                    if is_monic_in(trial.ideals[j].f, z, trial.ideals[j].d):
                        found = finish(trial, z, j, list(pre) + [sh])
                        if found:
                            yield found
    # Shear every admissible coordinate at once.
    for j in candidates:
        for z in range(n):
            others = [i for i in range(n) if i != z and i not in dvars]
            if len(others) < 2:
                continue
            for pattern in COMBINED_SHEARS:
                sh = {i: Poly.var(z, n).scale(pattern[k % len(pattern)]) for k, i in enumerate(others)}
                trial = substitute(space, sh)
                if is_monic_in(trial.ideals[j].f, z, trial.ideals[j].d):
                    found = finish(trial, z, j, list(pre) + [sh])
                    if found:
                        yield found


def maximal_contact_chart(space: IdealisticSpace, point: Sequence | None = None) -> MaximalContact:
    """First candidate of ``monic_candidates``.

    With ``point`` the point is first moved to the origin and only ideals
    whose order there equals their mark are tried.
    """
    if space.void or space.zeroed:
        raise PreconditionError("expected a plain space")
    n = space.nvars
    pre: list[dict[int, Poly]] = []
    only = None
    if point is not None:
        offsets = {i: Fraction(p) for i, p in enumerate(point) if p}
        if offsets:
            sh = {i: Poly.const(p, n) for i, p in offsets.items()}
            space = substitute(space, sh)
            pre.append(sh)
        origin = (0,) * n
        only = [j for j, mi in enumerate(space.ideals) if order_at_point(mi.f, origin) == mi.d]
        if not only:
            raise PreconditionError("no ideal has order equal to its mark at the point")
    for mc in monic_candidates(space, only, pre):
        return mc
    raise NoMaximalContact("no coordinate makes an ideal monic of degree equal to its mark")
