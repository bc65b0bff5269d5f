from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, from_sympy, space, to_sympy
from desing.charts import LabelMint
from desing.groebner import IdealBasis, dimension, same_variety
from desing.idealistic import (
    MarkedIdeal,
    PreconditionError,
    blowup,
    dedupe,
    delta,
    delta_along,
    is_nonsingular,
    is_normalized,
    is_permissible_center,
    normalize,
    singular_ideal,
)
from desing.poly import CoordSubspace

XY = ("x", "y")
XYZ = ("x", "y", "z")

CUSP = space("x y", [("y^2 - x^3", 2)])
UMBRELLA = space("x y z", [("x^2 - y^2*z", 2)])


def variety(gens, names):
    return IdealBasis([P(g, names) for g in gens], len(names))


class TestSingularIdeal:
    def test_cusp(self):
        sing = singular_ideal(CUSP)
        assert same_variety(sing, variety(["y^2 - x^3", "2*y", "-3*x^2"], XY))
        assert dimension(sing) == 0

    def test_umbrella_is_z_axis(self):
        sing = singular_ideal(UMBRELLA)
        gens = set(sing.generators)
        for g in ["2*x", "-2*y*z", "-y^2"]:
            assert P(g, XYZ) in gens or P(g, XYZ).monic() in {h.monic() for h in gens}
        assert same_variety(sing, variety(["x", "y"], XYZ))

    def test_mark_one_is_zero_set(self):
        sing = singular_ideal(space("x y", [("x", 1)]))
        assert same_variety(sing, variety(["x"], XY))

    def test_immersed_adds_zeroed_variables(self):
        s = space("x y", [("x^3", 2)], subspace="y")
        assert same_variety(singular_ideal(s), variety(["x", "y"], XY))


class TestDelta:
    def test_cusp_origin(self):
        assert delta(CUSP, (0, 0)) == 1

    def test_immersed_cusp(self):
        assert delta(space("x y", [("x^3", 2)], subspace="y"), (0, 0)) == Fraction(3, 2)

    def test_two_lines(self):
        assert delta(space("x y", [("x", 1), ("y", 1)]), (0, 0)) == 1

    def test_umbrella_along_axis(self):
        assert delta_along(UMBRELLA, CoordSubspace.of(0, 1)) == 1

    def test_cusp_along_y(self):
        assert delta_along(CUSP, CoordSubspace.of(1)) == 0

    @pytest.mark.parametrize("d", [1, 2, 5])
    def test_power_along_its_hyperplane(self, d):
        assert delta_along(space("x", [(f"x^{d}", d)]), CoordSubspace.of(0)) == 1


class TestPermissible:
    def test_cusp_origin(self):
        assert is_permissible_center(CUSP, CoordSubspace.of(0, 1))

    def test_cusp_line(self):
        assert not is_permissible_center(CUSP, CoordSubspace.of(1))

    def test_umbrella_axis(self):
        assert is_permissible_center(UMBRELLA, CoordSubspace.of(0, 1))

    def test_immersed_center_must_contain_zeroed(self):
        s = space("x y", [("x^3", 2)], subspace="y")
        assert not is_permissible_center(s, CoordSubspace.of(0))
        assert is_permissible_center(s, CoordSubspace.of(0, 1))


class TestBlowup:
    def test_cusp_chart_x(self):
        kids = blowup(CUSP, CoordSubspace.of(0, 1), LabelMint())
        assert kids["x"].ideals == (MarkedIdeal(P("y^2 - x", XY), 2),)
        assert is_nonsingular(kids["x"])
        assert is_nonsingular(kids["y"])

    def test_umbrella_chart_y(self):
        kids = blowup(UMBRELLA, CoordSubspace.of(0, 1), LabelMint())
        assert kids["y"].ideals == (MarkedIdeal(P("x^2 - z", XYZ), 2),)
        assert is_nonsingular(kids["y"])

    def test_division(self):
        s = space("x y", [("x*(1 + y)", 1)])
        kids = blowup(s, CoordSubspace.of(0), LabelMint())
        assert list(kids) == ["x"]
        assert kids["x"].ideals == (MarkedIdeal(P("1 + y", XY), 1),)

    def test_not_permissible(self):
        with pytest.raises(PreconditionError):
            blowup(CUSP, CoordSubspace.of(1), LabelMint())

    def test_void_chart_of_immersed_space(self):
        s = space("x y", [("x^3", 2)], subspace="y")
        kids = blowup(s, CoordSubspace.of(0, 1), LabelMint())
        assert kids["y"].void
        assert kids["x"].ideals == (MarkedIdeal(P("x", XY), 2),)

    @pytest.mark.parametrize("sp, center", [
        (CUSP, (0, 1)),
        (UMBRELLA, (0, 1)),
        (space("x y z", [("z^2 + x^3 + y^5", 2)]), (0, 1, 2)),
        (space("x y", [("x^3*y^2", 4)], divisor={"A": "x", "B": "y"}), (0, 1)),
    ])
    def test_order_drops_by_one_along_exceptional(self, sp, center):
        c = CoordSubspace.of(*center)
        before = delta_along(sp, c)
        mint = LabelMint()
        for child in blowup(sp, c, mint).values():
            e = child.chart.label_map()[f"E{mint.step}"]
            assert delta_along(child, CoordSubspace.of(e)) == before - 1

    @given(st.integers(2, 6), st.integers(0, 4), st.integers(0, 4))
    @settings(max_examples=30, deadline=None)
    def test_controlled_transform_matches_sympy(self, d, a, b):
        f = P(f"y^{d} + x^{d + a}*y^{b} - x^{d + 1}", XY)
        sp_ = CUSP.with_ideals([MarkedIdeal(f, d)])
        x, y = sympy.symbols("x y")
        expr = to_sympy(f, XY)[0]
        kids = blowup(sp_, CoordSubspace.of(0, 1), LabelMint())
        want_x = sympy.cancel(expr.subs(y, x * y) / x**d)
        want_y = sympy.cancel(expr.subs(x, x * y) / y**d)
        assert kids["x"].ideals[0].f == from_sympy(want_x, (x, y))
        assert kids["y"].ideals[0].f == from_sympy(want_y, (x, y))


class TestNormalize:
    def test_lcm(self):
        s = normalize(space("x y", [("x", 1), ("y^2", 2)]))
        assert s.ideals == (MarkedIdeal(P("x^2", XY), 2), MarkedIdeal(P("y^2", XY), 2))

    def test_unchanged(self):
        assert normalize(CUSP) == CUSP
        assert is_normalized(CUSP)

    def test_mixed(self):
        s = normalize(space("x y", [("x^3", 2), ("y", 1)]))
        assert s.ideals == (MarkedIdeal(P("x^3", XY), 2), MarkedIdeal(P("y^2", XY), 2))

    @given(st.integers(1, 4), st.integers(1, 4))
    @settings(max_examples=20, deadline=None)
    def test_normalize_preserves_order(self, d1, d2):
        s = space("x y", [("x^3 + y", d1), ("y^2 - x", d2)])
        for pt in [(0, 0), (1, 1), (0, 1)]:
            assert delta(normalize(s), pt) == delta(s, pt)

    def test_dedupe_up_to_constant(self):
        got = dedupe([MarkedIdeal(P("x", XY), 1), MarkedIdeal(P("2*x", XY), 1)])
        assert len(got) == 1


@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 4))
@settings(max_examples=25, deadline=None)
def test_singular_locus_is_where_delta_reaches_one(a, b, d):
    s = space("x y", [(f"x^{a} - y^{b}", d)])
    for pt in [(0, 0), (1, 1), (0, 1)]:
        on = (delta(s, pt) >= 1)
        gens = list(singular_ideal(s).generators)
        assert on == all(g.evaluate(pt) == 0 for g in gens)
