import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, from_sympy, space
from desing.groebner import IdealBasis, radical_member, same_variety
from desing.idealistic import MarkedIdeal, PreconditionError, delta, is_nonsingular, singular_ideal
from desing.poly import NEG_INF, CoordSubspace, Poly
from desing.projection import (
    LogFactor,
    ProjectionContext,
    ReducednessError,
    adjust,
    coefficient_ideals,
    cofactorial_order,
    extract_log_factor,
    is_monic_in,
    maximal_contact_chart,
    projection_commutes,
    tschirnhaus,
)

XZ = ("x", "z")
XYZ = ("x", "y", "z")
ADJ = space("x z", [("x*(z^2 - x^3)", 2)], divisor={"E1": "x"})


class TestLogFactor:
    def test_adjust_example(self):
        assert extract_log_factor(ADJ) == LogFactor((("E1", 1),))

    def test_no_divisor(self):
        assert extract_log_factor(space("x z", [("z^2 - x^3", 2)])).is_trivial()

    def test_two_labels(self):
        s = space("x y z", [("x^2*y^3*z^2 - x^3*y^4", 3)], divisor={"A": "x", "B": "y"})
        assert extract_log_factor(s).monomial(s.chart) == (2, 3, 0)


class TestCofactorialOrder:
    def test_adjust_example(self):
        assert cofactorial_order(ADJ, extract_log_factor(ADJ)) == 2

    def test_nonsingular(self):
        s = space("x", [("x", 2)])
        assert cofactorial_order(s, extract_log_factor(s)) is NEG_INF

    def test_pure_monomial(self):
        s = space("x", [("x^2", 2)], divisor={"E1": "x"})
        z = extract_log_factor(s)
        assert z.monomial(s.chart) == (2,)
        assert cofactorial_order(s, z) == 0


class TestAdjust:
    def test_m2_list(self):
        s = adjust(ADJ, extract_log_factor(ADJ), 2)
        assert s.ideals == (MarkedIdeal(P("x*(z^2 - x^3)", XZ), 2), MarkedIdeal(P("z^2 - x^3", XZ), 2))
        assert delta(s, (0, 0)) == 1
        assert not is_nonsingular(s)

    def test_m3_is_nonsingular(self):
        assert is_nonsingular(adjust(ADJ, extract_log_factor(ADJ), 3))

    def test_bad_mark(self):
        with pytest.raises(PreconditionError):
            adjust(ADJ, extract_log_factor(ADJ), 0)


class TestCoefficientIdeals:
    def test_cusp_descends_to_immersed_pair(self):
        lower = coefficient_ideals(ProjectionContext(space("x z", [("z^2 - x^3", 2)]), 1))
        assert lower.chart.variables == ("x",)
        assert lower.ideals == (MarkedIdeal(P("x^3", "x"), 2),)

    def test_quadratic_term(self):
        src = space("x z", [("z^2 - x^2 + x^3", 2)])
        lower = coefficient_ideals(ProjectionContext(src, 1))
        assert lower.ideals == (MarkedIdeal(P("x^3 - x^2", "x"), 2),)
        assert same_variety(singular_ideal(lower), IdealBasis([P("x", "x")], 1))

    def test_hyperplane_in_sing(self):
        with pytest.raises(ReducednessError):
            coefficient_ideals(ProjectionContext(space("x z", [("z", 1)]), 1))

    @pytest.mark.parametrize("text, d", [
        ("z^2 + x^3 + y^5", 2), ("z^3 + x*y*z + x^4", 3), ("z^2 - x^2*y", 2), ("z^2 + x^3*y^2 + y^7", 2),
    ])
    def test_sing_law_on_corpus(self, text, d):
        src = space("x y z", [(text, d)])
        ctx = ProjectionContext(src, 2)
        lower = coefficient_ideals(ctx, check=False)
        up = [g.reindex([0, 1], 3) for g in singular_ideal(lower).generators] + [P("z", XYZ)]
        here = list(singular_ideal(src).generators) + [P("z", XYZ)]
        assert same_variety(IdealBasis(up, 3), IdealBasis(here, 3))


class TestCommutation:
    CTX = ProjectionContext(space("x z", [("z^2 - x^3", 2)]), 1)

    def test_origin_blowup(self):
        assert projection_commutes(self.CTX, CoordSubspace.of(0, 1))

    def test_open_projection(self):
        assert projection_commutes(self.CTX, 1)

    def test_hyperplane_itself_is_forbidden(self):
        with pytest.raises(PreconditionError):
            projection_commutes(self.CTX, CoordSubspace.of(1))

    def test_three_space(self):
        ctx = ProjectionContext(space("x y z", [("z^2 + x^3 + y^5", 2)]), 2)
        assert projection_commutes(ctx, CoordSubspace.of(0, 1, 2))


class TestTschirnhaus:
    def test_complete_square(self):
        g, shift = tschirnhaus(P("z^2 + 2*x*z + x^3", XZ), 1, 2)
        assert g == P("z^2 - x^2 + x^3", XZ)
        assert shift == P("x", XZ)

    def test_already_depressed(self):
        f = P("z^2 - x^3", XZ)
        assert tschirnhaus(f, 1, 2) == (f, P("0", XZ))

    def test_cubic_against_sympy(self):
        names = ("y", "z")
        f = P("z^3 + 3*y*z^2", names)
        g, shift = tschirnhaus(f, 1, 3)
        y, z = sympy.symbols("y z")
        assert g == from_sympy(sympy.expand((z**3 + 3 * y * z**2).subs(z, z - y)), (y, z))
        assert g.expand_in(1).get(2) is None

    @given(st.integers(2, 5), st.integers(-3, 3), st.integers(0, 3))
    @settings(max_examples=30, deadline=None)
    def test_subleading_vanishes(self, d, c, k):
        f = P(f"z^{d} + x^{d + 1}", XZ) + Poly.monomial((k, d - 1), c)
        g, _ = tschirnhaus(f, 1, d)
        assert is_monic_in(g, 1, d)
        assert (d - 1) not in g.expand_in(1)


class TestMaximalContact:
    def test_cusp(self):
        mc = maximal_contact_chart(space("x y", [("y^2 - x^3", 2)]), (0, 0))
        assert mc.z == 1
        assert coefficient_ideals(mc.context()).ideals == (MarkedIdeal(P("x^3", "x"), 2),)

    def test_tschirnhaus_chart(self):
        mc = maximal_contact_chart(space("x z", [("z^2 + 2*x*z + x^3", 2)]), (0, 0))
        assert mc.z == 1
        assert mc.space.ideals[0].f == P("z^2 - x^2 + x^3", XZ)

    def test_mark_one(self):
        mc = maximal_contact_chart(space("x y", [("x + y^2", 1)]), (0, 0))
        assert mc.z == 0

    def test_sheared_coordinate(self):
        mc = maximal_contact_chart(space("x z", [("x*z", 2)]))
        f = mc.space.ideals[mc.j].f
        assert is_monic_in(f, mc.z, 2)

    @pytest.mark.parametrize("text", ["y^2 - x^3", "z^2 + x^3 + y^5", "x^2 - y^2*z", "y^3 - x^5 + x^2*y^2"])
    def test_sing_inside_hyperplane(self, text):
        names = ("x", "y", "z") if "z" in text else ("x", "y")
        src = space(" ".join(names), [(text, 2 if "y^3" not in text else 3)])
        mc = maximal_contact_chart(src)
        z = P(names[mc.z], names)
        assert radical_member(z, singular_ideal(mc.space))
