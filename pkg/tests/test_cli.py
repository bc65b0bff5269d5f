import io
import json
import re
from fractions import Fraction

import pytest

from conftest import FIXTURES, P
from desing.cli import main
from desing.parsing import PolySyntaxError, parse_poly
from desing.poly import Poly
from desing.problem import (
    ProblemError,
    dumps,
    load_problem,
    problem_from_json,
    problem_to_json,
)


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


class TestParser:
    def test_cusp(self):
        assert parse_poly("y^2 - x^3", ("x", "y")) == Poly({(0, 2): 1, (3, 0): -1}, 2)

    def test_rational_coefficient(self):
        f = parse_poly("1/2*x*y", ("x", "y"))
        assert f.terms == {(1, 1): Fraction(1, 2)}

    @pytest.mark.parametrize("text", ["x^-1", "2x", "x +", "(x + y", "x ^ y", "x y"])
    def test_syntax_errors(self, text):
        with pytest.raises(PolySyntaxError):
            parse_poly(text, ("x", "y"))

    def test_unknown_variable(self):
        with pytest.raises(PolySyntaxError, match="unknown variable"):
            parse_poly("x + t", ("x", "y"))

    def test_error_position(self):
        with pytest.raises(PolySyntaxError) as info:
            parse_poly("x +\n  2x", ("x",))
        assert (info.value.line, info.value.column) == (2, 4)

    def test_nested(self):
        assert parse_poly("-(x - 1)^2", ("x",)) == P("-x^2 + 2*x - 1", "x")


class TestProblemFiles:
    @pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.json")), ids=lambda p: p.stem)
    def test_roundtrip(self, path):
        problem = load_problem(path)
        again = problem_from_json(json.loads(dumps(problem_to_json(problem))))
        assert again.space == problem.space
        assert again.seeds == problem.seeds
        assert dumps(problem_to_json(again)) == dumps(problem_to_json(problem))

    def test_new_origin_is_exceptional(self):
        p = load_problem(FIXTURES / "monomial.json")
        assert p.space.chart.label("D2").origin == "exceptional"

    @pytest.mark.parametrize("doc", [
        {"variables": ["x", "x"], "ideals": [{"poly": "x", "mark": 1}]},
        {"variables": ["x"], "ideals": [{"poly": "x", "mark": 0}]},
        {"variables": ["x"], "divisor": [{"label": "E", "variable": "y"}], "ideals": [{"poly": "x", "mark": 1}]},
        {"variables": ["x"], "ideals": [{"poly": "x", "mark": 1}], "seeds": [[0.5]]},
        {"variables": ["x"]},
    ])
    def test_invalid(self, doc):
        with pytest.raises(ProblemError):
            problem_from_json(doc)


class TestCommands:
    def test_order_cusp(self):
        assert run("order", FIXTURES / "cusp.json", "--point", "0,0") == (0, "1\n")

    def test_order_immersed(self):
        assert run("order", FIXTURES / "cusp_immersed.json", "--point", "0,0") == (0, "3/2\n")

    def test_order_along_json(self):
        code, out = run("--emit", "json", "order", FIXTURES / "whitney.json", "--along", "x,y")
        assert code == 0 and json.loads(out)["delta"] == "1"

    def test_sing(self):
        code, out = run("sing", FIXTURES / "cusp.json")
        assert code == 0
        assert "basis: [y, x^2]" in out and "dimension: 0" in out

    def test_blowup_not_permissible(self):
        assert run("blowup", FIXTURES / "cusp.json", "--center", "y")[0] == 1

    def test_blowup_charts(self):
        code, out = run("--emit", "json", "blowup", FIXTURES / "cusp.json", "--center", "x,y")
        assert code == 0
        assert json.loads(out)["charts"]["x"]["ideals"] == [{"mark": 2, "poly": "y^2 - x"}]

    def test_project(self):
        code, out = run("--emit", "json", "project", FIXTURES / "projection.json", "--z", "z")
        assert json.loads(out)["projected"]["ideals"] == [{"mark": 2, "poly": "x^3"}]

    def test_adjust(self):
        code, out = run("--emit", "json", "adjust", FIXTURES / "adjust.json")
        doc = json.loads(out)
        assert (doc["mu"], doc["Z"], doc["nonsingular"]) == ("2", {"H": 1}, False)
        code, out = run("--emit", "json", "adjust", FIXTURES / "adjust.json", "--m", "3")
        assert json.loads(out)["nonsingular"] is True

    def test_monomial(self):
        code, out = run("monomial", FIXTURES / "monomial.json")
        assert code == 0 and "2 steps" in out

    def test_trick(self):
        code, out = run("--emit", "json", "trick", FIXTURES / "trick.json")
        doc = json.loads(out)
        assert code == 0 and doc["j0"] == 6 and doc["matched"] is True

    def test_equiv(self):
        code, out = run("equiv", FIXTURES / "cusp.json", FIXTURES / "cusp_immersed.json", "--depth", "3")
        assert code == 0 and out.startswith("same-verdicts")

    def test_equiv_differs(self):
        code, out = run("equiv", FIXTURES / "cusp.json", FIXTURES / "line.json", "--depth", "2")
        assert code == 1 and out.strip().endswith("counterexample: {y}")

    def test_resolve_whitney(self):
        code, out = run("--emit", "json", "resolve", FIXTURES / "whitney.json")
        doc = json.loads(out)
        assert code == 0
        assert doc["centers"] == [["x", "y"]] and doc["verdict"] == "resolved"

    def test_resolve_then_replay(self, tmp_path):
        trace = tmp_path / "trace.json"
        code, first = run("--emit", "json", "resolve", FIXTURES / "e8.json", "--trace-out", trace)
        assert code == 0
        code, second = run("--emit", "json", "replay", FIXTURES / "e8.json", trace)
        assert code == 0 and second == first

    def test_output_has_no_floats(self):
        for argv in [("order", FIXTURES / "cusp_immersed.json"), ("resolve", FIXTURES / "e8.json"),
                     ("trick", FIXTURES / "trick.json"), ("adjust", FIXTURES / "adjust.json")]:
            code, out = run("--emit", "json", *argv)
            assert not re.search(r"\d\.\d|e[+-]\d", out)

    def test_missing_file_is_error(self, capsys):
        assert run("order", FIXTURES / "nope.json")[0] == 2

    def test_bad_point_is_error(self, capsys):
        assert run("order", FIXTURES / "cusp.json", "--point", "0")[0] == 2

    def test_usage_error(self, capsys):
        assert run("frobnicate")[0] == 2
