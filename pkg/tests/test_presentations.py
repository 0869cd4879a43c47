from fractions import Fraction

import pytest

from liecograph.errors import InvalidPresentation, ParseError
from liecograph.presentations import (
    DgcaPresentation,
    DgccPresentation,
    parse_polynomial,
    parse_presentation,
)


class TestParsing:
    def test_basic_algebra(self):
        A = parse_presentation("gen x deg 2\ngen y deg 3\ndiff y = x^2\n")
        assert isinstance(A, DgcaPresentation)
        assert A.gen_degree == {"x": 2, "y": 3}
        assert A.differentials["y"] == {("x", "x"): Fraction(1)}

    def test_relations_and_caps(self):
        A = parse_presentation(
            "gen x deg 2\nrel x^3 = 0\ncap weight 4 degree 9\n")
        assert A.relations == {"x": 3}
        assert (A.cap_weight, A.cap_degree) == (4, 9)

    def test_rational_coefficients(self):
        A = parse_presentation(
            "gen x deg 2\ngen y deg 3\ndiff y = 3/2 x^2\n")
        assert A.differentials["y"] == {("x", "x"): Fraction(3, 2)}

    def test_comments_and_blank_lines(self):
        A = parse_presentation("# a sphere\n\ngen x deg 3\n")
        assert A.gen_names == ["x"]

    def test_coalgebra(self):
        C = parse_presentation(
            "cogen u deg 2\ncogen w deg 4\n"
            "coprod w = u (x) u\ncodiff w = 0\n")
        assert isinstance(C, DgccPresentation)
        assert C.coprod["w"] == [(Fraction(1), "u", "u")]

    def test_coalgebra_tensor_glyph(self):
        C = parse_presentation(
            "cogen u deg 2\ncogen w deg 4\ncoprod w = 2 u ⊗ u\n")
        assert C.coprod["w"] == [(Fraction(2), "u", "u")]

    def test_star_in_class_names(self):
        C = parse_presentation(
            "cogen x deg 2\ncogen x*x deg 4\ncoprod x*x = x (x) x\n")
        assert C.class_degree["x*x"] == 4

    def test_unrecognized_line_reports_position(self):
        with pytest.raises(ParseError) as e:
            parse_presentation("gen x deg 2\nfrobnicate\n")
        assert e.value.line == 2

    def test_mixed_kinds_rejected(self):
        with pytest.raises(ParseError):
            parse_presentation("gen x deg 2\ncogen y deg 3\n")


class TestAlgebraStructure:
    def test_odd_squares_vanish(self):
        A = parse_presentation("gen t deg 3\n")
        _, s = A.normalize_monomial(("t", "t"))
        assert s == 0

    def test_koszul_sign_on_swap(self):
        A = parse_presentation("gen t deg 3\ngen u deg 5\n")
        m, s = A.normalize_monomial(("u", "t"))
        assert m == ("t", "u") and s == -1

    def test_monomial_enumeration(self):
        A = parse_presentation("gen x deg 2\nrel x^3 = 0\n")
        assert A.monomials(8) == [("x",), ("x", "x")]

    def test_differential_squares_to_zero_enforced(self):
        with pytest.raises(InvalidPresentation):
            # d(y) = x with d(x) = t: d^2(y) = t != 0
            parse_presentation(
                "gen t deg 4\ngen x deg 3\ngen y deg 2\n"
                "diff x = t\ndiff y = x\n")

    def test_differential_degree_checked(self):
        with pytest.raises(InvalidPresentation):
            parse_presentation("gen x deg 2\ngen y deg 5\ndiff y = x^2\n")

    def test_leibniz_rule(self):
        A = parse_presentation("gen x deg 2\ngen y deg 3\ndiff y = x^2\n")
        # d(x y) = x * x^2 = x^3 (the x factor passes no odd generators)
        assert A.differential_of_monomial(("x", "y")) \
            == {("x", "x", "x"): Fraction(1)}
        # odd squares are already zero, so their differential is too
        assert A.differential_of_monomial(("y", "y")) == {}


class TestPolynomials:
    def test_parse_polynomial(self):
        A = parse_presentation("gen x deg 2\ngen y deg 3\n")
        p = parse_polynomial("2 x^2 - 1/3 x*y", A)
        assert p == {("x", "x"): Fraction(2), ("x", "y"): Fraction(-1, 3)}

    def test_poly_multiply_graded_commutative(self):
        A = parse_presentation("gen t deg 3\ngen u deg 5\n")
        p = {("t",): Fraction(1)}
        q = {("u",): Fraction(1)}
        assert A.poly_multiply(p, q) == {("t", "u"): Fraction(1)}
        assert A.poly_multiply(q, p) == {("t", "u"): Fraction(-1)}
