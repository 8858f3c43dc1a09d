import random
from fractions import Fraction as F

import pytest

from mplsym.exact import (
    BadPrimePoint,
    MPoly,
    PoleAtPoint,
    RatFunc,
    parse_poly,
    parse_ratfunc,
    poly_gcd,
    prime_point,
    prime_substitution_filter,
)

V = ("x",)
V3 = ("a", "b", "x")


def poly(text, variables=V):
    return parse_poly(text, variables)


def rat(text, variables=V):
    return parse_ratfunc(text, variables)


class TestGcd:
    def test_common_linear_factor(self):
        assert poly_gcd(poly("x^2-1"), poly("x-1")) == poly("x-1")

    def test_gcd_with_zero_is_normalized_input(self):
        assert poly_gcd(poly("2*x"), MPoly(V, {})) == poly("2*x")
        assert poly_gcd(MPoly(V, {}), poly("1-x")) == poly("x-1")

    def test_product_factors(self):
        a = poly("(1-x)^2*(1+x)")
        b = poly("(1-x)*(1+x)^2")
        g = poly_gcd(a, b)
        # associate of (1-x)(1+x): divide both inputs exactly
        assert a.exact_div(g) is not None
        assert b.exact_div(g) is not None
        assert g.total_degree() == 2

    def test_constants(self):
        assert poly_gcd(poly("4"), poly("6")) == poly("2")

    def test_associate_property_random(self):
        rng = random.Random(20240817)

        def rnd():
            terms = {}
            for _ in range(3):
                e = tuple(rng.randint(0, 2) for _ in V3)
                terms[e] = F(rng.randint(-4, 4))
            p = MPoly(V3, terms)
            return p if not p.is_zero() else MPoly.const(V3, 1)

        for _ in range(30):
            p, q, r = rnd(), rnd(), rnd()
            g = poly_gcd(p * r, q * r)
            expected = (r * poly_gcd(p, q)).primitive()
            assert g.exact_div(expected) is not None


class TestDerivative:
    def test_linear(self):
        assert rat("1-x").derivative("x") == RatFunc.const(V, -1)

    def test_quotient_rule(self):
        f = rat("1 - x/a", V3)
        assert f.derivative("a") == rat("x/a^2", V3)
        assert rat("1 - b/a", V3).derivative("b") == rat("-1/a", V3)

    def test_matches_finite_difference(self):
        f = rat("(1+3*x)/(x^2-5)")
        x0 = F(1, 3)
        h = F(1, 10 ** 4)
        df = f.derivative("x").eval({"x": x0})
        approx = (f.eval({"x": x0 + h}) - f.eval({"x": x0 - h})) / (2 * h)
        assert abs(float(approx - df) / float(df)) < 1e-6


class TestEval:
    def test_simple(self):
        assert rat("1-x").eval({"x": F(1, 3)}) == F(2, 3)

    def test_derived(self):
        assert rat("4*x/(1-x)^2").eval({"x": F(1, 2)}) == 8

    def test_pole(self):
        with pytest.raises(PoleAtPoint):
            rat("1/x").eval({"x": F(0)})


class TestNormalization:
    def test_idempotent_and_sign_canonical(self):
        f = rat("(2-2*x)/(4*x-4)")
        assert f == RatFunc.const(V, F(-1, 2))
        g = RatFunc(f.num, f.den)
        assert g.num == f.num and g.den == f.den

    def test_denominator_positive_leading(self):
        f = rat("x/(1-x)")
        assert f.den.leading_coeff() > 0


class TestPrimeFilter:
    def setup_method(self):
        self.point = prime_point(V)
        x0 = self.point[0]
        self.values = [2, x0, 1 - x0, 1 + x0]

    def test_factorable_candidate_passes(self):
        cand = poly("(1-x)*(1+x)")
        assert prime_substitution_filter(cand, self.values, self.point)

    def test_unit_fails(self):
        assert not prime_substitution_filter(poly("1"), self.values, self.point)

    def test_bad_point_collision(self):
        with pytest.raises(BadPrimePoint):
            prime_substitution_filter(poly("x"), [2, 2, 5], self.point)

    def test_bad_point_zero(self):
        with pytest.raises(BadPrimePoint):
            prime_substitution_filter(poly("x"), [2, 0, 5], self.point)

    def test_default_point_starts_at_101(self):
        assert prime_point(V) == [101]
        assert prime_point(("a", "b", "x")) == [101, 103, 107]


class TestParsing:
    def test_round_trip(self):
        for text in ["x^2 - 2*x + 1", "4*x/(1-x)^2", "(1-x)/(2*(1+x))"]:
            f = rat(text)
            assert rat(str(f)) == f

    def test_polynomial_rejects_true_quotient(self):
        with pytest.raises(Exception):
            parse_poly("1/x", V)
