from fractions import Fraction as F

import mpmath as mp
import pytest

from mplsym.exact import RatFunc
from mplsym.expr import hoelder_convolution, parse_expr
from mplsym.numeric import (
    DivergentSpec,
    EvalReport,
    eval_g,
    eval_li,
    eval_mpl,
    rational_reconstruct,
)

V = ("x",)


def err(a, b, dps=60):
    with mp.workdps(dps):
        return abs(a - b)


class TestSeries:
    def test_li2_half_closed_form(self):
        v = eval_li((2,), (F(1, 2),), 40)
        with mp.workdps(60):
            want = mp.pi ** 2 / 12 - mp.log(2) ** 2 / 2
            assert err(v, want) < mp.mpf(10) ** -45
            assert mp.nstr(v, 12) == "0.582240526465"

    def test_h01_equals_li2(self):
        h = eval_mpl(parse_expr("H(0,1; x)"), F(1, 3), 40)
        li = eval_li((2,), (F(1, 3),), 40)
        assert err(h, li) == 0

    def test_log_of_one(self):
        v = eval_mpl(parse_expr("log(1-x)"), F(0), 40)
        assert v == 0

    def test_truncation_doubles_consistently(self):
        v1 = eval_li((3,), (F(1, 2),), 40)
        v2 = eval_li((3,), (F(1, 2),), 55)
        with mp.workdps(70):
            assert err(v1, v2) < mp.mpf(10) ** -43

    def test_divergent_leading_index(self):
        with pytest.raises(DivergentSpec):
            eval_g([F(1, 3), F(1, 2)], F(1, 3), 30)


class TestOutsideUnitInterval:
    @pytest.mark.parametrize("arg,n", [(F(-2), 4), (F(-1), 4), (F(-4, 3), 3), (F(-1), 2)])
    def test_against_mpmath_polylog(self, arg, n):
        v = eval_li((n,), (arg,), 40)
        with mp.workdps(60):
            want = mp.polylog(n, mp.mpf(arg.numerator) / arg.denominator)
            assert err(v, want) < mp.mpf(10) ** -45

    def test_li22_continuation_consistent(self):
        # two different convolution splits of the same iterated integral agree
        avec = [F(0), F(-1, 2), F(0), F(-1)]
        v1 = eval_g(avec, F(1), 40)
        e5 = hoelder_convolution([RatFunc.const(V, a) for a in avec], F(5))
        v2 = eval_mpl(e5, F(1, 3), 40)
        assert err(v1, v2) < mp.mpf(10) ** -45


class TestShuffleNumerics:
    def test_product_identity(self):
        x = F(1, 3)
        for a, b in [(-1, 1), (-1, -1), (1, 1)]:
            va = eval_mpl(parse_expr(f"G({a}; x)"), x, 40)
            vb = eval_mpl(parse_expr(f"G({b}; x)"), x, 40)
            rhs = eval_mpl(parse_expr(f"G({a},{b}; x) + G({b},{a}; x)"), x, 40)
            with mp.workdps(50):
                assert abs(va * vb - rhs) < mp.mpf(10) ** -35


class TestHoelderNumerics:
    def test_p2_weight_up_to_three(self):
        import itertools

        one = F(1)
        for w in (1, 2, 3):
            for avec in itertools.product((F(-1), F(2)), repeat=w):
                lhs = eval_g(list(avec), one, 40)
                e = hoelder_convolution([RatFunc.const(V, a) for a in avec], F(2))
                rhs = eval_mpl(e, F(1, 2), 40)
                assert err(lhs, rhs) < mp.mpf(10) ** -35


class TestQuadratureOracle:
    def test_weight_two_iterated_integral(self):
        # independent oracle: G(a,b;x) as a genuine iterated integral
        x0 = F(1, 3)
        for a, b in [(F(-1), F(1)), (F(2), F(-1)), (F(-1), F(-1))]:
            v = eval_g([a, b], x0, 40)
            with mp.workdps(40):
                inner = lambda t: mp.log(1 - t / b) if b != 0 else mp.log(t)
                # G(b;t) = ln(1 - t/b); one more integration against dt/(t-a)
                ref = mp.quad(lambda t: inner(t) / (t - a), [0, mp.mpf(x0.numerator) / x0.denominator])
                assert abs(v - ref) < mp.mpf(10) ** -30

    def test_weight_three_iterated_integral(self):
        x0 = F(1, 2)
        v = eval_g([F(-1), F(1), F(-1)], x0, 40)
        with mp.workdps(40):
            def g2(t):
                # G(1,-1;t) by a nested quadrature
                return mp.quad(lambda u: mp.log(1 + u) / (u - 1), [0, t])

            ref = mp.quad(lambda t: g2(t) / (t + 1), [0, mp.mpf(1) / 2])
            assert abs(v - ref) < mp.mpf(10) ** -20


class TestRationalReconstruction:
    def test_third(self):
        with mp.workdps(50):
            assert rational_reconstruct(mp.mpf(1) / 3, 100) == F(1, 3)

    def test_twelfth(self):
        with mp.workdps(50):
            assert rational_reconstruct(mp.mpf(1) / 12, 100) == F(1, 12)

    def test_pi_fails(self):
        with mp.workdps(50):
            assert rational_reconstruct(+mp.pi, 10) is None

    def test_negative(self):
        with mp.workdps(50):
            assert rational_reconstruct(-mp.mpf(7) / 24, 100) == F(-7, 24)


class TestReport:
    def test_truncation_order_recorded(self):
        report = EvalReport()
        eval_li((2,), (F(1, 2),), 40, report)
        assert report.max_order() > 50
