import itertools
from fractions import Fraction as F

import mpmath as mp
import pytest

from mplsym import hpl
from mplsym.exact import parse_ratfunc
from mplsym.expr import parse_expr, symbol_of
from mplsym.numeric import eval_mpl
from mplsym.tensor import Symbol

HPL = hpl.hpl_alphabet()
V = ("x",)


class TestTable2:
    def setup_method(self):
        self.rows = hpl.table2_enumerate()

    def test_row_count_with_inverses(self):
        assert len(self.rows) == 39

    def test_constant_rows_flagged(self):
        consts = {str(r.value) for r in self.rows if r.is_constant}
        assert consts == {"-1", "1/2", "2"}

    def test_specific_rows(self):
        by_value = {str(r.value): r for r in self.rows}
        # the two double-pole rows: 1 -+ R factor as ((1 -+ x)/(1 +- x))^2
        r = by_value[str(parse_ratfunc("-4*x/(1-x)^2", V))]
        assert (r.alpha, r.beta, r.gamma, r.delta) == (1, -2, 0, 2)
        r1 = by_value[str(parse_ratfunc("4*x/(1+x)^2", V))]
        assert (r1.alpha, r1.beta, r1.gamma, r1.delta) == (1, 0, -2, 2)
        r2 = by_value[str(parse_ratfunc("(1-x)/2", V))]
        assert (r2.alpha, r2.beta, r2.gamma, r2.delta) == (0, 1, 0, -1)

    def test_closed_under_inversion(self):
        values = {str(r.value) for r in self.rows}
        for r in self.rows:
            assert str(r.value.inverse()) in values


class TestHplSymbol:
    def test_nielsen(self):
        assert hpl.hpl_symbol((0, 0, 1, 1)) == Symbol(4, {(2, 2, 1, 1): 1})

    def test_alternating_weight_two(self):
        s = hpl.hpl_symbol((-1, 1))
        g = symbol_of(parse_expr("G(-1,1; x)"), HPL)
        assert s == g.scale(-1)

    def test_weight_one(self):
        assert hpl.hpl_symbol((0,)) == Symbol(1, {(1,): 1})

    def test_compact_formula_matches_polygon(self):
        from mplsym.polygon import Polygon, polygon_symbol
        from mplsym.exact import RatFunc

        for w in range(1, 5):
            for idx in itertools.product((0, 1), repeat=w):
                n_plus = sum(idx)
                p = Polygon.from_g([F(a) for a in idx], RatFunc.var(V, "x"), V)
                via_polygon = polygon_symbol(p, HPL).scale((-1) ** n_plus)
                assert hpl.hpl_symbol(idx) == via_polygon


class TestGoldenCorpus:
    def test_every_entry_symbol_exact(self):
        for idx, expr in hpl.golden_corpus().items():
            assert symbol_of(expr, HPL) == hpl.hpl_symbol(idx), idx

    @pytest.mark.parametrize("x", [F(1, 4), F(1, 3), F(1, 2)])
    def test_every_entry_numeric(self, x):
        with mp.workdps(50):
            tol = mp.mpf(10) ** -25
            for idx, expr in hpl.golden_corpus().items():
                d = abs(hpl.hpl_value(idx, x, 40) - eval_mpl(expr, x, 40))
                assert d < tol, (idx, mp.nstr(d, 5))


class TestReduce:
    def test_weight_one(self):
        r = hpl.hpl_reduce((0,))
        assert symbol_of(r.expression, HPL) == hpl.hpl_symbol((0,))
        assert r.constants == []

    def test_worked_example(self):
        r = hpl.hpl_reduce((0, 0, 1, 1))
        consts = dict(r.constants)
        assert consts["pi^4"] == F(1, 90)
        assert consts["zeta3*log(-x + 1)"] == 1
        assert consts["pi^2*log(-x + 1)*log(-x + 1)"] == F(1, 12)
        top = r.integration.level_coeffs((4,))
        assert top == {"Li[4](x)": 1, "Li[4](1-x)": -1, "Li[4](x/(x-1))": 1}

    def test_restricted_basis_for_01_indices(self):
        r = hpl.hpl_reduce((0, 1, 1))
        assert r.restricted
        # no (1+x)-letter functions may appear in the used labels
        for _, coeffs in r.integration.levels:
            for label, _ in coeffs:
                assert "1+x" not in label

    def test_alternating_entry_against_corpus(self):
        idx = (-1, 1)
        r = hpl.hpl_reduce(idx)
        ref = hpl.golden_corpus()[idx]
        assert symbol_of(r.expression, HPL) == symbol_of(ref, HPL)
        x = F(1, 3)
        d = abs(eval_mpl(r.expression, x, 40) - eval_mpl(ref, x, 40))
        with mp.workdps(50):
            assert d < mp.mpf(10) ** -25

    def test_shuffle_consistency(self):
        # H(0;x) H(1;x) = H(0,1;x) + H(1,0;x): reductions satisfy it numerically
        x = F(1, 3)
        v0 = eval_mpl(hpl.hpl_reduce((0,)).expression, x, 40)
        v1 = eval_mpl(hpl.hpl_reduce((1,)).expression, x, 40)
        v01 = eval_mpl(hpl.hpl_reduce((0, 1)).expression, x, 40)
        v10 = eval_mpl(hpl.hpl_reduce((1, 0)).expression, x, 40)
        with mp.workdps(50):
            assert abs(v0 * v1 - (v01 + v10)) < mp.mpf(10) ** -25

    def test_index_validation(self):
        with pytest.raises(ValueError):
            hpl.hpl_symbol((2, 0))
        with pytest.raises(ValueError):
            hpl.hpl_reduce((0,) * 5)

    def test_no_depth_two_functions_below_weight_four(self):
        for idx in [(-1, 1, -1), (0, -1, 1), (1, 1), (-1,)]:
            r = hpl.hpl_reduce(idx)
            for _, coeffs in r.integration.levels:
                for label, _ in coeffs:
                    assert "Li[2,2]" not in label
