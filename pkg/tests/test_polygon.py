import math
from fractions import Fraction as F

import pytest

from mplsym.alphabet import Alphabet
from mplsym.exact import RatFunc
from mplsym.polygon import (
    Arrow,
    Dissection,
    DualTree,
    NonGenericDecorations,
    Polygon,
    dual_tree,
    enumerate_maximal_dissections,
    generic_alphabet,
    hook_arrow_tree,
    linear_extensions,
    mu,
    polygon_symbol,
    recursive_symbol,
)
from mplsym.tensor import Symbol, integrability_check

from generic_symbol_tables import PENTAGON, TETRAGON, TRIGON, table_symbol

V = ("x",)
HPL = Alphabet(["2", "x", "1-x", "1+x"], V)


class TestEnumeration:
    @pytest.mark.parametrize("n,count", [(2, 1), (3, 3), (4, 12), (5, 55), (6, 273)])
    def test_counts(self, n, count):
        assert len(enumerate_maximal_dissections(n)) == count

    def test_counts_match_closed_form(self):
        # m-indexed family: an n-gon carries m = n - 1 in C(3m, m)/(2m+1)
        for n in range(2, 7):
            m = n - 1
            assert len(enumerate_maximal_dissections(n)) == math.comb(3 * m, m) // (2 * m + 1)

    def test_no_duplicates(self):
        ds = enumerate_maximal_dissections(5)
        assert len({d.arrows for d in ds}) == len(ds)

    def test_arrow_validity(self):
        for d in enumerate_maximal_dissections(5):
            for a in d.arrows:
                banned = {a.from_vertex, a.from_vertex - 1 if a.from_vertex > 1 else 5}
                assert a.to_side not in banned


class TestSigns:
    def test_backward_criterion(self):
        assert Arrow(4, 1).is_backward()
        assert not Arrow(2, 3).is_backward()
        assert not Arrow(1, 2).is_backward()

    def test_two_backward_arrows_give_plus(self):
        d = Dissection((Arrow(3, 1), Arrow(4, 1)))
        assert d.sign() == 1

    def test_one_backward_arrow_gives_minus(self):
        d = Dissection((Arrow(2, 3), Arrow(4, 1)))
        assert d.sign() == -1

    def test_no_arrows(self):
        assert Dissection(()).sign() == 1


class TestDualTrees:
    def setup_method(self):
        self.p = Polygon(["c", "b", "a"], "x", ("a", "b", "c", "x"))

    def test_linear_tree_example(self):
        # arrows v3 -> e1, v4 -> e1: path (c|x) -> (a|c) -> (b|c)
        t = dual_tree(self.p, Dissection((Arrow(3, 1), Arrow(4, 1))))
        assert t.parent[0] is None
        bigs = t.bigons()
        assert bigs[0] == (1, 4)  # c against the root x
        assert set(bigs[1:]) == {(3, 1), (2, 1)}  # (a|c) and (b|c)
        assert len(linear_extensions(t)) == 1

    def test_branched_tree_example(self):
        # arrows v3 -> e1, v3 -> e4: root (c|x) with children (b|c) and (a|x)
        t = dual_tree(self.p, Dissection((Arrow(3, 1), Arrow(3, 4))))
        assert t.bigons()[0] == (1, 4)
        assert len(t.children[0]) == 2
        assert len(linear_extensions(t)) == 2

    def test_trigon_paths(self):
        p = Polygon(["b", "a"], "x", ("a", "b", "x"))
        for d in enumerate_maximal_dissections(3):
            assert len(linear_extensions(dual_tree(p, d))) == 1

    def test_extension_counts_for_stars(self):
        t2 = DualTree([0] * 3, [0] * 3, [None, 0, 0], [[1, 2], [], []])
        t3 = DualTree([0] * 4, [0] * 4, [None, 0, 0, 0], [[1, 2, 3], [], [], []])
        assert len(linear_extensions(t2)) == 2
        assert len(linear_extensions(t3)) == 6


class TestMu:
    def test_generic(self):
        a = RatFunc.const(V, -1)
        x = RatFunc.var(V, "x")
        assert mu(a, x) == RatFunc.var(V, "x") + RatFunc.const(V, 1)

    def test_zero_nonroot(self):
        assert mu(RatFunc.const(V, 0), RatFunc.var(V, "x")) == RatFunc.var(V, "x")

    def test_bigon_of_two(self):
        assert mu(RatFunc.const(V, 1), RatFunc.const(V, -1)) == RatFunc.const(V, 2)


class TestPolygonSymbol:
    def test_weight_two_golden(self):
        s = polygon_symbol(Polygon.from_g([-1, 1], "x"), HPL)
        i2, ix, i1m, i1p = 0, 1, 2, 3
        assert s == Symbol(2, {(i1p, i2): 1, (i1m, i1p): 1, (i1m, i2): -1})

    def test_nielsen_tensor(self):
        s = polygon_symbol(Polygon.from_g([0, 0, 1, 1], "x"), HPL)
        assert s == Symbol(4, {(2, 2, 1, 1): 1})

    def test_classical_polylog_polygon(self):
        for m in (2, 3, 4):
            s = polygon_symbol(Polygon.from_g([0] * (m - 1) + [1], "x"), HPL)
            assert s == Symbol(m, {(2,) + (1,) * (m - 1): 1})

    def test_zero_root_annihilates(self):
        assert polygon_symbol(Polygon.from_g([1, 2], 0), HPL).is_zero()

    def test_symbols_integrable(self):
        p = Polygon.from_g(["a", "b"], "x", ("a", "b", "x"))
        alphabet = generic_alphabet(p)
        assert integrability_check(polygon_symbol(p, alphabet), alphabet).ok


class TestReferenceTermTables:
    def test_trigon_terms(self):
        p = Polygon(["b", "a"], "x", ("a", "b", "x"))
        alphabet = generic_alphabet(p)
        assert polygon_symbol(p, alphabet) == table_symbol(TRIGON, alphabet)

    def test_tetragon_terms(self):
        p = Polygon(["c", "b", "a"], "x", ("a", "b", "c", "x"))
        alphabet = generic_alphabet(p)
        assert polygon_symbol(p, alphabet) == table_symbol(TETRAGON, alphabet)

    def test_pentagon_terms(self):
        p = Polygon(["d", "c", "b", "a"], "x", ("a", "b", "c", "d", "x"))
        alphabet = generic_alphabet(p)
        assert polygon_symbol(p, alphabet) == table_symbol(PENTAGON, alphabet)


class TestRecursiveDefinition:
    @pytest.mark.parametrize("depth", [1, 2, 3])
    def test_matches_polygon_route(self, depth):
        names = ["a", "b", "c"][:depth]
        p = Polygon.from_g(names, "x", tuple(names) + ("x",))
        alphabet = generic_alphabet(p)
        assert recursive_symbol(p, alphabet) == polygon_symbol(p, alphabet)

    def test_rejects_repeated_decorations(self):
        with pytest.raises(NonGenericDecorations):
            recursive_symbol(Polygon(["a", "a"], "x", ("a", "x")))

    def test_rejects_zero(self):
        with pytest.raises(NonGenericDecorations):
            recursive_symbol(Polygon(["a", 0], "x", ("a", "x")))


class TestHookArrowTrees:
    def test_four_gon_example(self):
        p = Polygon(["c", "b", "a"], "x", ("a", "b", "c", "x"))
        h = hook_arrow_tree(p, Dissection((Arrow(1, 2), Arrow(3, 4))))
        assert set(h.edges) == {(1, 2), (2, 4), (3, 4)}
        assert h.backward_edge_count() == 0

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_bijection_with_dissections(self, n):
        names = tuple(f"d{i}" for i in range(1, n)) + ("x",)
        p = Polygon([f"d{i}" for i in range(1, n)], "x", names)
        seen = set()
        for d in enumerate_maximal_dissections(n):
            h = hook_arrow_tree(p, d)
            assert not h.is_interlaced()
            assert len(h.edges) == n - 1
            seen.add(h.edges)
        assert len(seen) == len(enumerate_maximal_dissections(n))

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_backward_counts_agree(self, n):
        names = tuple(f"d{i}" for i in range(1, n)) + ("x",)
        p = Polygon([f"d{i}" for i in range(1, n)], "x", names)
        for d in enumerate_maximal_dissections(n):
            backward_arrows = sum(1 for a in d.arrows if a.is_backward())
            assert hook_arrow_tree(p, d).backward_edge_count() == backward_arrows


class TestBinomialIdentity:
    def test_alternating_sum(self):
        for c in range(0, 21):
            for n in range(0, 21):
                total = sum(
                    (-1) ** i * math.comb(n - i + c, n - i) * math.comb(n + c + 1, i)
                    for i in range(n + 1)
                )
                assert total == (-1) ** n
