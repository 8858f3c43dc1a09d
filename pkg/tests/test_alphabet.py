from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mplsym.alphabet import (
    Alphabet,
    NotFactorable,
    candidate_args_depth1,
    candidate_args_depthk,
    decompose,
    extend_alphabet,
    s3_orbit,
)
from mplsym.exact import RatFunc, parse_ratfunc

V = ("x",)


@pytest.fixture(scope="module")
def hpl():
    return Alphabet(["2", "x", "1-x", "1+x"], V)


class TestDecompose:
    def test_exponent_bookkeeping(self, hpl):
        v = decompose(parse_ratfunc("4*x/(1-x)^2", V), hpl)
        by_label = {hpl.labels[i]: e for i, e in v.as_dict().items()}
        assert by_label == {"2": 2, "x": 1, "1-x": -2}

    def test_unit(self, hpl):
        assert decompose(RatFunc.const(V, 1), hpl).is_unit()

    def test_not_factorable(self, hpl):
        with pytest.raises(NotFactorable):
            decompose(parse_ratfunc("3-x", V), hpl)

    def test_remultiplication(self, hpl):
        for text in ["4*x/(1-x)^2", "(1-x)/(2*(1+x))", "-8*x^3*(1+x)", "1/2"]:
            f = parse_ratfunc(text, V)
            g = decompose(f, hpl).realize(hpl)
            assert g == f or g == -f


class TestExtension:
    def test_hpl_extension_members(self, hpl):
        ext = extend_alphabet(hpl)
        labels = set(ext.labels)
        for want in ["x - 2", "x + 2", "x - 3", "x + 3", "2*x - 1", "2*x + 1"]:
            assert want in labels

    def test_single_variable(self):
        ext = extend_alphabet(Alphabet(["x"], V))
        assert set(ext.labels) == {"x", "2", "x - 1", "x + 1"}

    def test_constant_letter(self):
        ext = extend_alphabet(Alphabet(["2"], V))
        assert set(ext.labels) == {"2", "3"}


class TestCandidateArgs:
    def test_full_table_with_inverses(self, hpl):
        args = candidate_args_depth1(hpl, 4, const_bound=2)
        assert len(args) == 39  # 20 rows + inverses, -1 being self-inverse
        realized = {str(a.realize(hpl)) for a in args}
        # spot checks from the tabulated solutions
        for text in ["-1", "1/2", "x", "-x", "x^2", "2*x/(x + 1)", "4*x/(x^2 + 2*x + 1)"]:
            assert str(parse_ratfunc(text, V)) in realized

    def test_single_letter_alphabet_empty(self):
        assert candidate_args_depth1(Alphabet(["x"], V), 1) == []

    def test_unit_with_plus_sign_excluded(self, hpl):
        args = candidate_args_depth1(hpl, 4, const_bound=2)
        assert not any(a.vector.is_unit() and a.sign > 0 for a in args)

    def test_filter_is_sound(self, hpl):
        with_f = candidate_args_depth1(hpl, 3, const_bound=2, use_prime_filter=True)
        without = candidate_args_depth1(hpl, 3, const_bound=2, use_prime_filter=False)
        assert with_f == without

    def test_every_member_decomposes(self, hpl):
        one = RatFunc.const(V, 1)
        for a in candidate_args_depth1(hpl, 3, const_bound=2):
            decompose(one - a.realize(hpl), hpl)  # must not raise

    def test_s3_closure(self, hpl):
        args = candidate_args_depth1(hpl, 4, const_bound=2)
        realized = {str(a.realize(hpl)) for a in args}
        for a in args:
            for img in s3_orbit(a.realize(hpl)):
                if img.is_constant() and img.constant_value() == 1:
                    continue  # the unit is excluded by convention
                assert str(img) in realized


class TestDecomposeRoundTrip:
    @given(st.lists(st.integers(min_value=-3, max_value=3), min_size=4, max_size=4),
           st.sampled_from([1, -1]))
    @settings(max_examples=50, deadline=None)
    def test_realize_then_decompose(self, expos, sign):
        from mplsym.alphabet import MultVector

        alphabet = Alphabet(["2", "x", "1-x", "1+x"], V)
        v = MultVector.from_dict({i: e for i, e in enumerate(expos) if e})
        f = v.realize(alphabet) * sign
        assert decompose(f, alphabet) == v


class TestS3Orbit:
    def test_orbit_of_x(self):
        f = parse_ratfunc("x", V)
        expected = ["x", "1-x", "1/x", "1/(1-x)", "1-1/x", "x/(x-1)"]
        got = s3_orbit(f)
        for e, g in zip(expected, got):
            assert parse_ratfunc(e, V) == g

    def test_orbit_of_half_collapses(self):
        f = RatFunc.const(V, F(1, 2))
        values = {str(g) for g in s3_orbit(f)}
        assert values == {"1/2", "2", "-1"}

    def test_closure_under_repeated_action(self):
        f = parse_ratfunc("x", V)
        orbit = {str(g) for g in s3_orbit(f)}
        for g in s3_orbit(f):
            assert {str(h) for h in s3_orbit(g)} == orbit


class TestDepthK:
    def test_li22_argument_pairs_present(self, hpl):
        args = candidate_args_depth1(hpl, 4, const_bound=2)
        pairs = candidate_args_depthk(args, 2, hpl)
        realized = {tuple(str(e.realize(hpl)) for e in t.entries) for t in pairs}
        t17 = (str(parse_ratfunc("(1+x)/(2*x)", V)), str(parse_ratfunc("(1+x)/x", V)))
        t18 = (str(parse_ratfunc("-(1-x)/(2*x)", V)), str(parse_ratfunc("-(1-x)/x", V)))
        assert t17 in realized and t18 in realized

    def test_diagonal_excluded(self, hpl):
        args = candidate_args_depth1(hpl, 2, const_bound=1)
        pairs = candidate_args_depthk(args, 2, hpl)
        assert all(t.entries[0] != t.entries[1] for t in pairs)

    def test_x_minus_x_pair(self, hpl):
        args = candidate_args_depth1(hpl, 2, const_bound=1)
        pairs = candidate_args_depthk(args, 2, hpl)
        found = {
            tuple(str(e.realize(hpl)) for e in t.entries) for t in pairs
        }
        assert ("x", "-x") in found
