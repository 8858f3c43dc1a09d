"""Letter sets, multiplicative decomposition modulo torsion, candidate arguments.

An alphabet is an ordered list of sign-canonical polynomials (prime integer
constants count as degree-0 letters).  Rational functions that lie in the
multiplicative span of the letters decompose into exponent vectors; the sign
is discarded, matching the up-to-torsion convention of the symbol calculus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    MPoly,
    RatFunc,
    parse_poly,
    prime_point,
    prime_substitution_filter,
)


class NotFactorable(ValueError):
    """A non-unit residue remains after dividing out all letters."""


def _small_primes(n: int) -> list[int]:
    primes = []
    k = 2
    while k <= n:
        if all(k % p for p in primes):
            primes.append(k)
        k += 1
    return primes


def _factor_int(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    n = abs(n)
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Alphabet:
    """Ordered letter list; the position in the list is the letter index."""

    def __init__(self, letters: Sequence[MPoly | str], variables: Sequence[str] = ("x",)):
        self.variables = tuple(variables)
        parsed: list[MPoly] = []
        self.labels: list[str] = []
        for item in letters:
            if isinstance(item, str):
                label = item
                poly = parse_poly(item, self.variables)
            else:
                poly = item
                label = None
            poly = poly.sign_canonical()
            if poly.is_zero():
                raise ValueError("0 is not a letter")
            if poly.is_constant() and abs(poly.constant_value()) == 1:
                raise ValueError("units are not letters")
            if any(poly == p for p in parsed):
                continue
            parsed.append(poly)
            self.labels.append(label if label is not None else str(poly))
        self.letters = tuple(parsed)
        self._dlog_cache: dict[tuple[int, str], RatFunc] = {}

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def index_of(self, poly: MPoly) -> int | None:
        poly = poly.sign_canonical()
        for i, p in enumerate(self.letters):
            if p == poly:
                return i
        return None

    def constant_letter_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.letters) if p.is_constant()]

    def letter(self, i: int) -> MPoly:
        return self.letters[i]

    def ratfunc(self, i: int) -> RatFunc:
        return RatFunc(self.letters[i])

    def dlog(self, i: int, var: str) -> RatFunc:
        key = (i, var)
        if key not in self._dlog_cache:
            p = self.letters[i]
            self._dlog_cache[key] = RatFunc(p.derivative(var), p)
        return self._dlog_cache[key]

    def prime_values(self, point: Sequence[int] | None = None) -> tuple[list[int], list[int]]:
        """Letters evaluated at the substitution point, with the point itself."""
        pt = list(point) if point is not None else prime_point(self.variables)
        vals = []
        for p in self.letters:
            v = p.subs_int(pt)
            if v.denominator != 1:
                raise ValueError("letter is not integral at the substitution point")
            vals.append(int(v))
        return vals, pt

    def to_json(self) -> list[str]:
        return list(self.labels)

    def __repr__(self):
        return f"Alphabet({self.labels})"


@dataclass(frozen=True)
class MultVector:
    """Sparse exponent vector over alphabet letters; empty means the unit."""

    exponents: tuple[tuple[int, int], ...]  # (letter index, nonzero exponent)

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "MultVector":
        return cls(tuple(sorted((i, e) for i, e in d.items() if e != 0)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    def is_unit(self) -> bool:
        return not self.exponents

    def total_abs(self) -> int:
        return sum(abs(e) for _, e in self.exponents)

    def inverse(self) -> "MultVector":
        return MultVector(tuple((i, -e) for i, e in self.exponents))

    def realize(self, alphabet: Alphabet) -> RatFunc:
        f = RatFunc.const(alphabet.variables, 1)
        for i, e in self.exponents:
            base = alphabet.ratfunc(i)
            f = f * base ** abs(e) if e > 0 else f / base ** abs(e)
        return f


@dataclass(frozen=True)
class SignedArg:
    """Element of the multiplicative span with an explicit sign bit."""

    vector: MultVector
    sign: int  # +1 or -1

    def realize(self, alphabet: Alphabet) -> RatFunc:
        f = self.vector.realize(alphabet)
        return f if self.sign > 0 else -f

    def inverse(self) -> "SignedArg":
        return SignedArg(self.vector.inverse(), self.sign)


@dataclass(frozen=True)
class ArgTuple:
    """k-tuple of candidate arguments with alphabet-decomposable differences."""

    entries: tuple[SignedArg, ...]


def decompose(f: RatFunc | MPoly | Fraction | int, alphabet: Alphabet) -> MultVector:
    """Exponent vector v with f = +- prod letters^v, by exact trial division.

    The rational constant content is split into the alphabet's prime constant
    letters; the overall sign is discarded as torsion.  Raises NotFactorable
    when a non-unit residue survives.
    """
    if isinstance(f, MPoly):
        f = RatFunc(f)
    if isinstance(f, (int, Fraction)):
        f = RatFunc.const(alphabet.variables, f)
    if f.is_zero():
        raise ValueError("cannot decompose 0")
    expo: dict[int, int] = {}
    nonconst = [i for i in range(len(alphabet)) if not alphabet.letter(i).is_constant()]
    const_primes = {}
    for i in alphabet.constant_letter_indices():
        v = alphabet.letter(i).constant_value()
        if v.denominator == 1:
            const_primes[int(v)] = i

    def strip(poly: MPoly, direction: int) -> Fraction:
        for i in nonconst:
            letter = alphabet.letter(i)
            while True:
                q = poly.exact_div(letter)
                if q is None:
                    break
                poly = q
                expo[i] = expo.get(i, 0) + direction
        if not poly.is_constant():
            raise NotFactorable(f"residue {poly} not a product of alphabet letters")
        return poly.constant_value()

    c_num = strip(f.num, +1)
    c_den = strip(f.den, -1)
    constant = c_num / c_den
    for n, direction in ((constant.numerator, +1), (constant.denominator, -1)):
        for p, m in _factor_int(n).items():
            i = const_primes.get(p)
            if i is None:
                raise NotFactorable(f"constant prime {p} is not an alphabet letter")
            expo[i] = expo.get(i, 0) + direction * m
    return MultVector.from_dict(expo)


def try_decompose(f, alphabet: Alphabet) -> MultVector | None:
    try:
        return decompose(f, alphabet)
    except NotFactorable:
        return None


def recompose_sign(f: RatFunc, v: MultVector, alphabet: Alphabet) -> int:
    """Sign s with f = s * prod letters^v (assumes v = decompose(f))."""
    g = v.realize(alphabet)
    return 1 if f == g else -1


# -- alphabet extension --------------------------------------------------------


def _split_candidate(poly: MPoly, known: list[MPoly]) -> list[MPoly]:
    """Factor a candidate by trial division against known letters plus
    rational-root splitting of univariate residues; unsplittable residues are
    returned whole."""
    factors: list[MPoly] = []
    poly = poly.primitive()
    for letter in known:
        if letter.is_constant():
            continue
        while True:
            q = poly.exact_div(letter)
            if q is None:
                break
            factors.append(letter)
            poly = q.primitive()
    # univariate residue: peel off rational roots
    live = [i for i in range(len(poly.vars)) if poly.degree_in(i) > 0]
    if len(live) == 1 and poly.total_degree() == poly.degree_in(live[0]):
        i = live[0]
        poly = poly.primitive()
        changed = True
        while poly.degree_in(i) > 0 and changed:
            changed = False
            coeffs = {e[i]: c for e, c in poly.terms.items()}
            a0 = coeffs.get(0, Fraction(0))
            an = coeffs[max(coeffs)]
            if a0 == 0:
                e = [0] * len(poly.vars)
                e[i] = 1
                xi = MPoly(poly.vars, {tuple(e): Fraction(1)})
                factors.append(xi)
                poly = poly.exact_div(xi).primitive()
                changed = True
                continue
            for p in _divisors(abs(a0.numerator)):
                for q in _divisors(abs(an.numerator)):
                    for sgn in (1, -1):
                        root = Fraction(sgn * p, q)
                        if poly.eval({poly.vars[i]: root} | {v: Fraction(0) for v in poly.vars if v != poly.vars[i]}) == 0:
                            e = [0] * len(poly.vars)
                            e[i] = 1
                            lin = MPoly(poly.vars, {tuple(e): Fraction(q), tuple([0] * len(poly.vars)): Fraction(-sgn * p)})
                            poly = poly.exact_div(lin).primitive()
                            factors.append(lin.primitive())
                            changed = True
                            break
                    if changed:
                        break
                if changed:
                    break
    if poly.total_degree() > 0:
        factors.append(poly.primitive())
        poly = MPoly.const(poly.vars, 1)
    return factors


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def extend_alphabet(alphabet: Alphabet) -> Alphabet:
    """Close the letter set under prime factors of pi_i +- pi_j and 1 +- pi_i."""
    if len(alphabet) == 0:
        raise ValueError("empty alphabet")
    letters = list(alphabet.letters)
    labels = list(alphabet.labels)
    one = MPoly.const(alphabet.variables, 1)
    candidates: list[MPoly] = []
    for p in letters:
        candidates.append(one + p)
        candidates.append(one - p)
    for p, q in itertools.combinations_with_replacement(letters, 2):
        candidates.append(p + q)
        candidates.append(p - q)
    new: list[MPoly] = []

    def register(poly: MPoly):
        poly = poly.sign_canonical()
        if poly.is_zero():
            return
        if poly.is_constant():
            v = poly.constant_value()
            for prime in _factor_int(v.numerator):
                register_prime(prime)
            for prime in _factor_int(v.denominator):
                register_prime(prime)
            return
        if all(poly != l for l in letters + new):
            new.append(poly)

    def register_prime(p: int):
        cp = MPoly.const(alphabet.variables, p)
        if all(cp != l for l in letters + new):
            new.append(cp)

    for cand in candidates:
        if cand.is_zero():
            continue
        content = cand.content()
        for prime in _factor_int(content.numerator):
            register_prime(prime)
        for prime in _factor_int(content.denominator):
            register_prime(prime)
        for f in _split_candidate(cand, letters):
            register(f)
    new.sort(key=lambda p: (p.total_degree(), str(p)))
    return Alphabet(letters + new, alphabet.variables)


# -- candidate arguments ---------------------------------------------------------


def _exponent_vectors(n_letters: int, bound: int):
    """All sparse exponent vectors with total absolute exponent <= bound."""
    def rec(idx: int, remaining: int, acc: list[tuple[int, int]]):
        if idx == n_letters:
            yield tuple(acc)
            return
        yield from rec(idx + 1, remaining, acc)
        for e in range(1, remaining + 1):
            for s in (1, -1):
                acc.append((idx, s * e))
                yield from rec(idx + 1, remaining - e, acc)
                acc.pop()
    yield from rec(0, bound, [])


def candidate_args_depth1(
    alphabet: Alphabet,
    bound: int,
    const_bound: int | None = None,
    use_prime_filter: bool = True,
) -> list[SignedArg]:
    """Arguments R in the multiplicative span with 1 - R back in the span.

    The tower truncation bounds the total absolute exponent of non-constant
    letters by `bound` and of constant letters by `const_bound` (defaults to
    `bound` when not given).  Both signs of each exponent vector are tried;
    every recorded SignedArg satisfies decompose(1 - realize(arg)) exactly.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if const_bound is None:
        const_bound = bound
    nonconst = [i for i in range(len(alphabet)) if not alphabet.letter(i).is_constant()]
    const = alphabet.constant_letter_indices()
    one = RatFunc.const(alphabet.variables, 1)
    if use_prime_filter:
        values, point = alphabet.prime_values()
        if any(abs(v) <= 1 for v in values):
            use_prime_filter = False  # the >1 convention needs nondegenerate values
    results: list[SignedArg] = []
    for nc_vec in _exponent_vectors(len(nonconst), bound):
        for c_vec in _exponent_vectors(len(const), const_bound):
            expo = {nonconst[i]: e for i, e in nc_vec}
            expo.update({const[i]: e for i, e in c_vec})
            vec = MultVector.from_dict(expo)
            f = vec.realize(alphabet)
            for sign in (1, -1):
                r = f if sign > 0 else -f
                target = one - r
                if target.is_zero():
                    continue  # R = 1 is degenerate
                if (
                    use_prime_filter
                    and not target.num.is_constant()
                    and not prime_substitution_filter(target.num.primitive(), values, point)
                ):
                    continue
                if try_decompose(target, alphabet) is not None:
                    results.append(SignedArg(vec, sign))
    results.sort(key=lambda a: (a.vector.total_abs(), a.vector.exponents, -a.sign))
    return results


_S3_NAMES = ("R", "1-R", "1/R", "1/(1-R)", "1-1/R", "R/(R-1)")


def s3_orbit(f: RatFunc) -> list[RatFunc]:
    """Images of R under the six-element group generated by R -> 1-R, R -> 1/R."""
    one = RatFunc.const(f.vars, 1)
    return [
        f,
        one - f,
        one / f,
        one / (one - f),
        one - one / f,
        f / (f - one),
    ]


def candidate_args_depthk(
    depth1: Sequence[SignedArg],
    k: int,
    alphabet: Alphabet,
) -> list[ArgTuple]:
    """Ordered k-tuples with every pairwise difference in the alphabet span.

    Diagonal tuples are excluded: a zero difference has no multiplicative
    decomposition.
    """
    if k < 2:
        raise ValueError("depth must be >= 2")
    realized = [(arg, arg.realize(alphabet)) for arg in depth1]
    ok_pairs: set[tuple[int, int]] = set()
    for (i, (_, fi)), (j, (_, fj)) in itertools.combinations(enumerate(realized), 2):
        diff = fi - fj
        if diff.is_zero():
            continue
        if try_decompose(diff, alphabet) is not None:
            ok_pairs.add((i, j))
            ok_pairs.add((j, i))
    out: list[ArgTuple] = []
    for combo in itertools.permutations(range(len(realized)), k):
        if all((a, b) in ok_pairs for a, b in itertools.combinations(combo, 2)):
            out.append(ArgTuple(tuple(realized[i][0] for i in combo)))
    return out
