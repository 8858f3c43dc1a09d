"""The symbol algebra: words over letters, shuffles, projectors, integrability.

A symbol of weight w is a finite Q-linear combination of length-w words of
alphabet letter indices.  Torsion and signs never enter: they are eliminated
when rational functions are expanded into weight-1 symbols, so equality is a
pure coefficient comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .alphabet import Alphabet, decompose
from .exact import RatFunc


class WeightMismatch(ValueError):
    pass


Word = tuple[int, ...]


class Symbol:
    """Pure-weight tensor: map word -> rational coefficient, no zero entries."""

    __slots__ = ("weight", "terms")

    def __init__(self, weight: int, terms: Mapping[Word, Fraction] | None = None):
        self.weight = weight
        clean: dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if len(w) != weight:
                    raise WeightMismatch(f"word {w} in weight-{weight} symbol")
                clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def zero(cls, weight: int) -> "Symbol":
        return cls(weight, {})

    @classmethod
    def unit(cls) -> "Symbol":
        """The empty word with coefficient 1 (shuffle unit)."""
        return cls(0, {(): Fraction(1)})

    @classmethod
    def word(cls, letters: Sequence[int], coeff=1) -> "Symbol":
        return cls(len(letters), {tuple(letters): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Symbol") -> "Symbol":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.weight != other.weight:
            raise WeightMismatch("adding symbols of different weights")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return Symbol(self.weight, out)

    def __sub__(self, other: "Symbol") -> "Symbol":
        return self + other.scale(-1)

    def scale(self, q) -> "Symbol":
        q = Fraction(q)
        if q == 0:
            return Symbol.zero(self.weight)
        return Symbol(self.weight, {w: c * q for w, c in self.terms.items()})

    def tensor(self, other: "Symbol") -> "Symbol":
        """Concatenation product."""
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, Fraction(0)) + c1 * c2
        return Symbol(self.weight + other.weight, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Symbol)
            and self.weight == other.weight
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.weight, frozenset(self.terms.items())))

    def coeff(self, word: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(word), Fraction(0))

    def words(self) -> list[Word]:
        return sorted(self.terms)

    def to_json(self, alphabet: Alphabet | None = None) -> dict:
        doc = {
            "weight": self.weight,
            "terms": [
                {"word": list(w), "coeff": _frac_str(self.terms[w])}
                for w in sorted(self.terms)
            ],
        }
        if alphabet is not None:
            doc["alphabet"] = alphabet.to_json()
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "Symbol":
        return cls(
            doc["weight"],
            {tuple(t["word"]): Fraction(t["coeff"]) for t in doc["terms"]},
        )

    def pretty(self, alphabet: Alphabet) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            body = "(" + ")(".join(alphabet.labels[i] for i in w) + ")"
            if c == 1:
                parts.append(f"+ {body}")
            elif c == -1:
                parts.append(f"- {body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {_frac_str(abs(c))}*{body}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"Symbol(w={self.weight}, {len(self.terms)} terms)"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- shuffle -------------------------------------------------------------------


def shuffle_words(u: Word, v: Word) -> dict[Word, int]:
    """Multiset of interleavings of u and v preserving both internal orders."""
    out: dict[Word, int] = {}
    n, m = len(u), len(v)
    for positions in itertools.combinations(range(n + m), n):
        word = [None] * (n + m)
        ui = 0
        for p in positions:
            word[p] = u[ui]
            ui += 1
        vi = 0
        for i in range(n + m):
            if word[i] is None:
                word[i] = v[vi]
                vi += 1
        w = tuple(word)
        out[w] = out.get(w, 0) + 1
    return out


def shuffle(a: Symbol, b: Symbol) -> Symbol:
    """Bilinear extension of the word shuffle."""
    out: dict[Word, Fraction] = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            c = cu * cv
            for w, mult in shuffle_words(u, v).items():
                out[w] = out.get(w, Fraction(0)) + c * mult
    return Symbol(a.weight + b.weight, out)


def shuffle_many(symbols: Sequence[Symbol]) -> Symbol:
    result = Symbol.unit()
    for s in symbols:
        result = shuffle(result, s)
    return result


# -- factor expansion ------------------------------------------------------------


def expand_factor(f, alphabet: Alphabet) -> Symbol:
    """Weight-1 symbol of a rational function: sum of exponents times letters.

    Torsion (signs, hence +-1) contributes the zero symbol.
    """
    v = decompose(f, alphabet)
    out: dict[Word, Fraction] = {}
    for i, e in v.exponents:
        out[(i,)] = Fraction(e)
    return Symbol(1, out)


# -- projectors ------------------------------------------------------------------

_rho_cache: dict[Word, dict[Word, int]] = {}


def _rho(word: Word) -> dict[Word, int]:
    """Ree's unnormalized projector on a single word (integer coefficients)."""
    if len(word) == 1:
        return {word: 1}
    cached = _rho_cache.get(word)
    if cached is not None:
        return cached
    out: dict[Word, int] = {}
    for w, c in _rho(word[:-1]).items():
        key = w + (word[-1],)
        out[key] = out.get(key, 0) + c
    for w, c in _rho(word[1:]).items():
        key = w + (word[0],)
        out[key] = out.get(key, 0) - c
    out = {w: c for w, c in out.items() if c}
    _rho_cache[word] = out
    return out


def project_pi(w: int, s: Symbol) -> Symbol:
    """Idempotent projector whose kernel is the shuffle ideal."""
    if s.weight != w:
        raise WeightMismatch(f"projecting weight-{s.weight} symbol with Pi_{w}")
    if w == 0:
        return s
    out: dict[Word, Fraction] = {}
    inv = Fraction(1, w)
    for word, c in s.terms.items():
        for rw, rc in _rho(word).items():
            out[rw] = out.get(rw, Fraction(0)) + c * rc * inv
    return Symbol(w, out)


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise ValueError("parts must be positive")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError("parts must be non-increasing")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __repr__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions_desc(w: int) -> list[Partition]:
    """All non-increasing partitions of w in descending lexicographic order."""
    if w < 1:
        raise ValueError("weight must be >= 1")
    acc: list[tuple[int, ...]] = []

    def rec(remaining: int, maxpart: int, prefix: list[int]):
        if remaining == 0:
            acc.append(tuple(prefix))
            return
        for p in range(min(remaining, maxpart), 0, -1):
            prefix.append(p)
            rec(remaining - p, p, prefix)
            prefix.pop()

    rec(w, w, [])
    acc.sort(reverse=True)
    return [Partition(t) for t in acc]


def project_partition(lam: Partition | Sequence[int], s: Symbol) -> Symbol:
    """Blockwise projector Pi_{lambda_1} x ... x Pi_{lambda_r}."""
    parts = tuple(lam.parts if isinstance(lam, Partition) else lam)
    if sum(parts) != s.weight:
        raise WeightMismatch(f"partition {parts} against weight {s.weight}")
    out: dict[Word, Fraction] = {}
    scale = Fraction(1)
    for p in parts:
        scale /= p
    for word, c in s.terms.items():
        blocks = []
        pos = 0
        for p in parts:
            blocks.append(word[pos:pos + p])
            pos += p
        partial: dict[Word, int] = {(): 1}
        for block in blocks:
            rho_b = _rho(block)
            nxt: dict[Word, int] = {}
            for w1, c1 in partial.items():
                for w2, c2 in rho_b.items():
                    key = w1 + w2
                    nxt[key] = nxt.get(key, 0) + c1 * c2
            partial = nxt
        for w2, c2 in partial.items():
            out[w2] = out.get(w2, Fraction(0)) + c * c2 * scale
    return Symbol(s.weight, out)


def lambda_shuffle(lam: Partition | Sequence[int], word: Word) -> Symbol:
    """Shuffle of the consecutive blocks of the word, sized by the partition."""
    parts = tuple(lam.parts if isinstance(lam, Partition) else lam)
    if sum(parts) != len(word):
        raise WeightMismatch("partition does not match word length")
    blocks = []
    pos = 0
    for p in parts:
        blocks.append(Symbol.word(word[pos:pos + p]))
        pos += p
    return shuffle_many(blocks)


# -- integrability ------------------------------------------------------------------


@dataclass
class IntegrabilityReport:
    ok: bool
    vacuous: bool = False
    slot: int | None = None
    var_pair: tuple[str, str] | None = None
    residual_word: Word | None = None
    residual: RatFunc | None = None

    def __bool__(self):
        return self.ok


def integrability_check(s: Symbol, alphabet: Alphabet) -> IntegrabilityReport:
    """Wedge condition of iterated integrals, as an exact rational-function test.

    For every adjacent slot pair and every ordered variable pair, the
    coefficient of the corresponding 2-form, grouped by the word with the two
    slots deleted, must vanish identically.  Single-variable sessions are
    vacuously integrable and flagged as such.
    """
    variables = alphabet.variables
    if s.weight < 2 or s.is_zero():
        return IntegrabilityReport(ok=True, vacuous=True)
    if len(variables) < 2:
        return IntegrabilityReport(ok=True, vacuous=True)
    pair_cache: dict[tuple[int, int, str, str], RatFunc] = {}

    def wedge(i: int, j: int, vk: str, vl: str) -> RatFunc:
        key = (i, j, vk, vl)
        if key not in pair_cache:
            a = alphabet.dlog(i, vk) * alphabet.dlog(j, vl)
            b = alphabet.dlog(i, vl) * alphabet.dlog(j, vk)
            pair_cache[key] = a - b
        return pair_cache[key]

    for slot in range(s.weight - 1):
        grouped: dict[tuple[Word, int, int], Fraction] = {}
        for word, c in s.terms.items():
            reduced = word[:slot] + word[slot + 2:]
            key = (reduced, word[slot], word[slot + 1])
            grouped[key] = grouped.get(key, Fraction(0)) + c
        for vk, vl in itertools.combinations(variables, 2):
            sums: dict[Word, RatFunc] = {}
            for (reduced, i, j), c in grouped.items():
                if c == 0:
                    continue
                contrib = wedge(i, j, vk, vl) * c
                if reduced in sums:
                    sums[reduced] = sums[reduced] + contrib
                else:
                    sums[reduced] = contrib
            for reduced, total in sums.items():
                if not total.is_zero():
                    return IntegrabilityReport(
                        ok=False,
                        slot=slot + 1,
                        var_pair=(vk, vl),
                        residual_word=reduced,
                        residual=total,
                    )
    return IntegrabilityReport(ok=True)
