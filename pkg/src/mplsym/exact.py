"""Exact rational and polynomial arithmetic over Q in a fixed variable list.

Polynomials are stored sparsely as a map from exponent tuples to Fraction
coefficients, with the graded lexicographic order fixing leading terms and
hence canonical signs.  Rational functions keep a normalized num/den pair:
gcd divided out, denominator primitive with positive leading coefficient.
Everything is immutable after construction and safe to share.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence


class PoleAtPoint(ArithmeticError):
    """Denominator vanishes at the evaluation point."""


class BadPrimePoint(ValueError):
    """Alphabet values at the substitution point collide or vanish."""


def _grlex_key(expts: tuple[int, ...]) -> tuple:
    return (sum(expts), expts)


class MPoly:
    """Multivariate polynomial over Q with a fixed, ordered variable list."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], Fraction]):
        self.vars = tuple(variables)
        clean = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c != 0:
                if len(e) != len(self.vars):
                    raise ValueError("exponent tuple length mismatch")
                clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "MPoly":
        value = Fraction(value)
        if value == 0:
            return cls(variables, {})
        return cls(variables, {tuple([0] * len(variables)): value})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MPoly":
        i = list(variables).index(name)
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): Fraction(1)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def leading_coeff(self) -> Fraction:
        return self.leading_term()[1]

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.vars != other.vars:
            raise ValueError("polynomials over different variable lists")

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MPoly(self.vars, out)

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __neg__(self) -> "MPoly":
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return MPoly(self.vars, {e: c * q for e, c in self.terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- division ----------------------------------------------------------

    def divmod_by(self, divisor: "MPoly") -> tuple["MPoly", "MPoly"]:
        """Multivariate division with remainder along the graded-lex order."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        quot: dict[tuple[int, ...], Fraction] = {}
        rem = self
        de, dc = divisor.leading_term()
        while not rem.is_zero():
            re, rc = rem.leading_term()
            diff = tuple(a - b for a, b in zip(re, de))
            if any(d < 0 for d in diff):
                break
            q = rc / dc
            quot[diff] = quot.get(diff, Fraction(0)) + q
            rem = rem - MPoly(self.vars, {diff: q}) * divisor
        return MPoly(self.vars, quot), rem

    def exact_div(self, divisor: "MPoly") -> "MPoly | None":
        """Exact quotient, or None when the division leaves a remainder."""
        q, r = self.divmod_by(divisor)
        return q if r.is_zero() else None

    # -- normalization -----------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if self.is_zero():
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, abs(c.numerator))
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MPoly":
        """Integer-primitive associate with positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading_coeff() < 0:
            c = -c
        return self * (1 / c)

    def sign_canonical(self) -> "MPoly":
        """Same polynomial up to sign, with positive leading coefficient."""
        if not self.is_zero() and self.leading_coeff() < 0:
            return -self
        return self

    # -- calculus / evaluation ----------------------------------------------

    def derivative(self, name: str) -> "MPoly":
        i = list(self.vars).index(name)
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            e2 = tuple(e2)
            out[e2] = out.get(e2, Fraction(0)) + c * e[i]
        return MPoly(self.vars, out)

    def eval(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        vals = [Fraction(point[v]) for v in self.vars]
        for e, c in self.terms.items():
            m = c
            for v, p in zip(vals, e):
                if p:
                    m *= v ** p
            total += m
        return total

    def subs_int(self, point: Sequence[int]) -> Fraction:
        return self.eval({v: Fraction(p) for v, p in zip(self.vars, point)})

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (v if p == 1 else f"{v}^{p}") for v, p in zip(self.vars, e) if p
            )
            if not mono:
                body = _frac_str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{_frac_str(abs(c))}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else ("-" + s[2:])

    __repr__ = __str__


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- gcd ---------------------------------------------------------------------


def _rat_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    num = math.gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(num, den)


def _univar_gcd(a: MPoly, b: MPoly, i: int) -> MPoly:
    # Monic Euclid in the single variable of index i; degrees here are tiny.
    va = {e[i]: c for e, c in a.terms.items()}
    vb = {e[i]: c for e, c in b.terms.items()}

    def norm(d):
        if not d:
            return d
        lead = d[max(d)]
        return {k: v / lead for k, v in d.items()}

    def rem(x, y):
        y = dict(y)
        dy = max(y)
        x = dict(x)
        while x and max(x) >= dy:
            dx = max(x)
            q = x[dx] / y[dy]
            for k, v in y.items():
                x[k + dx - dy] = x.get(k + dx - dy, Fraction(0)) - q * v
            x = {k: v for k, v in x.items() if v != 0}
        return x

    va, vb = norm(va), norm(vb)
    while vb:
        va, vb = vb, norm(rem(va, vb))
    n = len(a.vars)

    def tup(p):
        e = [0] * n
        e[i] = p
        return tuple(e)

    return MPoly(a.vars, {tup(p): c for p, c in va.items()}).primitive()


def _coeffs_in(a: MPoly, i: int) -> dict[int, MPoly]:
    """View as univariate in variable i with MPoly coefficients."""
    out: dict[int, dict] = {}
    for e, c in a.terms.items():
        e2 = list(e)
        p = e2[i]
        e2[i] = 0
        out.setdefault(p, {})[tuple(e2)] = c
    return {p: MPoly(a.vars, d) for p, d in out.items()}


def _from_coeffs(vars_, i: int, coeffs: Mapping[int, MPoly]) -> MPoly:
    out: dict[tuple[int, ...], Fraction] = {}
    for p, poly in coeffs.items():
        for e, c in poly.terms.items():
            e2 = list(e)
            e2[i] = p
            out[tuple(e2)] = out.get(tuple(e2), Fraction(0)) + c
    return MPoly(vars_, out)


def _content_in(a: MPoly, i: int) -> MPoly:
    cs = list(_coeffs_in(a, i).values())
    g = cs[0]
    for c in cs[1:]:
        g = poly_gcd(g, c)
    return g


def _pseudo_rem(a: MPoly, b: MPoly, i: int) -> MPoly:
    ca, cb = _coeffs_in(a, i), _coeffs_in(b, i)
    da, db = max(ca), max(cb)
    lb = cb[db]
    r = ca
    dr = da
    while r and dr >= db:
        lr = r[dr]
        r = {p: c * lb for p, c in r.items()}
        for p, c in cb.items():
            q = p + dr - db
            term = lr * c
            r[q] = r.get(q, MPoly(a.vars, {})) - term
        r = {p: c for p, c in r.items() if not c.is_zero()}
        dr = max(r) if r else -1
    return _from_coeffs(a.vars, i, r)


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """GCD normalized to an integer-primitive form with positive leading coefficient.

    Rational constant content contributes its own gcd, so gcd(2, 4) = 2 and
    gcd(p, 0) is the normalized associate of p.
    """
    if a.vars != b.vars:
        raise ValueError("polynomials over different variable lists")
    if a.is_zero():
        return b.sign_canonical()
    if b.is_zero():
        return a.sign_canonical()
    if a.is_constant() and b.is_constant():
        return MPoly.const(a.vars, _rat_gcd(a.constant_value(), b.constant_value()))
    if a.is_constant() or b.is_constant():
        ca = a.constant_value() if a.is_constant() else a.content()
        cb = b.constant_value() if b.is_constant() else b.content()
        return MPoly.const(a.vars, _rat_gcd(ca, cb))
    content_gcd = _rat_gcd(a.content(), b.content())
    a = a.primitive()
    b = b.primitive()
    live = [i for i in range(len(a.vars)) if a.degree_in(i) > 0 or b.degree_in(i) > 0]
    i = live[0]
    if a.degree_in(i) == 0 or b.degree_in(i) == 0:
        lo = a if a.degree_in(i) == 0 else b
        hi = b if lo is a else a
        g = poly_gcd(lo, _content_in(hi, i))
        return (g * content_gcd).sign_canonical()
    if len(live) == 1:
        return (_univar_gcd(a, b, i) * content_gcd).sign_canonical()
    cont_a, cont_b = _content_in(a, i), _content_in(b, i)
    pa = a.exact_div(cont_a)
    pb = b.exact_div(cont_b)
    f, g = (pa, pb) if max(_coeffs_in(pa, i)) >= max(_coeffs_in(pb, i)) else (pb, pa)
    while True:
        r = _pseudo_rem(f, g, i)
        if r.is_zero():
            break
        if r.degree_in(i) == 0:
            g = MPoly.const(a.vars, 1)
            break
        f, g = g, r.exact_div(_content_in(r, i))
    result = g.primitive() * poly_gcd(cont_a, cont_b)
    return (result * content_gcd).sign_canonical()


class RatFunc:
    """Rational function num/den, kept normalized and sign-canonical."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None, normalize: bool = True):
        if den is None:
            den = MPoly.const(num.vars, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if normalize:
            num, den = _normalize_pair(num, den)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "RatFunc":
        return cls(MPoly.const(variables, value))

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "RatFunc":
        return cls(MPoly.var(variables, name))

    @classmethod
    def from_poly(cls, p: MPoly) -> "RatFunc":
        return cls(p)

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def __add__(self, other: "RatFunc") -> "RatFunc":
        other = _coerce(other, self.vars)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        return self + (-_coerce(other, self.vars))

    def __rsub__(self, other) -> "RatFunc":
        return _coerce(other, self.vars) - self

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, normalize=False)

    def __mul__(self, other) -> "RatFunc":
        other = _coerce(other, self.vars)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce(other, self.vars)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return _coerce(other, self.vars) / self

    def inverse(self) -> "RatFunc":
        return RatFunc.const(self.vars, 1) / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n, normalize=False)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(self.vars, other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self, name: str) -> "RatFunc":
        dn = self.num.derivative(name)
        dd = self.den.derivative(name)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def eval(self, point: Mapping[str, Fraction]) -> Fraction:
        d = self.den.eval(point)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at {dict(point)}")
        return self.num.eval(point) / d

    def __str__(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    __repr__ = __str__


def _coerce(value, variables) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, MPoly):
        return RatFunc(value)
    return RatFunc.const(variables, value)


def _normalize_pair(num: MPoly, den: MPoly) -> tuple[MPoly, MPoly]:
    if num.is_zero():
        return num, MPoly.const(num.vars, 1)
    g = poly_gcd(num, den)
    if not (g.is_constant() and g.constant_value() == 1):
        num = num.exact_div(g)
        den = den.exact_div(g)
    c = den.content()
    if den.leading_coeff() < 0:
        c = -c
    if c != 1:
        num = num * (1 / c)
        den = den * (1 / c)
    return num, den


def partial_derivative(f: RatFunc, name: str) -> RatFunc:
    return f.derivative(name)


def eval_rat(f: RatFunc, point: Mapping[str, Fraction]) -> Fraction:
    return f.eval(point)


# -- fast integer divisibility prefilter --------------------------------------


def prime_point(variables: Sequence[str], start: int = 101) -> list[int]:
    """One prime per session variable, the i-th prime >= start."""
    out = []
    p = start - 1
    while len(out) < len(variables):
        p += 1
        if all(p % q for q in range(2, int(math.isqrt(p)) + 1)):
            out.append(p)
    return out


def prime_substitution_filter(
    candidate: MPoly,
    alphabet_values: Sequence[int],
    point: Sequence[int] | None = None,
) -> bool:
    """Necessary condition for factorability over the alphabet.

    The candidate is evaluated at the integer substitution point (default: one
    prime >= 101 per session variable); the result is True iff that integer is
    divisible by at least one alphabet value.  Values of modulus <= 1 never
    divide anything (the >1 convention), so units are rejected.
    """
    vals = [int(v) for v in alphabet_values]
    if any(v == 0 for v in vals):
        raise BadPrimePoint("alphabet value vanishes at the substitution point")
    if len(set(vals)) != len(vals):
        raise BadPrimePoint("alphabet values collide at the substitution point")
    if point is None:
        point = prime_point(candidate.vars)
    value = candidate.subs_int(list(point))
    n = abs(value.numerator)
    return any(abs(v) > 1 and n % abs(v) == 0 for v in vals)


# -- parsing -------------------------------------------------------------------


class PolyParseError(ValueError):
    pass


class _Tok:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_int(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start:self.pos])

    def take_name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]


def parse_ratfunc(text: str, variables: Sequence[str]) -> RatFunc:
    """Parse `+ - * / ^` expressions with integer literals and variable names."""
    tok = _Tok(text)

    def atom() -> RatFunc:
        ch = tok.peek()
        if ch == "(":
            tok.pos += 1
            e = expr()
            if tok.peek() != ")":
                raise PolyParseError(f"expected ')' at {tok.pos} in {text!r}")
            tok.pos += 1
            return e
        if ch.isdigit():
            return RatFunc.const(variables, tok.take_int())
        if ch.isalpha() or ch == "_":
            name = tok.take_name()
            if name not in variables:
                raise PolyParseError(f"unknown variable {name!r} (session variables: {list(variables)})")
            return RatFunc.var(variables, name)
        raise PolyParseError(f"unexpected character {ch!r} at {tok.pos} in {text!r}")

    def power() -> RatFunc:
        base = atom()
        if tok.peek() == "^":
            tok.pos += 1
            neg = False
            if tok.peek() == "-":
                neg = True
                tok.pos += 1
            if not tok.peek().isdigit():
                raise PolyParseError(f"expected exponent at {tok.pos} in {text!r}")
            n = tok.take_int()
            result = RatFunc.const(variables, 1)
            for _ in range(n):
                result = result * base
            return result.inverse() if neg else result
        return base

    def term() -> RatFunc:
        value = unary()
        while tok.peek() and tok.peek() in "*/":
            op = tok.peek()
            tok.pos += 1
            rhs = unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary() -> RatFunc:
        if tok.peek() == "-":
            tok.pos += 1
            return -unary()
        if tok.peek() == "+":
            tok.pos += 1
            return unary()
        return power()

    def expr() -> RatFunc:
        value = term()
        while tok.peek() and tok.peek() in "+-":
            op = tok.peek()
            tok.pos += 1
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    result = expr()
    if tok.peek():
        raise PolyParseError(f"trailing input at {tok.pos} in {text!r}")
    return result


def parse_poly(text: str, variables: Sequence[str]) -> MPoly:
    f = parse_ratfunc(text, variables)
    if not (f.den.is_constant() and f.den.constant_value() == 1):
        q = f.num.exact_div(f.den)
        if q is None:
            raise PolyParseError(f"{text!r} is not a polynomial")
        return q
    return f.num
