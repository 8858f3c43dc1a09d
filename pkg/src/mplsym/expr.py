"""Function expressions: G, Li, H, logs, named constants, sums and products.

Expressions are immutable trees; every node has a well-defined weight, sums
must be weight-homogeneous, and the symbol map dispatches through the polygon
machinery.  The grammar accepted by parse_expr:

    G(a,b,...; x)   H(1,0,-1; x)   Li[2,2](u, v)   log(f)
    pi  zeta3  ln2  Li4half        rational literals p/q
    + - * / ^       parentheses

Arguments of G/H/Li/log are rational expressions in the session variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .alphabet import Alphabet
from .exact import RatFunc, parse_ratfunc
from .polygon import Polygon, polygon_symbol
from .tensor import Symbol, expand_factor, shuffle, shuffle_words

CONST_WEIGHTS = {"pi": 1, "zeta3": 3, "ln2": 1, "Li4half": 4}


class MixedWeight(ValueError):
    pass


class ZeroArgument(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class FuncExpr:
    kind: str
    # payload fields, used depending on kind
    value: Fraction | None = None            # rat
    name: str | None = None                  # const
    arg: RatFunc | None = None               # log, G, H (rightmost argument)
    avec: tuple | None = None                # G: RatFuncs; H: ints in {-1,0,1}
    mvec: tuple[int, ...] | None = None      # Li
    args: tuple[RatFunc, ...] | None = None  # Li
    parts: tuple["FuncExpr", ...] | None = None  # sum / prod
    base: "FuncExpr | None" = None           # pow
    power: int | None = None                 # pow

    # -- constructors --------------------------------------------------------

    @staticmethod
    def rat(q) -> "FuncExpr":
        return FuncExpr("rat", value=Fraction(q))

    @staticmethod
    def const(name: str) -> "FuncExpr":
        if name not in CONST_WEIGHTS:
            raise ValueError(f"unknown constant {name}")
        return FuncExpr("const", name=name)

    @staticmethod
    def log_of(arg: RatFunc) -> "FuncExpr":
        if arg.is_zero():
            raise ZeroArgument("log(0)")
        return FuncExpr("log", arg=arg)

    @staticmethod
    def gfun(avec: Sequence[RatFunc], arg: RatFunc) -> "FuncExpr":
        return FuncExpr("G", avec=tuple(avec), arg=arg)

    @staticmethod
    def hfun(avec: Sequence[int], arg: RatFunc) -> "FuncExpr":
        if any(a not in (-1, 0, 1) for a in avec):
            raise ValueError("H indices must lie in {-1, 0, 1}")
        return FuncExpr("H", avec=tuple(int(a) for a in avec), arg=arg)

    @staticmethod
    def li(mvec: Sequence[int], args: Sequence[RatFunc]) -> "FuncExpr":
        if len(mvec) != len(args):
            raise ValueError("Li index and argument counts differ")
        if any(m < 1 for m in mvec):
            raise ValueError("Li indices must be positive")
        if any(a.is_zero() for a in args):
            raise ZeroArgument("Li argument is 0")
        return FuncExpr("Li", mvec=tuple(int(m) for m in mvec), args=tuple(args))

    @staticmethod
    def add(*terms: "FuncExpr") -> "FuncExpr":
        flat: list[FuncExpr] = []
        for t in terms:
            if t.kind == "sum":
                flat.extend(t.parts)
            else:
                flat.append(t)
        flat = [t for t in flat if not (t.kind == "rat" and t.value == 0)]
        if not flat:
            return FuncExpr.rat(0)
        if len(flat) == 1:
            return flat[0]
        return FuncExpr("sum", parts=tuple(flat))

    @staticmethod
    def mul(*factors: "FuncExpr") -> "FuncExpr":
        flat: list[FuncExpr] = []
        scalar = Fraction(1)
        for f in factors:
            if f.kind == "prod":
                flat.extend(f.parts)
            elif f.kind == "rat":
                scalar *= f.value
            else:
                flat.append(f)
        if scalar == 0:
            return FuncExpr.rat(0)
        if not flat:
            return FuncExpr.rat(scalar)
        if scalar != 1:
            flat.insert(0, FuncExpr.rat(scalar))
        if len(flat) == 1:
            return flat[0]
        return FuncExpr("prod", parts=tuple(flat))

    @staticmethod
    def pow_of(base: "FuncExpr", n: int) -> "FuncExpr":
        if n < 0:
            raise ValueError("negative powers of transcendental functions")
        if n == 0:
            return FuncExpr.rat(1)
        if n == 1:
            return base
        if base.kind == "rat":
            return FuncExpr.rat(base.value ** n)
        return FuncExpr("pow", base=base, power=n)

    # -- structure ------------------------------------------------------------

    def weight(self) -> int:
        k = self.kind
        if k == "rat":
            return 0
        if k == "const":
            return CONST_WEIGHTS[self.name]
        if k == "log":
            return 1
        if k in ("G", "H"):
            return len(self.avec)
        if k == "Li":
            return sum(self.mvec)
        if k == "sum":
            weights = {t.weight() for t in self.parts}
            if len(weights) > 1:
                raise MixedWeight(f"sum mixes weights {sorted(weights)}")
            return weights.pop()
        if k == "prod":
            return sum(t.weight() for t in self.parts)
        if k == "pow":
            return self.power * self.base.weight()
        raise ValueError(k)

    def __neg__(self) -> "FuncExpr":
        return FuncExpr.mul(FuncExpr.rat(-1), self)

    def __add__(self, other: "FuncExpr") -> "FuncExpr":
        return FuncExpr.add(self, other)

    def __sub__(self, other: "FuncExpr") -> "FuncExpr":
        return FuncExpr.add(self, -other)

    def __mul__(self, other: "FuncExpr") -> "FuncExpr":
        return FuncExpr.mul(self, other)

    def __repr__(self):
        return format_expr(self)


# -- symbol dispatch ----------------------------------------------------------------


def symbol_of(e: FuncExpr, alphabet: Alphabet) -> Symbol:
    """Symbol of the expression: linear, and products map to shuffles."""
    k = e.kind
    if k == "rat":
        return Symbol(0, {(): e.value})
    if k == "const":
        if e.name in ("pi", "zeta3"):
            return Symbol.zero(CONST_WEIGHTS[e.name])
        if e.name == "ln2":
            return expand_factor(RatFunc.const(alphabet.variables, 2), alphabet)
        if e.name == "Li4half":
            half = RatFunc.const(alphabet.variables, Fraction(1, 2))
            return symbol_of(FuncExpr.li((4,), (half,)), alphabet)
    if k == "log":
        return expand_factor(e.arg, alphabet)
    if k == "G":
        return polygon_symbol(
            Polygon.from_g(e.avec, e.arg, alphabet.variables), alphabet
        )
    if k == "H":
        n_plus = sum(1 for a in e.avec if a == 1)
        avec = [RatFunc.const(alphabet.variables, a) for a in e.avec]
        s = polygon_symbol(Polygon.from_g(avec, e.arg, alphabet.variables), alphabet)
        return s.scale((-1) ** n_plus)
    if k == "Li":
        if len(e.mvec) == 1:
            # classical polylogarithm: single elementary tensor
            n = e.mvec[0]
            r = e.args[0]
            one = RatFunc.const(alphabet.variables, 1)
            head = expand_factor(one - r, alphabet)
            tail = expand_factor(r, alphabet) if n > 1 else None
            word = head
            for _ in range(n - 1):
                word = word.tensor(tail)
            return word.scale(-1)
        return symbol_of(li_to_g(e.mvec, e.args), alphabet)
    if k == "sum":
        w = e.weight()
        total = Symbol.zero(w)
        for t in e.parts:
            total = total + symbol_of(t, alphabet)
        return total
    if k == "prod":
        total = Symbol.unit()
        for t in e.parts:
            total = shuffle(total, symbol_of(t, alphabet))
        return total
    if k == "pow":
        base = symbol_of(e.base, alphabet)
        total = Symbol.unit()
        for _ in range(e.power):
            total = shuffle(total, base)
        return total
    raise ValueError(k)


# -- Li <-> G conversion ---------------------------------------------------------------


def li_to_g(mvec: Sequence[int], args: Sequence[RatFunc]) -> FuncExpr:
    """Li_{m_1..m_k}(x_1..x_k) as (-1)^k G(...; 1) with reversed index blocks."""
    k = len(mvec)
    if any(a.is_zero() for a in args):
        raise ZeroArgument("Li argument is 0")
    variables = args[0].vars
    one = RatFunc.const(variables, 1)
    zero = RatFunc.const(variables, 0)
    avec: list[RatFunc] = []
    for j in range(1, k + 1):
        m = mvec[k - j]  # block sizes reversed: first block uses m_k
        prod = one
        for i in range(k - j, k):
            prod = prod * args[i]
        t_j = one / prod
        avec.extend([zero] * (m - 1))
        avec.append(t_j)
    g = FuncExpr.gfun(avec, one)
    return FuncExpr.mul(FuncExpr.rat((-1) ** k), g) if k % 2 else g


def g_to_li(e: FuncExpr) -> FuncExpr:
    """Inverse of li_to_g on structurally matching G expressions."""
    sign = Fraction(1)
    if e.kind == "prod" and len(e.parts) == 2 and e.parts[0].kind == "rat":
        sign = e.parts[0].value
        e = e.parts[1]
    if e.kind != "G":
        raise ValueError("expected a G expression")
    variables = e.arg.vars
    one = RatFunc.const(variables, 1)
    if e.arg != one:
        raise ValueError("expected argument 1")
    groups: list[tuple[int, RatFunc]] = []
    zeros = 0
    for a in e.avec:
        if a.is_zero():
            zeros += 1
        else:
            groups.append((zeros + 1, a))
            zeros = 0
    if zeros:
        raise ValueError("trailing zero index")
    k = len(groups)
    if sign != (-1) ** k:
        raise ValueError("sign prefactor does not match the depth")
    mvec = tuple(m for m, _ in reversed(groups))
    ts = [t for _, t in groups]
    xs: list[RatFunc] = []
    for i in range(1, k + 1):
        t_prev = ts[k - i - 1] if k - i - 1 >= 0 else one
        xs.append(t_prev / ts[k - i])
    return FuncExpr.li(mvec, xs)


# -- shuffle algebra of G functions ---------------------------------------------------


def g_shuffle_product(a: FuncExpr, b: FuncExpr) -> FuncExpr:
    """G(a⃗;x) G(b⃗;x) expanded as a sum of G's at the same argument."""
    if a.kind != "G" or b.kind != "G" or a.arg != b.arg:
        raise ValueError("expects two G functions at the same argument")
    terms = []
    for word, mult in shuffle_words(a.avec, b.avec).items():
        g = FuncExpr.gfun(word, a.arg)
        terms.extend([g] * mult if mult > 1 else [g])
    return FuncExpr.add(*[t for t in terms])


_tz_cache: dict[tuple, list[tuple[Fraction, int, tuple]]] = {}


def extract_trailing_zeros(avec: tuple) -> list[tuple[Fraction, int, tuple]]:
    """Rewrite G(avec; x) as sum of coeff * G(0⃗_j; x) * G(core; x), core ending nonzero.

    G(0⃗_j; x) is ln^j(x)/j!; cores never end in a zero index, so every term is
    series-friendly after rescaling.
    """
    avec = tuple(avec)
    if avec in _tz_cache:
        return _tz_cache[avec]
    if not avec or not _is_zero_entry(avec[-1]):
        return [(Fraction(1), 0, avec)]
    if all(_is_zero_entry(a) for a in avec):
        return [(Fraction(1), len(avec), ())]
    m = 0
    while _is_zero_entry(avec[-1 - m]):
        m += 1
    w = avec[:-m]
    zeros = avec[-m:]
    out: dict[tuple[int, tuple], Fraction] = {(m, w): Fraction(1)}
    for word, mult in shuffle_words(zeros, w).items():
        if word == avec:
            mult -= 1  # move the identity term to the left-hand side
        if mult == 0:
            continue
        for c, j, core in extract_trailing_zeros(word):
            key = (j, core)
            out[key] = out.get(key, Fraction(0)) - mult * c
    result = [(c, j, core) for (j, core), c in out.items() if c != 0]
    _tz_cache[avec] = result
    return result


def _is_zero_entry(a) -> bool:
    if isinstance(a, RatFunc):
        return a.is_zero()
    return a == 0


def g_shuffle_expand(e: FuncExpr) -> FuncExpr:
    """Expand products of G's at a common argument and extract trailing zeros."""
    if e.kind == "prod":
        gs = [p for p in e.parts if p.kind == "G"]
        rest = [p for p in e.parts if p.kind != "G"]
        while len(gs) >= 2:
            a, b = gs.pop(), gs.pop()
            combined = g_shuffle_product(a, b)
            if combined.kind == "sum":
                terms = [
                    g_shuffle_expand(FuncExpr.mul(*(rest + gs + [t])))
                    for t in combined.parts
                ]
                return FuncExpr.add(*terms)
            gs.append(combined)
        return FuncExpr.mul(*(rest + gs)) if gs or rest else e
    if e.kind == "sum":
        return FuncExpr.add(*[g_shuffle_expand(t) for t in e.parts])
    if e.kind == "G":
        pieces = extract_trailing_zeros(e.avec)
        if len(pieces) == 1 and pieces[0][1] == 0:
            return e
        variables = e.arg.vars
        zero = RatFunc.const(variables, 0)
        terms = []
        for c, j, core in pieces:
            factors = [FuncExpr.rat(c)]
            if j:
                factors.append(FuncExpr.gfun([zero] * j, e.arg))
            if core:
                factors.append(FuncExpr.gfun(core, e.arg))
            if not core and not j:
                factors.append(FuncExpr.rat(1))
            terms.append(FuncExpr.mul(*factors))
        return FuncExpr.add(*terms)
    return e


# -- Hoelder ------------------------------------------------------------------------


def hoelder_dual(e: FuncExpr) -> FuncExpr:
    """The p -> infinity Hoelder image of a G function at argument 1."""
    if e.kind != "G":
        raise PreconditionViolated("expected a G function")
    variables = e.arg.vars
    one = RatFunc.const(variables, 1)
    if e.arg != one:
        raise PreconditionViolated("Hoelder dual needs argument 1")
    if e.avec[0] == one:
        raise PreconditionViolated("leading index 1 is divergent")
    if e.avec[-1].is_zero():
        raise PreconditionViolated("trailing index 0")
    n = len(e.avec)
    dual = [one - a for a in reversed(e.avec)]
    g = FuncExpr.gfun(dual, one)
    return FuncExpr.mul(FuncExpr.rat((-1) ** n), g) if n % 2 else g


def hoelder_convolution(avec: Sequence[RatFunc], p: Fraction) -> FuncExpr:
    """G(a⃗;1) rewritten through the two-argument Hoelder convolution at finite p."""
    variables = avec[0].vars
    one = RatFunc.const(variables, 1)
    inv_p = RatFunc.const(variables, Fraction(1, 1) / Fraction(p))
    dual_arg = one - inv_p
    n = len(avec)
    terms = []
    for k in range(n + 1):
        left = [one - a for a in reversed(avec[:k])]
        right = list(avec[k:])
        factors: list[FuncExpr] = [FuncExpr.rat((-1) ** k)]
        if left:
            factors.append(FuncExpr.gfun(left, dual_arg))
        if right:
            factors.append(FuncExpr.gfun(right, inv_p))
        if len(factors) == 1:
            factors.append(FuncExpr.rat(1))
        terms.append(FuncExpr.mul(*factors))
    return FuncExpr.add(*terms)


# -- colored multiple zeta values -------------------------------------------------------


@dataclass(frozen=True)
class CMZVSpec:
    m: tuple[int, ...]
    s: tuple[int, ...]

    def __post_init__(self):
        if len(self.m) != len(self.s):
            raise ValueError("index and sign vectors differ in length")
        if any(mi < 1 for mi in self.m):
            raise ValueError("indices must be positive")
        if any(si not in (-1, 1) for si in self.s):
            raise ValueError("signs must be +-1")

    @property
    def weight(self) -> int:
        return sum(self.m)

    def is_convergent(self) -> bool:
        return not (self.m[0] == 1 and self.s[0] == 1)


def cmzv_symbol(spec: CMZVSpec, alphabet: Alphabet | None = None) -> Symbol:
    """Symbol of the alternating sum through its polygon, with the weight-sign prefactor."""
    if alphabet is None:
        alphabet = Alphabet(["2"], ("x",))
    variables = alphabet.variables
    shat = []
    acc = 1
    for si in spec.s:
        acc *= si
        shat.append(acc)
    avec: list[RatFunc] = []
    zero = RatFunc.const(variables, 0)
    for mi, hi in zip(spec.m, shat):
        avec.extend([zero] * (mi - 1))
        avec.append(RatFunc.const(variables, hi))
    p = Polygon.from_g(avec, 1, variables)
    return polygon_symbol(p, alphabet).scale((-1) ** spec.weight)


def cmzv_lambda(eps: Sequence[int]) -> Fraction:
    """Predicted coefficient of 2^(x)n for the polygon P(eps_1..eps_n, 1)."""
    n = len(eps)
    neg = [i + 1 for i, e in enumerate(eps) if e == -1]
    if not neg:
        return Fraction(0)
    a = n - max(neg)
    return Fraction((-1) ** a * _binom(n - 1, a))


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


# -- parsing / printing ------------------------------------------------------------------


class ExprParseError(ValueError):
    pass


def parse_expr(text: str, variables: Sequence[str] = ("x",)) -> FuncExpr:
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def peek() -> str:
        skip()
        return text[pos] if pos < n else ""

    def expect(ch: str):
        nonlocal pos
        if peek() != ch:
            raise ExprParseError(f"expected {ch!r} at position {pos} in {text!r}")
        pos += 1

    def read_int() -> int:
        nonlocal pos
        skip()
        start = pos
        if pos < n and text[pos] in "+-":
            pos += 1
        while pos < n and text[pos].isdigit():
            pos += 1
        if start == pos or text[start:pos] in "+-":
            raise ExprParseError(f"expected integer at position {start} in {text!r}")
        return int(text[start:pos])

    def read_name() -> str:
        nonlocal pos
        skip()
        start = pos
        while pos < n and (text[pos].isalnum() or text[pos] == "_"):
            pos += 1
        return text[start:pos]

    def read_rat_argument(closers: str) -> tuple[RatFunc, str]:
        """Rational-function argument up to an unnested closing character."""
        nonlocal pos
        skip()
        depth = 0
        start = pos
        while pos < n:
            ch = text[pos]
            if ch == "(" or ch == "[":
                depth += 1
            elif ch == ")" or ch == "]":
                if depth == 0 and ch in closers:
                    break
                depth -= 1
            elif depth == 0 and ch in closers:
                break
            pos += 1
        if pos >= n:
            raise ExprParseError(f"unterminated argument list in {text!r}")
        frag = text[start:pos]
        stop = text[pos]
        pos += 1
        return parse_ratfunc(frag, variables), stop

    def atom() -> FuncExpr:
        nonlocal pos
        ch = peek()
        if ch == "(":
            pos += 1
            e = expr()
            expect(")")
            return e
        if ch.isdigit():
            return FuncExpr.rat(read_int())
        name = read_name()
        if not name:
            raise ExprParseError(f"unexpected character {ch!r} at {pos} in {text!r}")
        if name == "G":
            expect("(")
            avec = []
            while True:
                a, stop = read_rat_argument(",;")
                avec.append(a)
                if stop == ";":
                    break
            arg, stop = read_rat_argument(")")
            return FuncExpr.gfun(avec, arg)
        if name == "P":
            # explicit polygon: P(d1,...,dn, root) is G(dn,...,d1; root)
            expect("(")
            decs = []
            while True:
                a, stop = read_rat_argument(",)")
                decs.append(a)
                if stop == ")":
                    break
            if len(decs) < 2:
                raise ExprParseError("a polygon needs at least two sides")
            return FuncExpr.gfun(list(reversed(decs[:-1])), decs[-1])
        if name == "H":
            expect("(")
            idx = []
            while True:
                v = read_int()
                idx.append(v)
                if peek() == ",":
                    pos += 1
                    continue
                break
            expect(";")
            arg, _ = read_rat_argument(")")
            return FuncExpr.hfun(idx, arg)
        if name == "Li":
            expect("[")
            mvec = [read_int()]
            while peek() == ",":
                pos += 1
                mvec.append(read_int())
            expect("]")
            expect("(")
            args = []
            while True:
                a, stop = read_rat_argument(",)")
                args.append(a)
                if stop == ")":
                    break
            return FuncExpr.li(mvec, args)
        if name == "log":
            expect("(")
            arg, _ = read_rat_argument(")")
            return _log_normalized(arg)
        if name in CONST_WEIGHTS:
            return FuncExpr.const(name)
        raise ExprParseError(f"unknown name {name!r} in {text!r}")

    def factor() -> FuncExpr:
        base = atom()
        if peek() == "^":
            nonlocal pos
            pos += 1
            return FuncExpr.pow_of(base, read_int())
        return base

    def unary() -> FuncExpr:
        if peek() == "-":
            nonlocal pos
            pos += 1
            return -unary()
        if peek() == "+":
            pos += 1
            return unary()
        return factor()

    def term() -> FuncExpr:
        value = unary()
        while peek() in "*/" and peek():
            op = peek()
            nonlocal pos
            pos += 1
            rhs = unary()
            if op == "*":
                value = FuncExpr.mul(value, rhs)
            else:
                if rhs.kind != "rat":
                    raise ExprParseError("division only by rational scalars")
                value = FuncExpr.mul(value, FuncExpr.rat(Fraction(1) / rhs.value))
        return value

    def expr() -> FuncExpr:
        value = term()
        while peek() in "+-" and peek():
            op = peek()
            nonlocal pos
            pos += 1
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    result = expr()
    skip()
    if pos != n:
        raise ExprParseError(f"trailing input at {pos} in {text!r}")
    return result


def _log_normalized(arg: RatFunc) -> FuncExpr:
    """log of a rational constant splits into prime logs (ln2 stays symbolic)."""
    if arg.is_constant():
        q = arg.constant_value()
        if q <= 0:
            raise ZeroArgument("log of a non-positive constant")
        if q == 1:
            return FuncExpr.rat(0)
        from .alphabet import _factor_int

        terms = []
        for p, m in _factor_int(q.numerator).items():
            terms.append(FuncExpr.mul(FuncExpr.rat(m), _prime_log(p)))
        for p, m in _factor_int(q.denominator).items():
            terms.append(FuncExpr.mul(FuncExpr.rat(-m), _prime_log(p)))
        return FuncExpr.add(*terms)
    return FuncExpr.log_of(arg)


def _prime_log(p: int) -> FuncExpr:
    if p == 2:
        return FuncExpr.const("ln2")
    raise ValueError(f"no named constant for log({p})")


def format_expr(e: FuncExpr) -> str:
    k = e.kind
    if k == "rat":
        q = e.value
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    if k == "const":
        return e.name
    if k == "log":
        return f"log({e.arg})"
    if k == "G":
        return "G(" + ",".join(str(a) for a in e.avec) + f"; {e.arg})"
    if k == "H":
        return "H(" + ",".join(str(a) for a in e.avec) + f"; {e.arg})"
    if k == "Li":
        return "Li[" + ",".join(map(str, e.mvec)) + "](" + ", ".join(str(a) for a in e.args) + ")"
    if k == "sum":
        out = ""
        for t in e.parts:
            s = format_expr(t)
            if out:
                out += " - " + s[1:] if s.startswith("-") else " + " + s
            else:
                out = s
        return out
    if k == "prod":
        parts = []
        for t in e.parts:
            s = format_expr(t)
            if t.kind == "sum" or (t.kind == "rat" and t.value < 0):
                s = f"({s})"
            parts.append(s)
        return "*".join(parts)
    if k == "pow":
        s = format_expr(e.base)
        if e.base.kind in ("sum", "prod"):
            s = f"({s})"
        return f"{s}^{e.power}"
    raise ValueError(k)
