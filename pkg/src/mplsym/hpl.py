"""Harmonic polylogarithms: alphabet, argument table, spanning set, reduction.

The alphabet is {2, x, 1-x, 1+x}.  The spanning set consists of logs, Li_2,
Li_3, Li_4 at the tabulated arguments plus three depth-two functions; indices
with only {0,1} entries reduce over the smaller subset.  Reductions run the
partition induction against the cached spanning-set symbols and finish by
fixing kernel constants numerically against the series evaluation of the HPL
itself.  The bundled corpus of reference reductions is compared by symbol and
by value, never textually.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

import mpmath as mp

from .alphabet import Alphabet, candidate_args_depth1
from .exact import RatFunc
from .expr import FuncExpr, format_expr, parse_expr, symbol_of
from .integrate import (
    AnsatzBasis,
    BasisElement,
    IntegrationResult,
    KernelElement,
    default_kernel_basis,
    fix_constants,
    integrate_symbol,
)
from .numeric import eval_g
from .polygon import Polygon, polygon_symbol
from .tensor import Symbol, expand_factor

VARIABLES = ("x",)


@lru_cache(maxsize=1)
def hpl_alphabet() -> Alphabet:
    return Alphabet(["2", "x", "1-x", "1+x"], VARIABLES)


# -- Table of allowed arguments -------------------------------------------------------


@dataclass(frozen=True)
class Table2Row:
    sign: int
    alpha: int
    beta: int
    gamma: int
    delta: int
    value: RatFunc
    is_constant: bool


def table2_enumerate(bound: int = 4, const_bound: int = 2) -> list[Table2Row]:
    """All span elements R with 1 - R back in the span, at the default bounds."""
    alphabet = hpl_alphabet()
    idx = {label: i for i, label in enumerate(alphabet.labels)}
    rows = []
    for arg in candidate_args_depth1(alphabet, bound, const_bound=const_bound):
        d = arg.vector.as_dict()
        value = arg.realize(alphabet)
        rows.append(
            Table2Row(
                sign=arg.sign,
                alpha=d.get(idx["x"], 0),
                beta=d.get(idx["1-x"], 0),
                gamma=d.get(idx["1+x"], 0),
                delta=d.get(idx["2"], 0),
                value=value,
                is_constant=value.is_constant(),
            )
        )
    return rows


# -- spanning set ---------------------------------------------------------------------

_B1 = ["log(x)", "log(1-x)", "log(1+x)", "ln2"]
_B2 = ["Li[2](x)", "Li[2](-x)", "Li[2]((1-x)/2)"]
_B3 = [
    "Li[3](x)",
    "Li[3](-x)",
    "Li[3](1-x)",
    "Li[3](1/(1+x))",
    "Li[3]((1+x)/2)",
    "Li[3]((1-x)/2)",
    "Li[3]((1-x)/(1+x))",
    "Li[3](2*x/(x-1))",
]
_B4 = [
    "Li[4](x)",
    "Li[4](-x)",
    "Li[4](1-x)",
    "Li[4](1/(1+x))",
    "Li[4](x/(x-1))",
    "Li[4](x/(x+1))",
    "Li[4]((1+x)/2)",
    "Li[4]((1-x)/2)",
    "Li[4]((1-x)/(1+x))",
    "Li[4]((x-1)/(x+1))",
    "Li[4](2*x/(x+1))",
    "Li[4](2*x/(x-1))",
    "Li[4](1-x^2)",
    "Li[4](x^2/(x^2-1))",
    "Li[4](4*x/(x+1)^2)",
    "Li[2,2](-1,x)",
    "Li[2,2](1/2, 2*x/(x+1))",
    "Li[2,2](1/2, 2*x/(x-1))",
]

# indices (1-based) of the subset that suffices when all entries lie in {0,1}
_RESTRICTED = {1: [1, 2], 2: [1], 3: [1, 3], 4: [1, 3, 5]}


def _elements(texts: Sequence[str], alphabet: Alphabet) -> list[BasisElement]:
    out = []
    for t in texts:
        e = parse_expr(t, VARIABLES)
        out.append(BasisElement(t, e, symbol_of(e, alphabet)))
    return out


@lru_cache(maxsize=None)
def spanning_set(restricted: bool = False) -> AnsatzBasis:
    alphabet = hpl_alphabet()
    catalog = {}
    for w, texts in ((1, _B1), (2, _B2), (3, _B3), (4, _B4)):
        if restricted:
            texts = [texts[i - 1] for i in _RESTRICTED[w]]
        catalog[w] = _elements(texts, alphabet)
    return AnsatzBasis(catalog, alphabet)


@lru_cache(maxsize=None)
def kernel_basis(weight: int, restricted: bool = False) -> tuple[KernelElement, ...]:
    b1_texts = [_B1[i - 1] for i in _RESTRICTED[1]] if restricted else _B1
    b2_texts = [_B2[i - 1] for i in _RESTRICTED[2]] if restricted else _B2
    b1 = [parse_expr(t, VARIABLES) for t in b1_texts]
    b2 = [parse_expr(t, VARIABLES) for t in b2_texts]
    return tuple(default_kernel_basis(weight, b1, b2))


# -- HPL symbols ---------------------------------------------------------------------


def hpl_symbol(index: Sequence[int]) -> Symbol:
    """Symbol of H(a⃗; x): compact tensor for {0,1} entries, polygon otherwise."""
    index = [int(a) for a in index]
    if any(a not in (-1, 0, 1) for a in index):
        raise ValueError("HPL indices lie in {-1, 0, 1}")
    alphabet = hpl_alphabet()
    n_plus = sum(1 for a in index if a == 1)
    if all(a in (0, 1) for a in index):
        x = RatFunc.var(VARIABLES, "x")
        out = Symbol.unit()
        for a in reversed(index):
            factor = expand_factor(RatFunc.const(VARIABLES, a) - x, alphabet)
            out = out.tensor(factor)
        return out.scale((-1) ** n_plus)
    p = Polygon.from_g([Fraction(a) for a in index], RatFunc.var(VARIABLES, "x"), VARIABLES)
    return polygon_symbol(p, alphabet).scale((-1) ** n_plus)


def hpl_expr(index: Sequence[int]) -> FuncExpr:
    return FuncExpr.hfun(list(index), RatFunc.var(VARIABLES, "x"))


def hpl_value(index: Sequence[int], x: Fraction, prec: int = 40) -> mp.mpf:
    """Direct nested-series value of H(a⃗; x)."""
    n_plus = sum(1 for a in index if a == 1)
    v = eval_g([Fraction(a) for a in index], Fraction(x), prec)
    with mp.workdps(prec + 10):
        return -v if n_plus % 2 else v


# -- reduction -----------------------------------------------------------------------


@dataclass
class ReductionResult:
    index: tuple[int, ...]
    expression: FuncExpr
    integration: IntegrationResult
    constants: list[tuple[str, Fraction]]
    restricted: bool

    def expression_text(self) -> str:
        return format_expr(self.expression)


def hpl_reduce(index: Sequence[int], prec: int = 40) -> ReductionResult:
    """Express H(a⃗;x) over the spanning set, constants included."""
    index = tuple(int(a) for a in index)
    w = len(index)
    if w > 4:
        raise ValueError("spanning set covers weight <= 4")
    alphabet = hpl_alphabet()
    restricted = all(a in (0, 1) for a in index)
    basis = spanning_set(restricted)
    s = hpl_symbol(index)
    result = integrate_symbol(s, alphabet, basis, check_integrability=False)
    kernel = list(kernel_basis(w, restricted))

    def target(x: Fraction, p: int) -> mp.mpf:
        return hpl_value(index, x, p)

    fixed, consts = fix_constants(target, result.expression, kernel, prec=prec)
    return ReductionResult(index, fixed, result, consts, restricted)


# -- golden corpus --------------------------------------------------------------------


@lru_cache(maxsize=1)
def golden_corpus() -> dict[tuple[int, ...], FuncExpr]:
    data = resources.files("mplsym.data").joinpath("hpl_reductions.json").read_text()
    out = {}
    for row in json.loads(data):
        out[tuple(row["index"])] = parse_expr(row["expression"], VARIABLES)
    return out


def all_indices(weight: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for _ in range(weight):
        out = [t + (a,) for t in out for a in (-1, 0, 1)]
    return out
