"""FastAPI surface over the symbol engine.

The service keeps the expensive state (spanning-set symbols, dissection
skeletons, level solvers) warm in process caches, so one long-running worker
can serve many reduction and identity-check requests.  The CLI drives these
same handlers, either in process or over HTTP.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import hpl
from .alphabet import Alphabet, NotFactorable
from .exact import PolyParseError
from .expr import CMZVSpec, ExprParseError, FuncExpr, cmzv_symbol, format_expr, parse_expr, symbol_of
from .integrate import ReconstructionFailed, Unsolvable, build_ansatz, integrate_symbol, fix_constants
from .numeric import EvalReport, OutOfRegion, eval_mpl
from .polygon import enumerate_maximal_dissections
from .tensor import Symbol, integrability_check

import mpmath as mp


class SymbolTerm(BaseModel):
    word: list[int]
    coeff: str


class SymbolDoc(BaseModel):
    weight: int
    alphabet: list[str]
    terms: list[SymbolTerm]


class SymbolRequest(BaseModel):
    expression: str
    alphabet: list[str] = Field(default=["2", "x", "1-x", "1+x"])
    variables: list[str] = Field(default=["x"])


class SymbolResponse(BaseModel):
    symbol: SymbolDoc
    pretty: str
    integrable: bool
    vacuously_integrable: bool


class IntegrateRequest(BaseModel):
    expression: str | None = None
    symbol: SymbolDoc | None = None
    alphabet: list[str] = Field(default=["2", "x", "1-x", "1+x"])
    variables: list[str] = Field(default=["x"])
    basis: str = "hpl"  # "hpl", "hpl-restricted", or "generic"
    bound: int = 4
    precision: int = 40
    fix_constants_against: str | None = None  # expression text of the target


class LevelDoc(BaseModel):
    partition: list[int]
    coefficients: dict[str, str]


class IntegrateResponse(BaseModel):
    expression: str
    levels: list[LevelDoc]
    residual_terms: int
    constants: dict[str, str] = Field(default_factory=dict)


class CheckIdentityRequest(BaseModel):
    lhs: str
    rhs: str
    alphabet: list[str] = Field(default=["2", "x", "1-x", "1+x"])
    variables: list[str] = Field(default=["x"])
    numeric: bool = False
    points: list[str] = Field(default=["1/4", "1/3", "1/2"])
    precision: int = 40


class CheckIdentityResponse(BaseModel):
    equal: bool
    layer: str
    detail: str = ""


class HplReduceRequest(BaseModel):
    index: list[int]
    precision: int = 40
    verify_points: list[str] = Field(default=["1/4", "1/3", "1/2"])


class HplReduceResponse(BaseModel):
    index: list[int]
    expression: str
    levels: list[LevelDoc]
    constants: dict[str, str]
    restricted_basis: bool
    verification: dict[str, str]
    verified: bool


class DissectionDoc(BaseModel):
    arrows: list[dict[str, int]]
    sign: int


class DissectionsResponse(BaseModel):
    n_sides: int
    count: int
    dissections: list[DissectionDoc] | None = None


class Table2Response(BaseModel):
    rows: list[dict]


class CmzvRequest(BaseModel):
    m: list[int]
    s: list[int]


class EvalRequest(BaseModel):
    expression: str
    x: str
    precision: int = 40
    variables: list[str] = Field(default=["x"])


class EvalResponse(BaseModel):
    value: str
    precision: int
    truncation_order: int


app = FastAPI(title="mplsym", description="symbols of multiple polylogarithms and their integration")


def _alphabet(labels: list[str], variables: list[str]) -> Alphabet:
    try:
        return Alphabet(labels, tuple(variables))
    except (PolyParseError, ValueError) as e:
        raise HTTPException(status_code=422, detail=f"bad alphabet: {e}")


def _parse(expression: str, variables: list[str]) -> FuncExpr:
    try:
        return parse_expr(expression, tuple(variables))
    except (ExprParseError, PolyParseError, ValueError) as e:
        raise HTTPException(status_code=422, detail=f"parse error: {e}")


def _symbol_doc(s: Symbol, alphabet: Alphabet) -> SymbolDoc:
    doc = s.to_json(alphabet)
    return SymbolDoc(
        weight=doc["weight"],
        alphabet=doc["alphabet"],
        terms=[SymbolTerm(**t) for t in doc["terms"]],
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/symbol", response_model=SymbolResponse)
def symbol_endpoint(req: SymbolRequest) -> SymbolResponse:
    alphabet = _alphabet(req.alphabet, req.variables)
    e = _parse(req.expression, req.variables)
    try:
        s = symbol_of(e, alphabet)
    except NotFactorable as err:
        raise HTTPException(status_code=422, detail=f"not factorable over the alphabet: {err}")
    rep = integrability_check(s, alphabet)
    return SymbolResponse(
        symbol=_symbol_doc(s, alphabet),
        pretty=s.pretty(alphabet),
        integrable=rep.ok,
        vacuously_integrable=rep.vacuous,
    )


@app.post("/integrate", response_model=IntegrateResponse)
def integrate_endpoint(req: IntegrateRequest) -> IntegrateResponse:
    if req.symbol is not None and req.symbol.alphabet:
        alphabet = _alphabet(req.symbol.alphabet, req.variables)
    else:
        alphabet = _alphabet(req.alphabet, req.variables)
    if req.symbol is not None:
        s = Symbol(
            req.symbol.weight,
            {tuple(t.word): Fraction(t.coeff) for t in req.symbol.terms},
        )
    elif req.expression is not None:
        s = symbol_of(_parse(req.expression, req.variables), alphabet)
    else:
        raise HTTPException(status_code=422, detail="provide an expression or a symbol")
    if req.basis in ("hpl", "hpl-restricted"):
        if list(alphabet.labels) != list(hpl.hpl_alphabet().labels):
            raise HTTPException(
                status_code=422,
                detail="the hpl basis requires the alphabet ['2', 'x', '1-x', '1+x']",
            )
        basis = hpl.spanning_set(req.basis == "hpl-restricted")
    else:
        basis = build_ansatz(alphabet, max(s.weight, 1), bound=req.bound)
    try:
        result = integrate_symbol(s, alphabet, basis)
    except Unsolvable as err:
        raise HTTPException(status_code=422, detail=str(err))
    constants = {}
    expression = result.expression
    if req.fix_constants_against is not None:
        target = _parse(req.fix_constants_against, req.variables)
        kernel = list(hpl.kernel_basis(s.weight)) if s.weight >= 2 else []
        try:
            expression, consts = fix_constants(target, result.expression, kernel, prec=req.precision)
        except ReconstructionFailed as err:
            raise HTTPException(status_code=422, detail=str(err))
        constants = {label: str(c) for label, c in consts}
    return IntegrateResponse(
        expression=format_expr(expression),
        levels=[
            LevelDoc(partition=list(p.parts), coefficients={l: str(c) for l, c in cs})
            for p, cs in result.levels
        ],
        residual_terms=len(result.residual_symbol.terms),
        constants=constants,
    )


@app.post("/check-identity", response_model=CheckIdentityResponse)
def check_identity_endpoint(req: CheckIdentityRequest) -> CheckIdentityResponse:
    alphabet = _alphabet(req.alphabet, req.variables)
    lhs = _parse(req.lhs, req.variables)
    rhs = _parse(req.rhs, req.variables)
    try:
        sl = symbol_of(lhs, alphabet)
        sr = symbol_of(rhs, alphabet)
    except NotFactorable as err:
        raise HTTPException(status_code=422, detail=f"not factorable over the alphabet: {err}")
    if sl.weight != sr.weight or sl != sr:
        return CheckIdentityResponse(equal=False, layer="symbol", detail="symbols differ")
    if not req.numeric:
        return CheckIdentityResponse(equal=True, layer="symbol", detail="symbols agree")
    prec = req.precision
    with mp.workdps(prec + 10):
        tol = mp.mpf(10) ** (-(prec - 10))
        for text in req.points:
            x = Fraction(text)
            try:
                d = abs(eval_mpl(lhs, x, prec) - eval_mpl(rhs, x, prec))
            except (OutOfRegion, ValueError) as err:
                raise HTTPException(status_code=422, detail=f"evaluation failed at x={text}: {err}")
            if d > tol:
                return CheckIdentityResponse(
                    equal=False, layer="numeric",
                    detail=f"values differ by {mp.nstr(d, 5)} at x={text} (symbols agree)",
                )
    return CheckIdentityResponse(equal=True, layer="numeric", detail="symbols and values agree")


@app.post("/hpl-reduce", response_model=HplReduceResponse)
def hpl_reduce_endpoint(req: HplReduceRequest) -> HplReduceResponse:
    try:
        result = hpl.hpl_reduce(req.index, prec=req.precision)
    except (Unsolvable, ReconstructionFailed, ValueError) as err:
        raise HTTPException(status_code=422, detail=str(err))
    verification = {}
    verified = True
    prec = req.precision
    with mp.workdps(prec + 10):
        tol = mp.mpf(10) ** (-25)
        for text in req.verify_points:
            x = Fraction(text)
            d = abs(hpl.hpl_value(req.index, x, prec) - eval_mpl(result.expression, x, prec))
            verification[text] = mp.nstr(d, 5)
            if d > tol:
                verified = False
    sym_ok = symbol_of(result.expression, hpl.hpl_alphabet()) == hpl.hpl_symbol(req.index)
    return HplReduceResponse(
        index=list(req.index),
        expression=result.expression_text(),
        levels=[
            LevelDoc(partition=list(p.parts), coefficients={l: str(c) for l, c in cs})
            for p, cs in result.integration.levels
        ],
        constants={l: str(c) for l, c in result.constants},
        restricted_basis=result.restricted,
        verification=verification,
        verified=verified and sym_ok,
    )


@app.get("/dissections/{n_sides}", response_model=DissectionsResponse)
def dissections_endpoint(n_sides: int, include_arrows: bool = False) -> DissectionsResponse:
    if n_sides < 2 or n_sides > 12:
        raise HTTPException(status_code=422, detail="sides must be between 2 and 12")
    ds = enumerate_maximal_dissections(n_sides)
    docs = None
    if include_arrows:
        docs = [
            DissectionDoc(
                arrows=[{"from_vertex": a.from_vertex, "to_side": a.to_side} for a in d.arrows],
                sign=d.sign(),
            )
            for d in ds
        ]
    return DissectionsResponse(n_sides=n_sides, count=len(ds), dissections=docs)


@app.get("/table2", response_model=Table2Response)
def table2_endpoint(bound: int = 4, const_bound: int = 2) -> Table2Response:
    rows = hpl.table2_enumerate(bound, const_bound)
    return Table2Response(
        rows=[
            {
                "sign": r.sign,
                "alpha": r.alpha,
                "beta": r.beta,
                "gamma": r.gamma,
                "delta": r.delta,
                "value": str(r.value),
                "constant": r.is_constant,
            }
            for r in rows
        ]
    )


@app.post("/cmzv-symbol", response_model=SymbolDoc)
def cmzv_endpoint(req: CmzvRequest) -> SymbolDoc:
    try:
        spec = CMZVSpec(tuple(req.m), tuple(req.s))
    except ValueError as err:
        raise HTTPException(status_code=422, detail=str(err))
    alphabet = Alphabet(["2"], ("x",))
    s = cmzv_symbol(spec, alphabet)
    return _symbol_doc(s, alphabet)


@app.post("/eval", response_model=EvalResponse)
def eval_endpoint(req: EvalRequest) -> EvalResponse:
    e = _parse(req.expression, req.variables)
    try:
        x = Fraction(req.x)
    except ValueError:
        raise HTTPException(status_code=422, detail=f"bad rational {req.x!r}")
    report = EvalReport()
    try:
        v = eval_mpl(e, x, req.precision, report)
    except (OutOfRegion, ValueError, ZeroDivisionError) as err:
        raise HTTPException(status_code=422, detail=f"evaluation failed: {err}")
    with mp.workdps(req.precision + 10):
        text = mp.nstr(v, req.precision)
    return EvalResponse(value=text, precision=req.precision, truncation_order=report.max_order())
