"""Integrating symbols back to functions: partition-filtered exact solves.

The induction walks the non-increasing partitions of the weight in descending
lexicographic order.  At level lambda the residual symbol is projected with
the blockwise projector and matched against the projected symbols of products
of spanning functions whose weights realize lambda; the exact rational solve
fixes those coefficients, the full (unprojected) contribution is subtracted,
and the induction continues.  What the symbol cannot see is fixed afterwards
by evaluating the difference to the target at sample points and reconstructing
rational coefficients of kernel elements (zeta values, powers of pi, the
Li4(1/2) combination).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath as mp

from .alphabet import Alphabet, SignedArg, candidate_args_depth1, candidate_args_depthk
from .exact import RatFunc
from .expr import FuncExpr, format_expr, symbol_of, g_to_li
from .linalg import LinearSolver
from .numeric import constant, eval_mpl, rational_reconstruct
from .tensor import Partition, Symbol, partitions_desc, project_partition, shuffle

DEFAULT_MAXDEN = 1 << 16


class NotIntegrable(ValueError):
    def __init__(self, report):
        super().__init__(f"symbol fails the integrability condition: {report}")
        self.report = report


class Unsolvable(ValueError):
    def __init__(self, partition, projected_residual: Symbol):
        super().__init__(f"no spanning-set combination matches at level {partition}")
        self.partition = partition
        self.projected_residual = projected_residual


class ReconstructionFailed(ValueError):
    pass


@dataclass
class BasisElement:
    label: str
    expr: FuncExpr
    symbol: Symbol


class AnsatzBasis:
    """Pure-weight catalogs plus cached product slices per partition."""

    def __init__(self, catalog: dict[int, list[BasisElement]], alphabet: Alphabet):
        self.catalog = catalog
        self.alphabet = alphabet
        self._slices: dict[tuple[int, ...], list[BasisElement]] = {}
        self._solvers: dict[tuple, LinearSolver | None] = {}

    def max_weight(self) -> int:
        return max(self.catalog)

    def slice_for(self, lam: Partition) -> list[BasisElement]:
        key = tuple(lam.parts)
        if key in self._slices:
            return self._slices[key]
        groups: list[list[tuple[BasisElement, ...]]] = []
        for part, mult in _run_lengths(lam.parts):
            pool = self.catalog.get(part, [])
            groups.append(list(itertools.combinations_with_replacement(pool, mult)))
        out: list[BasisElement] = []
        for combo in itertools.product(*groups):
            elems = [e for group in combo for e in group]
            if len(elems) == 1:
                out.append(elems[0])
                continue
            sym = elems[0].symbol
            for e in elems[1:]:
                sym = shuffle(sym, e.symbol)
            expr = FuncExpr.mul(*[e.expr for e in elems])
            label = "*".join(e.label for e in elems)
            out.append(BasisElement(label, expr, sym))
        self._slices[key] = out
        return out


def _run_lengths(parts: Sequence[int]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for p in parts:
        if out and out[-1][0] == p:
            out[-1] = (p, out[-1][1] + 1)
        else:
            out.append((p, 1))
    return out


# -- generic basis construction -------------------------------------------------------


def build_ansatz(
    alphabet: Alphabet,
    weight: int,
    bound: int = 4,
    const_bound: int = 2,
) -> AnsatzBasis:
    """Catalog from scratch: logs of letters, classical Li at span arguments,
    and depth-two functions at difference-compatible pairs (weight 4)."""
    depth1 = candidate_args_depth1(alphabet, bound, const_bound=const_bound)
    nonconst_args = []
    for arg in depth1:
        f = arg.realize(alphabet)
        if not f.is_constant():
            nonconst_args.append(f)
    catalog: dict[int, list[BasisElement]] = {}
    logs = []
    for i, letter in enumerate(alphabet.letters):
        e = FuncExpr.log_of(RatFunc(letter)) if not letter.is_constant() else _const_log(letter)
        if e is not None:
            logs.append(BasisElement(f"log({alphabet.labels[i]})", e, symbol_of(e, alphabet)))
    catalog[1] = logs
    for w in range(2, weight + 1):
        elems = []
        for f in nonconst_args:
            e = FuncExpr.li((w,), (f,))
            elems.append(BasisElement(f"Li{w}({f})", e, symbol_of(e, alphabet)))
        if w == 4:
            for tup in candidate_args_depthk(depth1, 2, alphabet):
                try:
                    li = _li22_from_gside(tup.entries, alphabet)
                except (ValueError, ZeroDivisionError):
                    continue
                if any(a.is_constant() and abs(a.constant_value()) >= 1 for a in li.args):
                    continue
                elems.append(BasisElement(format_expr(li), li, symbol_of(li, alphabet)))
        catalog[w] = elems
    return AnsatzBasis(catalog, alphabet)


def _const_log(letter) -> FuncExpr | None:
    v = letter.constant_value()
    if v == 2:
        return FuncExpr.const("ln2")
    return None


def _li22_from_gside(entries: Sequence[SignedArg], alphabet: Alphabet) -> FuncExpr:
    t1 = entries[0].realize(alphabet)
    t2 = entries[1].realize(alphabet)
    one = RatFunc.const(alphabet.variables, 1)
    g = FuncExpr.gfun([RatFunc.const(alphabet.variables, 0), t1,
                       RatFunc.const(alphabet.variables, 0), t2], one)
    return g_to_li(g)


# -- the partition induction ----------------------------------------------------------


def _level_solver(basis: AnsatzBasis, lam: Partition) -> tuple[LinearSolver, list[BasisElement], list[tuple]] | None:
    key = tuple(lam.parts)
    cached = basis._solvers.get(key)
    if cached is not None:
        return cached
    elements = basis.slice_for(lam)
    if not elements:
        basis._solvers[key] = None
        return None
    projected = [project_partition(lam, e.symbol) for e in elements]
    words = sorted({w for p in projected for w in p.terms})
    word_index = {w: i for i, w in enumerate(words)}
    columns = []
    for p in projected:
        col = [Fraction(0)] * len(words)
        for w, c in p.terms.items():
            col[word_index[w]] = c
        columns.append(col)
    solver = LinearSolver(columns)
    result = (solver, elements, words)
    basis._solvers[key] = result
    return result


def solve_partition_level(
    residual: Symbol, lam: Partition, basis: AnsatzBasis
) -> list[tuple[BasisElement, Fraction]]:
    """Exact coefficients with Pi_lambda(residual) = sum c_i Pi_lambda(S(b_i))."""
    projected = project_partition(lam, residual)
    prepared = _level_solver(basis, lam)
    if prepared is None:
        if projected.is_zero():
            return []
        raise Unsolvable(lam, projected)
    solver, elements, words = prepared
    index = {w: i for i, w in enumerate(words)}
    rhs = [Fraction(0)] * len(words)
    for w, c in projected.terms.items():
        if w not in index:
            raise Unsolvable(lam, projected)
        rhs[index[w]] = c
    sol = solver.solve(rhs)
    if sol is None:
        raise Unsolvable(lam, projected)
    return [(e, c) for e, c in zip(elements, sol) if c != 0]


@dataclass
class IntegrationResult:
    expression: FuncExpr
    residual_symbol: Symbol
    levels: list[tuple[Partition, list[tuple[str, Fraction]]]] = field(default_factory=list)

    def level_coeffs(self, lam) -> dict[str, Fraction]:
        for p, coeffs in self.levels:
            if tuple(p.parts) == tuple(lam):
                return dict(coeffs)
        return {}


def integrate_symbol(
    s: Symbol,
    alphabet: Alphabet,
    basis: AnsatzBasis,
    check_integrability: bool = True,
) -> IntegrationResult:
    """Walk the partitions in descending order, peeling one layer per level."""
    from .tensor import integrability_check

    if check_integrability:
        report = integrability_check(s, alphabet)
        if not report.ok:
            raise NotIntegrable(report)
    if s.weight == 0 or s.is_zero():
        return IntegrationResult(FuncExpr.rat(0), Symbol.zero(s.weight))
    residual = s
    levels = []
    pieces: list[FuncExpr] = []
    for lam in partitions_desc(s.weight):
        coeffs = solve_partition_level(residual, lam, basis)
        for e, c in coeffs:
            residual = residual - e.symbol.scale(c)
            pieces.append(FuncExpr.mul(FuncExpr.rat(c), e.expr))
        levels.append((lam, [(e.label, c) for e, c in coeffs]))
        if not project_partition(lam, residual).is_zero():
            raise Unsolvable(lam, project_partition(lam, residual))
    if not residual.is_zero():
        raise Unsolvable(partitions_desc(s.weight)[-1], residual)
    expr = FuncExpr.add(*pieces) if pieces else FuncExpr.rat(0)
    return IntegrationResult(expr, residual, levels)


# -- kernel constants ------------------------------------------------------------------


@dataclass
class KernelElement:
    """constant multiplier (as named powers) times an x-dependent product."""

    label: str
    multiplier: tuple[tuple[str, int], ...]  # e.g. (("pi", 2), ("ln2", 1))
    x_part: tuple[FuncExpr, ...]             # non-constant factors; () = constant

    def multiplier_value(self, prec: int) -> mp.mpf:
        with mp.workdps(prec + 10):
            v = mp.mpf(1)
            for name, k in self.multiplier:
                if name == "li4half_combo":
                    v *= constant("Li4half", prec) + constant("ln2", prec) ** 4 / 24
                else:
                    v *= constant(name, prec) ** k
            return v

    def multiplier_expr(self) -> FuncExpr:
        factors = []
        for name, k in self.multiplier:
            if name == "li4half_combo":
                combo = FuncExpr.add(
                    FuncExpr.const("Li4half"),
                    FuncExpr.mul(FuncExpr.rat(Fraction(1, 24)),
                                 FuncExpr.pow_of(FuncExpr.const("ln2"), 4)),
                )
                factors.append(combo)
            else:
                factors.append(FuncExpr.pow_of(FuncExpr.const(name), k))
        return FuncExpr.mul(*factors) if factors else FuncExpr.rat(1)

    def full_expr(self, coeff: Fraction) -> FuncExpr:
        return FuncExpr.mul(FuncExpr.rat(coeff), self.multiplier_expr(), *self.x_part)


def default_kernel_basis(weight: int, b1: list[FuncExpr], b2: list[FuncExpr]) -> list[KernelElement]:
    """The listed kernel generators: MZV-type constants against spanning factors.

    b1: weight-one functions (logs; a constant ln2 entry is detected and moved
    into the multiplier).  b2: weight-two functions.
    """
    def split_b1(e: FuncExpr) -> tuple[int, FuncExpr | None]:
        if e.kind == "const" and e.name == "ln2":
            return 1, None
        return 0, e

    out: list[KernelElement] = []
    if weight == 2:
        out.append(KernelElement("pi^2", (("pi", 2),), ()))
    elif weight == 3:
        out.append(KernelElement("zeta3", (("zeta3", 1),), ()))
        for e in b1:
            ln2s, xe = split_b1(e)
            mult = (("pi", 2),) + ((("ln2", ln2s),) if ln2s else ())
            out.append(KernelElement(f"pi^2*{format_expr(e)}", mult, (xe,) if xe else ()))
    elif weight == 4:
        out.append(KernelElement("pi^4", (("pi", 4),), ()))
        out.append(KernelElement("Li4half+ln2^4/24", (("li4half_combo", 1),), ()))
        for e in b1:
            ln2s, xe = split_b1(e)
            mult = (("zeta3", 1),) + ((("ln2", ln2s),) if ln2s else ())
            out.append(KernelElement(f"zeta3*{format_expr(e)}", mult, (xe,) if xe else ()))
        for e in b2:
            out.append(KernelElement(f"pi^2*{format_expr(e)}", (("pi", 2),), (e,)))
        for e1, e2 in itertools.combinations_with_replacement(b1, 2):
            n2 = 0
            xs = []
            for e in (e1, e2):
                k, xe = split_b1(e)
                n2 += k
                if xe is not None:
                    xs.append(xe)
            mult = (("pi", 2),) + ((("ln2", n2),) if n2 else ())
            out.append(
                KernelElement(
                    f"pi^2*{format_expr(e1)}*{format_expr(e2)}", mult, tuple(xs)
                )
            )
    return out


def default_sample_points(count: int) -> list[Fraction]:
    """Rationals in [1/5, 1/2]: safe for every spanning-set argument."""
    pts = [Fraction(1, 5), Fraction(1, 4), Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)]
    q = 7
    while len(pts) < count:
        for p in range(1, q):
            f = Fraction(p, q)
            if Fraction(1, 5) <= f <= Fraction(1, 2) and f not in pts:
                pts.append(f)
                if len(pts) >= count:
                    break
        q += 1
    return pts[:count]


_direction_cache: dict[tuple[str, Fraction, int], mp.mpf] = {}


def _eval_cached(e: FuncExpr, x: Fraction, prec: int) -> mp.mpf:
    key = (format_expr(e), x, prec)
    if key not in _direction_cache:
        _direction_cache[key] = eval_mpl(e, x, prec)
    return _direction_cache[key]


def fix_constants(
    target: FuncExpr | Callable[[Fraction, int], mp.mpf],
    candidate: FuncExpr,
    kernel: Sequence[KernelElement],
    sample_points: Sequence[Fraction] | None = None,
    prec: int = 40,
    maxden: int = DEFAULT_MAXDEN,
) -> tuple[FuncExpr, list[tuple[str, Fraction]]]:
    """Fix the symbol-invisible constants of candidate against the target.

    The target/candidate difference is fit over the x-dependent directions of
    the kernel ansatz; within each direction the aggregated value is split
    over its transcendental multipliers by integer-relation search, yielding
    exact rational coefficients.  The reconstructed combination must reproduce
    the difference to 10^-(prec-10) at every sample point.
    """
    if sample_points is None:
        sample_points = default_sample_points(max(len(kernel) + 3, 8))
    if len(sample_points) < len(kernel) + 3 and len(kernel) > 0:
        sample_points = default_sample_points(len(kernel) + 3)

    def target_value(x: Fraction) -> mp.mpf:
        if callable(target):
            return target(x, prec)
        return _eval_cached(target, x, prec)

    directions: dict[tuple[str, ...], list[KernelElement]] = {}
    for el in kernel:
        key = tuple(sorted(format_expr(e) for e in el.x_part))
        directions.setdefault(key, []).append(el)
    dir_keys = sorted(directions)

    with mp.workdps(prec + 10):
        diffs = [target_value(x) - _eval_cached(candidate, x, prec) for x in sample_points]
        if not kernel:
            if any(abs(d) > mp.mpf(10) ** (-(prec - 10)) for d in diffs):
                raise ReconstructionFailed("difference is nonzero but no kernel given")
            return candidate, []
        rows = []
        for x in sample_points:
            row = []
            for key in dir_keys:
                el = directions[key][0]
                v = mp.mpf(1)
                for e in el.x_part:
                    v *= _eval_cached(e, x, prec)
                row.append(v)
            rows.append(row)
        a = mp.matrix(rows)
        b = mp.matrix(diffs)
        gamma = mp.qr_solve(a, b)[0]
        tiny = mp.mpf(10) ** (-(prec - 14))
        coeffs: list[tuple[KernelElement, Fraction]] = []
        for key, g in zip(dir_keys, gamma):
            els = directions[key]
            if abs(g) < tiny:
                continue
            if len(els) == 1:
                ratio = g / els[0].multiplier_value(prec)
                q = rational_reconstruct(ratio, maxden, prec - 6)
                if q is None:
                    raise ReconstructionFailed(
                        f"direction {key or 'const'}: {mp.nstr(ratio, 20)} is not a small rational"
                    )
                coeffs.append((els[0], q))
            else:
                vec = [g] + [el.multiplier_value(prec) for el in els]
                rel = mp.pslq(vec, tol=mp.mpf(10) ** (-(prec - 12)), maxcoeff=10 ** 8, maxsteps=10 ** 6)
                if rel is None or rel[0] == 0:
                    raise ReconstructionFailed(
                        f"direction {key or 'const'}: no integer relation at {prec} digits"
                    )
                q0 = rel[0]
                for el, m in zip(els, rel[1:]):
                    if m != 0:
                        coeffs.append((el, Fraction(-m, q0)))
        kernel_terms = [el.full_expr(c) for el, c in coeffs]
        fixed = FuncExpr.add(candidate, *kernel_terms) if kernel_terms else candidate
        bound = mp.mpf(10) ** (-(prec - 10))
        for x, d in zip(sample_points, diffs):
            kv = mp.mpf(0)
            for el, c in coeffs:
                v = el.multiplier_value(prec) * mp.mpf(c.numerator) / c.denominator
                for e in el.x_part:
                    v *= _eval_cached(e, x, prec)
                kv += v
            if abs(d - kv) > bound:
                raise ReconstructionFailed(
                    f"residual {mp.nstr(abs(d - kv), 5)} at x={x} exceeds {mp.nstr(bound, 3)}"
                )
    return fixed, [(el.label, c) for el, c in coeffs]
