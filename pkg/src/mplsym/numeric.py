"""High-precision evaluation of polylogarithmic expressions on (0, 1).

Everything reduces to truncated nested sums: a G function is rescaled to
argument 1, trailing zeros are extracted into powers of the logarithm, and
the remaining core is summed as a multiple nested series whenever all partial
products of its Li-side arguments stay strictly inside the unit disc.  When a
singularity lies too close to the integration contour for the series to
converge, the Hoelder convolution splits the value into two strictly
convergent pieces.  Truncation orders are chosen from the geometric tail
bound and reported on request.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .exact import RatFunc
from .expr import FuncExpr, extract_trailing_zeros


class OutOfRegion(ValueError):
    pass


class DivergentSpec(ValueError):
    pass


DEFAULT_MARGIN = Fraction(1, 10)  # delta: series ratios must stay <= 1 - delta/…
_RATIO_MAX = 0.97


class EvalReport:
    """Collects the truncation orders actually used during one evaluation."""

    def __init__(self):
        self.series: list[tuple[str, int]] = []
        self.hoelder_p: list[int] = []

    def note_series(self, label: str, n: int):
        self.series.append((label, n))

    def max_order(self) -> int:
        return max((n for _, n in self.series), default=0)


_const_cache: dict[tuple[str, int], mp.mpf] = {}


def constant(name: str, prec: int) -> mp.mpf:
    key = (name, prec)
    if key not in _const_cache:
        with mp.workdps(prec + 10):
            if name == "pi":
                v = +mp.pi
            elif name == "zeta3":
                v = mp.zeta(3)
            elif name == "ln2":
                v = mp.log(2)
            elif name == "Li4half":
                v = _nested_sum((4,), (Fraction(1, 2),), prec, EvalReport())
            else:
                raise ValueError(name)
        _const_cache[key] = v
    return _const_cache[key]


def _truncation_order(rho: float, k: int, prec: int) -> int:
    if rho >= 1:
        raise OutOfRegion(f"series ratio {rho} >= 1")
    target = -(prec + 8) * math.log(10)
    n = max(8, int(target / math.log(rho)) + 1)
    while (k - 1) * math.log(n) + n * math.log(rho) > target:
        n = int(n * 1.25) + 1
    return n


def _nested_sum(ms: Sequence[int], xs: Sequence[Fraction], prec: int, report: EvalReport) -> mp.mpf:
    """Li_{m_1..m_k}(x_1..x_k) = sum over n_1 < ... < n_k of prod x_i^{n_i}/n_i^{m_i}."""
    k = len(ms)
    rho = 0.0
    for j in range(k):
        prod = Fraction(1)
        for i in range(j, k):
            prod *= xs[i]
        rho = max(rho, abs(float(prod)))
    n_max = _truncation_order(rho, k, prec)
    report.note_series("Li" + ",".join(map(str, ms)), n_max)
    with mp.workdps(prec + 10):
        x_mp = [mp.mpf(x.numerator) / x.denominator for x in xs]
        # partial[i] = sum over n_1<...<n_i <= n of the first i factors
        prev = [mp.mpf(1)] * (n_max + 1)  # i = 0: empty product
        for i in range(k):
            cur = [mp.mpf(0)] * (n_max + 1)
            run = mp.mpf(0)
            for n in range(1, n_max + 1):
                run += (x_mp[i] ** n) / mp.mpf(n) ** ms[i] * prev[n - 1]
                cur[n] = run
            prev = cur
        return prev[n_max]


def _li_side(core: Sequence[Fraction]) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """Group a zero-interspersed singularity vector at argument 1 into Li data."""
    groups: list[tuple[int, Fraction]] = []
    zeros = 0
    for a in core:
        if a == 0:
            zeros += 1
        else:
            groups.append((zeros + 1, Fraction(a)))
            zeros = 0
    if zeros:
        raise ValueError("core ends in zero")
    k = len(groups)
    ts = [t for _, t in groups]
    mvec = tuple(m for m, _ in reversed(groups))
    xs = []
    for i in range(1, k + 1):
        t_prev = ts[k - i - 1] if k - i - 1 >= 0 else Fraction(1)
        xs.append(t_prev / ts[k - i])
    return mvec, tuple(xs)


def _ratios_ok(core: Sequence[Fraction]) -> bool:
    mvec, xs = _li_side(core)
    rho = 0.0
    for j in range(len(xs)):
        prod = Fraction(1)
        for i in range(j, len(xs)):
            prod *= xs[i]
        rho = max(rho, abs(float(prod)))
    return rho <= _RATIO_MAX


def eval_g(avec: Sequence[Fraction], y: Fraction, prec: int, report: EvalReport | None = None, _depth: int = 0) -> mp.mpf:
    """G(a_1..a_n; y) for rational data with y in (0, 1]."""
    if report is None:
        report = EvalReport()
    avec = tuple(Fraction(a) for a in avec)
    y = Fraction(y)
    if not avec:
        return mp.mpf(1)
    if y == 0:
        return mp.mpf(0)
    if avec[0] == y:
        raise DivergentSpec(f"G with leading singularity at the argument: {avec} at {y}")
    with mp.workdps(prec + 10):
        total = mp.mpf(0)
        log_y = mp.log(mp.mpf(y.numerator) / y.denominator)
        for coeff, j, core in extract_trailing_zeros(avec):
            piece = mp.mpf(coeff.numerator) / coeff.denominator
            if j:
                piece *= log_y ** j / mp.factorial(j)
            if core:
                piece *= _eval_core(tuple(Fraction(a) / y for a in core), prec, report, _depth)
            total += piece
        return total


def _eval_core(core: tuple[Fraction, ...], prec: int, report: EvalReport, depth: int) -> mp.mpf:
    """G(core; 1) with core ending in a nonzero entry."""
    if _ratios_ok(core):
        mvec, xs = _li_side(core)
        value = _nested_sum(mvec, xs, prec, report)
        with mp.workdps(prec + 10):
            return -value if len(mvec) % 2 else value
    if depth >= 2:
        raise OutOfRegion(f"no convergent rewriting found for {core}")
    one = Fraction(1)
    if core[0] == 1:
        raise DivergentSpec("leading singularity 1 at argument 1")
    nonzero = [abs(a) for a in core if a != 0]
    away_from_one = [abs(one - a) for a in core if a != 1]
    min_b = min(nonzero)
    min_dual = min(away_from_one) if away_from_one else one
    p = None
    for cand in range(2, 64):
        lo = Fraction(1, cand)
        if float(lo) <= _RATIO_MAX * float(min_b) and float(one - lo) <= _RATIO_MAX * float(min_dual):
            if all(a != lo for a in core):
                p = cand
                break
    if p is None:
        raise OutOfRegion(f"no Hoelder split converges for {core}")
    report.hoelder_p.append(p)
    inv_p = Fraction(1, p)
    n = len(core)
    with mp.workdps(prec + 10):
        total = mp.mpf(0)
        for k in range(n + 1):
            left = tuple(one - a for a in reversed(core[:k]))
            right = core[k:]
            sign = -1 if k % 2 else 1
            lval = eval_g(left, one - inv_p, prec, report, depth + 1) if left else mp.mpf(1)
            rval = eval_g(right, inv_p, prec, report, depth + 1) if right else mp.mpf(1)
            total += sign * lval * rval
        return total


def eval_li(mvec: Sequence[int], args: Sequence[Fraction], prec: int, report: EvalReport | None = None) -> mp.mpf:
    """Multiple polylogarithm value at rational arguments."""
    if report is None:
        report = EvalReport()
    xs = [Fraction(a) for a in args]
    if any(x == 0 for x in xs):
        raise ValueError("Li argument 0")
    rho = 0.0
    for j in range(len(xs)):
        prod = Fraction(1)
        for i in range(j, len(xs)):
            prod *= xs[i]
        rho = max(rho, abs(float(prod)))
    if rho <= _RATIO_MAX:
        return _nested_sum(tuple(mvec), tuple(xs), prec, report)
    # through the iterated-integral form at argument 1
    k = len(xs)
    avec: list[Fraction] = []
    for j in range(1, k + 1):
        m = mvec[k - j]
        prod = Fraction(1)
        for i in range(k - j, k):
            prod *= xs[i]
        avec.extend([Fraction(0)] * (m - 1))
        avec.append(Fraction(1) / prod)
    value = eval_g(avec, Fraction(1), prec, report)
    with mp.workdps(prec + 10):
        return value if k % 2 == 0 else -value


_node_cache: dict[tuple, mp.mpf] = {}


def eval_mpl(e: FuncExpr, x: Fraction, prec: int = 40, report: EvalReport | None = None) -> mp.mpf:
    """Evaluate a function expression at rational x inside the unit interval.

    Leaf values (Li, G, H, log nodes) are cached per point and precision;
    reductions of many related functions share their spanning-set values.
    """
    if report is None:
        report = EvalReport()
    x = Fraction(x)

    def ratval(f: RatFunc) -> Fraction:
        return f.eval({v: x for v in f.vars})

    k = e.kind
    cache_key = None
    if k in ("log", "G", "H", "Li"):
        if k == "log":
            cache_key = (k, e.arg, x, prec)
        elif k == "Li":
            cache_key = (k, e.mvec, e.args, x, prec)
        else:
            cache_key = (k, e.avec, e.arg, x, prec)
        cached = _node_cache.get(cache_key)
        if cached is not None:
            value, series = cached
            report.series.extend(series)
            return value

    sub_report = EvalReport() if cache_key is not None else report
    with mp.workdps(prec + 10):
        if k == "rat":
            return mp.mpf(e.value.numerator) / e.value.denominator
        if k == "const":
            return constant(e.name, prec)
        if k == "log":
            q = ratval(e.arg)
            if q <= 0:
                raise OutOfRegion(f"log of non-positive value {q}")
            value = mp.log(mp.mpf(q.numerator) / q.denominator)
        elif k == "G":
            avec = [ratval(a) if isinstance(a, RatFunc) else Fraction(a) for a in e.avec]
            value = eval_g(avec, ratval(e.arg), prec, sub_report)
        elif k == "H":
            n_plus = sum(1 for a in e.avec if a == 1)
            avec = [Fraction(a) for a in e.avec]
            v = eval_g(avec, ratval(e.arg), prec, sub_report)
            value = -v if n_plus % 2 else v
        elif k == "Li":
            args = [ratval(a) for a in e.args]
            value = eval_li(e.mvec, args, prec, sub_report)
        elif k == "sum":
            return mp.fsum(eval_mpl(t, x, prec, report) for t in e.parts)
        elif k == "prod":
            out = mp.mpf(1)
            for t in e.parts:
                out *= eval_mpl(t, x, prec, report)
            return out
        elif k == "pow":
            return eval_mpl(e.base, x, prec, report) ** e.power
        else:
            raise ValueError(k)
    if cache_key is not None:
        report.series.extend(sub_report.series)
        _node_cache[cache_key] = (value, tuple(sub_report.series))
    return value


# -- rational reconstruction -----------------------------------------------------------


def rational_reconstruct(v, maxden: int, prec: int = 40) -> Fraction | None:
    """Nearest rational with bounded denominator via continued fractions.

    Returns None when no convergent with denominator <= maxden lands within
    10^-(prec-10) of the input.
    """
    with mp.workdps(prec + 10):
        v = mp.mpf(v)
        tol = mp.mpf(10) ** (-(prec - 10))
        h0, h1 = 1, 0
        k0, k1 = 0, 1
        r = v
        best = None
        for _ in range(prec * 4):
            a = int(mp.floor(r))
            h0, h1 = a * h0 + h1, h0
            k0, k1 = a * k0 + k1, k0
            if k0 > maxden:
                break
            best = Fraction(h0, k0)
            if abs(v - mp.mpf(h0) / k0) < tol:
                return best
            frac = r - a
            if frac == 0:
                break
            r = 1 / frac
        if best is not None and abs(v - mp.mpf(best.numerator) / best.denominator) < tol:
            return best
        return None
