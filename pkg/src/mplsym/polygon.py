"""Rooted decorated polygons, maximal dissections, dual trees, and symbols.

The polygon of a weight-n multiple polylogarithm has n+1 sides; the root side
carries the function's argument and the remaining sides carry the vector of
singularities in reverse order.  All combinatorics happen in the rolled-out
linearization: vertices sit at integer positions 1..N, side i occupies the
interval [i, i+1], the root side is last, and every arrow becomes an arc over
the baseline.  Two arrows are compatible iff their arcs can be drawn without
crossing; a maximal dissection is a set of N-2 pairwise compatible arrows.

The dual tree of a dissection has one vertex per region of the dissected
polygon.  Each region keeps exactly two runs of the baseline ("a bigon"); the
run on the separating arrow's target side plays the root role in the bigon
map mu(nonroot, root) = 1 - root/nonroot (or root if nonroot = 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .alphabet import Alphabet
from .exact import MPoly, RatFunc
from .tensor import Symbol, expand_factor, shuffle_many


class NonGenericDecorations(ValueError):
    """Recursive definition needs pairwise distinct nonzero decorations."""


@dataclass(frozen=True, order=True)
class Arrow:
    """Directed line from a vertex to a non-adjacent side (1-based indices)."""

    from_vertex: int
    to_side: int

    def is_backward(self) -> bool:
        return self.to_side < self.from_vertex - 1


def valid_arrows(n_sides: int) -> list[Arrow]:
    out = []
    for j in range(1, n_sides + 1):
        banned = {j, (j - 1) if j > 1 else n_sides}
        for k in range(1, n_sides + 1):
            if k not in banned:
                out.append(Arrow(j, k))
    return out


def _crosses(a: Arrow, b: Arrow) -> bool:
    if a.from_vertex == b.from_vertex or a.to_side == b.to_side:
        return False
    ta = Fraction(2 * a.to_side + 1, 2)
    tb = Fraction(2 * b.to_side + 1, 2)
    l1, r1 = min(Fraction(a.from_vertex), ta), max(Fraction(a.from_vertex), ta)
    l2, r2 = min(Fraction(b.from_vertex), tb), max(Fraction(b.from_vertex), tb)
    return (l1 < l2 < r1 < r2) or (l2 < l1 < r2 < r1)


@dataclass(frozen=True)
class Dissection:
    arrows: tuple[Arrow, ...]  # sorted

    def sign(self) -> int:
        return -1 if sum(1 for a in self.arrows if a.is_backward()) % 2 else 1


def dissection_sign(d: Dissection) -> int:
    return d.sign()


_dissection_cache: dict[int, list[Dissection]] = {}


def enumerate_maximal_dissections(n_sides: int) -> list[Dissection]:
    """All sets of n_sides - 2 pairwise compatible arrows, in lexicographic order."""
    if n_sides < 2:
        raise ValueError("need at least 2 sides")
    if n_sides in _dissection_cache:
        return _dissection_cache[n_sides]
    arrows = sorted(valid_arrows(n_sides))
    need = n_sides - 2
    compat = [[not _crosses(a, b) for b in arrows] for a in arrows]
    out: list[Dissection] = []
    chosen: list[int] = []

    def rec(start: int):
        if len(chosen) == need:
            out.append(Dissection(tuple(arrows[i] for i in chosen)))
            return
        for i in range(start, len(arrows) - (need - len(chosen)) + 1):
            if all(compat[i][j] for j in chosen):
                chosen.append(i)
                rec(i + 1)
                chosen.pop()

    rec(0)
    _dissection_cache[n_sides] = out
    return out


# -- regions and dual trees ------------------------------------------------------


@dataclass
class DualTree:
    """Rooted tree of bigons; node 0 is the region containing the root side."""

    nonroot_side: list[int]   # per node: side index of the non-root run
    root_side: list[int]      # per node: side index of the root run
    parent: list[int | None]
    children: list[list[int]]

    def n_nodes(self) -> int:
        return len(self.parent)

    def bigons(self) -> list[tuple[int, int]]:
        return list(zip(self.nonroot_side, self.root_side))


def _arc_interval(arrow: Arrow, endpoint: Fraction) -> tuple[Fraction, Fraction]:
    s = Fraction(arrow.from_vertex)
    return (s, endpoint) if s < endpoint else (endpoint, s)


def _realize_endpoints(d: Dissection, n_sides: int) -> dict[Arrow, Fraction]:
    by_side: dict[int, list[Arrow]] = {}
    for a in d.arrows:
        by_side.setdefault(a.to_side, []).append(a)
    endpoints: dict[Arrow, Fraction] = {}
    for k, group in by_side.items():
        group.sort(key=lambda a: (0 if a.from_vertex < k else 1, -a.from_vertex))
        m = len(group)
        for i, a in enumerate(group, start=1):
            endpoints[a] = Fraction(k) + Fraction(i, m + 1)
    return endpoints


_skeleton_cache: dict[tuple[int, tuple[Arrow, ...]], "DissectionSkeleton"] = {}


@dataclass
class DissectionSkeleton:
    """Decoration-independent data of one dissection: tree shape plus side pairs."""

    sign: int
    nonroot_side: list[int]
    root_side: list[int]
    parent: list[int | None]
    children: list[list[int]]
    arrow_of_node: list[Arrow | None]  # None for the outer region


def dissection_skeleton(d: Dissection, n_sides: int) -> DissectionSkeleton:
    key = (n_sides, d.arrows)
    cached = _skeleton_cache.get(key)
    if cached is not None:
        return cached
    endpoints = _realize_endpoints(d, n_sides)
    arcs = [(a, *_arc_interval(a, endpoints[a])) for a in d.arrows]
    # containment forest via a sweep: sort by (left asc, right desc)
    arcs.sort(key=lambda t: (t[1], -t[2]))
    parent_arc: dict[Arrow, Arrow | None] = {}
    stack: list[tuple[Arrow, Fraction, Fraction]] = []
    for a, l, r in arcs:
        while stack and not (stack[-1][1] <= l and r <= stack[-1][2]):
            stack.pop()
        parent_arc[a] = stack[-1][0] if stack else None
        stack.append((a, l, r))
    # node 0 = outer region; arc regions follow in the sorted arc order
    order = [a for a, _, _ in arcs]
    index = {a: i + 1 for i, a in enumerate(order)}
    n_nodes = len(order) + 1
    parent: list[int | None] = [None] * n_nodes
    children: list[list[int]] = [[] for _ in range(n_nodes)]
    for a in order:
        p = parent_arc[a]
        pi = 0 if p is None else index[p]
        parent[index[a]] = pi
        children[pi].append(index[a])
    # baseline runs per region
    intervals = {a: (l, r) for a, l, r in arcs}
    nonroot_side: list[int] = [0] * n_nodes
    root_side: list[int] = [0] * n_nodes

    def region_pieces(left: Fraction, right: Fraction, kids: list[int]) -> list[tuple[Fraction, Fraction, int]]:
        cuts = [(left, left)] + sorted(intervals[order[c - 1]] for c in kids) + [(right, right)]
        pieces = []
        for (_l, a), (b, _r) in zip(cuts, cuts[1:]):
            lo, hi = a, b
            if hi <= lo:
                continue
            s = int(lo)
            while Fraction(s) < hi:
                lo2, hi2 = max(lo, Fraction(s)), min(hi, Fraction(s + 1))
                if hi2 > lo2:
                    pieces.append((lo2, hi2, s))
                s += 1
        return pieces

    for node in range(n_nodes):
        if node == 0:
            left, right = Fraction(1), Fraction(n_sides + 1)
            target = n_sides
        else:
            a = order[node - 1]
            left, right = intervals[a]
            target = a.to_side
        pieces = region_pieces(left, right, children[node])
        if len(pieces) != 2:
            raise AssertionError(
                f"region of {d} has {len(pieces)} runs; dissection not maximal?"
            )
        sides = [p[2] for p in pieces]
        if target not in sides:
            raise AssertionError(f"region of {d} misses its target side {target}")
        root_side[node] = target
        sides.remove(target)
        nonroot_side[node] = sides[0]
    skel = DissectionSkeleton(
        sign=d.sign(),
        nonroot_side=nonroot_side,
        root_side=root_side,
        parent=parent,
        children=children,
        arrow_of_node=[None] + order,
    )
    _skeleton_cache[key] = skel
    return skel


# -- polygons -------------------------------------------------------------------


class Polygon:
    """Rooted decorated oriented polygon P(d_1, ..., d_{n-1}, root)."""

    def __init__(self, decorations: Sequence, root, variables: Sequence[str] = ("x",)):
        self.variables = tuple(variables)
        self.decorations = tuple(self._coerce(d) for d in decorations)
        self.root = self._coerce(root)

    def _coerce(self, d) -> RatFunc:
        if isinstance(d, RatFunc):
            return d
        if isinstance(d, MPoly):
            return RatFunc(d)
        if isinstance(d, str):
            from .exact import parse_ratfunc

            return parse_ratfunc(d, self.variables)
        return RatFunc.const(self.variables, d)

    @classmethod
    def from_g(cls, singularities: Sequence, argument, variables: Sequence[str] = ("x",)) -> "Polygon":
        """Polygon of G(a_1, ..., a_n; x): decorations reversed, root x."""
        return cls(list(reversed(list(singularities))), argument, variables)

    @property
    def n_sides(self) -> int:
        return len(self.decorations) + 1

    @property
    def weight(self) -> int:
        return len(self.decorations)

    def side(self, i: int) -> RatFunc:
        """Decoration of side i (1-based; the last side is the root)."""
        return self.root if i == self.n_sides else self.decorations[i - 1]

    def __repr__(self):
        decs = ", ".join(str(d) for d in self.decorations)
        return f"P({decs}, {self.root})"


def mu(nonroot: RatFunc, root: RatFunc) -> RatFunc:
    """Bigon value: 1 - root/nonroot, or root when the nonroot side is 0."""
    if nonroot.is_zero():
        return root
    one = RatFunc.const(nonroot.vars, 1)
    return one - root / nonroot


def dual_tree(p: Polygon, d: Dissection) -> DualTree:
    skel = dissection_skeleton(d, p.n_sides)
    return DualTree(
        nonroot_side=list(skel.nonroot_side),
        root_side=list(skel.root_side),
        parent=list(skel.parent),
        children=[list(c) for c in skel.children],
    )


def linear_extensions(t: DualTree) -> list[list[int]]:
    """All orderings of the nodes compatible with the rooted tree order."""
    n = t.n_nodes()
    out: list[list[int]] = []
    placed: list[int] = []
    available = {i for i, p in enumerate(t.parent) if p is None}

    def rec():
        if len(placed) == n:
            out.append(list(placed))
            return
        for node in sorted(available):
            available.remove(node)
            placed.append(node)
            added = [c for c in t.children[node]]
            available.update(added)
            rec()
            for c in added:
                available.discard(c)
            placed.pop()
            available.add(node)

    rec()
    return out


def polygon_symbol(p: Polygon, alphabet: Alphabet) -> Symbol:
    """Sum over maximal dissections and compatible linear orders of signed tensors."""
    w = p.weight
    if p.root.is_zero():
        return Symbol.zero(w)
    # one mu/expansion per (nonroot side, root side) pair, shared by dissections
    pair_cache: dict[tuple[int, int], Symbol | None] = {}

    def bigon_symbol(nr: int, rt: int) -> Symbol | None:
        key = (nr, rt)
        if key not in pair_cache:
            value = mu(p.side(nr), p.side(rt))
            if value.is_zero():
                sym = None
            else:
                sym = expand_factor(value, alphabet)
                if sym.is_zero():
                    sym = None  # torsion kills the whole dissection term
            pair_cache[key] = sym
        return pair_cache[key]

    total = Symbol.zero(w)
    for d in enumerate_maximal_dissections(p.n_sides):
        skel = dissection_skeleton(d, p.n_sides)
        node_syms: list[Symbol] = []
        dead = False
        for nr, rt in zip(skel.nonroot_side, skel.root_side):
            sym = bigon_symbol(nr, rt)
            if sym is None:
                dead = True
                break
            node_syms.append(sym)
        if dead:
            continue

        def contrib(node: int) -> Symbol:
            parts = [contrib(c) for c in skel.children[node]]
            return node_syms[node].tensor(shuffle_many(parts))

        total = total + contrib(0).scale(skel.sign)
    return total


# -- the recursive (differential-equation) definition -----------------------------


def generic_alphabet(p: Polygon) -> Alphabet:
    """Letters for a polygon with pairwise distinct decorations: the decorations
    themselves plus all pairwise differences."""
    polys: list[MPoly] = []
    decs = list(p.decorations) + [p.root]
    for d in decs:
        if not (d.den.is_constant() and d.den.constant_value() == 1):
            raise ValueError("generic alphabet expects polynomial decorations")
        polys.append(d.num)
    letters = []
    for q in polys:
        letters.append(q.sign_canonical())
    for a, b in itertools.combinations(polys, 2):
        diff = (a - b).sign_canonical()
        if not diff.is_zero():
            letters.append(diff)
    uniq = []
    for l in letters:
        if l not in uniq and not (l.is_constant() and abs(l.constant_value()) == 1):
            uniq.append(l)
    return Alphabet(uniq, p.variables)


def recursive_symbol(p: Polygon, alphabet: Alphabet | None = None) -> Symbol:
    """Iterated-differential definition, valid on generic decorations only."""
    decs = list(p.decorations) + [p.root]
    for d in decs:
        if d.is_zero():
            raise NonGenericDecorations("zero decoration")
    for a, b in itertools.combinations(decs, 2):
        if a == b:
            raise NonGenericDecorations(f"repeated decoration {a}")
    if alphabet is None:
        alphabet = generic_alphabet(p)
    memo: dict[tuple, Symbol] = {}

    def rec(sides: tuple[RatFunc, ...]) -> Symbol:
        # sides = (d_1, ..., d_{m-1}, root)
        if sides in memo:
            return memo[sides]
        m = len(sides)
        if m == 1:
            return Symbol.unit()
        total = Symbol.zero(m - 1)
        for i in range(m - 1):  # cut off side i (0-based among non-root sides)
            sub = rec(sides[:i] + sides[i + 1:])
            fwd = expand_factor(mu(sides[i], sides[i + 1]), alphabet)
            total = total + sub.tensor(fwd)
            if i >= 1:
                bwd = expand_factor(mu(sides[i], sides[i - 1]), alphabet)
                total = total - sub.tensor(bwd)
        memo[sides] = total
        return total

    return rec(tuple(decs))


# -- hook-arrow trees ---------------------------------------------------------------


@dataclass(frozen=True)
class HookArrowTree:
    """Spanning tree on side midpoints, rooted at the final side, non-interlaced."""

    n_sides: int
    edges: tuple[tuple[int, int], ...]  # directed (from_side, to_side), to = parent-ward

    @property
    def root(self) -> int:
        return self.n_sides

    def backward_edge_count(self) -> int:
        return sum(1 for u, v in self.edges if v < u)

    def is_interlaced(self) -> bool:
        und = [tuple(sorted(e)) for e in self.edges]
        for (a1, b1), (a2, b2) in itertools.combinations(und, 2):
            if a1 < a2 < b1 < b2 or a2 < a1 < b2 < b1:
                return True
        return False


def hook_arrow_tree(p: Polygon, d: Dissection) -> HookArrowTree:
    skel = dissection_skeleton(d, p.n_sides)
    edges = tuple(
        sorted((nr, rt) for nr, rt in zip(skel.nonroot_side, skel.root_side))
    )
    return HookArrowTree(p.n_sides, edges)
