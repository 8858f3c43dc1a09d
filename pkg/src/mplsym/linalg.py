"""Exact linear solves over Q by reduced row echelon form.

The solver factors a coefficient matrix once and then answers many
right-hand sides, which is what the partition-by-partition integration loop
needs: the basis matrices are fixed, the residual symbols change.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class LinearSolver:
    """RREF-factored m x n system; solves A c = b with free variables at 0."""

    def __init__(self, columns: Sequence[Sequence[Fraction]]):
        # columns[j] is the j-th basis vector; rows are coordinates
        self.n_cols = len(columns)
        self.n_rows = len(columns[0]) if columns else 0
        a = [[Fraction(columns[j][i]) for j in range(self.n_cols)] for i in range(self.n_rows)]
        # eliminate, recording row operations to replay on right-hand sides
        self.ops: list[tuple] = []  # ("swap", i, j) | ("scale", i, f) | ("axpy", dst, src, f)
        self.pivots: list[tuple[int, int]] = []  # (row, col)
        row = 0
        for col in range(self.n_cols):
            sel = None
            for r in range(row, self.n_rows):
                if a[r][col] != 0:
                    sel = r
                    break
            if sel is None:
                continue
            if sel != row:
                a[sel], a[row] = a[row], a[sel]
                self.ops.append(("swap", sel, row))
            f = a[row][col]
            if f != 1:
                inv = Fraction(1) / f
                a[row] = [v * inv for v in a[row]]
                self.ops.append(("scale", row, inv))
            for r in range(self.n_rows):
                if r != row and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [v - f * w for v, w in zip(a[r], a[row])]
                    self.ops.append(("axpy", r, row, f))
            self.pivots.append((row, col))
            row += 1
        self.rank = row
        self.rref = a

    def solve(self, b: Sequence[Fraction]) -> list[Fraction] | None:
        """Particular solution with non-pivot coordinates zero, or None."""
        if len(b) != self.n_rows:
            raise ValueError("right-hand side length mismatch")
        v = [Fraction(x) for x in b]
        for op in self.ops:
            if op[0] == "swap":
                _, i, j = op
                v[i], v[j] = v[j], v[i]
            elif op[0] == "scale":
                _, i, f = op
                v[i] = v[i] * f
            else:
                _, dst, src, f = op
                v[dst] = v[dst] - f * v[src]
        for r in range(self.rank, self.n_rows):
            if v[r] != 0:
                return None
        sol = [Fraction(0)] * self.n_cols
        for row, col in self.pivots:
            sol[col] = v[row]
        return sol


def solve_exact(columns: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
    return LinearSolver(columns).solve(b)
