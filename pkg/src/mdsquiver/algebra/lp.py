"""Exact two-phase simplex method over the rationals (Bland's rule).

Problems are stated in equality form: optimise ``c.x`` subject to
``A x = b`` and ``x >= 0``. Everything is a ``Fraction``; there is no
tolerance anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None = None
    value: Fraction | None = None
    ray: list | None = None  # direction of unboundedness (A ray = 0, ray >= 0)


class _Tableau:
    def __init__(self, A, b):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        self.rows = []
        for row, rhs in zip(A, b):
            row = [Fraction(v) for v in row]
            rhs = Fraction(rhs)
            if rhs < 0:
                row = [-v for v in row]
                rhs = -rhs
            self.rows.append(row + [rhs])
        self.basis = [None] * self.m

    def pivot(self, r, col):
        prow = self.rows[r]
        inv = 1 / prow[col]
        prow = [v * inv for v in prow]
        self.rows[r] = prow
        for i, row in enumerate(self.rows):
            if i != r and row[col]:
                f = row[col]
                self.rows[i] = [a - f * p for a, p in zip(row, prow)]
        self.basis[r] = col

    def run(self, cost, allowed):
        """Minimise ``cost`` over the current basis; returns None or an unbounded column."""
        while True:
            # reduced costs
            red = list(cost)
            for r, bcol in enumerate(self.basis):
                cb = cost[bcol]
                if cb:
                    row = self.rows[r]
                    for j in range(len(red)):
                        if row[j]:
                            red[j] -= cb * row[j]
            entering = next((j for j in allowed if red[j] < 0), None)
            if entering is None:
                return None
            best = None
            for r, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return entering
            self.pivot(best[1], entering)


def solve_lp(A, b, c, maximize=False) -> LPResult:
    """Optimise ``c.x`` over ``{x >= 0 : A x = b}`` exactly."""
    n = len(c)
    if not A:
        # no constraints: bounded only if no improving direction
        sign = -1 if maximize else 1
        for j, cj in enumerate(c):
            if sign * Fraction(cj) < 0:
                ray = [Fraction(0)] * n
                ray[j] = Fraction(1)
                return LPResult("unbounded", ray=ray)
        return LPResult("optimal", [Fraction(0)] * n, Fraction(0))
    T = _Tableau(A, b)
    m = T.m
    # phase 1 with artificial columns n..n+m-1
    for r in range(m):
        art = [Fraction(0)] * m
        art[r] = Fraction(1)
        T.rows[r] = T.rows[r][:-1] + art + [T.rows[r][-1]]
        T.basis[r] = n + r
    cost1 = [Fraction(0)] * n + [Fraction(1)] * m
    T.run(cost1, range(n + m))
    phase1 = sum(T.rows[r][-1] for r in range(m) if T.basis[r] >= n)
    if phase1 > 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(T.rows):
        if T.basis[r] >= n:
            col = next((j for j in range(n) if T.rows[r][j]), None)
            if col is None:
                del T.rows[r]
                del T.basis[r]
                continue
            T.pivot(r, col)
        r += 1
    T.rows = [row[:n] + [row[-1]] for row in T.rows]
    sign = -1 if maximize else 1
    cost = [sign * Fraction(v) for v in c]
    unb = T.run(cost, range(n))
    if unb is not None:
        ray = [Fraction(0)] * n
        ray[unb] = Fraction(1)
        for r, bcol in enumerate(T.basis):
            ray[bcol] = -T.rows[r][unb]
        return LPResult("unbounded", ray=ray)
    x = [Fraction(0)] * n
    for r, bcol in enumerate(T.basis):
        x[bcol] = T.rows[r][-1]
    value = sum(Fraction(cj) * xj for cj, xj in zip(c, x))
    return LPResult("optimal", x, value)


def feasible(A, b) -> LPResult:
    """A point of ``{x >= 0 : A x = b}`` if one exists."""
    return solve_lp(A, b, [0] * (len(A[0]) if A else 0))
