"""Exact primal simplex over the rationals.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``, so the slack
basis is feasible from the start and no phase one is needed.  Bland's rule
picks entering and leaving variables, which rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass
class LPSolution:
    value: Fraction
    x: list[Fraction]
    y: list[Fraction]  # optimal dual, one entry per row
    pivots: int


class UnboundedLP(ArithmeticError):
    pass


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPSolution:
    m, n = len(A), len(c)
    if any(Fraction(x) < 0 for x in b):
        raise ValueError("right-hand side must be nonnegative")
    # columns 0..n-1 structural, n..n+m-1 slack
    rows = [[Fraction(v) for v in A[i]] + [Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    rhs = [Fraction(v) for v in b]
    # reduced costs r_j = c_B B^-1 A_j - c_j; optimal when all are >= 0
    red = [-Fraction(v) for v in c] + [Fraction(0)] * m
    obj = Fraction(0)
    basis = list(range(n, n + m))
    pivots = 0
    while True:
        enter = next((j for j in range(n + m) if red[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise UnboundedLP("objective is unbounded")
        piv = rows[leave][enter]
        row = [v / piv for v in rows[leave]]
        rows[leave] = row
        rhs[leave] /= piv
        for i in range(m):
            if i != leave:
                f = rows[i][enter]
                if f:
                    rows[i] = [v - f * w for v, w in zip(rows[i], row)]
                    rhs[i] -= f * rhs[leave]
        f = red[enter]
        red = [v - f * w for v, w in zip(red, row)]
        obj -= f * rhs[leave]
        basis[leave] = enter
        pivots += 1
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rhs[i]
    y = red[n:]
    return LPSolution(obj, x, y, pivots)
