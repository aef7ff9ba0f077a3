"""Exact rational linear programming: two-phase simplex with Bland's rule."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

__all__ = ["LPResult", "solve_standard"]


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[list[Fraction]] = None
    value: Optional[Fraction] = None


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = tab[r]
    piv = row[c]
    if piv != 1:
        tab[r] = row = [v / piv for v in row]
    for i, other in enumerate(tab):
        if i != r and other[c] != 0:
            f = other[c]
            tab[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _run(tab, basis, cost_row: int, allowed: int) -> str:
    """Minimise the objective in row ``cost_row`` (stored as reduced costs) over the first ``allowed`` columns."""
    m = len(basis)
    while True:
        obj = tab[cost_row]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], enter)


def solve_standard(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    """Minimise c.x subject to A x = b, x >= 0, exactly over the rationals."""
    m = len(A)
    n = len(c)
    rows = []
    for i in range(m):
        r = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            r = [-v for v in r]
            rhs = -rhs
        rows.append(r + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    width = n + m
    basis = list(range(n, n + m))
    # phase 1: minimise the sum of artificials
    phase1 = [Fraction(0)] * (width + 1)
    for r in rows:
        for j in range(n):
            phase1[j] -= r[j]
        phase1[-1] -= r[-1]
    phase2 = [Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    tab = rows + [phase2, phase1]
    _run(tab, basis, m + 1, width)
    if tab[m + 1][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis; drop redundant rows
    i = 0
    while i < len(basis):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, basis, i, col)
        i += 1
    m2 = len(basis)
    tab = [r[:n] + [r[-1]] for r in tab[:m2 + 1]]
    status = _run(tab, basis, m2, n)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = tab[i][-1]
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult("optimal", x, value)
