"""Exact integer/rational linear algebra helpers (no floating point)."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

__all__ = ["rank", "nullspace", "integer_kernel_basis", "solve_left", "primitive"]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    # fraction-free Bareiss-style elimination on ints
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk]
        pc = p[c]
        for i in range(rk + 1, len(m)):
            x = m[i][c]
            if x:
                g = gcd(pc, x)
                a, b = pc // g, x // g
                m[i] = [a * u - b * w for u, w in zip(m[i], p)]
        rk += 1
        if rk == len(m):
            break
    return rk


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Integer vectors spanning the rational null space of ``rows``."""
    fr = [[Fraction(x) for x in r] for r in rows]
    red, piv = _rref(fr, ncols) if fr else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for r, pc in zip(red, piv):
            vec[pc] = -r[fcol]
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append([int(x * den) for x in vec])
    return basis


def integer_kernel_basis(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A Z-basis of {x in Z^n : rows x = 0}, by unimodular column reduction."""
    m = [list(r) for r in rows]
    nrows = len(m)
    # U tracks column operations: columns of U are images of unit vectors
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # u[i] is column i

    def colop_sub(dst, src, q):
        for r in range(nrows):
            m[r][dst] -= q * m[r][src]
        ud, us = u[dst], u[src]
        for k in range(ncols):
            ud[k] -= q * us[k]

    def colswap(a, b):
        for r in range(nrows):
            m[r][a], m[r][b] = m[r][b], m[r][a]
        u[a], u[b] = u[b], u[a]

    lead = 0
    for r in range(nrows):
        if lead >= ncols:
            break
        while True:
            nz = [c for c in range(lead, ncols) if m[r][c]]
            if not nz:
                break
            c0 = min(nz, key=lambda c: abs(m[r][c]))
            if c0 != lead:
                colswap(c0, lead)
            done = True
            for c in range(lead + 1, ncols):
                if m[r][c]:
                    q = m[r][c] // m[r][lead]
                    colop_sub(c, lead, q)
                    if m[r][c]:
                        done = False
            if done:
                break
        if any(m[r][c] for c in range(lead, ncols)):
            lead += 1
    return [u[c] for c in range(lead, ncols)]


def solve_left(basis_rows: Sequence[Sequence[int]], target: Sequence[int], cols: Sequence[int]) -> list[Fraction]:
    """Coefficients lam with lam @ basis_rows == target, using the square submatrix on ``cols``."""
    d = len(basis_rows)
    # solve M^T lam = target_J where M = basis_rows[:, cols]
    aug = [[Fraction(basis_rows[i][cols[j]]) for i in range(d)] + [Fraction(target[cols[j]])] for j in range(d)]
    red, piv = _rref(aug, d)
    if len(piv) != d:
        raise ValueError("singular system")
    return [red[i][d] for i in range(d)]
