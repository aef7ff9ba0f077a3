"""Invariant factors of integer matrices.

Relation matrices coming from triangulations are large, sparse and full of
unit entries, so units are eliminated sparsely first and only the small
residual block goes through a dense Smith reduction.
"""
from __future__ import annotations

from math import gcd

__all__ = ["invariant_factors", "abelian_invariants", "rank_over_q"]


def _sparse_unit_elimination(rows: list[dict[int, int]]) -> tuple[list[dict[int, int]], int]:
    """Pivot on +-1 entries until none remain; returns (residual rows, #pivots)."""
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    pivots = 0
    while True:
        best = None
        for i in alive:
            r = rows[i]
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = rows[pi]
        pv = prow[pj]
        for i in list(cols[pj]):
            if i == pi:
                continue
            r = rows[i]
            factor = r[pj] * pv  # pv = +-1 so pv == 1/pv
            for j, v in prow.items():
                nv = r.get(j, 0) - factor * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                else:
                    if j in r:
                        del r[j]
                        cols[j].discard(i)
            if not r:
                alive.discard(i)
        for j in prow:
            cols[j].discard(pi)
        del cols[pj]
        alive.discard(pi)
        rows[pi] = {}
        pivots += 1
        # The pivot column is now zero everywhere else; the pivot row is
        # removed because column operations clear the rest of it.
    return [rows[i] for i in sorted(alive) if rows[i]], pivots


def _dense_invariant_factors(mat: list[list[int]]) -> list[int]:
    m = [row[:] for row in mat]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    out = []
    t = 0
    while t < nr and t < nc:
        # find smallest nonzero entry in the remaining block
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] and (piv is None or abs(m[i][j]) < abs(m[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            p = m[t][t]
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // p
                    if q:
                        m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                    if m[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // p
                    if q:
                        for row in m:
                            row[j] -= q * row[t]
                    if m[t][j]:
                        done = False
            if done:
                # enforce divisibility of the remaining block
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if m[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                m[t] = [a + b for a, b in zip(m[t], m[bad])]
                continue
            # move the smallest nonzero of row/col t to the pivot position
            best = (abs(m[t][t]), t, t)
            for i in range(t + 1, nr):
                if m[i][t] and abs(m[i][t]) < best[0]:
                    best = (abs(m[i][t]), i, t)
            for j in range(t + 1, nc):
                if m[t][j] and abs(m[t][j]) < best[0]:
                    best = (abs(m[t][j]), t, j)
            _, bi, bj = best
            if bi != t:
                m[t], m[bi] = m[bi], m[t]
            if bj != t:
                for row in m:
                    row[t], row[bj] = row[bj], row[t]
        out.append(abs(m[t][t]))
        t += 1
    return out


def invariant_factors(rows: list[dict[int, int]] | list[list[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form, ascending."""
    if rows and isinstance(rows[0], list):
        rows = [{j: v for j, v in enumerate(r) if v} for r in rows]
    residual, pivots = _sparse_unit_elimination(rows)
    factors = [1] * pivots
    if residual:
        cols = sorted({j for r in residual for j in r})
        idx = {j: k for k, j in enumerate(cols)}
        dense = [[0] * len(cols) for _ in residual]
        for i, r in enumerate(residual):
            for j, v in r.items():
                dense[i][idx[j]] = v
        factors += _dense_invariant_factors(dense)
    return sorted(factors)


def abelian_invariants(n_generators: int, relations: list[dict[int, int]]) -> tuple[int, tuple[int, ...]]:
    """(free rank, torsion coefficients) of Z^n modulo the given relations."""
    f = invariant_factors(relations)
    return n_generators - len(f), tuple(d for d in f if d > 1)


def rank_over_q(rows: list[list[int]]) -> int:
    """Exact rank of an integer matrix (fraction-free elimination)."""
    m = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][c]:
                a, b = p[c], m[i][c]
                g = gcd(a, b)
                a, b = a // g, b // g
                m[i] = [a * x - b * y for x, y in zip(m[i], p)]
        rank += 1
    return rank
