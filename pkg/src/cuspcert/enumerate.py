"""Vertex and fundamental normal surfaces.

Vertex surfaces are the extreme rays of the admissible part of the solution
cone {x >= 0, matching equations}; they are found by a double description
run in full standard coordinates in which intermediate rays that could only
ever combine into inadmissible vectors are discarded.

Fundamental surfaces are the Hilbert basis of the admissible integer points.
The admissible region is a union of faces of the cone, and a set of vertex
rays spans such a face exactly when its members are pairwise compatible, so
the maximal faces are the maximal cliques of the compatibility graph.  Each
face is split into simplicial cones by a pulling triangulation; the lattice
points of the half-open parallelepipeds of those cones, together with the
rays, generate every integer point, and the minimal ones form the basis.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence

import networkx as nx

from . import nsurf
from .linalg import integer_kernel_basis, primitive, rank, solve_left
from .nsurf import CapExceeded
from .tri import Triangulation

__all__ = [
    "CapExceeded",
    "vertex_normal_surfaces",
    "fundamental_surfaces",
    "maximal_admissible_faces",
    "hlp_bound",
    "find_priority_surface",
    "compatible",
]


def hlp_bound(t_count: int) -> int:
    """Coordinate bound for fundamental surfaces: t * 2^(7t + 2)."""
    if t_count < 1:
        raise ValueError("need at least one tetrahedron")
    return t_count * 2 ** (7 * t_count + 2)


def _quad_masks(n_tets: int) -> tuple[int, int, int]:
    q = [0, 0, 0]
    for t in range(n_tets):
        for k in range(3):
            q[k] |= 1 << (7 * t + 4 + k)
    return q[0], q[1], q[2]


def _admissible_support(mask: int, q0: int, q1: int, q2: int) -> bool:
    a, b, c = mask & q0, mask & q1, mask & q2
    return not ((a << 1) & b or (a << 2) & c or (b << 1) & c)


def compatible(u: Sequence[int], v: Sequence[int]) -> bool:
    """True when u + v has at most one quad type in each tetrahedron."""
    for t in range(len(u) // 7):
        qs = {k for k in range(3) if u[7 * t + 4 + k] or v[7 * t + 4 + k]}
        if len(qs) > 1:
            return False
    return True


def vertex_normal_surfaces(tri: Triangulation, cap: Optional[int] = None) -> list[tuple[int, ...]]:
    """Primitive admissible extreme rays, in lexicographic order.

    ``cap`` bounds the number of intermediate rays; exceeding it raises
    ``CapExceeded``.
    """
    n = 7 * tri.size
    if n == 0:
        return []
    q0, q1, q2 = _quad_masks(tri.size)
    full = (1 << n) - 1
    rows = nsurf.matching_equations(tri)
    # order hyperplanes so that constraints touching few coordinates come first
    rows = sorted((r for r in rows if any(r)), key=lambda r: (min(i for i, x in enumerate(r) if x), sum(1 for x in r if x)))
    rays: list[tuple[tuple[int, ...], int]] = []  # (vector, support mask)
    for i in range(n):
        vec = tuple(int(j == i) for j in range(n))
        rays.append((vec, 1 << i))
    for row in rows:
        nzr = [(j, a) for j, a in enumerate(row) if a]
        pos, neg, zero = [], [], []
        for vec, supp in rays:
            s = 0
            for j, a in nzr:
                x = vec[j]
                if x:
                    s += a * x
            if s > 0:
                pos.append((vec, supp, s))
            elif s < 0:
                neg.append((vec, supp, s))
            else:
                zero.append((vec, supp))
        new = list(zero)
        if pos and neg:
            supports = [supp for _, supp in rays]
            for pv, ps, sp in pos:
                for nv, ns, sn in neg:
                    union = ps | ns
                    if not _admissible_support(union, q0, q1, q2):
                        continue
                    # combinatorial adjacency: no other ray lives inside the union of supports
                    adjacent = True
                    for s in supports:
                        if s | union == union and s != ps and s != ns:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    w = [sp * b - sn * a for a, b in zip(pv, nv)]
                    w = primitive(w)
                    new.append((w, union))
            if cap is not None and len(new) > cap:
                raise CapExceeded(f"double description exceeded {cap} rays")
        rays = new
    out = sorted({vec for vec, _ in rays})
    return out


# ---------------------------------------------------------------------------
# Fundamental surfaces


def maximal_admissible_faces(rays: Sequence[Sequence[int]]) -> list[list[int]]:
    """Index sets of vertex rays spanning the maximal admissible faces."""
    g = nx.Graph()
    g.add_nodes_from(range(len(rays)))
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            if compatible(rays[i], rays[j]):
                g.add_edge(i, j)
    faces = [sorted(c) for c in nx.find_cliques(g)]
    faces.sort()
    return faces


class _FaceTriangulator:
    def __init__(self, rays: Sequence[Sequence[int]]):
        self.rays = [tuple(r) for r in rays]
        self.n = len(rays[0]) if rays else 0
        self._rank_cache: dict[frozenset, int] = {}

    def rank(self, idx: Iterable[int]) -> int:
        key = frozenset(idx)
        r = self._rank_cache.get(key)
        if r is None:
            r = rank([self.rays[i] for i in sorted(key)])
            self._rank_cache[key] = r
        return r

    def facets(self, idx: list[int], dim: int) -> list[list[int]]:
        out = []
        seen = set()
        for j in range(self.n):
            zero = [i for i in idx if self.rays[i][j] == 0]
            if len(zero) == len(idx) or len(zero) < dim - 1:
                continue
            key = tuple(zero)
            if key in seen:
                continue
            seen.add(key)
            if self.rank(zero) == dim - 1:
                out.append(zero)
        return out

    def triangulate(self, idx: list[int], dim: int | None = None) -> list[list[int]]:
        """Pulling triangulation of cone(idx) using the least index first."""
        idx = sorted(idx)
        if dim is None:
            dim = self.rank(idx)
        if len(idx) == dim:
            return [idx]
        apex = idx[0]
        out = []
        for facet in self.facets(idx, dim):
            if apex in facet:
                continue
            for simplex in self.triangulate(facet, dim - 1):
                out.append([apex] + simplex)
        return out


def _parallelepiped_points(gens: list[tuple[int, ...]], lattice: list[list[int]], support: list[int], cap: Optional[int]):
    """Nonzero lattice points sum(lam_i g_i), 0 <= lam_i < 1, of a simplicial cone."""
    d = len(gens)
    # pick d columns on which the generators are independent
    cols: list[int] = []
    for c in support:
        trial = cols + [c]
        if rank([[g[k] for k in trial] for g in gens]) == len(trial):
            cols = trial
            if len(cols) == d:
                break
    coords = []
    for b in lattice:
        lam = solve_left(gens, b, cols)
        frac = tuple(x - (x.numerator // x.denominator) for x in lam)
        if any(frac):
            coords.append(frac)
    if not coords:
        return []
    zero = tuple(Fraction(0) for _ in range(d))
    group = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in coords:
                s = tuple((x + y) % 1 for x, y in zip(a, g))
                if s not in group:
                    group.add(s)
                    nxt.append(s)
                    if cap is not None and len(group) > cap:
                        raise CapExceeded(f"parallelepiped exceeded {cap} points")
        frontier = nxt
    pts = []
    n = len(gens[0])
    for lam in group:
        if lam == zero:
            continue
        x = [sum(lam[i] * gens[i][k] for i in range(d)) for k in range(n)]
        assert all(v.denominator == 1 for v in x)
        pts.append(tuple(int(v) for v in x))
    return pts


def _face_lattice(rays: list[tuple[int, ...]], support: list[int]) -> list[list[int]]:
    """Z-basis of the integer points in the linear span of ``rays`` (full coordinates)."""
    n = len(rays[0])
    sub = [[r[k] for k in support] for r in rays]
    # span(sub) = kernel of its orthogonal complement
    from .linalg import nullspace

    perp = nullspace(sub, len(support))
    if perp:
        basis = integer_kernel_basis(perp, len(support))
    else:
        basis = [[int(i == j) for j in range(len(support))] for i in range(len(support))]
    out = []
    for b in basis:
        full = [0] * n
        for k, c in enumerate(support):
            full[c] = b[k]
        out.append(full)
    return out


def _minimal_elements(cands: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    uniq = sorted(set(cands), key=lambda v: (sum(v), v))
    basis: list[tuple[int, ...]] = []
    for v in uniq:
        if not any(all(a <= b for a, b in zip(h, v)) for h in basis):
            basis.append(v)
    return basis


def fundamental_surfaces(
    tri: Triangulation,
    cap: Optional[int] = None,
    vertex_rays: Optional[Sequence[Sequence[int]]] = None,
) -> list[tuple[int, ...]]:
    """Hilbert basis of the admissible integer points, in lexicographic order.

    ``cap`` bounds the number of candidate generators examined.
    """
    rays = [tuple(r) for r in (vertex_rays if vertex_rays is not None else vertex_normal_surfaces(tri))]
    if not rays:
        return []
    faces = maximal_admissible_faces(rays)
    tri_helper = _FaceTriangulator(rays)
    cands: set[tuple[int, ...]] = set(rays)
    for face in faces:
        dim = tri_helper.rank(face)
        if dim == len(face):
            simplices = [face]
        else:
            simplices = tri_helper.triangulate(face, dim)
        face_rays = [rays[i] for i in face]
        support = sorted({k for r in face_rays for k in range(len(r)) if r[k]})
        lattice = _face_lattice(face_rays, support)
        for simplex in simplices:
            gens = [rays[i] for i in simplex]
            cands.update(_parallelepiped_points(gens, lattice, support, cap))
            if cap is not None and len(cands) > cap:
                raise CapExceeded(f"Hilbert basis candidates exceeded {cap}")
    return sorted(_minimal_elements(cands))


def find_priority_surface(tri: Triangulation, surfaces: Optional[Sequence[Sequence[int]]] = None):
    """First candidate of nonnegative Euler characteristic in the order
    P2, S2, D2 (boundary essential), K2, T2, M2, A2; returns (tag, vector) or None.

    Only coordinates and topology are inspected; essentialness is decided by
    the certify layer.
    """
    from .boundary import disc_boundary_essential

    if surfaces is None:
        surfaces = fundamental_surfaces(tri)
    by_type: dict[str, list[tuple[int, ...]]] = {}
    for v in sorted(tuple(s) for s in surfaces):
        if nsurf.euler_char(tri, v) < 0:
            continue
        comps = nsurf.classify(tri, v)
        if len(comps) != 1:
            continue
        name = comps[0].name
        if name in ("S2", "D2") and nsurf.is_vertex_linking(v):
            continue
        if name == "D2" and not disc_boundary_essential(tri, v):
            continue
        by_type.setdefault(name, []).append(v)
    for name in ("P2", "S2", "D2", "K2", "T2", "M2", "A2"):
        if by_type.get(name):
            if name == "P2":
                assert not tri.is_orientable, "projective plane in an orientable triangulation"
            return name, by_type[name][0]
    return None
