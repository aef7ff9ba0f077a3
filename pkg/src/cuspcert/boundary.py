"""Homology of curves on the boundary surface.

A simple closed curve on a torus bounds a disc exactly when it is zero in
H1(T; Z/2) (an essential simple curve has primitive, hence not-both-even,
coordinates), so mod-2 linear algebra decides essentiality exactly.
"""
from __future__ import annotations

from typing import Sequence

from . import nsurf
from .tri import Triangulation

__all__ = ["curve_class_mod2", "curve_essential_on_torus", "disc_boundary_essential"]


def _in_span_gf2(vectors: list[int], target: int) -> bool:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            if h in basis:
                v ^= basis[h]
            else:
                basis[h] = v
                break
    while target:
        h = target.bit_length() - 1
        if h not in basis:
            return False
        target ^= basis[h]
    return True


def curve_class_mod2(tri: Triangulation, edge_crossings: Sequence[int]) -> tuple[int, int]:
    """(crossing vector, boundary component) for a curve given by the boundary edge
    classes it crosses (with multiplicity)."""
    sk = tri.skeleton
    vec = 0
    for e in edge_crossings:
        vec ^= 1 << e
    comp = None
    for bc in sk.boundary_components:
        if any(vec >> e & 1 for e in bc.edges) or any(e in bc.edges for e in edge_crossings):
            comp = bc.index
            break
    return vec, comp if comp is not None else -1


def curve_essential_on_torus(tri: Triangulation, edge_crossings: Sequence[int]) -> bool | None:
    """True/False for curves on torus boundary components; None when undecidable here."""
    sk = tri.skeleton
    vec, comp = curve_class_mod2(tri, edge_crossings)
    if comp < 0:
        return None
    bc = sk.boundary_components[comp]
    stars = []
    for w in bc.vertices:
        s = 0
        for e in bc.edges:
            t, p = sk.edges[e].embeddings[0]
            ends = (sk.vertex_of[t][p[0]], sk.vertex_of[t][p[1]])
            if ends.count(w) == 1:
                s ^= 1 << e
        stars.append(s)
    nonzero = not _in_span_gf2(stars, vec)
    if bc.euler == 0 and bc.orientable:
        return nonzero
    return True if nonzero else None


def disc_boundary_essential(tri: Triangulation, v: Sequence[int]) -> bool:
    """Whether the boundary of a normal disc is essential on its boundary torus."""
    sc = nsurf.reconstruct(tri, v)
    if len(sc.components) != 1 or sc.components[0].type.name != "D2":
        return False
    curve = sc.components[0].boundary_curves[0]
    crossings = [sc.point_edge[p] for p in curve]
    return bool(curve_essential_on_torus(tri, crossings))
