"""Cutting along and crushing normal surfaces.

``cut_along`` returns a triangulation of the complement of an open regular
neighbourhood of the surface.  Inside each tetrahedron the normal discs cut
out convex regions whose corners are tetrahedron vertices or points where
the surface crosses an edge.  A region with four corners is a tetrahedron;
any other region is coned from an interior point over its facets, and a
facet polygon lying on a face of the tetrahedron is fanned from its least
corner in a labelling shared by both tetrahedra meeting at that face, so the
pieces match across faces.

``crush`` collapses the surface to a point and flattens every tetrahedron
that meets it in quadrilaterals, re-gluing the surviving tetrahedra along
the chains of faces identified by the flattening.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .nsurf import QUAD_PARTS, NormalVectorError, check_cap, classify, is_admissible, is_vertex_linking, quad_separating
from .perm import Perm4
from .tri import Triangulation, validate

__all__ = ["CutResult", "cut_along", "crush", "CrushError"]


class CrushError(ValueError):
    pass


@dataclass
class CutResult:
    exterior: Triangulation
    surface_faces: set[tuple[int, int]] = field(default_factory=set)  # boundary faces on surface copies
    original_faces: set[tuple[int, int]] = field(default_factory=set)  # boundary faces of the old boundary
    host: list[int] = field(default_factory=list)  # host tetrahedron of each small tetrahedron

    @property
    def components(self) -> list[list[int]]:
        return self.exterior.components()

    @property
    def n_components(self) -> int:
        return len(self.exterior.components())

    def piece(self, k: int) -> tuple[Triangulation, set[tuple[int, int]]]:
        """Component ``k`` as a triangulation, with its surface-copy boundary faces."""
        comp = self.components[k]
        where = {t: i for i, t in enumerate(comp)}
        sub = self.exterior.sub_triangulation(comp)
        faces = {(where[t], f) for t, f in self.surface_faces if t in where}
        return sub, faces


def _layout(v: Sequence[int], t: int):
    n = [v[7 * t + c] for c in range(4)]
    qs = [q for q in range(3) if v[7 * t + 4 + q]]
    q = qs[0] if qs else None
    m = v[7 * t + 4 + q] if q is not None else 0
    return n, q, m


def _edge_len(n, q, m, a, b):
    return n[a] + n[b] + (m if q is not None and quad_separating(a, b) != q else 0)


def _label_key(lab):
    if lab[0] == "v":
        return (0, lab[1], 0, 0, 0)
    if lab[0] == "e":
        return (1,) + lab[1:]
    return (2,) + tuple(lab[1])


def _on_face(lab, f) -> bool:
    if lab[0] == "v":
        return lab[1] != f
    if lab[0] == "e":
        return f != lab[1] and f != lab[2]
    return False


def _regions(n, q, m):
    """Map region key -> set of corner labels for one tetrahedron."""
    part0 = QUAD_PARTS[q][0] if q is not None else (0, 1)
    regions: dict[tuple, set] = {}
    for a in range(4):
        for b in range(a + 1, 4):
            w = _edge_len(n, q, m, a, b)
            crosses = q is not None and quad_separating(a, b) != q
            for g in range(w + 1):
                d = list(n)
                d[a] = min(g, n[a])
                d[b] = min(w - g, n[b])
                if q is None:
                    qp = 0
                elif crosses:
                    if a in part0:
                        qp = min(max(g - n[a], 0), m)
                    else:
                        qp = min(max(n[a] + m - g, 0), m)
                else:
                    qp = 0 if a in part0 else m
                key = tuple(d) + (qp,)
                lo = ("v", a) if g == 0 else ("e", a, b, g - 1, 1)
                hi = ("v", b) if g == w else ("e", a, b, g, 0)
                regions.setdefault(key, set()).update((lo, hi))
    return regions


def _point_disc(n, q, m, a, b, i):
    """Disc containing point i (from a) on edge ab: ('tri', vertex, copy) or ('quad', q, copy)."""
    w = _edge_len(n, q, m, a, b)
    if i < n[a]:
        return ("tri", a, i)
    if i >= w - n[b]:
        return ("tri", b, w - 1 - i)
    j = i - n[a]
    k = j if a in QUAD_PARTS[q][0] else m - 1 - j
    return ("quad", q, k)


def _perimeter_pos(lab, f):
    """Position of a label along the boundary of face f (vertices increasing)."""
    xs = [x for x in range(4) if x != f]
    segs = [(xs[0], xs[1]), (xs[1], xs[2]), (xs[2], xs[0])]
    if lab[0] == "v":
        return (xs.index(lab[1]), 0, 0, 0)
    _, a, b, i, s = lab
    for k, (u, w) in enumerate(segs):
        if {u, w} == {a, b}:
            if u == a:
                return (k, 1, i, s)
            return (k, 1, -i, -s)
    raise AssertionError("label not on face")


def _quad_corner_cycle(q):
    (a, b), (c, d) = QUAD_PARTS[q]
    return [(a, c), (a, d), (b, d), (b, c)]


def cut_along(tri: Triangulation, v: Sequence[int], cap: Optional[int] = None) -> CutResult:
    """Triangulate the exterior of the surface; refuses surfaces above the cell cap."""
    if not is_admissible(tri, v) or not any(v):
        raise NormalVectorError("vector is not a nonempty admissible normal surface")
    check_cap(tri, v, cap)
    v = tuple(v)
    nt = tri.size
    layouts = [_layout(v, t) for t in range(nt)]

    def edge_w(t, a, b):
        n, q, m = layouts[t]
        return _edge_len(n, q, m, a, b)

    def map_label(t, f, lab):
        """Label in tetrahedron t on face f, seen from the other side of the gluing."""
        t2, p = tri.adjacency[t][f]
        if lab[0] == "v":
            return ("v", p[lab[1]])
        _, a, b, i, s = lab
        a2, b2 = p[a], p[b]
        if a2 < b2:
            return ("e", a2, b2, i, s)
        w = edge_w(t, a, b)
        return ("e", b2, a2, w - 1 - i, 1 - s)

    def face_key(t, f, lab):
        g = tri.adjacency[t][f]
        if g is None:
            return _label_key(lab)
        t2, p = g
        if (t, f) <= (t2, p[f]):
            return _label_key(lab)
        return _label_key(map_label(t, f, lab))

    small: list[tuple] = []  # vertex labels per small tet
    host: list[int] = []
    for t in range(nt):
        n, q, m = layouts[t]
        for key, corners in sorted(_regions(n, q, m).items()):
            corners = sorted(corners, key=_label_key)
            if len(corners) == 4:
                small.append(tuple(corners))
                host.append(t)
                continue
            centre = ("c", (t,) + key)
            facets = []
            for f in range(4):
                pts = [c for c in corners if _on_face(c, f)]
                if len(pts) >= 3:
                    pts.sort(key=lambda c: _perimeter_pos(c, f))
                    start = min(range(len(pts)), key=lambda k: face_key(t, f, pts[k]))
                    facets.append(pts[start:] + pts[:start])
            by_disc: dict[tuple, list] = {}
            for c in corners:
                if c[0] == "e":
                    _, a, b, i, s = c
                    disc = _point_disc(n, q, m, a, b, i)
                    # side bit measured from the disc's vertex (or quad part 0) side
                    near = disc[1] if disc[0] == "tri" else QUAD_PARTS[q][0]
                    toward_a = a == near if disc[0] == "tri" else a in near
                    by_disc.setdefault(disc + (s if toward_a else 1 - s,), []).append(c)
            for dkey, pts in by_disc.items():
                if len(pts) < 3:
                    continue
                if dkey[0] == "tri":
                    facets.append(sorted(pts, key=_label_key))
                else:
                    order = {frozenset(e): k for k, e in enumerate(_quad_corner_cycle(dkey[1]))}
                    pts = sorted(pts, key=lambda c: order[frozenset((c[1], c[2]))])
                    facets.append(pts)
            for poly in facets:
                for k in range(1, len(poly) - 1):
                    small.append((centre, poly[0], poly[k], poly[k + 1]))
                    host.append(t)
    # glue
    adj: list[list] = [[None] * 4 for _ in small]
    by_host_face: list[dict] = [dict() for _ in range(nt)]
    for s, labs in enumerate(small):
        t = host[s]
        for i in range(4):
            fs = frozenset(labs[:i] + labs[i + 1:])
            by_host_face[t].setdefault(fs, []).append((s, i))
    surface_faces: set[tuple[int, int]] = set()
    original_faces: set[tuple[int, int]] = set()

    def perm_between(s, i, s2, i2, mapper):
        imgs = [0] * 4
        labs2 = small[s2]
        for j in range(4):
            if j == i:
                imgs[j] = i2
            else:
                imgs[j] = labs2.index(mapper(small[s][j]))
        return Perm4(tuple(imgs))

    for t in range(nt):
        for fs, lst in by_host_face[t].items():
            if len(lst) == 2:
                (s, i), (s2, i2) = lst
                p = perm_between(s, i, s2, i2, lambda x: x)
                adj[s][i] = (s2, p)
                adj[s2][i2] = (s, p.inverse())
                continue
            if len(lst) != 1:
                raise AssertionError("face shared by more than two pieces")
            s, i = lst[0]
            host_face = next((f for f in range(4) if all(_on_face(c, f) for c in fs)), None)
            if host_face is None:
                surface_faces.add((s, i))
                continue
            g = tri.adjacency[t][host_face]
            if g is None:
                original_faces.add((s, i))
                continue
            t2, p = g
            mapped = frozenset(map_label(t, host_face, c) for c in fs)
            target = by_host_face[t2].get(mapped)
            if not target:
                raise AssertionError("unmatched face across a gluing")
            (s2, i2) = target[0]
            if adj[s][i] is not None:
                continue
            q = perm_between(s, i, s2, i2, lambda x: map_label(t, host_face, x))
            adj[s][i] = (s2, q)
            adj[s2][i2] = (s, q.inverse())
    ext = Triangulation(adj)
    problems = validate(ext)
    if problems:
        raise AssertionError("cut produced inconsistent gluings: " + problems[0])
    return CutResult(ext, surface_faces, original_faces, host)


def crush(tri: Triangulation, v: Sequence[int]) -> Triangulation:
    """Crush a normal sphere or disc: drop tetrahedra with quads and re-glue the rest."""
    if not is_admissible(tri, v) or not any(v):
        raise NormalVectorError("vector is not a nonempty admissible normal surface")
    if is_vertex_linking(v):
        raise CrushError("crushing a vertex-linking surface is not supported")
    comps = classify(tri, v)
    if len(comps) != 1 or comps[0].name not in ("S2", "D2", "P2"):
        raise CrushError("crushing needs a connected normal sphere, disc or projective plane")
    nt = tri.size
    quad = []
    for t in range(nt):
        qs = [k for k in range(3) if v[7 * t + 4 + k]]
        quad.append(qs[0] if qs else -1)
    keep = [t for t in range(nt) if quad[t] < 0]
    new_index = {t: i for i, t in enumerate(keep)}
    adj: list[list] = [[None] * 4 for _ in keep]
    partner = [[0] * 4 for _ in range(3)]
    for k, ((a, b), (c, d)) in enumerate(QUAD_PARTS):
        partner[k][a], partner[k][b], partner[k][c], partner[k][d] = b, a, d, c
    for t in keep:
        for f in range(4):
            g = tri.adjacency[t][f]
            if g is None:
                continue
            dest, p = g
            steps = 0
            while dest is not None and quad[dest] >= 0:
                face = p[f]
                other = partner[quad[dest]][face]
                swap = Perm4.transposition(face, other)
                g2 = tri.adjacency[dest][other]
                if g2 is None:
                    dest = None
                    break
                p = g2[1] * swap * p
                dest = g2[0]
                steps += 1
                if steps > 4 * nt:
                    raise CrushError("face chain does not terminate")
            if dest is None:
                continue
            adj[new_index[t]][f] = (new_index[dest], p)
    out = Triangulation(adj)
    problems = validate(out)
    if problems:
        raise CrushError(problems[0])
    return out
