"""Normal surfaces in standard coordinates.

A normal surface meets each tetrahedron in triangles (cutting off one vertex)
and quadrilaterals (separating two vertex pairs).  Coordinates are stored 7
per tetrahedron: four triangle counts (by vertex) followed by three quad
counts, quad type 0 separating 01|23, type 1 02|13, type 2 03|12.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .perm import EDGE_VERTICES, edge_number
from .tri import Triangulation, _UF

__all__ = [
    "QUAD_PARTS",
    "quad_separating",
    "NormalVectorError",
    "CapExceeded",
    "DEFAULT_WEIGHT_CAP",
    "set_weight_cap",
    "matching_equations",
    "is_admissible",
    "satisfies_matching",
    "edge_weights",
    "weight",
    "euler_char",
    "haken_sum",
    "is_vertex_linking",
    "vertex_link",
    "SurfaceType",
    "SurfaceComponent",
    "SurfaceComplex",
    "reconstruct",
    "classify",
    "parse_vector",
    "format_vector",
    "arc_count",
]

QUAD_PARTS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
_QSEP = [[-1] * 4 for _ in range(4)]
for _q, (_p0, _p1) in enumerate(QUAD_PARTS):
    for _a, _b in (_p0, _p1):
        _QSEP[_a][_b] = _QSEP[_b][_a] = _q


def quad_separating(a: int, b: int) -> int:
    """The quad type that keeps vertices ``a`` and ``b`` on the same side."""
    return _QSEP[a][b]


class NormalVectorError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """A configured size cap was hit; the computation refused to continue."""


DEFAULT_WEIGHT_CAP = 10 ** 6
_settings = {"weight_cap": DEFAULT_WEIGHT_CAP}


def set_weight_cap(cap: int) -> None:
    """Largest number of cells (discs plus edge points) built explicitly."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    _settings["weight_cap"] = cap


def check_cap(tri: Triangulation, v: Sequence[int], cap: int | None = None) -> None:
    cap = _settings["weight_cap"] if cap is None else cap
    cells = sum(v) + sum(edge_weights(tri, v))
    if cells > cap:
        raise CapExceeded(f"surface has {cells} cells, above the cap of {cap}")


def _check_len(tri: Triangulation, v: Sequence[int]) -> None:
    if len(v) != 7 * tri.size:
        raise NormalVectorError(f"expected {7 * tri.size} coordinates, got {len(v)}")


def arc_count(v: Sequence[int], t: int, f: int, corner: int) -> int:
    """Normal arcs on face ``f`` of tetrahedron ``t`` cutting off vertex ``corner``."""
    return v[7 * t + corner] + v[7 * t + 4 + _QSEP[corner][f]]


def matching_equations(tri: Triangulation) -> list[list[int]]:
    """Three rows per internal face (one per arc type); columns are the 7t coordinates."""
    n = 7 * tri.size
    rows = []
    for t, f, t2, p in tri.gluing_list():
        for v in range(4):
            if v == f:
                continue
            row = [0] * n
            row[7 * t + v] += 1
            row[7 * t + 4 + _QSEP[v][f]] += 1
            w, g = p[v], p[f]
            row[7 * t2 + w] -= 1
            row[7 * t2 + 4 + _QSEP[w][g]] -= 1
            rows.append(row)
    return rows


def satisfies_matching(tri: Triangulation, v: Sequence[int]) -> bool:
    _check_len(tri, v)
    for t, f, t2, p in tri.gluing_list():
        for c in range(4):
            if c != f and arc_count(v, t, f, c) != arc_count(v, t2, p[f], p[c]):
                return False
    return True


def is_admissible(tri: Triangulation, v: Sequence[int]) -> bool:
    """Nonnegative, matching, and at most one quad type per tetrahedron (zero included)."""
    if len(v) != 7 * tri.size or any(x < 0 for x in v):
        return False
    for t in range(tri.size):
        if sum(1 for q in range(3) if v[7 * t + 4 + q]) > 1:
            return False
    return satisfies_matching(tri, v)


def edge_weights(tri: Triangulation, v: Sequence[int]) -> list[int]:
    """Intersection number with each edge class."""
    _check_len(tri, v)
    out = []
    for e in tri.skeleton.edges:
        t, p = e.embeddings[0]
        a, b = p[0], p[1]
        q = _QSEP[a][b]
        out.append(v[7 * t + a] + v[7 * t + b] + sum(v[7 * t + 4 + k] for k in range(3) if k != q))
    return out


def weight(tri: Triangulation, v: Sequence[int]) -> int:
    return sum(edge_weights(tri, v))


def euler_char(tri: Triangulation, v: Sequence[int]) -> int:
    """Corners minus arcs plus discs, counted from the coordinates."""
    _check_len(tri, v)
    corners = weight(tri, v)
    discs = sum(v)
    arcs = 0
    for t in range(tri.size):
        for f in range(4):
            g = tri.adjacency[t][f]
            if g is not None and (t, f) > (g[0], g[1][f]):
                continue
            arcs += sum(arc_count(v, t, f, c) for c in range(4) if c != f)
    return corners - arcs + discs


def haken_sum(tri: Triangulation, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    """Coordinatewise sum of two compatible surfaces."""
    s = tuple(a + b for a, b in zip(u, v))
    if not is_admissible(tri, s):
        raise NormalVectorError("surfaces are not compatible")
    return s


def is_vertex_linking(v: Sequence[int]) -> bool:
    """All quadrilateral coordinates zero."""
    return not any(v[7 * t + 4 + q] for t in range(len(v) // 7) for q in range(3))


def vertex_link(tri: Triangulation, vertex: int) -> tuple[int, ...]:
    v = [0] * (7 * tri.size)
    for t, c in tri.skeleton.vertices[vertex].embeddings:
        v[7 * t + c] = 1
    return tuple(v)


def parse_vector(text: str) -> tuple[int, ...]:
    """Read ``7t=<n> x1 x2 ...``."""
    toks = text.split()
    if not toks or not toks[0].startswith("7t="):
        raise NormalVectorError("vector must start with '7t=<n>'")
    try:
        n = int(toks[0][3:])
        vals = tuple(int(x) for x in toks[1:])
    except ValueError as exc:
        raise NormalVectorError(str(exc)) from None
    if n % 7 or len(vals) != n:
        raise NormalVectorError(f"header says {n} coordinates, found {len(vals)}")
    return vals


def format_vector(v: Sequence[int]) -> str:
    return f"7t={len(v)} " + " ".join(map(str, v))


# ---------------------------------------------------------------------------
# Explicit reconstruction


@dataclass(frozen=True)
class SurfaceType:
    name: str  # S2 P2 D2 T2 K2 A2 M2, or "other"
    euler: int
    orientable: bool
    boundary_curves: int

    def __str__(self) -> str:
        if self.name != "other":
            return self.name
        o = "orientable" if self.orientable else "nonorientable"
        return f"{o}(chi={self.euler}, b={self.boundary_curves})"


def surface_type(chi: int, orientable: bool, bdry: int) -> SurfaceType:
    name = {
        (2, True, 0): "S2",
        (1, False, 0): "P2",
        (1, True, 1): "D2",
        (0, True, 0): "T2",
        (0, False, 0): "K2",
        (0, True, 2): "A2",
        (0, False, 1): "M2",
    }.get((chi, orientable, bdry), "other")
    return SurfaceType(name, chi, orientable, bdry)


@dataclass
class SurfaceComponent:
    vector: tuple[int, ...]
    euler: int
    orientable: bool
    two_sided: bool
    boundary_curves: list[list[int]]  # each curve as a cyclic list of point classes
    discs: list[int]

    @property
    def type(self) -> SurfaceType:
        return surface_type(self.euler, self.orientable, len(self.boundary_curves))


@dataclass
class SurfaceComplex:
    """Discs, identified corners and arcs of a normal surface."""

    vector: tuple[int, ...]
    discs: list[tuple[int, str, int, int]]  # (tet, "tri"/"quad", vertex or quad type, copy)
    point_class: dict[tuple[int, int, int], int]  # (tet, edge, index from lower vertex) -> class
    point_edge: list[int]  # edge class of each point class
    n_arcs: int
    components: list[SurfaceComponent] = field(default_factory=list)

    @property
    def euler(self) -> int:
        return sum(c.euler for c in self.components)


def _tet_layout(v: Sequence[int], t: int):
    n = [v[7 * t + c] for c in range(4)]
    qs = [q for q in range(3) if v[7 * t + 4 + q]]
    if len(qs) > 1:
        raise NormalVectorError(f"tetrahedron {t} has two quad types")
    q = qs[0] if qs else None
    m = v[7 * t + 4 + q] if q is not None else 0
    return n, q, m


def _edge_len(n, q, m, a, b):
    return n[a] + n[b] + (m if q is not None and _QSEP[a][b] != q else 0)


def _positive(disc) -> tuple[int, ...]:
    """Tetrahedron vertices on the reference side of a disc."""
    _, kind, typ, _ = disc
    return (typ,) if kind == "tri" else QUAD_PARTS[typ][0]


def _quad_cycle(q: int):
    (a, b), (c, d) = QUAD_PARTS[q]
    return [(a, c), (a, d), (b, d), (b, c)]


def reconstruct(tri: Triangulation, v: Sequence[int], cap: int | None = None) -> SurfaceComplex:
    """Build the cell structure of the surface and compute its topology.

    Refuses (CapExceeded) when the surface has more cells than ``cap``.
    """
    if not is_admissible(tri, v):
        raise NormalVectorError("vector is not an admissible normal surface")
    check_cap(tri, v, cap)
    v = tuple(v)
    nt = tri.size
    layout = [_tet_layout(v, t) for t in range(nt)]
    # discs
    discs: list[tuple[int, str, int, int]] = []
    disc_id: dict[tuple[int, str, int, int], int] = {}
    for t in range(nt):
        n, q, m = layout[t]
        for c in range(4):
            for k in range(n[c]):
                disc_id[(t, "tri", c, k)] = len(discs)
                discs.append((t, "tri", c, k))
        for k in range(m):
            disc_id[(t, "quad", q, k)] = len(discs)
            discs.append((t, "quad", q, k))
    # points on edges: key (t, e, i) with i measured from the lower vertex
    pkey: dict[tuple[int, int, int], int] = {}
    for t in range(nt):
        n, q, m = layout[t]
        for e, (a, b) in enumerate(EDGE_VERTICES):
            for i in range(_edge_len(n, q, m, a, b)):
                pkey[(t, e, i)] = len(pkey)
    puf = _UF(len(pkey))

    def pidx(t, a, b, i):
        """Point at index i counted from vertex a on edge ab of tet t."""
        e = edge_number(a, b)
        if a < b:
            return pkey[(t, e, i)]
        n, q, m = layout[t]
        return pkey[(t, e, _edge_len(n, q, m, a, b) - 1 - i)]

    def arc_disc(t, f, c, i):
        n, q, m = layout[t]
        if i < n[c]:
            return disc_id[(t, "tri", c, i)]
        j = i - n[c]
        k = j if c in QUAD_PARTS[q][0] else m - 1 - j
        return disc_id[(t, "quad", q, k)]

    def disc_dir(d, c, x, y):
        """+1 if disc d's boundary runs from corner edge (c,x) to (c,y)."""
        t, kind, typ, _ = discs[d]
        if kind == "tri":
            cyc = [w for w in range(4) if w != typ]
            i, j = cyc.index(x), cyc.index(y)
            return 1 if (j - i) % 3 == 1 else -1
        cyc = [frozenset(e) for e in _quad_cycle(typ)]
        i, j = cyc.index(frozenset((c, x))), cyc.index(frozenset((c, y)))
        return 1 if (j - i) % 4 == 1 else -1

    duf = _UF(len(discs))
    tuf = _UF(len(discs))
    orientable_conflict: set[int] = set()
    one_sided: set[int] = set()
    arc_pairs = 0
    boundary_arcs: list[tuple[int, int, int]] = []  # (disc, point, point)
    arcs_total = 0
    for t in range(nt):
        for f in range(4):
            g = tri.adjacency[t][f]
            for c in range(4):
                if c == f:
                    continue
                x, y = sorted(w for w in range(4) if w not in (c, f))
                cnt = arc_count(v, t, f, c)
                arcs_total += cnt
                for i in range(cnt):
                    d = arc_disc(t, f, c, i)
                    if g is None:
                        boundary_arcs.append((d, pidx(t, c, x, i), pidx(t, c, y, i)))
                        continue
                    t2, p = g
                    if (t, f) > (t2, p[f]):
                        continue
                    arc_pairs += 1
                    c2, x2, y2 = p[c], p[x], p[y]
                    d2 = arc_disc(t2, p[f], c2, i)
                    puf.union(pidx(t, c, x, i), pidx(t2, c2, x2, i))
                    puf.union(pidx(t, c, y, i), pidx(t2, c2, y2, i))
                    rel = 1 if disc_dir(d, c, x, y) * disc_dir(d2, c2, x2, y2) == 1 else 0
                    if not duf.union(d, d2, rel):
                        orientable_conflict.add(d)
                    # transverse sides: the side of d facing c is the side of d2 facing p[c]
                    trel = int((c in _positive(discs[d])) != (c2 in _positive(discs[d2])))
                    if not tuf.union(d, d2, trel):
                        one_sided.add(d)
    n_arcs = arcs_total - arc_pairs
    # point classes
    proot: dict[int, int] = {}
    point_class: dict[tuple[int, int, int], int] = {}
    sk = tri.skeleton
    point_edge: list[int] = []
    for key, idx in pkey.items():
        r = puf.find(idx)[0]
        if r not in proot:
            proot[r] = len(proot)
            point_edge.append(sk.edge_of[key[0]][key[1]])
        point_class[key] = proot[r]
    # components
    droot: dict[int, int] = {}
    comp_of = [0] * len(discs)
    for d in range(len(discs)):
        r = duf.find(d)[0]
        if r not in droot:
            droot[r] = len(droot)
        comp_of[d] = droot[r]
    ncomp = len(droot)
    comp_discs: list[list[int]] = [[] for _ in range(ncomp)]
    for d, c in enumerate(comp_of):
        comp_discs[c].append(d)
    bad_comp = {comp_of[d] for d in orientable_conflict}
    one_sided_comp = {comp_of[d] for d in one_sided}
    # corners per component
    comp_points: list[set[int]] = [set() for _ in range(ncomp)]
    for d, (t, kind, typ, k) in enumerate(discs):
        n, q, m = layout[t]
        if kind == "tri":
            for w in range(4):
                if w != typ:
                    comp_points[comp_of[d]].add(point_class_of(pkey, puf, proot, pidx(t, typ, w, k)))
        else:
            (a, b), _ = QUAD_PARTS[typ]
            for (x, y) in _quad_cycle(typ):
                comp_points[comp_of[d]].add(point_class_of(pkey, puf, proot, pidx(t, x, y, n[x] + k)))
    comp_arcs = [0] * ncomp
    for d, (t, kind, typ, k) in enumerate(discs):
        comp_arcs[comp_of[d]] += 3 if kind == "tri" else 4
    comp_barcs = [0] * ncomp
    bgraph: dict[int, list[int]] = {}
    for d, p1, p2 in boundary_arcs:
        comp_barcs[comp_of[d]] += 1
        a = point_class_of(pkey, puf, proot, p1)
        b = point_class_of(pkey, puf, proot, p2)
        bgraph.setdefault(a, []).append(b)
        bgraph.setdefault(b, []).append(a)
    # boundary curves
    curves_of: list[list[list[int]]] = [[] for _ in range(ncomp)]
    point_comp = {}
    for c in range(ncomp):
        for pt in comp_points[c]:
            point_comp[pt] = c
    seen: set[int] = set()
    for start in sorted(bgraph):
        if start in seen:
            continue
        curve = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nbrs = bgraph[cur]
            nxt = None
            for w in nbrs:
                if w != prev and w not in seen:
                    nxt = w
                    break
            if nxt is None:
                break
            seen.add(nxt)
            curve.append(nxt)
            prev, cur = cur, nxt
        curves_of[point_comp[start]].append(curve)
    comps = []
    for c in range(ncomp):
        f = len(comp_discs[c])
        e = (comp_arcs[c] + comp_barcs[c]) // 2
        chi = len(comp_points[c]) - e + f
        vec = [0] * len(v)
        for d in comp_discs[c]:
            t, kind, typ, _ = discs[d]
            vec[7 * t + (typ if kind == "tri" else 4 + typ)] += 1
        comps.append(
            SurfaceComponent(tuple(vec), chi, c not in bad_comp, c not in one_sided_comp, curves_of[c], comp_discs[c])
        )
    comps.sort(key=lambda s: (min(s.discs)))
    return SurfaceComplex(v, discs, point_class, point_edge, n_arcs, comps)


def point_class_of(pkey, puf, proot, idx):
    return proot[puf.find(idx)[0]]


def classify(tri: Triangulation, v: Sequence[int]) -> list[SurfaceType]:
    """Topological type of each connected component."""
    return [c.type for c in reconstruct(tri, v).components]
