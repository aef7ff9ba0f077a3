"""Triangulations of 3-manifolds: gluing tables, skeleta, homology.

A triangulation is a list of tetrahedra whose faces are glued in pairs.
Face ``i`` of a tetrahedron is the face opposite vertex ``i``.  A gluing of
face ``f`` of tetrahedron ``t`` is stored as ``(t', p)`` where ``p`` sends the
vertices of ``t`` to the vertices of ``t'``; the partner face is ``p[f]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .perm import EDGE_VERTICES, IDENTITY, Perm4, edge_number
from .smith import abelian_invariants

__all__ = [
    "Triangulation",
    "Skeleton",
    "VertexClass",
    "EdgeClass",
    "BoundaryComponent",
    "H1",
    "GluingParseError",
    "InvalidTriangulation",
    "parse_gluing_table",
    "format_gluing_table",
    "validate",
    "skeleton",
    "homology_h1",
]

Gluing = Optional[tuple[int, Perm4]]


class GluingParseError(ValueError):
    """Malformed gluing-table text; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidTriangulation(ValueError):
    pass


@dataclass(frozen=True)
class H1:
    rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = (["Z"] if self.rank == 1 else [f"Z^{self.rank}"] if self.rank else []) + [
            f"Z/{d}" for d in self.torsion
        ]
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion


class Triangulation:
    """An immutable gluing table."""

    __slots__ = ("_adj", "__dict__")

    def __init__(self, adjacency: Iterable[Iterable[Gluing]]):
        self._adj: tuple[tuple[Gluing, ...], ...] = tuple(tuple(row) for row in adjacency)
        for row in self._adj:
            if len(row) != 4:
                raise ValueError("each tetrahedron needs exactly four face entries")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_gluings(cls, n: int, gluings: Iterable[tuple[int, int, int, Perm4]]) -> "Triangulation":
        """Build from one-sided gluings ``(t, f, t2, perm)``; partners are filled in."""
        adj: list[list[Gluing]] = [[None] * 4 for _ in range(n)]
        for t, f, t2, p in gluings:
            p = p if isinstance(p, Perm4) else Perm4(p)
            f2 = p[f]
            for (a, b, q) in ((t, f, (t2, p)), (t2, f2, (t, p.inverse()))):
                cur = adj[a][b]
                if cur is not None and cur != q:
                    raise InvalidTriangulation(f"face ({a}, {b}) glued twice")
                adj[a][b] = q
        return cls(adj)

    # -- basic access -----------------------------------------------------
    @property
    def size(self) -> int:
        return len(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def adjacent(self, t: int, f: int) -> Gluing:
        return self._adj[t][f]

    @property
    def adjacency(self) -> tuple[tuple[Gluing, ...], ...]:
        return self._adj

    def __eq__(self, other) -> bool:
        return isinstance(other, Triangulation) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(tuple(tuple((g[0], g[1].index) if g else None for g in r) for r in self._adj))

    def __repr__(self) -> str:
        return f"Triangulation(size={self.size})"

    def gluing_list(self) -> Iterator[tuple[int, int, int, Perm4]]:
        """Each glued face pair once, from its lexicographically smaller side."""
        for t, row in enumerate(self._adj):
            for f, g in enumerate(row):
                if g is not None:
                    t2, p = g
                    if (t, f) <= (t2, p[f]):
                        yield t, f, t2, p

    # -- derived structure -------------------------------------------------
    @cached_property
    def skeleton(self) -> "Skeleton":
        return skeleton(self)

    @cached_property
    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def components(self) -> list[list[int]]:
        """Tetrahedra of each connected component, in order of least member."""
        seen = [-1] * self.size
        comps = []
        for s in range(self.size):
            if seen[s] >= 0:
                continue
            comp = [s]
            seen[s] = len(comps)
            stack = [s]
            while stack:
                t = stack.pop()
                for g in self._adj[t]:
                    if g is not None and seen[g[0]] < 0:
                        seen[g[0]] = len(comps)
                        comp.append(g[0])
                        stack.append(g[0])
            comps.append(sorted(comp))
        return comps

    def orientation(self) -> Optional[list[int]]:
        """Signs making every gluing orientation-reversing, or None."""
        o = [0] * self.size
        for s in range(self.size):
            if o[s]:
                continue
            o[s] = 1
            stack = [s]
            while stack:
                t = stack.pop()
                for g in self._adj[t]:
                    if g is None:
                        continue
                    t2, p = g
                    want = -p.sign * o[t]
                    if o[t2] == 0:
                        o[t2] = want
                        stack.append(t2)
                    elif o[t2] != want:
                        return None
        return o

    @cached_property
    def is_orientable(self) -> bool:
        return self.orientation() is not None

    @property
    def is_closed(self) -> bool:
        sk = self.skeleton
        return not sk.boundary_components and not any(v.ideal for v in sk.vertices)

    @property
    def is_ideal(self) -> bool:
        return any(v.ideal for v in self.skeleton.vertices)

    @property
    def has_boundary_faces(self) -> bool:
        return any(g is None for row in self._adj for g in row)

    @property
    def is_valid(self) -> bool:
        """Gluings consistent, edges valid, every vertex link a closed surface or disc."""
        if validate(self):
            return False
        sk = self.skeleton
        return all(e.valid for e in sk.edges) and all(v.link in _VALID_LINKS for v in sk.vertices)

    @property
    def is_material(self) -> bool:
        return all(v.link in ("sphere", "disc") for v in self.skeleton.vertices)

    def homology_h1(self) -> H1:
        return homology_h1(self)

    # -- transformations ---------------------------------------------------
    def relabel(self, tet_order: list[int], vertex_perms: list[Perm4]) -> "Triangulation":
        """Tetrahedron ``t`` becomes ``tet_order[t]`` and its vertex ``v`` becomes ``vertex_perms[t][v]``."""
        n = self.size
        adj: list[list[Gluing]] = [[None] * 4 for _ in range(n)]
        for t in range(n):
            nt = tet_order[t]
            vp = vertex_perms[t]
            for f in range(4):
                g = self._adj[t][f]
                if g is None:
                    continue
                t2, p = g
                adj[nt][vp[f]] = (tet_order[t2], vertex_perms[t2] * p * vp.inverse())
        return Triangulation(adj)

    def sub_triangulation(self, tets: list[int]) -> "Triangulation":
        """The tetrahedra ``tets`` (in that order); gluings leaving the set become boundary."""
        where = {t: i for i, t in enumerate(tets)}
        adj = []
        for t in tets:
            row = []
            for g in self._adj[t]:
                if g is not None and g[0] in where:
                    row.append((where[g[0]], g[1]))
                else:
                    row.append(None)
            adj.append(row)
        return Triangulation(adj)

    def split_components(self) -> list["Triangulation"]:
        return [self.sub_triangulation(c) for c in self.components()]

    @staticmethod
    def disjoint_union(parts: Iterable["Triangulation"]) -> "Triangulation":
        adj = []
        off = 0
        for part in parts:
            for row in part.adjacency:
                adj.append([None if g is None else (g[0] + off, g[1]) for g in row])
            off += part.size
        return Triangulation(adj)

    # -- text format ---------------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "Triangulation":
        return parse_gluing_table(text)

    def to_text(self) -> str:
        return format_gluing_table(self)


_VALID_LINKS = ("sphere", "disc", "torus", "klein", "projective", "closed")

_ENTRY = re.compile(r"(\d+)\s*\(\s*([0-3])[\s,]*([0-3])[\s,]*([0-3])[\s,]*([0-3])\s*\)|(bdry)")


def parse_gluing_table(text: str) -> Triangulation:
    """Parse one line per tetrahedron: four entries ``t'(p0 p1 p2 p3)`` or ``bdry``."""
    rows: list[list[Gluing]] = []
    linenos: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        pos = 0
        row: list[Gluing] = []
        while True:
            while pos < len(line) and line[pos] in " \t,;|":
                pos += 1
            if pos >= len(line):
                break
            m = _ENTRY.match(line, pos)
            if not m:
                raise GluingParseError(f"cannot read entry at column {pos + 1}: {line[pos:]!r}", lineno)
            if m.group(6):
                row.append(None)
            else:
                imgs = tuple(int(m.group(k)) for k in range(2, 6))
                try:
                    p = Perm4(imgs)
                except ValueError:
                    raise GluingParseError(f"{imgs} is not a permutation", lineno) from None
                row.append((int(m.group(1)), p))
            pos = m.end()
        if len(row) != 4:
            raise GluingParseError(f"expected 4 face entries, found {len(row)}", lineno)
        rows.append(row)
        linenos.append(lineno)
    n = len(rows)
    for t, row in enumerate(rows):
        for g in row:
            if g is not None and not 0 <= g[0] < n:
                raise GluingParseError(f"tetrahedron index {g[0]} out of range", linenos[t])
    tri = Triangulation(rows)
    problems = validate(tri)
    if problems:
        raise GluingParseError(problems[0], linenos[int(re.search(r"\((\d+)", problems[0]).group(1))])
    return tri


def format_gluing_table(tri: Triangulation) -> str:
    lines = []
    for row in tri.adjacency:
        lines.append(" ".join("bdry" if g is None else f"{g[0]}({' '.join(map(str, g[1].images))})" for g in row))
    return "\n".join(lines) + ("\n" if lines else "")


def validate(tri: Triangulation) -> list[str]:
    """Diagnostics for broken gluing invariants; empty means consistent."""
    out = []
    n = tri.size
    for t, row in enumerate(tri.adjacency):
        for f, g in enumerate(row):
            if g is None:
                continue
            t2, p = g
            if not 0 <= t2 < n:
                out.append(f"face ({t}, {f}): destination tetrahedron {t2} out of range")
                continue
            f2 = p[f]
            if t2 == t and f2 == f:
                out.append(f"face ({t}, {f}): glued to itself")
                continue
            back = tri.adjacency[t2][f2]
            if back is None or back[0] != t or back[1] != p.inverse():
                out.append(f"face ({t}, {f}): partner face ({t2}, {f2}) does not glue back by the inverse")
    return out


# ---------------------------------------------------------------------------
# Skeleton


class _UF:
    __slots__ = ("parent", "parity")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n

    def find(self, x: int) -> tuple[int, int]:
        par = 0
        root = x
        while self.parent[root] != root:
            par ^= self.parity[root]
            root = self.parent[root]
        # path compression
        cur, cp = x, par
        while self.parent[cur] != cur:
            nxt = self.parent[cur]
            np_ = cp ^ self.parity[cur]
            self.parent[cur] = root
            self.parity[cur] = cp
            cur, cp = nxt, np_
        return root, par

    def union(self, a: int, b: int, rel: int = 0) -> bool:
        """Merge with parity(a) ^ parity(b) == rel; returns False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        if ra < rb:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[ra] = rb
        self.parity[ra] = pa ^ pb ^ rel
        return True


@dataclass
class VertexClass:
    index: int
    embeddings: list[tuple[int, int]]
    boundary: bool
    link: str  # sphere, disc, torus, klein, projective, closed, invalid
    link_euler: int
    link_orientable: bool

    @property
    def ideal(self) -> bool:
        return self.link in ("torus", "klein", "projective", "closed")

    @property
    def degree(self) -> int:
        return len(self.embeddings)


@dataclass
class EdgeClass:
    index: int
    # Walk around the edge: (tet, perm) with perm[0], perm[1] the endpoints;
    # the walk leaves each tetrahedron through face perm[3].
    embeddings: list[tuple[int, Perm4]]
    boundary: bool
    valid: bool

    @property
    def degree(self) -> int:
        return len(self.embeddings)


@dataclass
class BoundaryComponent:
    index: int
    faces: list[tuple[int, int]]
    euler: int
    orientable: bool
    vertices: list[int]
    edges: list[int]


@dataclass
class Skeleton:
    vertices: list[VertexClass]
    edges: list[EdgeClass]
    faces: list[list[tuple[int, int]]]
    vertex_of: list[list[int]]
    edge_of: list[list[int]]
    face_of: list[list[int]]
    boundary_components: list[BoundaryComponent] = field(default_factory=list)

    @property
    def euler_characteristic(self) -> int:
        """V - E + F - T of the identified complex (ideal vertices counted)."""
        return len(self.vertices) - len(self.edges) + len(self.faces) - len(self.vertex_of)

    @property
    def truncated_euler_characteristic(self) -> int:
        """Euler characteristic with each ideal vertex replaced by its link (the compact core)."""
        return self.euler_characteristic - sum(1 - v.link_euler for v in self.vertices if v.ideal)


def _classes(n_slots: int, uf: _UF) -> tuple[list[int], list[list[int]]]:
    label = [-1] * n_slots
    members: list[list[int]] = []
    root_label: dict[int, int] = {}
    for s in range(n_slots):
        r, _ = uf.find(s)
        if r not in root_label:
            root_label[r] = len(members)
            members.append([])
        label[s] = root_label[r]
        members[root_label[r]].append(s)
    return label, members


def _edge_walk(tri: Triangulation, t: int, a: int, b: int) -> tuple[list[tuple[int, Perm4]], bool]:
    """Embeddings of the edge through (t, ab) in walk order, and a boundary flag."""
    c, d = [x for x in range(4) if x != a and x != b]
    start = (t, a, b, c, d)

    # Walk backwards to a boundary face if there is one.
    boundary = False
    state = start
    seen = {(t, edge_number(a, b))}
    while True:
        tt, a_, b_, c_, d_ = state
        g = tri.adjacency[tt][c_]
        if g is None:
            boundary = True
            break
        t2, p = g
        nxt = (t2, p[a_], p[b_], p[d_], p[c_])
        key = (t2, edge_number(nxt[1], nxt[2]))
        if key in seen:
            break
        seen.add(key)
        state = nxt
    if boundary:
        start = state
    out = []
    state = start
    seen = set()
    while True:
        tt, a_, b_, c_, d_ = state
        key = (tt, edge_number(a_, b_))
        if key in seen:
            break
        seen.add(key)
        out.append((tt, Perm4(a_, b_, c_, d_)))
        g = tri.adjacency[tt][d_]
        if g is None:
            boundary = True
            break
        t2, p = g
        state = (t2, p[a_], p[b_], p[d_], p[c_])
    return out, boundary


def skeleton(tri: Triangulation) -> Skeleton:
    if validate(tri):
        raise InvalidTriangulation(validate(tri)[0])
    n = tri.size
    adj = tri.adjacency
    vuf, euf, fuf = _UF(4 * n), _UF(6 * n), _UF(4 * n)
    bad_edges: set[int] = set()
    for t, f, t2, p in tri.gluing_list():
        fuf.union(4 * t + f, 4 * t2 + p[f])
        for v in range(4):
            if v != f:
                vuf.union(4 * t + v, 4 * t2 + p[v])
        for e, (a, b) in enumerate(EDGE_VERTICES):
            if a == f or b == f:
                continue
            pa, pb = p[a], p[b]
            rel = 1 if pa > pb else 0
            if not euf.union(6 * t + e, 6 * t2 + edge_number(pa, pb), rel):
                bad_edges.add(6 * t + e)
    vlabel, vmem = _classes(4 * n, vuf)
    elabel, emem = _classes(6 * n, euf)
    flabel, fmem = _classes(4 * n, fuf)
    vertex_of = [vlabel[4 * t: 4 * t + 4] for t in range(n)]
    edge_of = [elabel[6 * t: 6 * t + 6] for t in range(n)]
    face_of = [flabel[4 * t: 4 * t + 4] for t in range(n)]
    faces = [[(s // 4, s % 4) for s in m] for m in fmem]
    bad_edge_classes = {elabel[s] for s in bad_edges}

    edges = []
    for i, m in enumerate(emem):
        s = m[0]
        t, e = divmod(s, 6)
        a, b = EDGE_VERTICES[e]
        emb, bdry = _edge_walk(tri, t, a, b)
        valid = i not in bad_edge_classes
        edges.append(EdgeClass(i, emb, bdry, valid))

    vertices = []
    for i, m in enumerate(vmem):
        corners = [(s // 4, s % 4) for s in m]
        vertices.append(_vertex_link(tri, i, corners))

    sk = Skeleton(vertices, edges, faces, vertex_of, edge_of, face_of)
    sk.boundary_components = _boundary_components(tri, sk)
    return sk


def _vertex_link(tri: Triangulation, index: int, corners: list[tuple[int, int]]) -> VertexClass:
    adj = tri.adjacency
    cidx = {c: k for k, c in enumerate(corners)}
    # link vertices: (corner, w) for w != v
    luf = _UF(4 * len(corners))
    boundary_edges = 0
    orient = [0] * len(corners)
    orient[0] = 1
    orientable = True
    # propagate orientation with BFS
    order = [0]
    for k in order:
        t, v = corners[k]
        for f in range(4):
            if f == v:
                continue
            g = adj[t][f]
            if g is None:
                boundary_edges += 1
                continue
            t2, p = g
            k2 = cidx[(t2, p[v])]
            for w in range(4):
                if w != v and w != f:
                    luf.union(4 * k + w, 4 * k2 + p[w])
            want = -p.sign * orient[k]
            if orient[k2] == 0:
                orient[k2] = want
                order.append(k2)
            elif orient[k2] != want:
                orientable = False
    nverts = len({luf.find(4 * k + w)[0] for k, (t, v) in enumerate(corners) for w in range(4) if w != v})
    nf = len(corners)
    ne = (3 * nf + boundary_edges) // 2
    chi = nverts - ne + nf
    boundary = boundary_edges > 0
    if boundary:
        link = "disc" if chi == 1 else "invalid"
    elif chi == 2:
        link = "sphere"
    elif chi == 1:
        link = "projective"
    elif chi == 0:
        link = "torus" if orientable else "klein"
    else:
        link = "closed"
    return VertexClass(index, corners, boundary, link, chi, orientable)


def _boundary_components(tri: Triangulation, sk: Skeleton) -> list[BoundaryComponent]:
    bfaces = [(t, f) for t in range(tri.size) for f in range(4) if tri.adjacency[t][f] is None]
    if not bfaces:
        return []
    idx = {bf: i for i, bf in enumerate(bfaces)}
    uf = _UF(len(bfaces))
    by_edge: dict[int, list[int]] = {}
    for i, (t, f) in enumerate(bfaces):
        for e, (a, b) in enumerate(EDGE_VERTICES):
            if a != f and b != f:
                by_edge.setdefault(sk.edge_of[t][e], []).append(i)
    for lst in by_edge.values():
        for j in lst[1:]:
            uf.union(lst[0], j)
    groups: dict[int, list[int]] = {}
    for i in range(len(bfaces)):
        groups.setdefault(uf.find(i)[0], []).append(i)
    out = []
    for k, members in enumerate(sorted(groups.values(), key=min)):
        faces = [bfaces[i] for i in members]
        verts = sorted({sk.vertex_of[t][v] for t, f in faces for v in range(4) if v != f})
        edges = sorted({sk.edge_of[t][e] for t, f in faces for e, (a, b) in enumerate(EDGE_VERTICES) if f not in (a, b)})
        chi = len(verts) - len(edges) + len(faces)
        orientable = _faces_orientable(tri, faces, sk)
        out.append(BoundaryComponent(k, faces, chi, orientable, verts, edges))
    return out


def _faces_orientable(tri: Triangulation, faces: list[tuple[int, int]], sk: Skeleton) -> bool:
    """Orientability of a boundary surface, by walking boundary edges."""
    # Boundary triangles are adjacent across a boundary edge; the adjacency is
    # found by walking around the edge inside the 3-manifold.
    fidx = {bf: i for i, bf in enumerate(faces)}
    # orientation of boundary triangle (t, f): induced vertex order of face f
    # from tetrahedron orientation convention; compare through the edge walk.
    o = [0] * len(faces)
    o[0] = 1
    order = [0]
    ok = True
    for k in order:
        t, f = faces[k]
        for a in range(4):
            for b in range(a + 1, 4):
                if f in (a, b):
                    continue
                other = _across_boundary_edge(tri, t, f, a, b)
                if other is None:
                    continue
                t2, f2, a2, b2 = other
                k2 = fidx[(t2, f2)]
                # triangle (t,f) traverses a->b in its induced orientation with
                # sign s1; the neighbour traverses a2->b2 with sign s2.
                s1 = _face_edge_sign(f, a, b)
                s2 = _face_edge_sign(f2, a2, b2)
                want = -o[k] * s1 * s2
                if o[k2] == 0:
                    o[k2] = want
                    order.append(k2)
                elif o[k2] != want:
                    ok = False
    return ok


def _face_edge_sign(f: int, a: int, b: int) -> int:
    """+1 if a->b agrees with the cyclic order of face f's vertices (increasing, alternated by f)."""
    verts = [x for x in range(4) if x != f]
    i, j = verts.index(a), verts.index(b)
    s = 1 if (j - i) % 3 == 1 else -1
    return s if f % 2 == 0 else -s


def _across_boundary_edge(tri: Triangulation, t: int, f: int, a: int, b: int):
    """From boundary face (t,f) walk through the tetrahedra around edge ab to the other boundary face."""
    c = f
    d = next(x for x in range(4) if x not in (a, b, f))
    # we stand on face opposite c=f; walk through face opposite d
    tt, a_, b_, c_, d_ = t, a, b, c, d
    for _ in range(4 * tri.size + 4):
        g = tri.adjacency[tt][d_]
        if g is None:
            return tt, d_, a_, b_
        t2, p = g
        tt, a_, b_, c_, d_ = t2, p[a_], p[b_], p[d_], p[c_]
    return None


# ---------------------------------------------------------------------------
# Homology


def homology_h1(tri: Triangulation) -> H1:
    """First homology of the manifold (ideal vertices removed), via the dual complex."""
    sk = tri.skeleton
    n = tri.size
    # dual graph: vertices = tetrahedra, edges = internal faces
    internal = [i for i, emb in enumerate(sk.faces) if len(emb) == 2]
    tree_faces: set[int] = set()
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        while stack:
            t = stack.pop()
            for f in range(4):
                g = tri.adjacency[t][f]
                if g is not None and not seen[g[0]]:
                    seen[g[0]] = True
                    tree_faces.add(sk.face_of[t][f])
                    stack.append(g[0])
    gens = [i for i in internal if i not in tree_faces]
    gidx = {fc: k for k, fc in enumerate(gens)}
    rels = []
    for e in sk.edges:
        if e.boundary:
            continue
        row: dict[int, int] = {}
        for t, p in e.embeddings:
            f = p[3]
            fc = sk.face_of[t][f]
            if fc not in gidx:
                continue
            sign = 1 if sk.faces[fc][0] == (t, f) else -1
            k = gidx[fc]
            row[k] = row.get(k, 0) + sign
        row = {k: v for k, v in row.items() if v}
        if row:
            rels.append(row)
    rank, torsion = abelian_invariants(len(gens), rels)
    return H1(rank, torsion)
