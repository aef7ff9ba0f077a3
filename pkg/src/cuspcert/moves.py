"""Local moves on triangulations and replayable move sequences.

Pachner moves are performed by removing a small region of tetrahedra and
inserting new ones.  Each removed tetrahedron's corners carry labels local to
the region; a new tetrahedron is named by four labels, and its faces glue to
one another or to whatever the region's outer faces were glued to, matched
by label sets.

Boundary moves act on a boundary edge: a fold glues its two boundary
triangles together (removing a boundary vertex), a layer attaches a new
tetrahedron across it (flipping the edge).  Locations are edge and face class
indices in the triangulation's skeleton, so a move sequence recorded against
decoded signatures replays exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .perm import Perm4
from .tri import Triangulation, validate

__all__ = [
    "MoveError",
    "MOVE_TAGS",
    "pachner_23",
    "pachner_32",
    "fold",
    "layer",
    "apply_move",
    "close_cusps",
    "simplify",
    "SimplificationProof",
]

MOVE_TAGS = ("fold", "layer", "pachner23", "pachner32")


class MoveError(ValueError):
    """The move is not applicable at the given location."""


@dataclass
class SimplificationProof:
    """Steps (signature before the move, location, move tag)."""

    steps: list[tuple[str, int, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def to_text(self) -> str:
        return "".join("%s %d %s\n" % s for s in self.steps)

    @classmethod
    def from_text(cls, text: str) -> "SimplificationProof":
        steps = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            sig, loc, tag = line.split()
            if tag not in MOVE_TAGS:
                raise ValueError("unknown move %r" % tag)
            steps.append((sig, int(loc), tag))
        return cls(steps)


def _replace(tri: Triangulation, region: list[int], labels: dict, new_tets: list[tuple]) -> Triangulation:
    if len(set(region)) != len(region):
        raise MoveError("region tetrahedra are not distinct")
    inside = set(region)
    adj = tri.adjacency
    # outer faces of the region, keyed by label set
    outer: dict[frozenset, tuple[int, int]] = {}
    for t in region:
        lab = labels[t]
        for g in range(4):
            key = frozenset(lab[i] for i in range(4) if i != g)
            nb = adj[t][g]
            if nb is not None and nb[0] in inside:
                t2, p = nb
                if all(labels[t2][p[i]] == lab[i] for i in range(4) if i != g) and t2 != t:
                    continue  # interior face of the region
            if key in outer:
                raise MoveError("region has repeated outer faces")
            outer[key] = (t, g)
    new_faces: dict[frozenset, list[tuple[int, int]]] = {}
    for k, labs in enumerate(new_tets):
        for i in range(4):
            key = frozenset(labs[j] for j in range(4) if j != i)
            new_faces.setdefault(key, []).append((k, i))
    keep = [t for t in range(tri.size) if t not in inside]
    index = {t: i for i, t in enumerate(keep)}
    base = len(keep)
    out: list[list] = [[None] * 4 for _ in range(base + len(new_tets))]
    for t in keep:
        for g in range(4):
            nb = adj[t][g]
            if nb is not None and nb[0] not in inside:
                out[index[t]][g] = (index[nb[0]], nb[1])
    slot_of: dict[tuple[int, int], tuple[int, int]] = {}
    for key, lst in new_faces.items():
        if len(lst) == 2:
            (k, i), (m, j) = lst
            perm = Perm4(tuple(j if x == i else new_tets[m].index(new_tets[k][x]) for x in range(4)))
            out[base + k][i] = (base + m, perm)
            out[base + m][j] = (base + k, perm.inverse())
        elif len(lst) == 1:
            if key not in outer:
                raise MoveError("new face does not match the region boundary")
            slot_of[outer[key]] = lst[0]
        else:
            raise MoveError("face shared by more than two new tetrahedra")
    if len(slot_of) != len(outer):
        raise MoveError("region boundary not covered by new tetrahedra")
    for (t, g), (k, i) in slot_of.items():
        nb = adj[t][g]
        if nb is None:
            continue
        t2, p = nb
        lab = labels[t]
        new = new_tets[k]
        if t2 not in inside:
            perm = Perm4(tuple(p[g] if x == i else p[lab.index(new[x])] for x in range(4)))
            out[base + k][i] = (index[t2], perm)
            out[index[t2]][p[g]] = (base + k, perm.inverse())
        else:
            m, j = slot_of[(t2, p[g])]
            perm = Perm4(tuple(j if x == i else new_tets[m].index(labels[t2][p[lab.index(new[x])]])
                               for x in range(4)))
            out[base + k][i] = (base + m, perm)
            out[base + m][j] = (base + k, perm.inverse())
    res = Triangulation(out)
    problems = validate(res)
    if problems:
        raise MoveError(problems[0])
    return res


def pachner_23(tri: Triangulation, face: int) -> Triangulation:
    """Replace the two tetrahedra on an internal face class by three around a new edge."""
    sk = tri.skeleton
    if not 0 <= face < len(sk.faces):
        raise MoveError("no face class %d" % face)
    slots = sk.faces[face]
    if len(slots) != 2:
        raise MoveError("face %d is a boundary face" % face)
    t0, f0 = slots[0]
    t1, p = tri.adjacency[t0][f0]
    if t1 == t0:
        raise MoveError("face %d joins a tetrahedron to itself" % face)
    labels = {t0: (0, 1, 2, 3)}
    lab1 = [None] * 4
    for i in range(4):
        lab1[p[i]] = 4 if i == f0 else i
    labels[t1] = tuple(lab1)
    tri_v = [i for i in range(4) if i != f0]
    new = []
    for j in tri_v:
        x, y = [i for i in tri_v if i != j]
        new.append((f0, 4, x, y))
    return _replace(tri, [t0, t1], labels, new)


def pachner_32(tri: Triangulation, edge: int) -> Triangulation:
    """Replace the three tetrahedra around an internal degree-3 edge by two."""
    sk = tri.skeleton
    if not 0 <= edge < len(sk.edges):
        raise MoveError("no edge class %d" % edge)
    e = sk.edges[edge]
    if e.boundary:
        raise MoveError("edge %d is a boundary edge" % edge)
    if len(e.embeddings) != 3 or not e.valid:
        raise MoveError("edge %d does not have degree three" % edge)
    tets = [t for t, _ in e.embeddings]
    if len(set(tets)) != 3:
        raise MoveError("edge %d meets a tetrahedron more than once" % edge)
    labels = {}
    for k, (t, perm) in enumerate(e.embeddings):
        lab = [None] * 4
        lab[perm[0]] = "u"
        lab[perm[1]] = "v"
        lab[perm[3]] = k
        lab[perm[2]] = (k + 1) % 3
        labels[t] = tuple(lab)
    return _replace(tri, tets, labels, [("u", 0, 1, 2), ("v", 0, 1, 2)])


def _boundary_wings(tri: Triangulation, edge: int):
    """The two boundary triangles on a boundary edge, as (tet, perm) at the two ends of its walk."""
    sk = tri.skeleton
    if not 0 <= edge < len(sk.edges):
        raise MoveError("no edge class %d" % edge)
    e = sk.edges[edge]
    if not e.boundary:
        raise MoveError("edge %d is not a boundary edge" % edge)
    t0, p0 = e.embeddings[0]
    tk, pk = e.embeddings[-1]
    if tri.adjacency[t0][p0[2]] is not None or tri.adjacency[tk][pk[3]] is not None:
        raise MoveError("edge %d walk does not end on the boundary" % edge)
    if (t0, p0[2]) == (tk, pk[3]):
        raise MoveError("edge %d has a single boundary triangle" % edge)
    return (t0, p0), (tk, pk)


def fold(tri: Triangulation, edge: int) -> Triangulation:
    """Close the book: glue the two boundary triangles meeting along a boundary edge."""
    sk = tri.skeleton
    (t0, p0), (tk, pk) = _boundary_wings(tri, edge)
    x1 = sk.vertex_of[t0][p0[3]]
    x2 = sk.vertex_of[tk][pk[2]]
    if x1 == x2:
        raise MoveError("the vertices opposite edge %d coincide" % edge)
    bc = next(b for b in sk.boundary_components if edge in b.edges)
    if len(bc.faces) <= 2:
        raise MoveError("boundary component too small to fold")
    imgs = [0] * 4
    imgs[p0[0]], imgs[p0[1]], imgs[p0[3]], imgs[p0[2]] = pk[0], pk[1], pk[2], pk[3]
    p = Perm4(tuple(imgs))
    adj = [list(r) for r in tri.adjacency]
    adj[t0][p0[2]] = (tk, p)
    adj[tk][pk[3]] = (t0, p.inverse())
    res = Triangulation(adj)
    if validate(res) or not res.is_valid:
        raise MoveError("fold along edge %d is not valid" % edge)
    old = sorted((b.euler, b.orientable) for b in sk.boundary_components)
    new = sorted((b.euler, b.orientable) for b in res.skeleton.boundary_components)
    if old != new:
        raise MoveError("fold along edge %d changes the boundary" % edge)
    return res


def layer(tri: Triangulation, edge: int) -> Triangulation:
    """Attach a new tetrahedron across a boundary edge, flipping it on the boundary."""
    (t0, p0), (tk, pk) = _boundary_wings(tri, edge)
    n = tri.size
    adj = [list(r) for r in tri.adjacency] + [[None] * 4]
    q1 = Perm4((p0[0], p0[1], p0[3], p0[2]))
    q2 = Perm4((pk[0], pk[1], pk[3], pk[2]))
    adj[n][3] = (t0, q1)
    adj[t0][p0[2]] = (n, q1.inverse())
    adj[n][2] = (tk, q2)
    adj[tk][pk[3]] = (n, q2.inverse())
    res = Triangulation(adj)
    if validate(res):
        raise MoveError("layering on edge %d failed" % edge)
    return res


_MOVES = {"fold": fold, "layer": layer, "pachner23": pachner_23, "pachner32": pachner_32}


def apply_move(tri: Triangulation, location: int, tag: str) -> Triangulation:
    if tag not in _MOVES:
        raise MoveError("unknown move %r" % tag)
    return _MOVES[tag](tri, location)


class _Recorder:
    """Applies moves to decoded signatures so that every step replays."""

    def __init__(self, tri: Triangulation):
        from .isosig import decode, encode

        self._decode, self._encode = decode, encode
        self.sig = encode(tri)
        self.tri = decode(self.sig)
        self.proof = SimplificationProof()

    def apply(self, location: int, tag: str) -> None:
        nxt = apply_move(self.tri, location, tag)
        self.proof.steps.append((self.sig, location, tag))
        self.sig = self._encode(nxt)
        self.tri = self._decode(self.sig)


def _min_vertices(bc) -> int:
    # a triangulated sphere needs three vertices; other surfaces can have one
    return 3 if bc.euler == 2 else 1


def close_cusps(tri: Triangulation) -> tuple[Triangulation, SimplificationProof]:
    """Fold (or layer then fold) until each boundary component has as few vertices as possible.

    Tori, Klein bottles and higher-genus components end with one vertex; sphere
    components end with three, the least a triangulated sphere admits.
    """
    if not tri.has_boundary_faces:
        return tri, SimplificationProof()
    rec = _Recorder(tri)
    while True:
        sk = rec.tri.skeleton
        todo = [b for b in sk.boundary_components if len(b.vertices) > _min_vertices(b)]
        if not todo:
            break
        bc = todo[0]
        done = False
        for e in sorted(bc.edges):
            try:
                fold(rec.tri, e)
            except MoveError:
                continue
            rec.apply(e, "fold")
            done = True
            break
        if done:
            continue
        for e in sorted(bc.edges):
            t, p = sk.edges[e].embeddings[0]
            if sk.vertex_of[t][p[0]] == sk.vertex_of[t][p[1]]:
                continue
            try:
                layered = layer(rec.tri, e)
            except MoveError:
                continue
            flipped = next(i for i, ec in enumerate(layered.skeleton.edges)
                           if ec.boundary and any(tt == layered.size - 1 and {pp[0], pp[1]} == {2, 3}
                                                  for tt, pp in ec.embeddings))
            try:
                fold(layered, flipped)
            except MoveError:
                continue
            rec.apply(e, "layer")
            # the flipped edge, located again in the re-decoded labelling
            for e2 in sorted(rec.tri.skeleton.edges, key=lambda ec: ec.index):
                if not e2.boundary:
                    continue
                try:
                    fold(rec.tri, e2.index)
                except MoveError:
                    continue
                rec.apply(e2.index, "fold")
                break
            done = True
            break
        if not done:
            raise MoveError("no fold or layer reduces the boundary")
    return rec.tri, rec.proof


def simplify(tri: Triangulation, max_steps: int = 10_000) -> tuple[Triangulation, SimplificationProof]:
    """Greedy 3-2 moves followed by boundary vertex reduction; records the moves."""
    rec = _Recorder(tri)
    for _ in range(max_steps):
        sk = rec.tri.skeleton
        for e in sk.edges:
            if e.boundary or len(e.embeddings) != 3:
                continue
            try:
                pachner_32(rec.tri, e.index)
            except MoveError:
                continue
            rec.apply(e.index, "pachner32")
            break
        else:
            break
    if rec.tri.has_boundary_faces:
        closed, proof = close_cusps(rec.tri)
        rec.proof.steps.extend(proof.steps)
        rec.tri = closed
        rec.sig = rec._encode(closed)
    return rec.tri, rec.proof
