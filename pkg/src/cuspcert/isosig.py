"""Isomorphism signatures.

The string format is the one used by Regina, so signatures can be exchanged
with other tools.  A signature is the lexicographically least encoding over
all choices of starting tetrahedron and starting vertex labelling; the
encoding walks the dual graph breadth first and records, for each face, one
of three actions (boundary, new tetrahedron, or a gluing back to an earlier
tetrahedron).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .perm import IDENTITY, ORDERED_S4, S4, Perm4
from .tri import Triangulation, validate

__all__ = [
    "IsoSigError",
    "check_simplification_proof",
    "verify_simplification_proof",
    "LabelledTriangulation",
    "encode",
    "decode",
    "canonical",
    "is_isomorphic",
    "signature_from",
]

_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-"
_VALUE = {ch: i for i, ch in enumerate(_ALPHABET)}


class IsoSigError(ValueError):
    pass


def _append(out: list[str], val: int, nchars: int) -> None:
    for _ in range(nchars):
        out.append(_ALPHABET[val & 0x3F])
        val >>= 6


def _read(s: str, pos: int, nchars: int) -> int:
    if pos + nchars > len(s):
        raise IsoSigError("signature truncated")
    val = 0
    for i in range(nchars):
        try:
            val |= _VALUE[s[pos + i]] << (6 * i)
        except KeyError:
            raise IsoSigError(f"invalid character {s[pos + i]!r}") from None
    return val


def _nchars(n: int) -> int:
    k = 0
    while n > 0:
        n >>= 6
        k += 1
    return max(k, 1)


@dataclass(frozen=True)
class LabelledTriangulation:
    """A connected triangulation in its canonical labelling.

    ``tet_map[t]`` is the canonical index of original tetrahedron ``t`` and
    ``vertex_maps[t]`` sends original vertex labels to canonical ones.
    """

    signature: str
    triangulation: Triangulation
    tet_map: tuple[int, ...]
    vertex_maps: tuple[Perm4, ...]


def signature_from(tri: Triangulation, start: int, vertices: Perm4, tets: list[int] | None = None):
    """Encoding of the component containing ``start``, labelling ``vertices[i] -> i`` in it.

    Returns (string, image, vertex_map) where image/vertex_map describe the relabelling.
    """
    adj = tri.adjacency
    n = tri.size
    image = [-1] * n
    pre = [0] * n
    vmap: list[Perm4 | None] = [None] * n
    image[start] = 0
    pre[0] = start
    vmap[start] = vertices.inverse()
    next_unused = 1
    actions: list[int] = []
    dests: list[int] = []
    perms: list[int] = []
    simp_img = 0
    while simp_img < next_unused:
        src = pre[simp_img]
        vs = vmap[src]
        row = adj[src]
        for facet_img in range(4):
            facet_src = vs.pre_image_of(facet_img)
            g = row[facet_src]
            if g is None:
                actions.append(0)
                continue
            dest, p = g
            di = image[dest]
            if di >= 0:
                if di < simp_img:
                    continue
                if dest == src and vs[p[facet_src]] < facet_img:
                    continue
            else:
                image[dest] = next_unused
                pre[next_unused] = dest
                next_unused += 1
                vmap[dest] = vs * p.inverse()
                actions.append(1)
                continue
            actions.append(2)
            dests.append(di)
            perms.append((vmap[dest] * p * vs.inverse()).lex_index)
        simp_img += 1
    size = next_unused
    out: list[str] = []
    if size < 63:
        nch = 1
        out.append(_ALPHABET[size])
    else:
        nch = _nchars(size)
        out.append(_ALPHABET[63])
        out.append(_ALPHABET[nch])
        _append(out, size, nch)
    for i in range(0, len(actions), 3):
        a = actions[i: i + 3]
        c = a[0] | ((a[1] if len(a) > 1 else 0) << 2) | ((a[2] if len(a) > 2 else 0) << 4)
        out.append(_ALPHABET[c])
    for d in dests:
        _append(out, d, nch)
    for p in perms:
        out.append(_ALPHABET[p])
    return "".join(out), image, vmap


def compare_from(tri: Triangulation, start: int, vertices: Perm4, ref: str) -> int:
    """Sign of (encoding from this start) - ref, stopping at the first difference.

    Only valid for connected triangulations with fewer than 63 tetrahedra.
    """
    adj = tri.adjacency
    n = tri.size
    image = [-1] * n
    pre = [0] * n
    vmap: list = [None] * n
    image[start] = 0
    pre[0] = start
    vmap[start] = vertices.inverse()
    next_unused = 1
    pos = 1  # ref[0] is the size character, equal by assumption
    pend: list[int] = []
    dests: list[int] = []
    perms: list[int] = []
    alpha = _ALPHABET
    simp_img = 0
    while simp_img < next_unused:
        src = pre[simp_img]
        vs = vmap[src]
        row = adj[src]
        for facet_img in range(4):
            facet_src = vs.pre_image_of(facet_img)
            g = row[facet_src]
            if g is None:
                pend.append(0)
            else:
                dest, p = g
                di = image[dest]
                if di >= 0:
                    if di < simp_img or (dest == src and vs[p[facet_src]] < facet_img):
                        continue
                    pend.append(2)
                    dests.append(di)
                    perms.append((vmap[dest] * p * vs.inverse()).lex_index)
                else:
                    image[dest] = next_unused
                    pre[next_unused] = dest
                    next_unused += 1
                    vmap[dest] = vs * p.inverse()
                    pend.append(1)
            if len(pend) == 3:
                ch = alpha[pend[0] | (pend[1] << 2) | (pend[2] << 4)]
                if pos >= len(ref):
                    return 1
                if ch != ref[pos]:
                    return -1 if ch < ref[pos] else 1
                pos += 1
                pend = []
        simp_img += 1
    tail = []
    if pend:
        pend += [0] * (3 - len(pend))
        tail.append(alpha[pend[0] | (pend[1] << 2) | (pend[2] << 4)])
    tail.extend(alpha[d] for d in dests)
    tail.extend(alpha[p] for p in perms)
    rest = "".join(tail)
    mine = ref[:pos] + rest
    return (mine > ref) - (mine < ref)


def _component_canonical(tri: Triangulation, comp: list[int]):
    best = None
    for t in comp:
        for p in S4:
            s, image, vmap = signature_from(tri, t, p)
            if best is None or s < best[0]:
                best = (s, image, vmap)
    return best


def encode(tri: Triangulation) -> str:
    """Canonical signature; components are encoded separately and sorted."""
    if tri.size == 0:
        return "a"
    sigs = sorted(_component_canonical(tri, c)[0] for c in tri.components())
    return "".join(sigs)


def canonical(tri: Triangulation) -> LabelledTriangulation:
    """Canonical labelling of a connected triangulation."""
    comps = tri.components()
    if len(comps) != 1:
        raise ValueError("canonical labelling needs a connected, nonempty triangulation")
    s, image, vmap = _component_canonical(tri, comps[0])
    relab = tri.relabel(image, vmap)
    return LabelledTriangulation(s, relab, tuple(image), tuple(vmap))


def _decode_component(s: str, pos: int):
    if pos >= len(s):
        raise IsoSigError("signature truncated")
    first = _VALUE.get(s[pos])
    if first is None:
        raise IsoSigError(f"invalid character {s[pos]!r}")
    if first < 63:
        n = first
        nch = 1
        pos += 1
    else:
        nch = _read(s, pos + 1, 1)
        n = _read(s, pos + 2, nch)
        pos += 2 + nch
    if n == 0:
        return [], pos
    total = 4 * n
    actions: list[int] = []
    used = 0
    joins = 0
    while used < total:
        c = _read(s, pos, 1)
        pos += 1
        if c >= 64:
            raise IsoSigError("bad action character")
        for k in range(3):
            a = (c >> (2 * k)) & 3
            if used == total:
                if a != 0:
                    raise IsoSigError("nonzero padding in action block")
                continue
            if a == 0:
                used += 1
            elif a in (1, 2):
                used += 2
                joins += a == 2
            else:
                raise IsoSigError("invalid face action")
            actions.append(a)
            if used > total:
                raise IsoSigError("face actions overrun")
    dests = []
    for _ in range(joins):
        dests.append(_read(s, pos, nch))
        pos += nch
    perms = []
    for _ in range(joins):
        v = _read(s, pos, 1)
        pos += 1
        if v >= 24:
            raise IsoSigError("gluing index out of range")
        perms.append(ORDERED_S4[v])
    adj: list[list] = [[None] * 4 for _ in range(n)]
    ai = ji = 0
    next_unused = 1
    for t in range(n):
        for f in range(4):
            if adj[t][f] is not None:
                continue
            if ai >= len(actions):
                raise IsoSigError("too few face actions")
            a = actions[ai]
            ai += 1
            if a == 1:
                if next_unused >= n:
                    raise IsoSigError("too many new tetrahedra")
                adj[t][f] = (next_unused, IDENTITY)
                adj[next_unused][f] = (t, IDENTITY)
                next_unused += 1
            elif a == 2:
                d, p = dests[ji], perms[ji]
                ji += 1
                if d >= next_unused or adj[d][p[f]] is not None or (d == t and p[f] == f):
                    raise IsoSigError("inconsistent gluing")
                adj[t][f] = (d, p)
                adj[d][p[f]] = (t, p.inverse())
    if ai != len(actions) or next_unused != n:
        raise IsoSigError("face actions do not match tetrahedron count")
    return adj, pos


def decode(sig: str) -> Triangulation:
    """Triangulation in the labelling described by ``sig`` (which need not be canonical)."""
    if not isinstance(sig, str) or not sig:
        raise IsoSigError("empty signature")
    adj: list = []
    pos = 0
    while pos < len(sig):
        part, pos = _decode_component(sig, pos)
        off = len(adj)
        adj.extend([[None if g is None else (g[0] + off, g[1]) for g in row] for row in part])
    tri = Triangulation(adj)
    if validate(tri):
        raise IsoSigError("decoded gluings are inconsistent")
    return tri


def is_isomorphic(a: Triangulation, b: Triangulation) -> bool:
    return a.size == b.size and encode(a) == encode(b)


def check_simplification_proof(t0: Triangulation, proof, t1: Triangulation) -> Optional[tuple[int, str]]:
    """None if the proof replays from ``t0`` to ``t1``; else (failing step index, reason).

    Step ``i`` holds the signature before its move; the move is applied to the
    decoded signature and must produce the signature of step ``i + 1`` (or of
    ``t1`` after the last step).
    """
    from .moves import MoveError, apply_move

    steps = list(proof.steps)
    try:
        current = encode(t0)
        target = encode(t1)
    except (IsoSigError, ValueError) as exc:
        return (0, "cannot encode endpoint: %s" % exc)
    for i, (sig, loc, tag) in enumerate(steps):
        if sig != current:
            return (i, "signature does not match the previous step")
        try:
            nxt = apply_move(decode(sig), loc, tag)
        except (IsoSigError, MoveError) as exc:
            return (i, "move not applicable: %s" % exc)
        current = encode(nxt)
    if current != target:
        return (len(steps), "final signature does not match the target")
    return None


def verify_simplification_proof(t0: Triangulation, proof, t1: Triangulation) -> bool:
    return check_simplification_proof(t0, proof, t1) is None
