"""Fundamental group presentations and what can be read off them.

Generators are dual to internal faces off a spanning tree of the dual graph
and relators are read around internal edges.  Simplification is greedy
Tietze elimination.  Recognition is deliberately narrow: the trivial group,
Z, Z^2 and free groups are recognised from the simplified presentation, and
non-abelian quotients are found by searching for homomorphisms onto
permutation groups of small degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional

from .tri import Triangulation

__all__ = [
    "Presentation",
    "fundamental_group",
    "peripheral_words",
    "peripheral_injective_mod_p",
    "peripheral_image_noncyclic",
    "peripheral_noncyclic_quotient",
    "check_peripheral_quotient",
    "nonabelian_quotient",
    "recognise",
]

Word = tuple[int, ...]


def _free_reduce(w) -> list[int]:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def _cyclic_reduce(w) -> Word:
    w = _free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def _inverse(w) -> Word:
    return tuple(-x for x in reversed(w))


def _canonical(w: Word) -> Word:
    if not w:
        return w
    cands = []
    for u in (w, _inverse(w)):
        for k in range(len(u)):
            cands.append(u[k:] + u[:k])
    return min(cands)


def _substitute(word, images) -> list[int]:
    out: list[int] = []
    for x in word:
        w = images[abs(x) - 1]
        out.extend(w if x > 0 else _inverse(w))
    return out


@dataclass
class Presentation:
    """Group presentation; letters are +-(generator index + 1)."""

    n_gens: int
    relators: list[Word] = field(default_factory=list)
    # after simplification: word in the new generators for each original generator
    substitution: Optional[list[Word]] = None

    def __str__(self) -> str:
        def word(w):
            return " ".join(("g%d" % x) if x > 0 else ("g%d^-1" % -x) for x in w) or "1"
        rels = ", ".join(word(w) for w in self.relators)
        return "<%s | %s>" % (", ".join("g%d" % (i + 1) for i in range(self.n_gens)), rels)

    def simplified(self, max_growth: int = 8) -> "Presentation":
        n = self.n_gens
        rels = [list(r) for r in self.relators]
        alive = set(range(1, n + 1))
        images = {g: [g] for g in range(1, n + 1)}
        budget = max_growth * max(1, sum(len(r) for r in rels))
        while True:
            rels = [list(_cyclic_reduce(r)) for r in rels]
            rels = [r for r in rels if r]
            seen = set()
            uniq = []
            for r in rels:
                c = _canonical(tuple(r))
                if c not in seen:
                    seen.add(c)
                    uniq.append(r)
            rels = uniq
            best = None
            for ri, r in enumerate(rels):
                counts: dict[int, int] = {}
                for x in r:
                    counts[abs(x)] = counts.get(abs(x), 0) + 1
                for g, c in counts.items():
                    if c != 1:
                        continue
                    occ = sum(1 for s in rels for x in s if abs(x) == g)
                    cost = (len(r) - 2) * (occ - 1)
                    if best is None or cost < best[0]:
                        best = (cost, ri, g)
            if best is None:
                break
            _, ri, g = best
            r = rels[ri]
            k = next(i for i, x in enumerate(r) if abs(x) == g)
            rot = r[k:] + r[:k]  # rot[0] is g^(+-1)
            rest = rot[1:]
            # g^e * rest = 1  ->  g = rest^-1 if e = +1, g^-1 = rest^-1 i.e. g = rest if e = -1
            g_word = list(_inverse(rest)) if rot[0] > 0 else list(rest)
            g_inv = list(_inverse(g_word))
            new_rels = []
            for i, s in enumerate(rels):
                if i == ri:
                    continue
                out: list[int] = []
                for x in s:
                    if x == g:
                        out.extend(g_word)
                    elif x == -g:
                        out.extend(g_inv)
                    else:
                        out.append(x)
                new_rels.append(out)
            if sum(len(s) for s in new_rels) > budget:
                break
            rels = new_rels
            alive.discard(g)
            for h, w in images.items():
                out = []
                for x in w:
                    out.extend(g_word if x == g else g_inv if x == -g else [x])
                images[h] = _free_reduce(out)
        order = sorted(alive)
        ren = {g: i + 1 for i, g in enumerate(order)}
        def rename(w):
            return tuple(ren[abs(x)] * (1 if x > 0 else -1) for x in w)

        out = [rename(r) for r in rels]
        subst = [rename(images[g]) for g in range(1, n + 1)]
        if self.substitution is not None:
            subst = [rename(_free_reduce(_substitute(w, [images[g] for g in range(1, n + 1)])))
                     for w in self.substitution]
        return Presentation(len(order), out, subst)

    def rewrite(self, word) -> Word:
        """A word in the original generators, rewritten in these generators."""
        if self.substitution is None:
            return tuple(word)
        return tuple(_free_reduce(_substitute(word, self.substitution)))


def _dual_presentation(tri: Triangulation, component: int = 0):
    comps = tri.components()
    if not comps:
        return Presentation(0, []), {}, []
    tets = comps[component]
    inside = set(tets)
    tree_faces: set[tuple[int, int]] = set()
    seen = {tets[0]}
    stack = [tets[0]]
    while stack:
        t = stack.pop()
        for f in range(4):
            g = tri.adjacency[t][f]
            if g is None:
                continue
            t2, p = g
            if t2 not in seen:
                seen.add(t2)
                tree_faces.add((t, f))
                tree_faces.add((t2, p[f]))
                stack.append(t2)
    gen: dict[tuple[int, int], int] = {}
    for t in tets:
        for f in range(4):
            g = tri.adjacency[t][f]
            if g is None or (t, f) in tree_faces:
                continue
            t2, p = g
            if (t, f) <= (t2, p[f]):
                idx = len(gen) // 2 + 1
                gen[(t, f)] = idx
                gen[(t2, p[f])] = -idx
    rels = []
    sk = tri.skeleton
    for e in sk.edges:
        if e.boundary or e.embeddings[0][0] not in inside:
            continue
        word = []
        for t, perm in e.embeddings:
            x = gen.get((t, perm[3]))  # the walk leaves through the face opposite the fourth vertex
            if x is not None:
                word.append(x)
        rels.append(tuple(word))
    return Presentation(len(gen) // 2, rels), gen, tets


def fundamental_group(tri: Triangulation, component: int = 0) -> Presentation:
    """Presentation of pi1 of one component (ideal vertices deleted)."""
    return _dual_presentation(tri, component)[0]


def peripheral_words(tri: Triangulation, boundary_component: int) -> tuple[Presentation, list[Word]]:
    """pi1 of the component containing a boundary surface, with loops generating that surface's pi1.

    Loops follow the dual graph of the boundary triangles; stepping across a
    boundary edge walks around that edge through the interior.
    """
    sk = tri.skeleton
    bc = sk.boundary_components[boundary_component]
    t_first = bc.faces[0][0]
    comp = next(i for i, c in enumerate(tri.components()) if t_first in c)
    pres, gen, _ = _dual_presentation(tri, comp)
    nbrs: dict[tuple[int, int], list] = {f: [] for f in bc.faces}
    for e in bc.edges:
        emb = sk.edges[e].embeddings
        (t0, p0), (tk, pk) = emb[0], emb[-1]
        a, b = (t0, p0[2]), (tk, pk[3])
        word = tuple(x for x in (gen.get((t, p[3])) for t, p in emb[:-1]) if x is not None)
        nbrs[a].append((b, word, e))
        nbrs[b].append((a, _inverse(word), e))
    root = bc.faces[0]
    path = {root: ()}
    tree_edges = set()
    queue = [root]
    while queue:
        f = queue.pop(0)
        for g, w, e in nbrs[f]:
            if g not in path:
                path[g] = path[f] + w
                tree_edges.add(e)
                queue.append(g)
    loops = []
    for f in bc.faces:
        for g, w, e in nbrs[f]:
            if e in tree_edges or (g, f) < (f, g) and g != f:
                continue
            loops.append(_cyclic_reduce(path[f] + w + _inverse(path[g])))
    return pres, [w for w in loops if w]


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [[x % p for x in r] for r in rows if any(x % p for x in r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _exponent_vector(word, n: int) -> list[int]:
    v = [0] * n
    for x in word:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def peripheral_injective_mod_p(pres: Presentation, loops: list[Word], primes=(2, 3, 5, 7)) -> Optional[int]:
    """A prime p for which H1(surface; Z/p) -> H1(component; Z/p) has rank 2, if any."""
    n = pres.n_gens
    rels = [_exponent_vector(r, n) for r in pres.relators]
    per = [_exponent_vector(w, n) for w in loops]
    if n == 0:
        return None
    for p in primes:
        if _rank_mod_p(rels + per, p) - _rank_mod_p(rels, p) >= 2:
            return p
    return None


def peripheral_image_noncyclic(pres: Presentation, loops: list[Word]) -> bool:
    """Whether the image of the loops in H1(component; Z) is not cyclic.

    The image is Z^k modulo the relations the loops satisfy there; it is
    computed as the projection of an integer kernel and read off its Smith
    invariants.
    """
    from .linalg import integer_kernel_basis
    from .smith import invariant_factors

    sp = pres.simplified()
    n, k = sp.n_gens, len(loops)
    if k < 2:
        return False
    if n == 0:
        return False
    cols = [_exponent_vector(sp.rewrite(w), n) for w in loops]
    cols += [_exponent_vector(r, n) for r in sp.relators]
    matrix = [[c[i] for c in cols] for i in range(n)]
    kernel = integer_kernel_basis(matrix, len(cols))
    rel = [v[:k] for v in kernel if any(v[:k])]
    factors = invariant_factors(rel) if rel else []
    free = k - len(factors)
    return free + sum(1 for d in factors if d > 1) >= 2


def _order(p) -> int:
    ident = tuple(range(len(p)))
    k, q = 1, p
    while q != ident:
        q = _compose(q, p)
        k += 1
    return k


def _subgroup(gens, deg):
    ident = tuple(range(deg))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems


def _evaluate(word, images, deg):
    acc = tuple(range(deg))
    for x in word:
        g = images[abs(x) - 1]
        acc = _compose(acc, g if x > 0 else _inv(g))
    return acc


def peripheral_noncyclic_quotient(pres: Presentation, loops: list[Word], degrees=(3, 4, 5),
                                  max_nodes: int = 200_000):
    """A homomorphism to S_k under which the loops generate a non-cyclic abelian group.

    Returns (degree, generator images) of the simplified presentation, or None.
    A primitive curve on the torus lies in the kernel only if the image is cyclic.
    """
    sp = pres.simplified()
    words = [sp.rewrite(w) for w in loops]
    n = sp.n_gens
    if n == 0:
        return None
    order = list(range(1, n + 1))
    pos = {g: i for i, g in enumerate(order)}
    checks: list[list] = [[] for _ in range(n)]
    for r in sp.relators:
        checks[max(pos[abs(x)] for x in r)].append(r)
    nodes = 0
    for deg in degrees:
        group = list(permutations(range(deg)))
        ident = tuple(range(deg))
        assign: list = [None] * n

        def ok(i):
            return all(_evaluate(r, assign, deg) == ident for r in checks[i])

        def rec(i):
            nonlocal nodes
            if i == n:
                imgs = [_evaluate(w, assign, deg) for w in words]
                if any(_compose(a, b) != _compose(b, a) for a in imgs for b in imgs):
                    return None
                sub = _subgroup(imgs, deg)
                if len(sub) > 1 and all(_order(x) < len(sub) for x in sub):
                    return list(assign)
                return None
            for img in (_conj_class_reps(deg) if i == 0 else group):
                nodes += 1
                if nodes > max_nodes:
                    return None
                assign[i] = img
                if ok(i):
                    res = rec(i + 1)
                    if res is not None:
                        return res
                assign[i] = None
            return None

        res = rec(0)
        if res is not None:
            return deg, res
        if nodes > max_nodes:
            break
    return None


def check_peripheral_quotient(pres: Presentation, loops: list[Word], deg: int, images) -> bool:
    """Re-check a claimed homomorphism with non-cyclic peripheral image."""
    sp = pres.simplified()
    images = [tuple(x) for x in images]
    ident = tuple(range(deg))
    if len(images) != sp.n_gens or any(sorted(x) != list(ident) for x in images):
        return False
    if any(_evaluate(r, images, deg) != ident for r in sp.relators):
        return False
    imgs = [_evaluate(sp.rewrite(w), images, deg) for w in loops]
    if any(_compose(a, b) != _compose(b, a) for a in imgs for b in imgs):
        return False
    sub = _subgroup(imgs, deg)
    return len(sub) > 1 and all(_order(x) < len(sub) for x in sub)


def recognise(pres: Presentation) -> Optional[str]:
    """Name of the group if it is trivial, Z, Z^2 or free; otherwise None."""
    p = pres.simplified()
    if p.n_gens == 0:
        return "trivial"
    if not p.relators:
        return "Z" if p.n_gens == 1 else "F%d" % p.n_gens
    if p.n_gens == 2 and len(p.relators) == 1:
        r = p.relators[0]
        if len(r) == 4:
            for k in range(4):
                a, b, c, d = r[k:] + r[:k]
                if c == -a and d == -b and abs(a) != abs(b):
                    return "Z^2"
    return None


def _compose(p, q):
    return tuple(p[i] for i in q)


def _inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _conj_class_reps(deg):
    reps = {}
    for p in permutations(range(deg)):
        seen = set()
        shape = []
        for i in range(deg):
            if i in seen:
                continue
            j, c = i, 0
            while j not in seen:
                seen.add(j)
                j = p[j]
                c += 1
            shape.append(c)
        reps.setdefault(tuple(sorted(shape)), p)
    return list(reps.values())


def nonabelian_quotient(pres: Presentation, degrees=(3, 4, 5), max_nodes: int = 400_000):
    """Images of the generators under a homomorphism to S_k with non-abelian image, or None."""
    p = pres.simplified()
    n = p.n_gens
    if n < 2:
        return None
    order = sorted(range(1, n + 1), key=lambda g: -sum(1 for r in p.relators for x in r if abs(x) == g))
    pos = {g: i for i, g in enumerate(order)}
    checks: list[list] = [[] for _ in range(n)]
    for r in p.relators:
        last = max(pos[abs(x)] for x in r)
        checks[last].append(r)
    nodes = 0
    for deg in degrees:
        group = list(permutations(range(deg)))
        ident = tuple(range(deg))
        assign: dict[int, tuple] = {}

        def value(word):
            acc = ident
            for x in word:
                g = assign[abs(x)]
                acc = _compose(acc, g if x > 0 else _inv(g))
            return acc

        def rec(i):
            nonlocal nodes
            if i == n:
                imgs = list(assign.values())
                for a in imgs:
                    for b in imgs:
                        if _compose(a, b) != _compose(b, a):
                            return dict(assign)
                return None
            g = order[i]
            for img in (_conj_class_reps(deg) if i == 0 else group):
                nodes += 1
                if nodes > max_nodes:
                    return None
                assign[g] = img
                if all(value(r) == ident for r in checks[i]):
                    res = rec(i + 1)
                    if res is not None:
                        return res
                del assign[g]
            return None

        res = rec(0)
        if res is not None:
            return deg, [res[g] for g in range(1, n + 1)]
    return None
