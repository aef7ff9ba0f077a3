"""Exhaustive generation of small triangulations up to isomorphism.

Triangulations are built directly in signature order: the search makes the
same per-face choices that a signature records (boundary / new tetrahedron /
gluing back), and a leaf is kept only when its encoding is the canonical
(least) one.  Every isomorphism class is therefore produced exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .isosig import compare_from, signature_from
from .perm import IDENTITY, S4, Perm4
from .tri import Triangulation

__all__ = ["CensusFilter", "generate_census", "census_up_to"]


@dataclass(frozen=True)
class CensusFilter:
    orientable: Optional[bool] = None
    closed: Optional[bool] = None  # no boundary faces
    max_boundary_faces: Optional[int] = None
    boundary_faces: Optional[int] = None
    valid: bool = True
    ideal: Optional[bool] = None


# gluings that send face f to face g (six each)
_TO_FACE = {(f, g): [p for p in S4 if p[f] == g] for f in range(4) for g in range(4)}


def generate_census(n: int, flt: CensusFilter = CensusFilter()) -> Iterator[tuple[str, Triangulation]]:
    """Yield (signature, triangulation) for connected triangulations with ``n`` tetrahedra."""
    adj: list[list] = [[None] * 4 for _ in range(n)]
    orient = [0] * n
    orient[0] = 1
    state = {"next": 1, "bdry": 0}
    max_b = flt.max_boundary_faces
    if flt.closed:
        max_b = 0
    if flt.boundary_faces is not None:
        max_b = flt.boundary_faces if max_b is None else min(max_b, flt.boundary_faces)

    def positions():
        for t in range(n):
            for f in range(4):
                yield t, f

    order = list(positions())

    def rec(k: int):
        while k < len(order) and adj[order[k][0]][order[k][1]] is not None:
            k += 1
        if k == len(order):
            if state["next"] != n:
                return
            tri = Triangulation([list(r) for r in adj])
            sig, _, _ = signature_from(tri, 0, IDENTITY)
            for s in range(n):
                for p in S4:
                    if compare_from(tri, s, p, sig) < 0:
                        return
            yield sig, tri
            return
        t, f = order[k]
        # a tetrahedron must be reached before its faces are processed
        if t >= state["next"]:
            return
        # boundary
        if max_b is None or state["bdry"] < max_b:
            state["bdry"] += 1
            yield from rec(k + 1)
            state["bdry"] -= 1
        # new tetrahedron
        if state["next"] < n:
            d = state["next"]
            state["next"] += 1
            adj[t][f] = (d, IDENTITY)
            adj[d][f] = (t, IDENTITY)
            orient[d] = -orient[t]
            yield from rec(k + 1)
            adj[t][f] = adj[d][f] = None
            orient[d] = 0
            state["next"] -= 1
        # glue back to an existing tetrahedron
        for d in range(t, state["next"]):
            for g in range(4):
                if adj[d][g] is not None or (d == t and g <= f):
                    continue
                for p in _TO_FACE[(f, g)]:
                    if flt.orientable and orient[d] != -p.sign * orient[t]:
                        continue
                    adj[t][f] = (d, p)
                    adj[d][g] = (t, p.inverse())
                    yield from rec(k + 1)
                    adj[t][f] = adj[d][g] = None

    for sig, tri in rec(0):
        if flt.boundary_faces is not None and sum(g is None for r in tri.adjacency for g in r) != flt.boundary_faces:
            continue
        if flt.orientable is not None and tri.is_orientable != flt.orientable:
            continue
        if flt.valid and not tri.is_valid:
            continue
        if flt.closed is not None and tri.has_boundary_faces == flt.closed:
            continue
        if flt.ideal is not None and tri.is_ideal != flt.ideal:
            continue
        yield sig, tri


def census_up_to(n: int, flt: CensusFilter = CensusFilter(), cap: Optional[int] = None) -> list[str]:
    """Signatures of all filtered triangulations with 1..n tetrahedra, in (size, signature) order."""
    out: list[str] = []
    for k in range(1, n + 1):
        sigs = sorted(s for s, _ in generate_census(k, flt))
        out.extend(sigs)
    return out[:cap] if cap is not None else out


def load_census() -> list[str]:
    """The shipped census: all valid connected triangulations with at most three tetrahedra."""
    from importlib.resources import files

    text = files("cuspcert").joinpath("data/census3.txt").read_text()
    return [line.split()[0] for line in text.splitlines() if line.strip() and not line.startswith("#")]


def main(argv=None) -> int:
    import argparse

    ap = argparse.ArgumentParser(description="Write the census of valid connected triangulations.")
    ap.add_argument("max_tets", type=int)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)
    sigs = census_up_to(args.max_tets)
    text = f"# valid connected triangulations with 1..{args.max_tets} tetrahedra ({len(sigs)} classes)\n"
    text += "".join(s + "\n" for s in sigs)
    if args.out == "-":
        print(text, end="")
    else:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
