"""Strict angle structures on ideal triangulations.

Angles are rational multiples of pi, one per pair of opposite edges of each
tetrahedron (indexed like the quadrilateral types: the pair of edges a quad
type does not cross).  Each tetrahedron's three angles sum to 1 and the
angles around each edge class sum to 2.  The largest common lower bound eps
on all angles is found by exact linear programming; when eps <= 0 a dual
vector y with A^T y >= 0, sum(A^T y) = 1 and b.y <= 0 proves it, since
b.y = sum_j (A^T y)_j x_j >= eps for every solution.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .lp import solve_standard
from .nsurf import quad_separating
from .perm import EDGE_VERTICES
from .tri import Triangulation

__all__ = [
    "AngleError",
    "AngleSystem",
    "AngleResult",
    "SearchResult",
    "angle_equations",
    "strict_angle_structure",
    "verify_angle_structure",
    "verify_dual_certificate",
    "retriangulation_search",
    "format_angles",
    "parse_angles",
]

Assignment = list[tuple[Fraction, Fraction, Fraction]]


class AngleError(ValueError):
    pass


@dataclass
class AngleSystem:
    rows: list[list[int]]
    rhs: list[int]
    n_tets: int

    @property
    def n_vars(self) -> int:
        return 3 * self.n_tets


@dataclass
class AngleResult:
    status: str  # "strict", "nonstrict" or "infeasible"
    epsilon: Optional[Fraction] = None
    assignment: Optional[Assignment] = None
    dual: Optional[list[Fraction]] = None

    @property
    def found(self) -> bool:
        return self.status == "strict"


def angle_equations(tri: Triangulation) -> AngleSystem:
    if not tri.is_valid:
        raise AngleError("triangulation is not valid")
    if tri.has_boundary_faces:
        raise AngleError("angle structures need an ideal triangulation without boundary faces")
    if not tri.is_orientable:
        raise AngleError("triangulation is not orientable")
    sk = tri.skeleton
    bad = [v.index for v in sk.vertices if v.link != "torus"]
    if bad:
        raise AngleError("vertex %d is not ideal with torus link" % bad[0])
    n = tri.size
    rows, rhs = [], []
    for t in range(n):
        r = [0] * (3 * n)
        r[3 * t: 3 * t + 3] = [1, 1, 1]
        rows.append(r)
        rhs.append(1)
    for e in sk.edges:
        r = [0] * (3 * n)
        for t, p in e.embeddings:
            r[3 * t + quad_separating(p[0], p[1])] += 1
        rows.append(r)
        rhs.append(2)
    return AngleSystem(rows, rhs, n)


def verify_angle_structure(tri: Triangulation, assignment: Sequence[Sequence]) -> bool:
    """Exact check of positivity, tetrahedron sums and edge sums."""
    if len(assignment) != tri.size or any(len(a) != 3 for a in assignment):
        raise AngleError("assignment needs three angles for each of %d tetrahedra" % tri.size)
    system = angle_equations(tri)
    x = [Fraction(v) for a in assignment for v in a]
    if any(v <= 0 for v in x):
        return False
    return all(sum(c * v for c, v in zip(r, x)) == b for r, b in zip(system.rows, system.rhs))


def verify_dual_certificate(system: AngleSystem, y: Sequence) -> bool:
    """Whether y proves that no solution has every angle positive."""
    if len(y) != len(system.rows):
        return False
    y = [Fraction(v) for v in y]
    aty = [sum((system.rows[i][j] * y[i] for i in range(len(y))), Fraction(0)) for j in range(system.n_vars)]
    if any(v < 0 for v in aty):
        return False
    by = sum((b * v for b, v in zip(system.rhs, y)), Fraction(0))
    if sum(aty) == 1:
        return by <= 0
    # equations with no solution at all: A^T y = 0 and b.y != 0
    return all(v == 0 for v in aty) and by != 0


def _dual_certificate(system: AngleSystem) -> Optional[list[Fraction]]:
    """Minimise b.y over A^T y >= 0, sum(A^T y) = 1 (y free, split as y+ - y-)."""
    m, n = len(system.rows), system.n_vars
    # variables: y+ (m), y- (m), slack s (n) with A^T y - s = 0
    A, b = [], []
    for j in range(n):
        row = [system.rows[i][j] for i in range(m)] + [-system.rows[i][j] for i in range(m)]
        row += [-1 if k == j else 0 for k in range(n)]
        A.append(row)
        b.append(0)
    A.append([0] * (2 * m) + [1] * n)
    b.append(1)
    c = list(system.rhs) + [-v for v in system.rhs] + [0] * n
    res = solve_standard(A, b, c)
    if res.status != "optimal":
        return None
    return [res.x[i] - res.x[m + i] for i in range(m)]


def _inconsistency_certificate(system: AngleSystem) -> Optional[list[Fraction]]:
    """y with A^T y = 0 and b.y = -1 when A x = b has no solution at all."""
    m, n = len(system.rows), system.n_vars
    A = [[system.rows[i][j] for i in range(m)] + [-system.rows[i][j] for i in range(m)] for j in range(n)]
    b = [0] * n
    A.append(list(system.rhs) + [-v for v in system.rhs])
    b.append(-1)
    res = solve_standard(A, b, [0] * (2 * m))
    if res.status != "optimal":
        return None
    return [res.x[i] - res.x[m + i] for i in range(m)]


def strict_angle_structure(tri: Triangulation) -> AngleResult:
    """Maximise the least angle; report a strict structure or a dual proof that none exists."""
    system = angle_equations(tri)
    n = system.n_vars
    # x = s + eps with s >= 0, eps >= 0; maximise eps
    A = [r + [sum(r)] for r in system.rows]
    c = [0] * n + [-1]
    res = solve_standard(A, system.rhs, c)
    if res.status == "infeasible":
        dual = _dual_certificate(system)
        if dual is None:
            dual = _inconsistency_certificate(system)
        return AngleResult("infeasible", None, None, dual)
    if res.status != "optimal":
        raise AngleError("angle LP is unbounded")  # impossible: every angle is at most 1
    eps = res.x[-1]
    x = [res.x[j] + eps for j in range(n)]
    if eps > 0:
        assignment = [tuple(x[3 * t: 3 * t + 3]) for t in range(tri.size)]
        return AngleResult("strict", eps, assignment, None)
    return AngleResult("nonstrict", eps, None, _dual_certificate(system))


def format_angles(assignment: Assignment) -> list[list[str]]:
    return [[str(v) for v in a] for a in assignment]


def parse_angles(rows: Sequence[Sequence[str]]) -> Assignment:
    return [tuple(Fraction(v) for v in r) for r in rows]


@dataclass
class SearchResult:
    triangulation: Optional[Triangulation]
    proof: object = None
    assignment: Optional[Assignment] = None
    explored: int = 0
    depth_reached: int = 0

    @property
    def found(self) -> bool:
        return self.triangulation is not None


def retriangulation_search(tri: Triangulation, budget: int) -> SearchResult:
    """Breadth-first search over 2-3 and 3-2 moves for a triangulation with a strict angle structure."""
    from .isosig import decode, encode
    from .moves import MoveError, SimplificationProof, pachner_23, pachner_32

    if budget <= 0:
        raise AngleError("budget must be positive")
    start = encode(tri)
    visited = {start: None}
    frontier = [start]
    explored = 0
    for depth in range(budget + 1):
        hits = []
        for sig in sorted(frontier):
            explored += 1
            t = decode(sig)
            res = strict_angle_structure(t)
            if res.found:
                hits.append((sig, t, res))
                break
        if hits:
            sig, t, res = hits[0]
            steps = []
            cur = sig
            while visited[cur] is not None:
                prev, loc, tag = visited[cur]
                steps.append((prev, loc, tag))
                cur = prev
            steps.reverse()
            return SearchResult(t, SimplificationProof(steps), res.assignment, explored, depth)
        if depth == budget:
            break
        nxt = []
        for sig in sorted(frontier):
            t = decode(sig)
            sk = t.skeleton
            moves = [(f, "pachner23") for f in range(len(sk.faces))]
            moves += [(e.index, "pachner32") for e in sk.edges if len(e.embeddings) == 3 and not e.boundary]
            for loc, tag in moves:
                try:
                    t2 = pachner_23(t, loc) if tag == "pachner23" else pachner_32(t, loc)
                except MoveError:
                    continue
                s2 = encode(t2)
                if s2 not in visited:
                    visited[s2] = (sig, loc, tag)
                    nxt.append(s2)
        frontier = nxt
    return SearchResult(None, None, None, explored, budget)
