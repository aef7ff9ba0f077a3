from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from conftest import FIG8, LST, S2XS1, TREFOIL
from cuspcert.census import load_census
from cuspcert.isosig import decode, encode
from cuspcert.moves import MoveError, close_cusps, pachner_23, pachner_32
from cuspcert.perm import IDENTITY, S4, Perm4, edge_number
from cuspcert.tri import GluingParseError, Triangulation, format_gluing_table, parse_gluing_table, validate

CENSUS = load_census()
CLOSED_ORIENTABLE = [s for s in CENSUS if decode(s).is_closed and decode(s).is_orientable][:40]


def single() -> Triangulation:
    return Triangulation([[None] * 4])


def test_perm4_group_laws():
    for p in S4:
        assert p * p.inverse() == IDENTITY
        assert sorted(p[i] for i in range(4)) == [0, 1, 2, 3]
    assert len(set(S4)) == 24


def test_single_tetrahedron():
    t = single()
    assert validate(t) == []
    sk = t.skeleton
    assert (len(sk.vertices), len(sk.edges), len(sk.faces)) == (4, 6, 4)
    assert all(e.boundary for e in sk.edges)
    assert sk.euler_characteristic == 1
    assert t.is_orientable
    h = t.homology_h1()
    assert h.rank == 0 and h.torsion == ()
    (bc,) = sk.boundary_components
    assert bc.euler == 2 and bc.orientable
    assert all(v.link == "disc" for v in sk.vertices)


def test_missing_inverse_gluing_is_reported():
    p = Perm4((1, 0, 2, 3))
    t = Triangulation([[None, (0, p), None, None]])
    assert any("involut" in d or "inverse" in d for d in validate(t))


def test_figure_eight_skeleton():
    t = decode(FIG8)
    assert validate(t) == [] and t.is_valid
    sk = t.skeleton
    assert (len(sk.vertices), len(sk.edges)) == (1, 2)
    assert sk.vertices[0].link == "torus"
    assert sk.euler_characteristic == 1  # the ideal vertex is a cone point
    assert sk.truncated_euler_characteristic == 0
    assert t.is_orientable and t.is_ideal and not t.has_boundary_faces
    assert sorted(e.degree for e in sk.edges) == [6, 6]
    h = t.homology_h1()
    assert h.rank == 1 and h.torsion == ()


def test_layered_solid_torus_boundary():
    sk = decode(LST).skeleton
    (bc,) = sk.boundary_components
    assert bc.euler == 0 and bc.orientable and len(bc.vertices) == 1


def test_closed_triangulations():
    t = decode(S2XS1)
    assert t.is_closed and t.skeleton.boundary_components == []
    assert t.skeleton.euler_characteristic == 0
    assert t.skeleton.vertices[0].link == "sphere"
    h = t.homology_h1()
    assert h.rank == 1 and h.torsion == ()
    for s in CLOSED_ORIENTABLE:
        assert decode(s).skeleton.euler_characteristic == 0, s


def test_nonorientable_one_tetrahedron_exists():
    found = [s for s in CENSUS if decode(s).size == 1 and not decode(s).is_orientable]
    assert found


def test_gluing_table_round_trip():
    for s in CENSUS[::37]:
        t = decode(s)
        assert parse_gluing_table(format_gluing_table(t)) == t


def test_gluing_table_errors():
    with pytest.raises(GluingParseError):
        parse_gluing_table("0 (0123) bdry bdry\n")
    with pytest.raises(GluingParseError):
        parse_gluing_table("5(0123) bdry bdry bdry\n")
    text = "# a lone tetrahedron\nbdry bdry bdry bdry\n"
    assert parse_gluing_table(text).size == 1


def test_boundary_euler_is_twice_manifold_euler():
    for s in CENSUS:
        t = decode(s)
        if not t.is_orientable or not t.is_valid:
            continue
        sk = t.skeleton
        cusps = sum(v.link_euler for v in sk.vertices if v.ideal)
        assert sum(bc.euler for bc in sk.boundary_components) + cusps == 2 * sk.truncated_euler_characteristic, s


def _cellular_h1(t: Triangulation):
    """H1 of the identified complex from its cellular chain complex (sympy SNF)."""
    sk = t.skeleton
    direction = {}
    for k, e in enumerate(sk.edges):
        for tet, p in e.embeddings:
            direction[(tet, frozenset((p[0], p[1])))] = (k, p[0], p[1])
    d1 = [[0] * len(sk.edges) for _ in sk.vertices]
    for k, e in enumerate(sk.edges):
        tet, p = e.embeddings[0]
        d1[sk.vertex_of[tet][p[1]]][k] += 1
        d1[sk.vertex_of[tet][p[0]]][k] -= 1
    d2 = [[0] * len(sk.faces) for _ in sk.edges]
    for j, cls in enumerate(sk.faces):
        tet, f = cls[0]
        a, b, c = [x for x in range(4) if x != f]
        for (x, y), sign in (((b, c), 1), ((a, c), -1), ((a, b), 1)):
            k, head, tail = direction[(tet, frozenset((x, y)))]
            d2[k][j] += sign if (head, tail) == (x, y) else -sign
    r1 = Matrix(d1).rank() if sk.vertices and sk.edges else 0
    diag = []
    if sk.edges and sk.faces:
        snf = smith_normal_form(Matrix(d2), domain=ZZ)
        diag = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    rank = len(sk.edges) - r1 - len(diag)
    return rank, tuple(sorted(d for d in diag if d > 1))


def test_homology_matches_cellular_oracle():
    checked = 0
    for s in CENSUS[::5]:
        t = decode(s)
        if t.is_ideal or not t.is_valid:
            continue
        h = t.homology_h1()
        assert (h.rank, tuple(sorted(h.torsion))) == _cellular_h1(t), s
        checked += 1
    assert checked > 50


relabel_inputs = st.tuples(st.sampled_from(CENSUS), st.randoms(use_true_random=False))


def _relabel(t, rng):
    order = list(range(t.size))
    rng.shuffle(order)
    return t.relabel(order, [rng.choice(S4) for _ in order])


@settings(max_examples=150, deadline=None)
@given(relabel_inputs)
def test_skeleton_counts_invariant_under_relabelling(args):
    s, rng = args
    t = decode(s)
    r = _relabel(t, rng)
    a, b = t.skeleton, r.skeleton
    assert (len(a.vertices), len(a.edges), len(a.faces)) == (len(b.vertices), len(b.edges), len(b.faces))
    assert sorted(e.degree for e in a.edges) == sorted(e.degree for e in b.edges)
    assert sorted(v.link for v in a.vertices) == sorted(v.link for v in b.vertices)
    assert t.is_orientable == r.is_orientable
    assert validate(r) == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([s for s in CENSUS if decode(s).size >= 2]), st.integers(0, 20))
def test_homology_invariant_under_pachner(s, k):
    t = decode(s)
    faces = range(len(t.skeleton.faces))
    for f in list(faces)[k % max(1, len(faces)):] + list(faces)[: k % max(1, len(faces))]:
        try:
            t2 = pachner_23(t, f)
        except MoveError:
            continue
        assert t2.size == t.size + 1
        h, h2 = t.homology_h1(), t2.homology_h1()
        assert (h.rank, h.torsion) == (h2.rank, h2.torsion)
        back = []
        for e in range(len(t2.skeleton.edges)):
            try:
                back.append(encode(pachner_32(t2, e)))
            except MoveError:
                pass
        assert encode(t) in back
        break


def test_pachner_32_refuses_boundary_edge():
    t = decode(LST)
    for e in range(len(t.skeleton.edges)):
        with pytest.raises(MoveError):
            pachner_32(t, e)


def test_orientation_signs_flip_consistently():
    t = decode(FIG8)
    o = t.orientation()
    assert o is not None
    for tet, f, tet2, p in t.gluing_list():
        # a gluing of coherently oriented tetrahedra reverses orientation
        assert o[tet] * o[tet2] * p.sign == -1


def test_close_cusps_identity_on_one_vertex_boundary():
    t = decode(LST)
    t2, proof = close_cusps(t)
    assert t2 == t and len(proof) == 0


def test_close_cusps_reduces_boundary_vertices():
    tref = decode(TREFOIL)
    assert len(tref.skeleton.boundary_components[0].vertices) == 1
    done = 0
    for s in CENSUS:
        t = decode(s)
        sk = t.skeleton
        if not t.is_valid or not any(bc.euler == 0 and len(bc.vertices) > 1 for bc in sk.boundary_components):
            continue
        t2, proof = close_cusps(t)
        for bc in t2.skeleton.boundary_components:
            assert len(bc.vertices) == (3 if bc.euler == 2 else 1), s
        assert t2.size - t.size <= sum(1 for _, _, tag in proof.steps if tag == "layer")
        h, h2 = t.homology_h1(), t2.homology_h1()
        assert (h.rank, h.torsion) == (h2.rank, h2.torsion), s
        done += 1
        if done == 25:
            break
    assert done > 0


def test_close_cusps_on_single_tetrahedron():
    t2, proof = close_cusps(single())
    (bc,) = t2.skeleton.boundary_components
    assert bc.euler == 2 and len(bc.vertices) == 3
    assert validate(t2) == []


def test_edge_number_is_a_bijection():
    assert sorted(edge_number(a, b) for a in range(4) for b in range(a + 1, 4)) == list(range(6))
