from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIG8, S2XS1
from cuspcert.census import load_census
from cuspcert.cut import CrushError, crush, cut_along
from cuspcert.enumerate import compatible, vertex_normal_surfaces
from cuspcert.isosig import decode
from cuspcert.linalg import rank
from cuspcert.nsurf import (
    CapExceeded,
    NormalVectorError,
    classify,
    edge_weights,
    euler_char,
    format_vector,
    haken_sum,
    is_admissible,
    is_vertex_linking,
    matching_equations,
    parse_vector,
    reconstruct,
    satisfies_matching,
    vertex_link,
    weight,
)
from cuspcert.tri import Triangulation

CENSUS = load_census()
SPHERE = (1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1)  # the non-separating quad sphere in S^2 x S^1


def single() -> Triangulation:
    return Triangulation([[None] * 4])


def _surfaces(sig):
    t = decode(sig)
    return t, vertex_normal_surfaces(t)


MATERIAL = [s for s in CENSUS if not decode(s).is_ideal and decode(s).is_valid]
PAIRS = []
for _s in CENSUS[::23]:
    _t, _vs = _surfaces(_s)
    PAIRS += [(_s, u, v) for i, u in enumerate(_vs) for v in _vs[i:] if compatible(u, v)][:6]


def test_matching_equations_shapes():
    assert matching_equations(single()) == []
    A = matching_equations(decode(FIG8))
    assert len(A) == 12 and all(len(r) == 14 for r in A)
    # the solution space of the figure-eight has dimension 14 - rank
    assert 0 < rank(A) < 14


def test_admissibility():
    t = single()
    assert is_admissible(t, (0,) * 7)
    for k in range(7):
        e = tuple(int(i == k) for i in range(7))
        assert is_admissible(t, e)
    assert not is_admissible(t, (0, 0, 0, 0, 1, 1, 0))
    assert not is_admissible(t, (0, 0, 0, 0, -1, 0, 0))


def test_weight_of_vertex_link_in_one_vertex_closed_triangulation():
    done = 0
    for s in CENSUS:
        t = decode(s)
        sk = t.skeleton
        if not t.is_closed or len(sk.vertices) != 1 or not t.is_valid:
            continue
        v = vertex_link(t, 0)
        assert weight(t, v) == 2 * len(sk.edges)
        assert euler_char(t, v) == 2
        assert is_vertex_linking(v)
        done += 1
    assert done > 5
    assert weight(single(), (0,) * 7) == 0


def test_figure_eight_vertex_link():
    t = decode(FIG8)
    v = vertex_link(t, 0)
    assert euler_char(t, v) == 0
    sc = reconstruct(t, v)
    assert sc.euler == 0 and len(sc.components) == 1
    assert [c.name for c in classify(t, v)] == ["T2"]
    # every point of the surface on an edge is a corner of some disc
    assert len(sc.point_edge) == weight(t, v)


def test_haken_sum_rejects_incompatible_quads():
    t = single()
    with pytest.raises(NormalVectorError):
        haken_sum(t, (0, 0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 1, 0))


def test_reconstruct_small_cases():
    t = single()
    sc = reconstruct(t, (1, 0, 0, 0, 0, 0, 0))
    assert len(sc.components) == 1 and sc.components[0].type.name == "D2"
    s2 = decode(S2XS1)
    assert SPHERE in vertex_normal_surfaces(s2)
    sc = reconstruct(s2, SPHERE)
    (c,) = sc.components
    assert c.euler == 2 and c.orientable and not c.boundary_curves
    link = vertex_link(s2, 0)
    two = tuple(2 * x for x in link)
    sc = reconstruct(s2, two)
    assert [c.euler for c in sc.components] == [2, 2]


def test_surface_type_names():
    names = {(c.euler, c.orientable, c.boundary_curves): c.name
             for s in CENSUS[::7] for v in _surfaces(s)[1] for c in classify(decode(s), v)}
    assert names.get((2, True, 0), "S2") == "S2"
    assert names.get((0, False, 0), "K2") == "K2"
    assert names.get((0, True, 2), "A2") == "A2"
    assert {"S2", "D2", "T2", "A2"} <= set(names.values())


def test_vertex_linking_detection():
    t = decode(S2XS1)
    link = vertex_link(t, 0)
    assert is_vertex_linking(link)
    assert not is_vertex_linking(SPHERE)
    lst = single()
    two = haken_sum(lst, vertex_link(lst, 0), vertex_link(lst, 1))
    assert is_vertex_linking(two)


def test_vector_text_round_trip():
    v = SPHERE
    assert parse_vector(format_vector(v)) == v
    with pytest.raises(NormalVectorError):
        parse_vector("7t=7 1 2")


def test_reconstruct_respects_cap():
    t = decode(S2XS1)
    with pytest.raises(CapExceeded):
        reconstruct(t, tuple(50 * x for x in SPHERE), cap=100)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(PAIRS))
def test_weight_and_euler_are_additive(pair):
    s, u, v = pair
    t = decode(s)
    w = haken_sum(t, u, v)
    assert satisfies_matching(t, w) and is_admissible(t, w)
    assert weight(t, w) == weight(t, u) + weight(t, v)
    assert euler_char(t, w) == euler_char(t, u) + euler_char(t, v)
    assert reconstruct(t, w).euler == euler_char(t, w)


def _separates(t, v) -> bool:
    """Whether v separates, from edge weights: every 1-skeleton cycle meets v evenly."""
    sk = t.skeleton
    parent = list(range(len(sk.vertices)))
    parity = [0] * len(sk.vertices)

    def find(x):
        p = 0
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    for e, w in zip(sk.edges, edge_weights(t, v)):
        tet, p = e.embeddings[0]
        (a, pa), (b, pb) = find(sk.vertex_of[tet][p[0]]), find(sk.vertex_of[tet][p[1]])
        if a == b:
            if (pa ^ pb) != (w & 1):
                return False
        else:
            parent[a] = b
            parity[a] = pa ^ pb ^ (w & 1)
    return True


def test_cut_components_match_separation():
    checked = {1: 0, 2: 0}
    for s in MATERIAL[::3]:
        t, vs = _surfaces(s)
        for v in vs:
            if len(classify(t, v)) != 1:
                continue
            n = cut_along(t, v).n_components
            assert n == (2 if _separates(t, v) else 1), (s, v)
            checked[n] += 1
    assert checked[1] > 0 and checked[2] > 0


def test_cut_along_vertex_link_and_sphere():
    t = decode(S2XS1)
    res = cut_along(t, SPHERE)
    assert res.n_components == 1
    piece, _ = res.piece(0)
    assert sorted(bc.euler for bc in piece.skeleton.boundary_components) == [2, 2]
    res = cut_along(t, vertex_link(t, 0))
    assert res.n_components == 2
    f8 = decode(FIG8)
    res = cut_along(f8, vertex_link(f8, 0))
    assert res.n_components == 2
    sizes = sorted(res.piece(k)[0].homology_h1().rank for k in range(2))
    assert sizes == [1, 2]  # the complement and the T^2 x I collar


def test_crush_drops_tetrahedra():
    done = 0
    for s in CENSUS:
        t = decode(s)
        if not t.is_valid or not t.is_orientable:
            continue
        for v in vertex_normal_surfaces(t):
            if is_vertex_linking(v) or [c.name for c in classify(t, v)] not in (["S2"], ["D2"]):
                continue
            c = crush(t, v)
            assert c.size < t.size
            assert c.is_valid or c.size == 0
            done += 1
            break
        if done >= 30:
            break
    assert done >= 30


def test_crush_refuses_vertex_links():
    t = decode(S2XS1)
    with pytest.raises(CrushError):
        crush(t, vertex_link(t, 0))


def test_crush_all_quad_surface():
    t = decode(S2XS1)
    quads = [v for v in vertex_normal_surfaces(t) if not any(v[7 * k + c] for k in range(2) for c in range(4))]
    for v in quads:
        try:
            c = crush(t, v)
        except CrushError:
            continue
        assert c.size == 0
