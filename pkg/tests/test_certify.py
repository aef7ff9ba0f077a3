from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIG8, KB_BUNDLE, LST, S2XS1, TREFOIL
from cuspcert import certify
from cuspcert.census import load_census
from cuspcert.certify import (
    ACCEPT,
    ACCEPT_MODULO,
    ASSUMED,
    REJECT,
    VERIFIED,
    Certificate,
    CertifyError,
    NoneFound,
    annulus_case,
    cert_0F,
    essential_check,
    generate,
    solid_torus_check,
    verify,
    verify_0F,
)
from cuspcert.cut import cut_along
from cuspcert.enumerate import fundamental_surfaces, vertex_normal_surfaces
from cuspcert.isosig import decode, encode
from cuspcert.nsurf import classify, vertex_link

CENSUS = load_census()
SEPARATING_SPHERE = ("cMcabbgag", (0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0))
COMPRESSIBLE_TORUS = ("cMcabbgag", (0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0))
S2XS1_SPHERE = (1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1)
CUSPED = [s for s in CENSUS
          if decode(s).is_orientable and decode(s).is_valid and not decode(s).is_ideal
          and decode(s).skeleton.boundary_components
          and all(bc.euler == 0 for bc in decode(s).skeleton.boundary_components)]


def test_closed_input_is_refused():
    with pytest.raises(CertifyError):
        generate(decode(S2XS1))


def test_layered_solid_torus():
    c = generate(decode(LST))
    assert c.kind == "CompressingDisk"
    (ev,) = c.evidence
    assert ev.name == "solid_torus" and ev.status == VERIFIED and ev.holds
    assert verify(c).overall == ACCEPT


def test_trefoil():
    c = generate(decode(TREFOIL))
    assert c.kind == "SeifertAnnulus"
    assert [c.name for c in classify(decode(TREFOIL), c.surface)] == ["A2"]
    assert all(e.status == VERIFIED and e.holds for e in c.evidence)
    res = cut_along(decode(TREFOIL), c.surface)
    for k in range(res.n_components):
        assert solid_torus_check(res.piece(k)[0]).holds
    assert annulus_case(decode(TREFOIL)).to_json() == c.to_json()


def test_twisted_bundle_over_klein_bottle():
    c = generate(decode(KB_BUNDLE))
    assert c.kind == "EssentialClosed"
    assert [x.name for x in classify(decode(KB_BUNDLE), c.surface)] == ["K2"]
    assert verify(c).overall == ACCEPT


def test_figure_eight():
    res = generate(decode(FIG8))
    assert isinstance(res, NoneFound)
    assert res.angles == [["1/3"] * 3] * 2
    t = decode(FIG8)
    inc, not_parallel = essential_check(t, vertex_link(t, 0))
    assert not_parallel.status == VERIFIED and not_parallel.holds is False
    ev = solid_torus_check(t)
    assert ev.status == VERIFIED and ev.holds is False


def test_solid_torus_check_on_census():
    for s in CUSPED[:40]:
        t = decode(s)
        ev = solid_torus_check(t)
        if ev.holds:
            assert t.homology_h1().rank == 1 and len(t.skeleton.boundary_components) == 1


def test_compressible_torus_is_not_essential():
    sig, v = COMPRESSIBLE_TORUS
    inc, _ = essential_check(decode(sig), v)
    assert inc.status == VERIFIED and inc.holds is False


def test_sphere_certificates():
    assert verify(Certificate("NonseparatingSphere", S2XS1, S2XS1_SPHERE)).overall == ACCEPT
    sig, v = SEPARATING_SPHERE
    assert cut_along(decode(sig), v).n_components == 2
    assert verify(Certificate("NonseparatingSphere", sig, v)).overall == REJECT
    assert verify(Certificate("NonseparatingSphere", S2XS1, vertex_link(decode(S2XS1), 0))).overall == REJECT


def test_malformed_certificates_are_rejected():
    good = generate(decode(LST))
    d = json.loads(good.to_json())
    for key, value in [("surface", [0, 0, 1, 1, 0, 1, 1]), ("surface", [0, 0, 1, 1, 0, 0]),
                       ("surface", [0, 0, 1, 1, 0, 0, -1]), ("triangulation", "bGab"),
                       ("triangulation", "??"), ("kind", "Nope"), ("evidence", []), ("angles", [["1"]])]:
        bad = dict(d, **{key: value})
        assert verify(Certificate.from_dict(bad)).overall == REJECT, key


def test_certificate_json_is_canonical():
    c = generate(decode(LST))
    text = c.to_json()
    assert text.endswith("\n") and "\n" not in text[:-1] and ": " not in text
    assert Certificate.from_json(text).to_json() == text


def test_mobius_band_is_accepted_modulo_assumptions():
    t = decode(TREFOIL)
    bands = [v for v in fundamental_surfaces(t) if [c.name for c in classify(t, v)] == ["M2"]]
    assert bands
    c = certify._make("Mobius", TREFOIL, bands[0])
    assert c is not None
    assert verify(Certificate("Mobius", TREFOIL, bands[0])).overall == REJECT  # evidence missing
    verdict = verify(c)
    assert verdict.overall == ACCEPT_MODULO
    assert ASSUMED in [s for _, s in verdict.statuses]


def test_already_zero_efficient_chain():
    c = cert_0F(decode("bkaagb"))  # a one-tetrahedron lens space
    assert c.chain == [("bkaagb", None)]
    assert verify_0F(c.chain).overall == ACCEPT
    # the layered solid torus is not 0-efficient: its meridian disc crushes it away
    assert [s for s, _ in cert_0F(decode(LST)).chain] == [LST, "a"]


def test_zero_efficiency_chain_checks():
    assert verify_0F([]).overall == REJECT
    chain = cert_0F(decode(S2XS1)).chain
    assert len(chain) == 2 and verify_0F(chain).overall == ACCEPT
    wrong = [(chain[0][0], chain[0][1]), ("bGaj", None)]
    assert verify_0F(wrong).overall == REJECT
    assert verify_0F([(S2XS1, None)]).overall == REJECT  # not 0-efficient


def test_sphere_boundary_refused_by_zero_efficiency():
    with pytest.raises(CertifyError):
        cert_0F(decode("baa"))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CUSPED))
def test_generated_certificates_verify(s):
    t = decode(s)
    try:
        res = generate(t)
    except CertifyError:
        return
    if isinstance(res, Certificate):
        assert verify(res).overall != REJECT
        assert res.kind != "ProjectivePlane"
        assert res.triangulation == encode(t)


def test_case_order():
    # the layered solid torus also has a fundamental Mobius band and annulus; the disc case comes first
    t = decode(LST)
    kinds = {c.name for v in fundamental_surfaces(t) for c in classify(t, v)}
    assert {"D2", "M2", "A2"} <= kinds
    assert generate(t).kind == "CompressingDisk"


def test_vertex_surfaces_of_sphere_fixture():
    assert S2XS1_SPHERE in vertex_normal_surfaces(decode(S2XS1))


def test_separating_annuli_are_not_nonseparating():
    for sig in (LST, TREFOIL):
        t = decode(sig)
        annuli = [v for v in fundamental_surfaces(t) if [c.name for c in classify(t, v)] == ["A2"]]
        assert annuli
        for v in annuli:
            assert cut_along(t, v).n_components == 2
            assert certify._make("NonseparatingAnnulus", sig, v) is None
            assert verify(Certificate("NonseparatingAnnulus", sig, v)).overall == REJECT
