"""Acceptance criteria, one test per criterion (see the summary printed at the end of the run)."""
from __future__ import annotations

import json
import random
import time
from fractions import Fraction

import pytest

import oracles
from conftest import FIG8, KB_BUNDLE, LST, S2XS1, TREFOIL
from cuspcert import certify, cli
from cuspcert.angles import AngleError, angle_equations, strict_angle_structure, verify_angle_structure, verify_dual_certificate
from cuspcert.boundary import disc_boundary_essential
from cuspcert.certify import ACCEPT, REJECT, Certificate, cert_0F, generate, solid_torus_check, verify, verify_0F
from cuspcert.cut import cut_along
from cuspcert.enumerate import fundamental_surfaces, hlp_bound, vertex_normal_surfaces
from cuspcert.isosig import decode, encode, is_isomorphic
from cuspcert.nsurf import classify, euler_char, is_vertex_linking, reconstruct
from cuspcert.perm import S4
from mutate import mutate


@pytest.fixture(scope="session")
def enumerated(census):
    """sig -> (vertex surfaces, fundamental surfaces), with the time spent."""
    start = time.perf_counter()
    out = {}
    for sig in census:
        t = decode(sig)
        out[sig] = (vertex_normal_surfaces(t), fundamental_surfaces(t))
    return out, time.perf_counter() - start


def test_criterion_01_enumeration_matches_oracles(census, enumerated):
    results, spent = enumerated
    assert len(census) <= 5000
    start = time.perf_counter()
    bad_rays, bad_basis = [], []
    for sig in census:
        t = decode(sig)
        rays = oracles.extreme_rays(t)
        vertex, fundamental = results[sig]
        if sorted(vertex) != rays:
            bad_rays.append(sig)
        if sorted(fundamental) != oracles.hilbert_basis(t, rays):
            bad_basis.append(sig)
    total = spent + time.perf_counter() - start
    print(f"{len(census)} triangulations, {total:.0f} s")
    assert not bad_rays, bad_rays[:10]
    assert not bad_basis, bad_basis[:10]
    assert total < 600


def test_criterion_02_hlp_bound(census, enumerated):
    results, _ = enumerated
    violations = []
    for sig in census:
        t = decode(sig)
        bound = hlp_bound(t.size)
        assert bound == t.size * 2 ** (7 * t.size + 2)
        violations += [(sig, v) for v in results[sig][1] if max(v) > bound]
    assert violations == []


def test_criterion_03_euler_characteristic(census, enumerated):
    results, _ = enumerated
    checked = 0
    for sig in census:
        t = decode(sig)
        for v in set(results[sig][0]) | set(results[sig][1]):
            assert euler_char(t, v) == reconstruct(t, v).euler, (sig, v)
            checked += 1
    assert checked > len(census)


def _cli_json(capsys, *argv):
    code = cli.main(list(argv) + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_criterion_04_figure_eight(capsys):
    certify.clear_caches()
    start = time.perf_counter()
    code, cert = _cli_json(capsys, "certify", "hyp", FIG8)
    assert code == 0 and cert["kind"] == "StrictAngleStructure"
    assert verify(Certificate.from_dict(cert)).overall == ACCEPT
    third = Fraction(1, 3)
    assert verify_angle_structure(decode(FIG8), [(third, third, third)] * 2)
    code, res = _cli_json(capsys, "certify", "nonhyp", FIG8)
    assert code == 1 and res["kind"] == "NoneFound"
    assert time.perf_counter() - start < 5


def test_criterion_05_trefoil_seifert_annulus(capsys):
    certify.clear_caches()
    start = time.perf_counter()
    code, d = _cli_json(capsys, "certify", "nonhyp", TREFOIL)
    assert code == 0 and d["kind"] == "SeifertAnnulus"
    cert = Certificate.from_dict(d)
    pieces = cut_along(decode(cert.triangulation), cert.surface)
    assert pieces.n_components == 2
    for k in range(2):
        ev = solid_torus_check(pieces.piece(k)[0])
        assert ev.status == "Verified" and ev.holds is True
    assert verify(cert).overall == ACCEPT
    assert time.perf_counter() - start < 60


def test_criterion_06_layered_solid_torus_disc():
    t = decode(LST)
    cert = generate(t)
    assert isinstance(cert, Certificate) and cert.kind == "CompressingDisk"
    assert [c.name for c in classify(t, cert.surface)] == ["D2"]
    assert disc_boundary_essential(t, cert.surface)
    assert verify(cert).overall == ACCEPT


def test_criterion_07_nonseparating_sphere():
    t = decode(S2XS1)
    assert t.is_closed and t.size == 2
    spheres = [v for v in vertex_normal_surfaces(t)
               if not is_vertex_linking(v) and [c.name for c in classify(t, v)] == ["S2"]]
    assert spheres
    v = spheres[0]
    assert cut_along(t, v).n_components == 1
    cert = Certificate("NonseparatingSphere", encode(t), v)
    assert verify(cert).overall == ACCEPT
    assert verify(Certificate("SeparatingSphere", encode(t), v)).overall == REJECT


def test_criterion_08_zero_efficiency_chains(census):
    checked = 0
    for sig in census:
        t = decode(sig)
        if not (t.is_valid and t.is_orientable) or any(bc.euler == 2 for bc in t.skeleton.boundary_components):
            continue
        cert = cert_0F(t)
        if len(cert.chain) == 1:
            continue  # already 0-efficient
        verdict = verify_0F(cert.chain)
        assert verdict.overall == ACCEPT, (sig, verdict.diagnostics)
        sizes = [decode(s).size for s, _ in cert.chain]
        assert all(a > b for a, b in zip(sizes, sizes[1:])), sig
        assert len(cert.chain) - 1 <= t.size
        checked += 1
    assert checked > 0
    print(f"{checked} chains verified")


def test_criterion_09_isosig_relabelling(census):
    rng = random.Random(20260901)
    picks = [census[i] for i in sorted(rng.sample(range(len(census)), 50))]
    for sig in picks:
        t = decode(sig)
        assert encode(t) == sig
        for _ in range(1000):
            order = list(range(t.size))
            rng.shuffle(order)
            r = t.relabel(order, [rng.choice(S4) for _ in order])
            assert encode(r) == sig
        assert is_isomorphic(decode(encode(t)), t)


@pytest.fixture(scope="module")
def fixture_certificates():
    out = {
        "LST": generate(decode(LST)),
        "trefoil": generate(decode(TREFOIL)),
        "klein": generate(decode(KB_BUNDLE)),
        "sphere": Certificate("NonseparatingSphere", S2XS1, (1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1)),
        "chain": cert_0F(decode(S2XS1)),
        "angles": Certificate("StrictAngleStructure", FIG8, angles=[["1/3"] * 3] * 2),
    }
    for name, c in out.items():
        assert isinstance(c, Certificate), name
        if c.kind == "ZeroEfficiencyChain":
            assert verify_0F(c.chain).overall == ACCEPT
        else:
            assert verify(c).overall == ACCEPT, name
    return out


def _check(d: dict, tri):
    try:
        c = Certificate.from_dict(d)
    except (KeyError, TypeError, ValueError):
        return None
    return verify(c, tri)


def test_criterion_10_mutation_fuzzing(census, fixture_certificates):
    rng = random.Random(1729)
    pool = census[:200]
    for name, cert in fixture_certificates.items():
        base = json.loads(cert.to_json())
        # certificates are audited against the triangulation they claim to be about;
        # a swapped signature may name another manifold the data honestly certifies
        tri = decode(cert.triangulation)
        fields = set()
        for _ in range(1000):
            fld, d = mutate(base, rng, pool)
            fields.add(fld)
            verdict = _check(d, tri)
            if verdict is None:
                continue  # not even a certificate
            downgraded = verdict.overall != ACCEPT
            assert downgraded, (name, fld, d)
        assert len(fields) == 6, name


def test_criterion_11_lp_dual_certificates(census):
    found = 0
    for sig in census:
        t = decode(sig)
        try:
            system = angle_equations(t)
        except AngleError:
            continue  # not an ideal triangulation with torus cusps
        res = strict_angle_structure(t)
        if res.found:
            continue
        assert res.dual is not None, sig
        assert verify_dual_certificate(system, res.dual), sig
        found += 1
        if found == 20:
            break
    assert found == 20
