from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIG8, TREFOIL
from cuspcert.census import load_census
from cuspcert.isosig import (
    IsoSigError,
    check_simplification_proof,
    decode,
    encode,
    is_isomorphic,
    verify_simplification_proof,
)
from cuspcert.moves import SimplificationProof, close_cusps, simplify
from cuspcert.perm import S4
from cuspcert.tri import Triangulation

CENSUS = load_census()
SMALL = [s for s in CENSUS if decode(s).size <= 2]


def _brute_canonical(t: Triangulation):
    """Least relabelled gluing table over every tetrahedron order and corner map."""
    best = None
    for order in itertools.permutations(range(t.size)):
        for perms in itertools.product(S4, repeat=t.size):
            r = t.relabel(list(order), list(perms))
            key = tuple(
                tuple(None if g is None else (g[0], tuple(g[1])) for g in row) for row in r.adjacency
            )
            key = repr(key)
            if best is None or key < best:
                best = key
    return best


def test_single_tetrahedron_round_trip():
    t = Triangulation([[None] * 4])
    sig = encode(t)
    assert decode(sig) == t
    assert encode(decode(sig)) == sig


def test_figure_eight_decodes():
    t = decode(FIG8)
    assert t.size == 2
    assert (len(t.skeleton.vertices), len(t.skeleton.edges)) == (1, 2)
    assert encode(t) == FIG8


def test_signatures_separate_isomorphism_classes():
    canon = {}
    for s in SMALL:
        k = _brute_canonical(decode(s))
        assert k not in canon, (s, canon.get(k))
        canon[k] = s
    assert len(canon) == len(SMALL)


def test_decode_rejects_garbage():
    for bad in ["", "!!", "cPcbbbih", "zzzz"]:
        with pytest.raises(IsoSigError):
            decode(bad)


def test_figure_eight_stable_under_relabelling():
    rng = random.Random(8)
    t = decode(FIG8)
    for _ in range(1000):
        order = [0, 1]
        rng.shuffle(order)
        assert encode(t.relabel(order, [rng.choice(S4), rng.choice(S4)])) == FIG8


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CENSUS), st.randoms(use_true_random=False))
def test_encode_invariant_and_decode_isomorphic(s, rng):
    t = decode(s)
    order = list(range(t.size))
    rng.shuffle(order)
    r = t.relabel(order, [rng.choice(S4) for _ in order])
    assert encode(r) == s
    assert is_isomorphic(decode(encode(r)), r)


def test_close_cusps_proof_replays():
    done = 0
    for s in CENSUS:
        t = decode(s)
        if not t.is_valid or not any(len(bc.vertices) > 1 and bc.euler == 0 for bc in t.skeleton.boundary_components):
            continue
        t2, proof = close_cusps(t)
        assert len(proof) > 0
        assert verify_simplification_proof(t, proof, t2)
        assert check_simplification_proof(t, proof, t2) is None
        again = SimplificationProof.from_text(proof.to_text())
        assert again.steps == proof.steps
        done += 1
        if done == 10:
            break
    assert done == 10


def test_empty_proof_needs_isomorphic_ends():
    t = decode(TREFOIL)
    assert verify_simplification_proof(t, SimplificationProof(), t.relabel([3, 1, 0, 2], [S4[5]] * 4))
    assert not verify_simplification_proof(t, SimplificationProof(), decode(FIG8))


def test_corrupted_proof_fails_at_that_step():
    for s in CENSUS:
        t = decode(s)
        if not t.is_valid or not any(len(bc.vertices) > 2 for bc in t.skeleton.boundary_components):
            continue
        t2, proof = close_cusps(t)
        if len(proof) < 2:
            continue
        steps = list(proof.steps)
        sig, loc, tag = steps[1]
        steps[1] = (encode(decode(FIG8)), loc, tag)
        bad = check_simplification_proof(t, SimplificationProof(steps), t2)
        assert bad is not None and bad[0] == 1
        assert not verify_simplification_proof(t, SimplificationProof(steps), t2)
        return
    pytest.fail("no multi-step proof found")


def test_simplify_records_a_valid_proof():
    for s in CENSUS[::61]:
        t = decode(s)
        t2, proof = simplify(t)
        assert t2.size <= t.size
        assert verify_simplification_proof(t, proof, t2)
