from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from conftest import FIG8, LST, TREFOIL
from cuspcert.isosig import decode
from cuspcert.linalg import integer_kernel_basis, rank
from cuspcert.pi1 import Presentation, fundamental_group, nonabelian_quotient, peripheral_image_noncyclic, recognise
from cuspcert.smith import abelian_invariants, invariant_factors, rank_over_q

matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_invariant_factors_match_sympy(rows):
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    expected = sorted(abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0)
    assert invariant_factors([list(r) for r in rows]) == expected
    assert rank(rows) == rank_over_q(rows) == Matrix(rows).rank()


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_integer_kernel_is_a_kernel(rows):
    n = len(rows[0])
    basis = integer_kernel_basis(rows, n)
    assert len(basis) == n - Matrix(rows).rank()
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_abelian_invariants():
    assert abelian_invariants(2, [{0: 2}, {1: 3}]) == (0, (6,))
    assert abelian_invariants(3, [{0: 1, 1: -1}]) == (2, ())


def test_recognise_small_groups():
    assert recognise(Presentation(1, [])) == "Z"
    assert recognise(Presentation(2, [[1, 2, -1, -2]])) == "Z^2"
    assert recognise(Presentation(1, [[1]])) == "trivial"
    assert recognise(Presentation(2, [])) == "F2"


def test_fundamental_groups_of_fixtures():
    assert recognise(fundamental_group(decode(LST))) == "Z"
    trefoil = fundamental_group(decode(TREFOIL))
    assert recognise(trefoil) is None
    assert nonabelian_quotient(trefoil) is not None  # maps onto S_3
    assert nonabelian_quotient(fundamental_group(decode(FIG8))) is not None


def test_peripheral_image():
    z2 = Presentation(2, [[1, 2, -1, -2]])
    assert peripheral_image_noncyclic(z2, [[1], [2]])
    assert not peripheral_image_noncyclic(z2, [[1], [1, 1]])
    assert not peripheral_image_noncyclic(Presentation(1, []), [[1], [1]])
