import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import above_approximants_brute, dot, pell_brute
from sheafwalls.errors import FamilyError, NumberTheoryError, PositivityError
from sheafwalls.lattice import NumClass
from sheafwalls.numex import (PRODUCT_CHANGE_OF_BASIS, PRODUCT_GRAM_FIBRES, PRODUCT_LATTICE,
                              approximate_surd, convergents, is_above_approximant, pell_solutions,
                              remark17_family, to_fibre_basis)
from sheafwalls.stability import VerdictKind

nonsquare = st.integers(2, 400).filter(lambda d: math.isqrt(d) ** 2 != d)


def test_sqrt3_approximants():
    ap = approximate_surd(3, 4)
    assert ap.convergents == ((1, 2), (4, 7), (15, 26), (56, 97))
    assert list(ap.convergents) == above_approximants_brute(3, 4)


@pytest.mark.parametrize("d", [3, 7])
def test_approximants_match_brute_force(d):
    assert list(approximate_surd(d, 3).convergents) == above_approximants_brute(d, 3)


@pytest.mark.parametrize("d", [2, 11])
def test_convergent_approximants_are_a_subset(d):
    # for these d the scan also finds intermediate fractions such as 4/1 for sqrt(11)
    got = approximate_surd(d, 3).convergents
    brute = above_approximants_brute(d, 40)
    assert set(got) <= set(brute)
    assert len(brute) > len(got)
    assert all(is_above_approximant(d, p, q) for p, q in brute)


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_pell_matches_brute_force(d):
    assert pell_solutions(d, 3) == pell_brute(d, 3)


def test_number_theory_errors():
    for bad in (0, 1, 4, 9):
        with pytest.raises(NumberTheoryError):
            approximate_surd(bad, 2)
        with pytest.raises(NumberTheoryError):
            pell_solutions(bad, 2)
    with pytest.raises(NumberTheoryError):
        approximate_surd(3, 0)
    assert pell_solutions(3, 0) == []


@settings(max_examples=60, deadline=None)
@given(nonsquare, st.integers(1, 4))
def test_pell_relation(d, count):
    sols = pell_solutions(d, count)
    assert len(sols) == count
    assert all(q * q - d * p * p == 1 for p, q in sols)
    assert all(a[0] < b[0] for a, b in zip(sols, sols[1:]))


@settings(max_examples=60, deadline=None)
@given(nonsquare, st.integers(1, 300), st.integers(1, 6000))
def test_above_approximant_predicate(d, p, q):
    lhs = Fraction(q, p)
    # exact check against a rational bracket of sqrt(d) fine enough at this size
    root = math.isqrt(d * 10 ** 40)
    lo, hi = Fraction(root, 10 ** 20), Fraction(root + 1, 10 ** 20)
    if lhs - hi > 0 and lhs - lo < Fraction(1, p * p):
        assert is_above_approximant(d, p, q)
    if lhs - lo <= 0 or lhs - hi >= Fraction(1, p * p):
        assert not is_above_approximant(d, p, q)


@settings(max_examples=30, deadline=None)
@given(nonsquare)
def test_convergents_alternate_around_root(d):
    gen = convergents(d)
    for k in range(8):
        p, q = next(gen)
        above = q * q > d * p * p
        assert above == (k % 2 == 1)


def test_change_of_basis_matches_gram():
    m = PRODUCT_CHANGE_OF_BASIS
    for i in range(3):
        for j in range(3):
            assert PRODUCT_LATTICE.gram[i][j] == dot(PRODUCT_GRAM_FIBRES, m[i], m[j])
    assert PRODUCT_LATTICE.pair(NumClass([0, 1, 0]), NumClass([0, 0, 1])) == -1


def test_family_members_in_fibre_basis():
    fam = remark17_family(5)
    assert [m.probe_pairing for m in fam.members] == [6, 24, 90, 336, 1254]
    for m in fam.members:
        line, h = to_fibre_basis(m.line), to_fibre_basis(m.polarization)
        assert m.q ** 2 - 3 * m.p ** 2 == 1
        assert dot(PRODUCT_GRAM_FIBRES, line, line) == -2
        assert dot(PRODUCT_GRAM_FIBRES, h, h) == 6
        assert dot(PRODUCT_GRAM_FIBRES, line, h) == 0
        assert m.c2 == 2
        assert m.verdict is VerdictKind.STRICTLY_SEMISTABLE
        assert m.constant_term == -1
    assert fam.notes


def test_family_errors():
    with pytest.raises(FamilyError):
        remark17_family(0)
    with pytest.raises(PositivityError):
        remark17_family(2, probe_ample=(0, 1, 0))
