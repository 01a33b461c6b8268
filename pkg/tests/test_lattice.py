import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import box_scan, dot
from sheafwalls.errors import DimensionError, LatticeError, PositivityError, SignatureError
from sheafwalls.lattice import (MajorantForm, NumClass, SurfaceLattice, congruence_diagonalize,
                                enumerate_ellipsoid, enumerate_fine_lattice, majorant, pair,
                                validate_lattice)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def vectors(n):
    return st.lists(rationals, min_size=n, max_size=n).map(NumClass)


def test_pairing_matches_intersection_table(product_fibres):
    e1, e2, d = NumClass([1, 0, 0]), NumClass([0, 1, 0]), NumClass([0, 0, 1])
    assert pair(e1, e2, product_fibres) == 1
    assert pair(e1, d, product_fibres) == pair(e2, d, product_fibres) == 1
    assert pair(e1, e1, product_fibres) == 0


def test_pairing_examples(quadric):
    assert pair(NumClass([1, 2]), NumClass([2, 1]), quadric) == 5
    assert pair(NumClass.zero(2), NumClass([3, -7]), quadric) == 0


def test_pairing_dimension_mismatch(quadric):
    with pytest.raises(DimensionError):
        pair(NumClass([1, 2, 3]), NumClass([1, 2]), quadric)


@given(vectors(3), vectors(3), vectors(3), rationals, rationals)
def test_pairing_symmetric_bilinear(x, y, z, a, b):
    lat = SurfaceLattice([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert lat.pair(x, y) == lat.pair(y, x)
    assert lat.pair(a * x + b * y, z) == a * lat.pair(x, z) + b * lat.pair(y, z)
    assert lat.pair(x, y) == dot(lat.gram, x.coords, y.coords)


def test_validate_product_surface(product_fibres):
    w = validate_lattice(product_fibres)
    assert w.signature == (1, 2)
    # congruence witness: P Q P^T = diag
    p = w.transform
    q = product_fibres.gram
    n = 3
    for i in range(n):
        for j in range(n):
            val = sum(p[i][a] * q[a][b] * p[j][b] for a in range(n) for b in range(n))
            assert val == (w.diagonal[i] if i == j else 0)
    u, v, w3 = NumClass([1, 1, 1]), NumClass([1, 0, -1]), NumClass([0, 1, -1])
    assert [product_fibres.square(x) for x in (u, v, w3)] == [6, -2, -2]
    assert product_fibres.pair(u, v) == product_fibres.pair(u, w3) == 0
    # V and W are not orthogonal: (E1 - D)·(E2 - D) = 1 - 1 - 1 + 0
    assert product_fibres.pair(v, w3) == -1
    assert validate_lattice(SurfaceLattice([[6, 0, 0], [0, -2, 0], [0, 0, -2]])).signature == (1, 2)


def test_validate_rejects_definite():
    with pytest.raises(SignatureError, match=r"\(2, 0\)"):
        validate_lattice(SurfaceLattice([[1, 0], [0, 1]]))


def test_validate_rejects_degenerate_and_asymmetric():
    with pytest.raises(LatticeError):
        validate_lattice(SurfaceLattice([[1, 1], [1, 1]]))
    with pytest.raises(LatticeError):
        validate_lattice(SurfaceLattice([[0, 1], [2, 0]]))


def test_validate_quadric(quadric):
    assert validate_lattice(quadric).signature == (1, 1)


def test_zero_pivot_diagonalization():
    p, d = congruence_diagonalize([[0, 1, 0], [1, 0, 0], [0, 0, -3]])
    assert sorted(x > 0 for x in d) == [False, False, True]


def test_majorant_examples(quadric):
    q = majorant(quadric, NumClass([1, 1]))
    assert q.gram_q == ((1, 0), (0, 1))
    assert q.value(NumClass([1, 1])) == 2
    assert q.value(NumClass([1, -1])) == 2 == -quadric.square(NumClass([1, -1]))


def test_majorant_requires_positive(quadric):
    with pytest.raises(PositivityError):
        majorant(quadric, NumClass([1, 0]))


@settings(max_examples=60)
@given(vectors(3), st.integers(1, 5), st.integers(-3, 3), st.integers(-3, 3))
def test_majorant_identity_and_hodge(x, a, b, c):
    lat = SurfaceLattice([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    h0 = NumClass([a, a + abs(b) + 1, 1 + abs(c)])
    if lat.square(h0) <= 0:
        return
    q = majorant(lat, h0)
    hh = lat.square(h0)
    assert q.value(x) == 2 * lat.pair(x, h0) ** 2 / hh - lat.square(x)
    assert q.value(h0) == hh
    # Hodge index: the orthogonal projection has nonpositive square, zero only at 0
    proj = x - (lat.pair(x, h0) / hh) * h0
    assert lat.pair(proj, h0) == 0
    assert lat.square(proj) <= 0
    assert (lat.square(proj) == 0) == proj.is_zero()
    if not x.is_zero():
        assert q.value(x) > 0


def test_ellipsoid_examples(quadric):
    q = majorant(quadric, NumClass([1, 1]))
    pts = enumerate_ellipsoid(q, NumClass([0, 0]), 1, 2)
    assert len(pts) == 9
    assert pts == sorted(pts)
    assert enumerate_ellipsoid(q, NumClass([0, 0]), 1, 0) == [NumClass([0, 0])]
    half = enumerate_ellipsoid(q, NumClass([Fraction(1, 2), Fraction(1, 2)]), 2, Fraction(15, 8))
    assert {tuple(p) for p in half} == {(Fraction(s, 2), Fraction(t, 2))
                                        for s in (-1, 1) for t in (-1, 1)}


def test_fine_lattice_is_union_of_cosets(quadric):
    q = majorant(quadric, NumClass([1, 2]))
    fine = enumerate_fine_lattice(q, 2, 3)
    union = []
    for s in ((0, 0), (Fraction(1, 2), 0), (0, Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2))):
        union.extend(enumerate_ellipsoid(q, NumClass(s), 2, 3))
    assert fine == sorted(union)


def test_ellipsoid_matches_box_scan_random():
    rng = random.Random(7)
    for _ in range(10):
        n = rng.choice([2, 3])
        a = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
        form = [[sum(a[k][i] * a[k][j] for k in range(n)) + (1 if i == j else 0)
                 for j in range(n)] for i in range(n)]
        shift = [Fraction(rng.randint(0, 2), 3) for _ in range(n)]
        bound = Fraction(rng.randint(0, 60), 4)
        got = enumerate_ellipsoid(MajorantForm(NumClass([1] + [0] * (n - 1)), form),
                                  NumClass(shift), 3, bound)
        assert [tuple(p) for p in got] == box_scan(form, shift, bound)
