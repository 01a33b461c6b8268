"""Number-theoretic constructions: surd approximation, Pell solutions and the
unbounded split family on a product of elliptic curves.

Every comparison involving sqrt(d) is reduced to a comparison of integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .chern import ChernData, reduced_hilbert
from .errors import FamilyError, NumberTheoryError, PositivityError
from .lattice import NumClass, SurfaceLattice, as_class
from .stability import VerdictKind, split_bundle_verdict


def _check_nonsquare(d: int) -> None:
    if d < 2:
        raise NumberTheoryError(f"d must be at least 2, got {d}", d=d)
    if math.isqrt(d) ** 2 == d:
        raise NumberTheoryError(f"d = {d} is a perfect square", d=d)


def convergents(d: int) -> Iterator[tuple[int, int]]:
    """Continued-fraction convergents of sqrt(d) as (denominator, numerator) pairs."""
    _check_nonsquare(d)
    a0 = math.isqrt(d)
    m, den, a = 0, 1, a0
    p_prev, p = 0, 1      # denominators
    q_prev, q = 1, a0     # numerators
    yield p, q
    while True:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def is_above_approximant(d: int, p: int, q: int) -> bool:
    """Exact test of 0 < q/p - sqrt(d) < 1/p^2.

    Multiplying by p^2 this is 0 < qp - p^2 sqrt(d) < 1, i.e.
    (qp)^2 > d p^4 and (qp - 1)^2 < d p^4 (qp >= 1 makes squaring monotone).
    """
    if p < 1 or q < 1:
        return False
    target = d * p ** 4
    return (q * p) ** 2 > target and (q * p - 1) ** 2 < target


@dataclass(frozen=True)
class SurdApprox:
    d: int
    convergents: tuple[tuple[int, int], ...]


def approximate_surd(d: int, count: int) -> SurdApprox:
    """First ``count`` convergents of sqrt(d) lying above it within 1/p^2."""
    _check_nonsquare(d)
    if count < 1:
        raise NumberTheoryError(f"count must be positive, got {count}", count=count)
    found = []
    for p, q in convergents(d):
        if is_above_approximant(d, p, q):
            found.append((p, q))
            if len(found) == count:
                break
    return SurdApprox(d, tuple(found))


def pell_solutions(d: int, count: int) -> list[tuple[int, int]]:
    """First ``count`` positive solutions (p, q) of q^2 - d p^2 = 1."""
    _check_nonsquare(d)
    if count <= 0:
        return []
    for p1, q1 in convergents(d):
        if q1 * q1 - d * p1 * p1 == 1:
            break
    out = [(p1, q1)]
    p, q = p1, q1
    while len(out) < count:
        p, q = q * p1 + p * q1, q * q1 + d * p * p1
        out.append((p, q))
    return out


# Rows express U = E1 + E2 + D, V = E1 - D, W = E2 - D in the basis of the two
# fibres E1, E2 and the diagonal D of E x E (generic elliptic curve E).
PRODUCT_CHANGE_OF_BASIS = ((1, 1, 1), (1, 0, -1), (0, 1, -1))
PRODUCT_GRAM_FIBRES = ((0, 1, 1), (1, 0, 1), (1, 1, 0))
# Intersection form on U, V, W.  U is orthogonal to V and W, but V·W = -1, so the
# form is diag(6, -2, -2) only on the plane w = 0, which is where the family
# lives.  K = 0 and chi(O) = 0 for an abelian surface.
PRODUCT_LATTICE = SurfaceLattice([[6, 0, 0], [0, -2, -1], [0, -1, -2]], [0, 0, 0], 0,
                                 name="ExE (U, V, W)")
SECOND_CHERN_WINDOW = 8


def to_fibre_basis(x: NumClass) -> NumClass:
    """Coordinates of a (U, V, W) class in the (E1, E2, D) basis."""
    x = as_class(x)
    return NumClass(sum(x[i] * PRODUCT_CHANGE_OF_BASIS[i][j] for i in range(3))
                    for j in range(3))


@dataclass(frozen=True)
class FamilyMember:
    p: int
    q: int
    line: NumClass
    polarization: NumClass
    c2: Fraction
    verdict: VerdictKind
    probe_pairing: Fraction
    constant_term: Fraction


@dataclass(frozen=True)
class UnboundedFamily:
    lattice: SurfaceLattice
    probe: NumClass
    members: tuple[FamilyMember, ...]
    notes: tuple[str, ...] = field(default_factory=tuple)


def remark17_family(count: int, probe_ample=(1, 0, 0)) -> UnboundedFamily:
    """Split rank-2 bundles O(L) + O(-L) with L = pU + qV, semistable at H = qU + 3pV.

    Each member has c2 = 2, so the second Chern class is fixed while the
    pairing of L with any fixed ample probe grows without bound.
    """
    if count < 1:
        raise FamilyError(f"count must be positive, got {count}")
    lat = PRODUCT_LATTICE
    probe = as_class(probe_ample)
    if lat.square(probe) <= 0:
        raise PositivityError(f"probe {probe} has square <= 0")
    u, v = NumClass((1, 0, 0)), NumClass((0, 1, 0))
    members = []
    for p, q in pell_solutions(3, count):
        line = p * u + q * v
        h = q * u + (3 * p) * v
        c2 = -lat.square(line)
        where = f"member (p, q) = ({p}, {q})"
        if q * q - 3 * p * p != 1:
            raise FamilyError(f"{where}: Pell relation fails")
        if lat.square(line) != -2 or c2 != 2:
            raise FamilyError(f"{where}: L^2 = {lat.square(line)}, expected -2")
        if lat.square(h) != 6:
            raise FamilyError(f"{where}: H^2 = {lat.square(h)}, expected 6")
        if lat.pair(line, h) != 0:
            raise FamilyError(f"{where}: L.H = {lat.pair(line, h)}, expected 0")
        if not 0 < c2 < SECOND_CHERN_WINDOW:
            raise FamilyError(f"{where}: c2 = {c2} outside (0, {SECOND_CHERN_WINDOW})")
        verdict = split_bundle_verdict([line, -line], None, h, lat)
        if verdict.kind is VerdictKind.UNSTABLE:
            raise FamilyError(f"{where}: split bundle is unstable at H")
        e = ChernData(2, NumClass.zero(3), c2)
        members.append(FamilyMember(p, q, line, h, c2, verdict.kind, lat.pair(probe, line),
                                    reduced_hilbert(e, None, h, lat).a0))
    for prev, cur in zip(members, members[1:]):
        if cur.probe_pairing <= prev.probe_pairing:
            raise FamilyError(
                f"member (p, q) = ({cur.p}, {cur.q}): probe pairing {cur.probe_pairing}"
                f" does not exceed {prev.probe_pairing}")
    notes = (
        "Riemann-Roch with K = 0, chi(O) = 0 gives reduced polynomial 3n^2 - c2/2 for"
        " every member; a displayed constant of +c2/2 has the opposite sign. Both"
        " summands share the polynomial either way, so the verdict is unaffected.",
    )
    return UnboundedFamily(lat, probe, tuple(members), notes)
