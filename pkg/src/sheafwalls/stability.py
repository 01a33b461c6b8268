"""Semistability verdicts at the numerical level.

Gieseker (semi)stability of an actual sheaf cannot be decided from its Chern
data.  Every verdict here is therefore relative to an explicit list of candidate
subobjects.  The split-bundle checker is the one case in which the candidate
list it builds is provably sufficient: for E = ⊕ O(L_i), every saturated subsheaf
has reduced polynomial dominated by that of some partial direct sum.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chern import ChernData, HilbertPoly, reduced_hilbert, tau
from .errors import ComparisonError, PositivityError, RankError
from .lattice import NumClass, SurfaceLattice, as_class


class Order(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _sign(x: Fraction) -> Order:
    return Order((x > 0) - (x < 0))


class VerdictKind(enum.Enum):
    STABLE = "STABLE"
    STRICTLY_SEMISTABLE = "STRICTLY_SEMISTABLE"
    UNSTABLE = "UNSTABLE"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    witness: ChernData | None = None

    @property
    def semistable(self) -> bool:
        return self.kind is not VerdictKind.UNSTABLE


def compare_reduced(p_f: HilbertPoly, p_e: HilbertPoly) -> Order:
    """Order of p_f(n) against p_e(n) for n >> 0."""
    if p_f.a2 != p_e.a2:
        raise ComparisonError(
            f"leading coefficients differ ({p_f.a2} vs {p_e.a2}); polynomials are not"
            " reduced polynomials for the same polarization")
    if p_f.a1 != p_e.a1:
        return _sign(p_f.a1 - p_e.a1)
    return _sign(p_f.a0 - p_e.a0)


def evaluation_threshold(p_f: HilbertPoly, p_e: HilbertPoly) -> int:
    """Least n0 from which compare_reduced agrees with evaluation at every n >= n0.

    With equal linear terms the difference is constant, so n0 = 1.
    """
    d1, d0 = p_f.a1 - p_e.a1, p_f.a0 - p_e.a0
    if d1 == 0:
        return 1
    return math.ceil(abs(d0 / d1)) + 1


def compare_slope(f: ChernData, e: ChernData, h, lat: SurfaceLattice) -> Order:
    h = as_class(h)
    if lat.square(h) <= 0:
        raise PositivityError(f"polarization {h} has square <= 0")
    return _sign(lat.pair(f.c1 / f.rank - e.c1 / e.rank, h))


def xi(f: ChernData, e: ChernData) -> NumClass:
    """c1(F)/rk(F) - c1(E)/rk(E)."""
    return f.c1 / f.rank - e.c1 / e.rank


def delta(f: ChernData, e: ChernData, z, lat: SurfaceLattice) -> Fraction:
    """Affine functional xi_F·z + tau(F) - tau(E) deciding twisted comparisons at a wall."""
    return lat.pair(xi(f, e), as_class(z)) + tau(f, lat) - tau(e, lat)


def _pick_witness(cands: list[ChernData]) -> ChernData:
    return min(cands, key=ChernData.sort_key)


def twisted_verdict(e: ChernData, subdata: Sequence[ChernData], twist, a,
                    lat: SurfaceLattice) -> Verdict:
    """Twisted A-Gieseker verdict of E over the supplied candidate subobjects only."""
    a = as_class(a)
    if lat.square(a) <= 0:
        raise PositivityError(f"polarization {a} has square <= 0")
    p_e = reduced_hilbert(e, twist, a, lat)
    greater: list[tuple[HilbertPoly, ChernData]] = []
    equal: list[ChernData] = []
    for f in subdata:
        if not 0 < f.rank <= e.rank:
            raise RankError(f"candidate rank {f.rank} outside (0, {e.rank}]")
        p_f = reduced_hilbert(f, twist, a, lat)
        order = compare_reduced(p_f, p_e)
        if order is Order.GREATER:
            greater.append((p_f, f))
        elif order is Order.EQUAL:
            equal.append(f)
    if greater:
        top = greater[0][0]
        for p, _ in greater[1:]:
            if compare_reduced(p, top) is Order.GREATER:
                top = p
        maximal = [f for p, f in greater if compare_reduced(p, top) is Order.EQUAL]
        return Verdict(VerdictKind.UNSTABLE, _pick_witness(maximal))
    if equal:
        return Verdict(VerdictKind.STRICTLY_SEMISTABLE, _pick_witness(equal))
    return Verdict(VerdictKind.STABLE)


def direct_sum(lines: Sequence[NumClass], lat: SurfaceLattice) -> ChernData:
    c1 = NumClass.zero(lat.rank)
    for line in lines:
        c1 = c1 + line
    c2 = sum((lat.pair(x, y) for x, y in itertools.combinations(lines, 2)), Fraction(0))
    return ChernData(len(lines), c1, c2)


def split_bundle_verdict(lines: Sequence, twist, h, lat: SurfaceLattice) -> Verdict:
    """Verdict for ⊕ O(L_i), using every proper partial sum as a candidate."""
    lines = [as_class(x) for x in lines]
    if len(lines) < 2:
        raise ValueError("need at least two line bundles")
    e = direct_sum(lines, lat)
    seen = set()
    cands = []
    for k in range(1, len(lines)):
        for idx in itertools.combinations(range(len(lines)), k):
            f = direct_sum([lines[i] for i in idx], lat)
            if f not in seen:
                seen.add(f)
                cands.append(f)
    return twisted_verdict(e, cands, twist, h, lat)


def classify_at_wall(e: ChernData, candidates: Sequence[ChernData], a, h,
                     lat: SurfaceLattice) -> bool:
    """Does E belong to S(r, c1, c2, A)_H relative to the candidate list?

    Only candidates with the same reduced A-polynomial as E matter; each must
    satisfy xi_F·H >= 0.
    """
    a, h = as_class(a), as_class(h)
    if lat.square(a) <= 0 or lat.square(h) <= 0:
        raise PositivityError("A and H must have positive square")
    p_e = reduced_hilbert(e, None, a, lat)
    for f in candidates:
        if reduced_hilbert(f, None, a, lat) == p_e and lat.pair(xi(f, e), h) < 0:
            return False
    return True


def parabolic_poly(e: ChernData, h, a, n: int, weight, lat: SurfaceLattice) -> HilbertPoly:
    """(1 - w)·p(E, 0, A) + w·p(E, nH, A)."""
    w = Fraction(weight)
    h = as_class(h)
    return (reduced_hilbert(e, None, a, lat).scale(1 - w)
            + reduced_hilbert(e, n * h, a, lat).scale(w))


def parabolic_twist(h, n: int, weight, convention: str = "affine") -> NumClass:
    """Twist class matched against the parabolic weight.

    ``"affine"``: w·nH, for which the difference identity holds exactly.
    ``"symmetric"``: (1 - w)·(-nH) + w·nH = (2w - 1)·nH.
    """
    h = as_class(h)
    w = Fraction(weight)
    if convention == "affine":
        return (w * n) * h
    if convention == "symmetric":
        return ((2 * w - 1) * n) * h
    raise ValueError(f"unknown convention {convention!r}")


def parabolic_difference_check(e: ChernData, f: ChernData, h, a, n: int, weight,
                               lat: SurfaceLattice, convention: str = "affine") -> bool:
    """Whether Par_w(E) - Par_w(F) equals the twisted difference coefficientwise."""
    h, a = as_class(h), as_class(a)
    if lat.square(h) <= 0 or lat.square(a) <= 0:
        raise PositivityError("H and A must have positive square")
    w = Fraction(weight)
    lhs = parabolic_poly(e, h, a, n, w, lat) - parabolic_poly(f, h, a, n, w, lat)
    t = parabolic_twist(h, n, w, convention)
    rhs = reduced_hilbert(e, t, a, lat) - reduced_hilbert(f, t, a, lat)
    return lhs == rhs
