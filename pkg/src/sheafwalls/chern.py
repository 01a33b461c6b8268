"""Numerical Chern data and formal Riemann–Roch.

A torsion-free sheaf is represented only by (rank, c1, c2).  Its reduced Hilbert
polynomial, optionally twisted by a rational class, is computed formally:

    chi(E ⊗ T ⊗ H^n) / r = H^2/2 n^2 + (mu_H(E) + T·H - K·H/2) n
                          + T^2/2 + (c1/r)·T - K·T/2 + tau(E) + chi(O_X)

with tau(E) = (c1^2 - 2 c2 - c1·K) / (2r).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IntegralityError, PositivityError, RankError
from .lattice import NumClass, SurfaceLattice, as_class


@dataclass(frozen=True)
class ChernData:
    rank: int
    c1: NumClass
    c2: Fraction

    def __init__(self, rank: int, c1, c2):
        if int(rank) != rank or rank < 1:
            raise RankError(f"rank must be a positive integer, got {rank}")
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "c1", as_class(c1))
        object.__setattr__(self, "c2", Fraction(c2))

    def sort_key(self) -> tuple:
        return (self.rank, self.c1.coords, self.c2)

    def __str__(self) -> str:
        return f"({self.rank}, {self.c1}, {self.c2})"


@dataclass(frozen=True)
class HilbertPoly:
    """a2 n^2 + a1 n + a0."""

    a2: Fraction
    a1: Fraction
    a0: Fraction

    def __call__(self, n) -> Fraction:
        n = Fraction(n)
        return (self.a2 * n + self.a1) * n + self.a0

    def __sub__(self, other: HilbertPoly) -> HilbertPoly:
        return HilbertPoly(self.a2 - other.a2, self.a1 - other.a1, self.a0 - other.a0)

    def __add__(self, other: HilbertPoly) -> HilbertPoly:
        return HilbertPoly(self.a2 + other.a2, self.a1 + other.a1, self.a0 + other.a0)

    def scale(self, s) -> HilbertPoly:
        s = Fraction(s)
        return HilbertPoly(s * self.a2, s * self.a1, s * self.a0)

    def coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a2, self.a1, self.a0)


def tau(e: ChernData, lat: SurfaceLattice) -> Fraction:
    c1 = e.c1
    return (lat.square(c1) - 2 * e.c2 - lat.pair(c1, lat.canonical)) / (2 * e.rank)


def slope(e: ChernData, h: NumClass, lat: SurfaceLattice) -> Fraction:
    return lat.pair(e.c1, h) / e.rank


def reduced_hilbert(e: ChernData, twist, h, lat: SurfaceLattice) -> HilbertPoly:
    """Formal chi(E ⊗ twist ⊗ H^n)/rk(E) as a polynomial in n."""
    h = as_class(h)
    hh = lat.square(h)
    if hh <= 0:
        raise PositivityError(f"polarization {h} has square {hh} <= 0")
    t = NumClass.zero(lat.rank) if twist is None else as_class(twist)
    k = lat.canonical
    mu_over_r = e.c1 / e.rank
    a1 = lat.pair(mu_over_r, h) + lat.pair(t, h) - lat.pair(k, h) / 2
    a0 = (lat.square(t) / 2 + lat.pair(mu_over_r, t) - lat.pair(k, t) / 2
          + tau(e, lat) + lat.chi_structure)
    return HilbertPoly(hh / 2, a1, a0)


def discriminant(e: ChernData, lat: SurfaceLattice) -> Fraction:
    """2 r c2 - (r-1) c1^2; nonnegative exactly when Bogomolov holds."""
    return 2 * e.rank * e.c2 - (e.rank - 1) * lat.square(e.c1)


def bogomolov_bound(rank: int, c1: NumClass, lat: SurfaceLattice) -> Fraction:
    return Fraction(rank - 1, 2 * rank) * lat.square(c1)


def bogomolov_holds(e: ChernData, lat: SurfaceLattice) -> bool:
    return e.c2 >= bogomolov_bound(e.rank, e.c1, lat)


def integral_twist_transform(e: ChernData, line, lat: SurfaceLattice) -> ChernData:
    """Chern data of E ⊗ O(line) for an integral class ``line``."""
    line = as_class(line)
    if not line.is_integral():
        raise IntegralityError(
            f"twist {line} is not integral; rational twists stay twist parameters")
    r = e.rank
    c1 = e.c1 + r * line
    c2 = e.c2 + (r - 1) * lat.pair(e.c1, line) + Fraction(r * (r - 1), 2) * lat.square(line)
    return ChernData(r, c1, c2)


def cover_twist_integrality(p: int, q: int, m: int) -> tuple[int, int]:
    """Coefficients of the pulled-back twist on the Kummer cover.

    For the twist (p/q)·Lambda pulled back along the degree-m^4 cover and corrected
    by half the ramification divisor, the class is

        (pm/q + m - 1)·(phi^* Gamma_1)_red + 2m(m-1)·phi^* A,

    integral precisely because q divides m.  Returns the two coefficients.
    """
    if q < 1 or m < 1:
        raise ValueError("q and m must be positive")
    if m % q:
        raise IntegralityError("twist not integral on cover", p=p, q=q, m=m)
    coef_gamma = Fraction(p * m, q) + (m - 1)
    assert coef_gamma.denominator == 1
    return int(coef_gamma), 2 * m * (m - 1)

