"""Néron–Severi lattice arithmetic.

A surface is described purely numerically by the Gram matrix of its
intersection form on a basis of NS(X), the canonical class K and the holomorphic
Euler characteristic chi(O_X).  Classes are rational coordinate vectors.

Lattice points of bounded Hodge-majorant norm are found with an exact
Fincke–Pohst enumeration over an LDL^T decomposition; no floating point is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import _linalg
from .errors import DimensionError, LatticeError, PositivityError, SignatureError


@dataclass(frozen=True, order=True)
class NumClass:
    """A class in NS(X) ⊗ Q, stored as exact coordinates."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    @classmethod
    def zero(cls, dim: int) -> NumClass:
        return cls([0] * dim)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def _check(self, other: NumClass) -> None:
        if len(other.coords) != len(self.coords):
            raise DimensionError(
                f"class dimensions differ: {len(self.coords)} vs {len(other.coords)}")

    def __add__(self, other: NumClass) -> NumClass:
        self._check(other)
        return NumClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: NumClass) -> NumClass:
        self._check(other)
        return NumClass(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> NumClass:
        return NumClass(-a for a in self.coords)

    def __mul__(self, scalar) -> NumClass:
        s = Fraction(scalar)
        return NumClass(s * a for a in self.coords)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> NumClass:
        s = Fraction(scalar)
        return NumClass(a / s for a in self.coords)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coords)

    def denominator(self) -> int:
        return math.lcm(*(a.denominator for a in self.coords)) if self.coords else 1

    def primitive(self) -> NumClass:
        """Primitive integral vector on the same ray (first nonzero entry kept in sign)."""
        if self.is_zero():
            raise ValueError("zero class has no primitive direction")
        scaled = [int(a * self.denominator()) for a in self.coords]
        g = math.gcd(*scaled)
        return NumClass(v // g for v in scaled)

    def canonical_primitive(self) -> NumClass:
        """Primitive integral vector with first nonzero coordinate positive."""
        p = self.primitive()
        first = next(a for a in p.coords if a != 0)
        return p if first > 0 else -p

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


def as_class(x) -> NumClass:
    return x if isinstance(x, NumClass) else NumClass(x)


@dataclass(frozen=True)
class SurfaceLattice:
    """Numerical data of a surface: intersection form, K_X and chi(O_X)."""

    gram: tuple[tuple[int, ...], ...]
    canonical: NumClass
    chi_structure: int = 0
    name: str = field(default="", compare=False)

    def __init__(self, gram: Sequence[Sequence[int]], canonical: Iterable = None,
                 chi_structure: int = 0, name: str = ""):
        rows = []
        for row in gram:
            ints = []
            for v in row:
                f = Fraction(v)
                if f.denominator != 1:
                    raise LatticeError("Gram matrix must be integral", entry=v)
                ints.append(int(f))
            rows.append(tuple(ints))
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("Gram matrix must be square and nonempty")
        object.__setattr__(self, "gram", tuple(rows))
        k = NumClass([0] * n if canonical is None else canonical)
        if len(k) != n:
            raise DimensionError(f"canonical class has length {len(k)}, expected {n}")
        if not k.is_integral():
            raise LatticeError("canonical class must be integral")
        object.__setattr__(self, "canonical", k)
        object.__setattr__(self, "chi_structure", int(chi_structure))
        object.__setattr__(self, "name", name)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, x: NumClass, y: NumClass) -> Fraction:
        if len(x) != self.rank or len(y) != self.rank:
            raise DimensionError(
                f"expected classes of length {self.rank}, got {len(x)} and {len(y)}")
        total = Fraction(0)
        for i, xi in enumerate(x.coords):
            if xi:
                row = self.gram[i]
                total += xi * sum((row[j] * yj for j, yj in enumerate(y.coords) if row[j]),
                                  Fraction(0))
        return total

    def square(self, x: NumClass) -> Fraction:
        return self.pair(x, x)

    def dual(self, x: NumClass) -> NumClass:
        """Coefficients of the linear functional y -> x·y."""
        return NumClass(sum((self.gram[i][j] * x[j] for j in range(self.rank)), Fraction(0))
                        for i in range(self.rank))


def pair(x: NumClass, y: NumClass, lat: SurfaceLattice) -> Fraction:
    """Intersection number x·y = x^T Q y."""
    return lat.pair(x, y)


@dataclass(frozen=True)
class LatticeWitness:
    """Rational congruence P Q P^T = diag(diagonal) certifying the signature."""

    lattice: SurfaceLattice
    transform: tuple[tuple[Fraction, ...], ...]
    diagonal: tuple[Fraction, ...]

    @property
    def signature(self) -> tuple[int, int]:
        return (sum(1 for d in self.diagonal if d > 0),
                sum(1 for d in self.diagonal if d < 0))


def congruence_diagonalize(gram: Sequence[Sequence]) -> tuple[_linalg.Matrix, list[Fraction]]:
    """Symmetric Gaussian elimination: returns (P, d) with P G P^T = diag(d).

    A zero pivot is repaired by swapping in a later nonzero diagonal entry, or
    else by adding a row/column with a nonzero off-diagonal entry (which makes the
    pivot 2·g_kj).  A zero entry in ``d`` means the form is degenerate.
    """
    m = _linalg.to_matrix(gram)
    n = len(m)
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(a: int, b: int) -> None:
        m[a], m[b] = m[b], m[a]
        for row in m:
            row[a], row[b] = row[b], row[a]
        p[a], p[b] = p[b], p[a]

    def add_to(dst: int, src: int, f: Fraction) -> None:
        m[dst] = [x + f * y for x, y in zip(m[dst], m[src])]
        for row in m:
            row[dst] += f * row[src]
        p[dst] = [x + f * y for x, y in zip(p[dst], p[src])]

    for k in range(n):
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if j is None:
                    continue
                add_to(k, j, Fraction(1))
        for i in range(k + 1, n):
            if m[i][k] != 0:
                add_to(i, k, -m[i][k] / m[k][k])
    return p, [m[i][i] for i in range(n)]


def validate_lattice(lat: SurfaceLattice) -> LatticeWitness:
    """Check symmetry, nondegeneracy and hyperbolic signature (1, rho-1)."""
    n = lat.rank
    for i in range(n):
        for j in range(i + 1, n):
            if lat.gram[i][j] != lat.gram[j][i]:
                raise LatticeError("Gram matrix is not symmetric", entry=(i, j))
    p, diag = congruence_diagonalize(lat.gram)
    if any(d == 0 for d in diag):
        raise LatticeError("intersection form is degenerate")
    witness = LatticeWitness(lat, tuple(tuple(r) for r in p), tuple(diag))
    if witness.signature != (1, n - 1):
        raise SignatureError(
            f"signature {witness.signature} is not hyperbolic (1, {n - 1})",
            signature=witness.signature)
    return witness


@dataclass(frozen=True)
class MajorantForm:
    """Positive definite q(x) = 2(x·H0)^2/H0^2 - x^2 attached to H0 with H0^2 > 0."""

    base_point: NumClass
    gram_q: tuple[tuple[Fraction, ...], ...]

    def value(self, x: NumClass) -> Fraction:
        g = self.gram_q
        return sum((x[i] * g[i][j] * x[j] for i in range(len(g)) for j in range(len(g))),
                   Fraction(0))


def majorant(lat: SurfaceLattice, h0: NumClass) -> MajorantForm:
    h0 = as_class(h0)
    hh = lat.square(h0)
    if hh <= 0:
        raise PositivityError(f"base point {h0} has square {hh} <= 0")
    d = lat.dual(h0)
    n = lat.rank
    gram = tuple(tuple(2 * d[i] * d[j] / hh - lat.gram[i][j] for j in range(n))
                 for i in range(n))
    return MajorantForm(h0, gram)


def _ldl(gram: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    n = len(gram)
    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        d[i] = gram[i][i] - sum((mu[i][k] ** 2 * d[k] for k in range(i)), Fraction(0))
        if d[i] <= 0:
            raise PositivityError("form is not positive definite")
        for j in range(i + 1, n):
            mu[j][i] = (gram[j][i] - sum((mu[j][k] * mu[i][k] * d[k] for k in range(i)),
                                         Fraction(0))) / d[i]
    return mu, d


def _integer_window(center: Fraction, radius_sq: Fraction) -> range:
    """All integers k with (k - center)^2 <= radius_sq."""
    if radius_sq < 0:
        return range(0)
    r = math.isqrt(math.floor(radius_sq))
    hi = math.floor(center) + r + 2
    while hi > center and (hi - center) ** 2 > radius_sq:
        hi -= 1
    lo = math.ceil(center) - r - 2
    while lo < center and (lo - center) ** 2 > radius_sq:
        lo += 1
    if lo > hi or (lo - center) ** 2 > radius_sq:
        return range(0)
    return range(lo, hi + 1)


def fincke_pohst(gram: Sequence[Sequence[Fraction]], shift: Sequence[Fraction],
                 bound: Fraction) -> list[tuple[Fraction, ...]]:
    """Points x in shift + Z^n with x^T G x <= bound, lexicographically sorted.

    Writes x^T G x = sum_i d_i (x_i + sum_{j>i} mu_ji x_j)^2 and fixes coordinates
    from the last one down, shrinking the residual bound at each level.
    """
    n = len(gram)
    mu, d = _ldl(gram)
    shift = [Fraction(s) for s in shift]
    bound = Fraction(bound)
    out: list[tuple[Fraction, ...]] = []
    x = [Fraction(0)] * n

    def level(i: int, remaining: Fraction) -> None:
        center = -sum((mu[j][i] * x[j] for j in range(i + 1, n)), Fraction(0))
        for k in _integer_window(center - shift[i], remaining / d[i]):
            x[i] = shift[i] + k
            rest = remaining - d[i] * (x[i] - center) ** 2
            if i == 0:
                out.append(tuple(x))
            else:
                level(i - 1, rest)

    if bound >= 0:
        level(n - 1, bound)
    out.sort()
    return out


def enumerate_ellipsoid(q: MajorantForm, shift: NumClass, denom: int,
                        bound) -> list[NumClass]:
    """All x in the coset shift + Z^rho with q(x) <= bound, in lexicographic order.

    ``denom`` is a common denominator of ``shift``; pass ``shift = 0`` and scale
    the bound by ``denom**2`` (see :func:`enumerate_fine_lattice`) for the full
    lattice (1/denom)·Z^rho.
    """
    shift = as_class(shift)
    if len(shift) != len(q.gram_q):
        raise DimensionError("shift dimension does not match the form")
    if denom < 1 or shift.denominator() > denom or denom % shift.denominator():
        raise ValueError(f"shift denominators must divide {denom}")
    bound = Fraction(bound)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    return [NumClass(p) for p in fincke_pohst(q.gram_q, shift.coords, bound)]


def enumerate_fine_lattice(q: MajorantForm, denom: int, bound) -> list[NumClass]:
    """All x in (1/denom)·Z^rho with q(x) <= bound, lexicographic."""
    n = len(q.gram_q)
    pts = fincke_pohst(q.gram_q, [0] * n, Fraction(bound) * denom * denom)
    return [NumClass(p) / denom for p in pts]
