"""Potential walls for (r, c1, c2) inside a polyhedral cone of polarizations.

A potential wall comes from a splitting 0 -> F -> E -> G -> 0 with
c1(F)/rk F - c1/r orthogonal to some H in the cone.  Writing
c1(F) = (rk F / r) c1 + L, the Bogomolov inequality for F and G together with

    c2 = c1(F)·c1(G) + c2(F) + c2(G)

bounds -L^2, and the Hodge index theorem makes the set of such L finite once the
cone stays away from the isotropic boundary.  The output is the standard superset
of actual walls: whether a semistable sheaf realizing a datum exists is not
decided.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _linalg
from .chern import ChernData, bogomolov_bound
from .errors import ConeError, PositivityError, SubdivisionError
from .lattice import (MajorantForm, NumClass, SurfaceLattice, as_class, enumerate_ellipsoid,
                      enumerate_fine_lattice, majorant)

DEFAULT_MAX_DEPTH = 48
# Pieces are refined until c^2 <= NARROWNESS·H0^2.  Any factor below 1 gives a
# finite search radius; 1/4 keeps it under 5N/3 instead of letting it blow up
# as c^2 approaches H0^2.
NARROWNESS = Fraction(1, 4)


@dataclass(frozen=True)
class AmpleCone:
    generators: tuple[NumClass, ...]

    def __init__(self, generators: Sequence):
        gens = tuple(as_class(g) for g in generators)
        if not gens:
            raise ConeError("cone needs at least one generator")
        object.__setattr__(self, "generators", gens)

    def barycenter(self) -> NumClass:
        total = self.generators[0]
        for g in self.generators[1:]:
            total = total + g
        return total


def validate_cone(cone: AmpleCone, lat: SurfaceLattice) -> AmpleCone:
    """Numerical sanity: H_i^2 > 0 and H_i·H_j > 0.  Ampleness itself is asserted by the caller."""
    for i, g in enumerate(cone.generators):
        if len(g) != lat.rank:
            raise ConeError(f"generator {g} has wrong length", index=i)
        if lat.square(g) <= 0:
            raise ConeError(f"generator {g} has square {lat.square(g)} <= 0", index=i)
    for (i, g), (j, k) in itertools.combinations(enumerate(cone.generators), 2):
        if lat.pair(g, k) <= 0:
            raise ConeError(f"generators {g} and {k} pair nonpositively", index=(i, j))
    return cone


def cone_contains(cone: AmpleCone, x, lat: SurfaceLattice) -> bool:
    """Closed-cone membership via simplicial subcones (Carathéodory)."""
    x = as_class(x)
    gens = [list(g.coords) for g in cone.generators]
    d = _linalg.rank(gens)
    for subset in itertools.combinations(gens, d):
        if _linalg.rank(list(subset)) < d:
            continue
        t = _linalg.solve_combination(subset, x.coords)
        if t is not None and all(v >= 0 for v in t):
            return True
    return False


def h_constant(r: int, r_f: int) -> Fraction:
    r_g = r - r_f
    return Fraction(r_f - 1, 2 * r_f) + Fraction(r_g - 1, 2 * r_g)


def l_constant(r: int, c1: NumClass, lat: SurfaceLattice) -> Fraction:
    return Fraction(r - 1, 2 * r) * lat.square(c1)


def case_a_bound(r: int, c1, c2, lat: SurfaceLattice) -> Fraction:
    """(c2 - l)/(1 - h) with h minimized over the splittings r_F + r_G = r."""
    if r < 2:
        raise ValueError("rank must be at least 2 to admit proper subobjects")
    h = min(h_constant(r, rf) for rf in range(1, r))
    return (Fraction(c2) - l_constant(r, as_class(c1), lat)) / (1 - h)


def split_bound(r: int, r_f: int, c1, c2, lat: SurfaceLattice) -> Fraction:
    """Bound on -L^2 valid for the particular splitting rank r_F."""
    return (Fraction(c2) - l_constant(r, as_class(c1), lat)) / (1 - h_constant(r, r_f))


def sign_spans_cone(x, cone: AmpleCone, lat: SurfaceLattice) -> bool:
    values = [lat.pair(as_class(x), g) for g in cone.generators]
    return min(values) <= 0 <= max(values)


@dataclass(frozen=True)
class ConePiece:
    generators: tuple[NumClass, ...]
    base_point: NumClass
    form: MajorantForm
    c_sq: Fraction

    @property
    def base_square(self) -> Fraction:
        return self.form.value(self.base_point)


def _simplicial_pieces(cone: AmpleCone) -> list[tuple[NumClass, ...]]:
    gens = list(cone.generators)
    d = _linalg.rank([list(g.coords) for g in gens])
    if len(gens) == d:
        return [tuple(gens)]
    return [tuple(s) for s in itertools.combinations(gens, d)
            if _linalg.rank([list(g.coords) for g in s]) == d]


def _rough_ratio(x: Fraction) -> Fraction:
    """Positive rational within relative error 1/16 of x, with numerator or denominator 8."""
    if x >= 1:
        return Fraction(round(8 * x), 8)
    return Fraction(8, round(8 / x))


def subdivide_cone(cone: AmpleCone, lat: SurfaceLattice,
                   max_depth: int = DEFAULT_MAX_DEPTH) -> list[ConePiece]:
    """Bisect until every piece satisfies c^2 <= NARROWNESS·H0^2.

    H0 is the sum of the piece's generators and c^2 = max_i -(Ĥ_i - H0)^2 over the
    generators rescaled onto the slice {x·H0 = H0^2}.
    """
    for g in cone.generators:
        if len(g) != lat.rank:
            raise ConeError(f"generator {g} has wrong length")

    def refine(gens: tuple[NumClass, ...], depth: int) -> list[ConePiece]:
        h0 = gens[0]
        for g in gens[1:]:
            h0 = h0 + g
        hh = lat.square(h0)
        if hh <= 0:
            raise ConeError(f"cone barycenter {h0} has square {hh} <= 0")
        normalized = []
        for g in gens:
            gh = lat.pair(g, h0)
            if gh <= 0:
                raise ConeError(f"generator {g} pairs nonpositively with barycenter {h0}")
            normalized.append(g * (hh / gh))
        c_sq = max(-lat.square(n - h0) for n in normalized)
        if c_sq <= NARROWNESS * hh:
            return [ConePiece(gens, h0, majorant(lat, h0), c_sq)]
        if depth >= max_depth:
            raise SubdivisionError(
                "cone too close to isotropic boundary",
                subcone=" ".join(str(g) for g in gens), depth=depth)
        best = None
        for i, j in itertools.combinations(range(len(gens)), 2):
            length = -lat.square(normalized[i] - normalized[j])
            if best is None or length > best[0]:
                best = (length, i, j)
        _, i, j = best
        # The balanced split point is g_i/(g_i·H0) + g_j/(g_j·H0).  Its weight ratio is
        # rounded to a small denominator so ray coordinates grow geometrically
        # with depth instead of doubling in digit count.
        ratio = _rough_ratio(lat.pair(gens[j], h0) / lat.pair(gens[i], h0))
        mid = (ratio.numerator * gens[i] + ratio.denominator * gens[j]).primitive()
        left = tuple(mid if k == j else g for k, g in enumerate(gens))
        right = tuple(mid if k == i else g for k, g in enumerate(gens))
        return refine(left, depth + 1) + refine(right, depth + 1)

    pieces = []
    for simplex in _simplicial_pieces(cone):
        pieces.extend(refine(simplex, 0))
    return pieces


def _search_radius(piece: ConePiece, n_bound: Fraction) -> Fraction:
    hh = piece.base_square
    p = n_bound / (1 - piece.c_sq / hh)
    return piece.c_sq * p / hh + p


def enumerate_orthogonal_classes(lat: SurfaceLattice, denom: int, n_bound, cone: AmpleCone,
                                 shift=None, max_depth: int = DEFAULT_MAX_DEPTH,
                                 pieces: list[ConePiece] | None = None) -> list[NumClass]:
    """Classes x with 0 < -x^2 <= N orthogonal to some class of the cone.

    With ``shift=None`` x ranges over (1/denom)·Z^rho; otherwise over the coset
    shift + Z^rho (``denom`` then being a common denominator of ``shift``).
    """
    n_bound = Fraction(n_bound)
    if n_bound < 0:
        raise ValueError("N must be nonnegative")
    if pieces is None:
        pieces = subdivide_cone(cone, lat, max_depth)
    if n_bound == 0:
        return []
    found: set[NumClass] = set()
    for piece in pieces:
        radius = _search_radius(piece, n_bound)
        if shift is None:
            pts = enumerate_fine_lattice(piece.form, denom, radius)
        else:
            pts = enumerate_ellipsoid(piece.form, as_class(shift), denom, radius)
        for x in pts:
            sq = lat.square(x)
            if 0 < -sq <= n_bound and sign_spans_cone(x, cone, lat):
                found.add(x)
    return sorted(found)


@dataclass(frozen=True)
class WallDatum:
    """One potential destabilizing splitting."""

    r_f: int
    c1_f: NumClass
    L: NumClass
    xi: NumClass
    c2f_range: tuple[int, int]

    @property
    def normal(self) -> NumClass:
        return self.xi.canonical_primitive()

    def sub_chern(self, c2f) -> ChernData:
        return ChernData(self.r_f, self.c1_f, c2f)

    def candidates(self) -> list[ChernData]:
        lo, hi = self.c2f_range
        return [self.sub_chern(c) for c in range(lo, hi + 1)]

    def sort_key(self) -> tuple:
        return (self.r_f, self.c1_f.coords)


@dataclass(frozen=True)
class WallHyperplane:
    normal: NumClass
    data: tuple[WallDatum, ...]

    def value(self, h, lat: SurfaceLattice) -> Fraction:
        return lat.pair(self.normal, as_class(h))


@dataclass(frozen=True)
class WallSet:
    chern: ChernData
    cone: AmpleCone
    hyperplanes: tuple[WallHyperplane, ...]
    bounds: tuple[tuple[int, Fraction], ...] = ()
    notice: str = ""
    case_a: Fraction | None = field(default=None)

    def __len__(self) -> int:
        return len(self.hyperplanes)

    def data(self) -> list[WallDatum]:
        return [d for hp in self.hyperplanes for d in hp.data]

    def normals(self) -> list[NumClass]:
        return [hp.normal for hp in self.hyperplanes]


def _coset_shift(r: int, r_f: int, c1: NumClass) -> NumClass:
    v = (-Fraction(r_f, r)) * c1
    return NumClass(a - math.floor(a) for a in v)


def _data_for_split(e: ChernData, r_f: int, cone: AmpleCone, lat: SurfaceLattice,
                    pieces: list[ConePiece]) -> list[WallDatum]:
    r, c1, c2 = e.rank, e.c1, e.c2
    n_bound = split_bound(r, r_f, c1, c2, lat)
    if n_bound <= 0:
        return []
    shift = _coset_shift(r, r_f, c1)
    out = []
    for L in enumerate_orthogonal_classes(lat, shift.denominator(), n_bound, cone,
                                          shift=shift, pieces=pieces):
        c1_f = L + Fraction(r_f, r) * c1
        if not c1_f.is_integral():
            continue
        c1_g = c1 - c1_f
        lo = math.ceil(bogomolov_bound(r_f, c1_f, lat))
        hi = math.floor(c2 - lat.pair(c1_f, c1_g) - math.ceil(bogomolov_bound(r - r_f, c1_g, lat)))
        if lo <= hi:
            out.append(WallDatum(r_f, c1_f, L, L / r_f, (lo, hi)))
    return out


def enumerate_walls(e: ChernData, cone: AmpleCone, lat: SurfaceLattice,
                    max_depth: int = DEFAULT_MAX_DEPTH, threads: int = 1) -> WallSet:
    """All potential wall data of E meeting the cone, grouped by hyperplane."""
    if e.rank < 2:
        return WallSet(e, cone, (), notice="rank < 2: no proper saturated subsheaves")
    pieces = subdivide_cone(cone, lat, max_depth)
    splits = range(1, e.rank)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda rf: _data_for_split(e, rf, cone, lat, pieces), splits))
    else:
        chunks = [_data_for_split(e, rf, cone, lat, pieces) for rf in splits]
    grouped: dict[NumClass, list[WallDatum]] = {}
    for datum in itertools.chain.from_iterable(chunks):
        grouped.setdefault(datum.normal, []).append(datum)
    hyperplanes = tuple(WallHyperplane(n, tuple(sorted(ds, key=WallDatum.sort_key)))
                        for n, ds in sorted(grouped.items()))
    bounds = tuple((rf, split_bound(e.rank, rf, e.c1, e.c2, lat)) for rf in splits)
    case_a = case_a_bound(e.rank, e.c1, e.c2, lat)
    notice = "" if case_a >= 0 else "Case A bound is negative: no walls"
    return WallSet(e, cone, hyperplanes, bounds, notice, case_a)


def wall_datum_violations(datum: WallDatum, e: ChernData, cone: AmpleCone,
                          lat: SurfaceLattice) -> list[str]:
    """Independent re-check of a datum's invariants; empty list when all hold."""
    problems = []
    if not 1 <= datum.r_f <= e.rank - 1:
        problems.append("r_F out of range")
    if not datum.c1_f.is_integral():
        problems.append("c1_F not integral")
    if datum.L != datum.c1_f - Fraction(datum.r_f, e.rank) * e.c1:
        problems.append("L inconsistent with c1_F")
    if datum.xi != datum.L / datum.r_f:
        problems.append("xi inconsistent with L")
    if not sign_spans_cone(datum.L, cone, lat):
        problems.append("L is not orthogonal to any class of the cone")
    neg_sq = -lat.square(datum.L)
    if not 0 < neg_sq <= split_bound(e.rank, datum.r_f, e.c1, e.c2, lat):
        problems.append("-L^2 outside (0, bound]")
    c1_g = e.c1 - datum.c1_f
    lo = math.ceil(bogomolov_bound(datum.r_f, datum.c1_f, lat))
    lo_g = math.ceil(bogomolov_bound(e.rank - datum.r_f, c1_g, lat))
    if lo + lo_g > e.c2 - lat.pair(datum.c1_f, c1_g):
        problems.append("c2 splitting infeasible")
    if datum.c2f_range[0] != lo or datum.c2f_range[0] > datum.c2f_range[1]:
        problems.append("c2F range malformed")
    return problems


@dataclass(frozen=True)
class NefWallResult:
    walls: WallSet
    stabilized: bool
    history: tuple[tuple[NumClass, ...], ...]


def enumerate_walls_nef_heuristic(e: ChernData, nef_generators: Sequence, lat: SurfaceLattice,
                                  shrink_steps: int,
                                  max_depth: int = DEFAULT_MAX_DEPTH) -> NefWallResult:
    """Walls over a shrinking family g + H0/2^k approximating a nef cone.

    Termination for the full nef cone is not guaranteed; the result is flagged
    ``stabilized`` only when the last three steps return identical wall sets.
    """
    gens = [as_class(g) for g in nef_generators]
    h0 = AmpleCone(gens).barycenter()
    if lat.square(h0) <= 0:
        raise PositivityError("nef generators must span a cone with positive interior")
    history = []
    sets = []
    walls = None
    for k in range(1, shrink_steps + 1):
        eps = Fraction(1, 2 ** k)
        cone = AmpleCone([g + eps * h0 for g in gens])
        walls = enumerate_walls(e, cone, lat, max_depth)
        history.append(tuple(walls.normals()))
        sets.append(walls.hyperplanes)
    if walls is None:
        raise ValueError("shrink_steps must be positive")
    stabilized = len(sets) >= 3 and sets[-1] == sets[-2] == sets[-3]
    return NefWallResult(walls, stabilized, tuple(history))
