"""Stratifications of polarization space and twist space, and flip sequences.

Along a segment of polarizations the wall hyperplanes cut out chambers.  At a
wall point A the comparison with a destabilizing datum F reduces to the sign of
the affine functional

    delta_F(z) = xi_F·z + tau(F) - tau(E)

of the twist z, so twist space is stratified by the parallel hyperplanes
{delta_F = 0}.  Walking the twist line from n·H to n'·H' through these strata gives
the chain M_0 -> L_0 <- M_1 -> ... <- M_{l+1} of moduli of twisted-semistable
sheaves.  Cell complexes are never materialized; everything is computed along
lines, which is all a flip sequence needs.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _linalg
from .chern import ChernData, integral_twist_transform, tau
from .errors import (GenericityError, PositivityError, ThresholdError, WallPositionError)
from .lattice import NumClass, SurfaceLattice, as_class
from .walls import (DEFAULT_MAX_DEPTH, AmpleCone, WallDatum, WallHyperplane, WallSet,
                    cone_contains, enumerate_walls)


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _lerp(a: NumClass, b: NumClass, t: Fraction) -> NumClass:
    return a + t * (b - a)


# -- polarization segments ----------------------------------------------------

@dataclass(frozen=True)
class PathEvent:
    t: Fraction
    hyperplanes: tuple[WallHyperplane, ...]

    @property
    def normals(self) -> tuple[NumClass, ...]:
        return tuple(hp.normal for hp in self.hyperplanes)


@dataclass(frozen=True)
class ChamberPath:
    start: NumClass
    end: NumClass
    events: tuple[PathEvent, ...]

    @property
    def chambers(self) -> tuple[tuple[Fraction, Fraction], ...]:
        ts = [Fraction(0)] + [ev.t for ev in self.events] + [Fraction(1)]
        return tuple(zip(ts, ts[1:]))

    def point(self, t) -> NumClass:
        return _lerp(self.start, self.end, Fraction(t))


def chamber_path(e: ChernData, cone: AmpleCone, walls: WallSet, h_start, h_end,
                 lat: SurfaceLattice) -> ChamberPath:
    """Wall crossings of the segment (1-t)·H_start + t·H_end, 0 < t < 1.

    Only the walls in ``walls`` are considered; keeping the segment inside the cone
    they were enumerated for is the caller's responsibility.
    """
    h_start, h_end = as_class(h_start), as_class(h_end)
    for h in (h_start, h_end):
        if lat.square(h) <= 0:
            raise PositivityError(f"endpoint {h} has square <= 0")
    crossings: dict[Fraction, list[WallHyperplane]] = {}
    for hp in walls.hyperplanes:
        a, b = hp.value(h_start, lat), hp.value(h_end, lat)
        if a == 0 and b == 0:
            raise WallPositionError("segment lies in wall", normal=hp.normal)
        if a == 0 or b == 0:
            raise WallPositionError(
                f"endpoint {h_start if a == 0 else h_end} lies on wall {hp.normal}",
                normal=hp.normal)
        if (a > 0) != (b > 0):
            crossings.setdefault(a / (a - b), []).append(hp)
    events = tuple(PathEvent(t, tuple(hps)) for t, hps in sorted(crossings.items()))
    return ChamberPath(h_start, h_end, events)


# -- twist space -------------------------------------------------------------

@dataclass(frozen=True)
class TwistFunctional:
    datum: WallDatum
    sub: ChernData
    xi: NumClass
    offset: Fraction

    def __call__(self, z, lat: SurfaceLattice) -> Fraction:
        return lat.pair(self.xi, as_class(z)) + self.offset


@dataclass(frozen=True)
class TwistStratum:
    kind: str  # "M" (open chamber) or "L" (stratum wall)
    index: int
    s_range: tuple[Fraction, Fraction]
    representative: NumClass
    signs: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"{self.kind}{self.index}"


@dataclass(frozen=True)
class TwistStratification:
    wall_point: NumClass
    z_start: NumClass
    z_end: NumClass
    functionals: tuple[TwistFunctional, ...]
    crossings: tuple[Fraction, ...]
    strata: tuple[TwistStratum, ...]

    def point(self, s) -> NumClass:
        return _lerp(self.z_start, self.z_end, Fraction(s))

    def signs_at(self, z, lat: SurfaceLattice) -> tuple[int, ...]:
        return tuple(_sgn(f(z, lat)) for f in self.functionals)

    def locate(self, z, lat: SurfaceLattice) -> TwistStratum | None:
        """Stratum of the line whose sign pattern matches that of ``z``."""
        signs = self.signs_at(z, lat)
        return next((st for st in self.strata if st.signs == signs), None)

    def chambers(self) -> list[TwistStratum]:
        return [st for st in self.strata if st.kind == "M"]

    def walls(self) -> list[TwistStratum]:
        return [st for st in self.strata if st.kind == "L"]


def wall_functionals(e: ChernData, walls: WallSet, a, lat: SurfaceLattice) -> list[TwistFunctional]:
    """delta_F for every datum with xi_F·A = 0 and every admissible c2(F)."""
    a = as_class(a)
    tau_e = tau(e, lat)
    out = []
    for datum in walls.data():
        if lat.pair(datum.xi, a) != 0:
            continue
        for sub in datum.candidates():
            out.append(TwistFunctional(datum, sub, datum.xi, tau(sub, lat) - tau_e))
    return out


def twist_strata(e: ChernData, walls: WallSet, a, z_start, z_end,
                 lat: SurfaceLattice) -> TwistStratification:
    a, z0, z1 = as_class(a), as_class(z_start), as_class(z_end)
    if lat.square(a) <= 0:
        raise PositivityError(f"wall point {a} has square <= 0")
    if z0 == z1:
        raise ValueError("twist line endpoints coincide")
    functionals = wall_functionals(e, walls, a, lat)
    cuts: set[Fraction] = set()
    for f in functionals:
        d0, d1 = f(z0, lat), f(z1, lat)
        if d0 == d1:
            if d0 == 0:
                raise WallPositionError("twist line lies in a stratum wall", sub=f.sub)
            continue
        s = d0 / (d0 - d1)
        if s in (0, 1):
            raise WallPositionError("twist line endpoint lies on a stratum wall", sub=f.sub)
        if 0 < s < 1:
            cuts.add(s)
    crossings = tuple(sorted(cuts))
    bounds = [Fraction(0), *crossings, Fraction(1)]
    strata = []
    for i, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
        mid = _lerp(z0, z1, (lo + hi) / 2)
        strata.append(TwistStratum("M", i, (lo, hi), mid,
                                   tuple(_sgn(f(mid, lat)) for f in functionals)))
        if i < len(crossings):
            pt = _lerp(z0, z1, hi)
            strata.append(TwistStratum("L", i, (hi, hi), pt,
                                       tuple(_sgn(f(pt, lat)) for f in functionals)))
    return TwistStratification(a, z0, z1, tuple(functionals), crossings, tuple(strata))


def lemma36_threshold(e: ChernData, walls: WallSet, a, h, lat: SurfaceLattice) -> int:
    """Least n_min such that twisting by n·H (n >= n_min) at A reproduces the H-verdicts.

    n_min = 1 + max ceil(|tau(F) - tau(E)| / |xi_F·H|) over data with xi_F·A = 0.
    """
    a, h = as_class(a), as_class(h)
    if lat.square(a) <= 0:
        raise PositivityError(f"A = {a} has square <= 0")
    for hp in walls.hyperplanes:
        if hp.value(h, lat) == 0:
            raise WallPositionError(f"H = {h} lies on wall {hp.normal}", normal=hp.normal)
    worst = 0
    for f in wall_functionals(e, walls, a, lat):
        xh = lat.pair(f.xi, h)
        if xh != 0:
            worst = max(worst, math.ceil(abs(f.offset) / abs(xh)))
    return worst + 1


# -- generic wall points ------------------------------------------------------

def _wall_subspace(normals: Sequence[NumClass], cone: AmpleCone,
                   lat: SurfaceLattice) -> list[NumClass]:
    """Basis of {x in span(cone) : n·x = 0 for all normals}."""
    gens = [list(g.coords) for g in cone.generators]
    _, pivots = _linalg.rref(_linalg.transpose(_linalg.to_matrix(gens)))
    basis = [cone.generators[i] for i in pivots]
    constraints = [[lat.pair(n, b) for b in basis] for n in normals]
    out = []
    for coeffs in _linalg.nullspace(constraints, len(basis)):
        v = NumClass.zero(lat.rank)
        for c, b in zip(coeffs, basis):
            v = v + c * b
        out.append(v)
    return out


def _intersection_basis(normals: Sequence[NumClass], lat: SurfaceLattice) -> list[NumClass]:
    rows = [list(lat.dual(n).coords) for n in normals]
    return [NumClass(v) for v in _linalg.nullspace(rows, lat.rank)]


def generic_wall_point(walls: WallSet, normals: Sequence[NumClass], base, cone: AmpleCone,
                       lat: SurfaceLattice, rng: random.Random,
                       attempts: int = 10) -> tuple[NumClass, int]:
    """Seeded random point A of (crossed walls) ∩ cone near ``base``.

    Genericity is checked, not assumed: A must lie on exactly the crossed
    hyperplanes, and every datum vanishing at A must be parallel to each of them.
    Returns A and the number of re-draws used.
    """
    base = as_class(base)
    normals = list(normals)
    directions = _wall_subspace(normals, cone, lat)
    crossed = set(normals)
    wall_span = _intersection_basis(normals, lat)
    for attempt in range(attempts):
        lam = Fraction(rng.randint(2 ** 15, 2 ** 16), 2 ** 16)
        step = NumClass.zero(lat.rank)
        for d in directions:
            step = step + Fraction(rng.randint(-2 ** 16, 2 ** 16), 2 ** 16) * d
        a = None
        for m in range(64):
            cand = lam * (base + Fraction(1, 2 ** m) * step)
            if lat.square(cand) > 0 and cone_contains(cone, cand, lat):
                a = cand
                break
        if a is None:
            continue
        on = {hp.normal for hp in walls.hyperplanes if hp.value(a, lat) == 0}
        if on != crossed:
            continue
        parallel = all(lat.pair(d.xi, w) == 0
                       for d in walls.data() if lat.pair(d.xi, a) == 0
                       for w in wall_span)
        if parallel:
            return a, attempt
    raise GenericityError(f"no generic wall point found after {attempts} draws",
                          normals=" ".join(str(n) for n in normals))


# -- flips --------------------------------------------------------------------

@dataclass(frozen=True)
class FlipAnnotation:
    stratum: str
    representative: NumClass
    integral_representative: NumClass | None
    transformed: ChernData | None

    @property
    def label(self) -> str:
        return "integral twist" if self.transformed is not None else "rational twist"


@dataclass(frozen=True)
class WallFlip:
    t: Fraction
    hyperplanes: tuple[WallHyperplane, ...]
    wall_point: NumClass
    redraws: int
    h_before: NumClass
    h_after: NumClass
    n_min: int
    n_min_prime: int
    n: int
    n_prime: int
    stratification: TwistStratification
    annotations: tuple[FlipAnnotation, ...]

    def diagram(self) -> str:
        parts = []
        for st in self.stratification.strata:
            if st.kind == "M":
                parts.append(f"M{st.index}")
            else:
                parts.append(f"-> L{st.index} <-")
        return " ".join(parts)

    def moduli_symbols(self, e: ChernData) -> list[str]:
        inv = f"({e.rank},{e.c1},{e.c2})"
        a = self.wall_point
        return [f"M({inv} ⊗ {st.representative}, {a})" for st in self.stratification.strata]


@dataclass(frozen=True)
class FlipSequence:
    chern: ChernData
    start: NumClass
    end: NumClass
    walls: WallSet
    path: ChamberPath
    flips: tuple[WallFlip, ...]
    note: str = ""


def _integral_point_on(functional: TwistFunctional, lat: SurfaceLattice) -> NumClass | None:
    """An integral z with xi·z + offset = 0, when one exists."""
    coeffs = lat.dual(functional.xi)
    scale = math.lcm(*(c.denominator for c in coeffs), functional.offset.denominator)
    ints = [int(c * scale) for c in coeffs]
    rhs = int(-functional.offset * scale)
    g = 0
    combo: list[int] = [0] * len(ints)
    for i, v in enumerate(ints):
        if v == 0:
            continue
        if g == 0:
            g, combo = abs(v), [0] * len(ints)
            combo[i] = 1 if v > 0 else -1
            continue
        new_g, x, y = _xgcd(g, v)
        combo = [x * c for c in combo]
        combo[i] += y
        g = new_g
    if g == 0 or rhs % g:
        return None
    return NumClass(c * (rhs // g) for c in combo)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _annotate(e: ChernData, strat: TwistStratification, lat: SurfaceLattice) -> tuple[FlipAnnotation, ...]:
    out = []
    for st in strat.walls():
        rep = st.representative
        integral = rep if rep.is_integral() else None
        if integral is None:
            vanishing = [f for f in strat.functionals if f(rep, lat) == 0]
            for f in vanishing:
                integral = _integral_point_on(f, lat)
                if integral is not None:
                    break
        transformed = integral_twist_transform(e, integral, lat) if integral is not None else None
        out.append(FlipAnnotation(st.label, rep, integral, transformed))
    return tuple(out)


def _rng_for(seed: int, normals: Sequence[NumClass]) -> random.Random:
    key = f"{seed}|" + ";".join(",".join(str(c) for c in n) for n in sorted(normals))
    return random.Random(key)


def flip_sequence(e: ChernData, cone: AmpleCone, h, h_prime, lat: SurfaceLattice,
                  seed: int = 0, n: int | None = None, n_prime: int | None = None,
                  walls: WallSet | None = None,
                  max_depth: int = DEFAULT_MAX_DEPTH) -> FlipSequence:
    """Flip chain from H to H', one twist stratification per wall crossed.

    At each crossing a generic A is drawn on the wall and the twist line runs from
    n·H_before to n'·H_after, where H_before and H_after are the segment endpoint (for
    the first and last crossing) or chamber midpoints of the path.
    """
    h, h_prime = as_class(h), as_class(h_prime)
    for x in (h, h_prime):
        if not cone_contains(cone, x, lat):
            raise WallPositionError(f"polarization {x} is not in the cone")
    if walls is None:
        walls = enumerate_walls(e, cone, lat, max_depth)
    path = chamber_path(e, cone, walls, h, h_prime, lat)
    if not path.events:
        return FlipSequence(e, h, h_prime, walls, path, (), note="same cell")
    chambers = path.chambers
    flips = []
    last = len(path.events) - 1
    for k, event in enumerate(path.events):
        before = h if k == 0 else path.point(sum(chambers[k]) / 2)
        after = h_prime if k == last else path.point(sum(chambers[k + 1]) / 2)
        base = path.point(event.t)
        a, redraws = generic_wall_point(walls, event.normals, base, cone, lat,
                                        _rng_for(seed, event.normals))
        n_min = lemma36_threshold(e, walls, a, before, lat)
        n_min_p = lemma36_threshold(e, walls, a, after, lat)
        use_n = n_min if n is None else n
        use_np = n_min_p if n_prime is None else n_prime
        if use_n < n_min or use_np < n_min_p:
            raise ThresholdError(
                f"thresholds ({use_n}, {use_np}) below the computed minimum ({n_min}, {n_min_p})")
        strat = twist_strata(e, walls, a, use_n * before, use_np * after, lat)
        flips.append(WallFlip(event.t, event.hyperplanes, a, redraws, before, after,
                              n_min, n_min_p, use_n, use_np, strat, _annotate(e, strat, lat)))
    return FlipSequence(e, h, h_prime, walls, path, tuple(flips))
