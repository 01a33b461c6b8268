import random
from fractions import Fraction

import pytest

from oracles import stratum_signs
from sheafwalls.chern import ChernData
from sheafwalls.errors import PositivityError, ThresholdError, WallPositionError
from sheafwalls.lattice import NumClass
from sheafwalls.strata import (chamber_path, flip_sequence, generic_wall_point, lemma36_threshold,
                               twist_strata, wall_functionals, _rng_for)
from sheafwalls.walls import AmpleCone, enumerate_walls


@pytest.fixture
def running_walls(quadric, running):
    e, cone = running
    return e, cone, enumerate_walls(e, cone, quadric)


def subs_of(strat):
    return [(f.sub.rank, tuple(f.sub.c1), f.sub.c2) for f in strat.functionals]


def test_chamber_path_single_crossing(quadric, running_walls):
    e, cone, ws = running_walls
    path = chamber_path(e, cone, ws, [1, 2], [2, 1], quadric)
    assert [ev.t for ev in path.events] == [Fraction(1, 2)]
    assert path.events[0].normals == (NumClass([1, -1]),)
    assert path.point(Fraction(1, 2)) == NumClass([Fraction(3, 2), Fraction(3, 2)])
    assert path.chambers == ((0, Fraction(1, 2)), (Fraction(1, 2), 1))


def test_chamber_path_same_side(quadric, running_walls):
    e, cone, ws = running_walls
    assert chamber_path(e, cone, ws, [1, 2], [1, 3], quadric).events == ()


def test_chamber_path_errors(quadric, running_walls):
    e, cone, ws = running_walls
    with pytest.raises(WallPositionError, match="segment lies in wall"):
        chamber_path(e, cone, ws, [1, 1], [2, 2], quadric)
    with pytest.raises(WallPositionError, match="endpoint"):
        chamber_path(e, cone, ws, [1, 1], [1, 2], quadric)
    with pytest.raises(PositivityError):
        chamber_path(e, cone, ws, [0, 1], [1, 2], quadric)


def test_path_events_match_sign_changes(quadric):
    rng = random.Random(5)
    e = ChernData(2, [1, 1], 6)
    cone = AmpleCone([[1, 4], [4, 1]])
    ws = enumerate_walls(e, cone, quadric)
    for _ in range(20):
        h0 = [1, rng.randint(2, 4)] if rng.random() < 0.5 else [rng.randint(1, 2), 4]
        h1 = [rng.randint(2, 4), 1]
        if any(hp.value(h, quadric) == 0 for hp in ws.hyperplanes for h in (h0, h1)):
            continue
        path = chamber_path(e, cone, ws, h0, h1, quadric)
        flips = {hp.normal for hp in ws.hyperplanes
                 if (hp.value(h0, quadric) > 0) != (hp.value(h1, quadric) > 0)}
        assert {n for ev in path.events for n in ev.normals} == flips
        for ev in path.events:
            for hp in ev.hyperplanes:
                assert hp.value(path.point(ev.t), quadric) == 0


def test_running_twist_strata(quadric, running_walls):
    e, _, ws = running_walls
    st = twist_strata(e, ws, [1, 1], [3, 6], [6, 3], quadric)
    assert st.crossings == (Fraction(1, 3), Fraction(2, 3))
    assert [s.label for s in st.strata] == ["M0", "L0", "M1", "L1", "M2"]
    assert st.locate([0, 0], quadric).label == "M1"
    assert st.locate([4, 5], quadric).label == "L0"
    assert len(st.chambers()) == 3 and len(st.walls()) == 2


def test_strata_signs_match_oracle(quadric, running_walls):
    e, _, ws = running_walls
    st = twist_strata(e, ws, [1, 1], [3, 6], [6, 3], quadric)
    subs = subs_of(st)
    e_t = (e.rank, tuple(e.c1), e.c2)
    for stratum in st.strata:
        lo, hi = stratum.s_range
        for k in range(5):
            s = lo + (hi - lo) * Fraction(k + 1, 6)
            z = st.point(s)
            for n in (0, 3):
                assert stratum_signs(quadric.gram, quadric.canonical, 1, e_t, subs, z,
                                     [1, 1], n) == stratum.signs


def test_wall_free_point_gives_one_stratum(quadric, running_walls):
    e, _, ws = running_walls
    assert wall_functionals(e, ws, [1, 2], quadric) == []
    st = twist_strata(e, ws, [1, 2], [0, 0], [5, 1], quadric)
    assert [s.label for s in st.strata] == ["M0"]


def test_twist_strata_degenerate(quadric, running_walls):
    e, _, ws = running_walls
    with pytest.raises(ValueError):
        twist_strata(e, ws, [1, 1], [3, 6], [3, 6], quadric)
    with pytest.raises(WallPositionError):
        twist_strata(e, ws, [1, 1], [4, 5], [6, 3], quadric)


def test_lemma36_thresholds(quadric, running_walls):
    e, _, ws = running_walls
    assert lemma36_threshold(e, ws, [1, 1], [1, 2], quadric) == 2
    assert lemma36_threshold(e, ws, [1, 1], [2, 1], quadric) == 2
    assert lemma36_threshold(e, ws, [1, 2], [1, 3], quadric) == 1
    with pytest.raises(WallPositionError):
        lemma36_threshold(e, ws, [1, 1], [1, 1], quadric)


def test_generic_wall_point_is_on_wall(product_fibres):
    e = ChernData(2, [1, 1, 0], 4)
    cone = AmpleCone([[1, 1, 1], [2, 1, 1], [1, 2, 1]])
    ws = enumerate_walls(e, cone, product_fibres)
    path = chamber_path(e, cone, ws, [3, 2, 2], [2, 3, 2], product_fibres)
    assert path.events
    for ev in path.events:
        a, _ = generic_wall_point(ws, ev.normals, path.point(ev.t), cone, product_fibres,
                                  _rng_for(0, ev.normals))
        on = {hp.normal for hp in ws.hyperplanes if hp.value(a, product_fibres) == 0}
        assert on == set(ev.normals)
        assert product_fibres.square(a) > 0


def test_flip_sequence_example(quadric, running):
    e, cone = running
    fs = flip_sequence(e, cone, [1, 2], [2, 1], quadric, n=3, n_prime=3)
    assert len(fs.flips) == 1
    flip = fs.flips[0]
    assert flip.t == Fraction(1, 2)
    assert flip.n_min == flip.n_min_prime == 2
    assert flip.diagram() == "M0 -> L0 <- M1 -> L1 <- M2"
    assert flip.stratification.crossings == (Fraction(1, 3), Fraction(2, 3))
    reps = [tuple(s.representative) for s in flip.stratification.strata]
    half = Fraction(1, 2)
    assert reps == [(3 + half, 5 + half), (4, 5), (4 + half, 4 + half), (5, 4), (5 + half, 3 + half)]
    transformed = {(a.transformed.rank, tuple(a.transformed.c1), a.transformed.c2)
                   for a in flip.annotations}
    assert transformed == {(2, (9, 11), 51), (2, (11, 9), 51)}


def test_flip_sequence_same_cell(quadric, running):
    e, cone = running
    fs = flip_sequence(e, cone, [1, 2], [3, 5], quadric)
    assert fs.note == "same cell" and fs.flips == ()


def test_flip_sequence_reversal(quadric, running):
    e, cone = running
    fwd = flip_sequence(e, cone, [1, 2], [2, 1], quadric, n=3, n_prime=3)
    back = flip_sequence(e, cone, [2, 1], [1, 2], quadric, n=3, n_prime=3)
    f, b = fwd.flips[0], back.flips[0]
    assert f.wall_point == b.wall_point
    assert f.stratification.crossings == tuple(1 - s for s in reversed(b.stratification.crossings))
    assert [s.representative for s in f.stratification.strata] == \
        [s.representative for s in reversed(b.stratification.strata)]


def test_flip_sequence_seed_independence(quadric, product_fibres):
    e = ChernData(2, [1, 1, 0], 4)
    cone = AmpleCone([[1, 1, 1], [2, 1, 1], [1, 2, 1]])
    h, h2 = [3, 2, 2], [2, 3, 2]
    runs = [flip_sequence(e, cone, h, h2, product_fibres, seed=s) for s in range(4)]
    counts = {tuple(len(f.stratification.strata) for f in fs.flips) for fs in runs}
    assert len(counts) == 1
    assert runs[0].flips
    assert len({tuple(f.t for f in fs.flips) for fs in runs}) == 1


def test_flip_sequence_errors(quadric, running):
    e, cone = running
    with pytest.raises(ThresholdError):
        flip_sequence(e, cone, [1, 2], [2, 1], quadric, n=1, n_prime=3)
    with pytest.raises(WallPositionError, match="not in the cone"):
        flip_sequence(e, cone, [1, 2], [1, 3], quadric)
