import random
from fractions import Fraction as F
from math import floor

import pytest
from hypothesis import given, strategies as st

from posetreal.approximation import (
    SampledMap,
    cell_sample,
    hahn_phi,
    lcu_pair,
    lift,
    monotone_approx,
    nerve_tower,
    push,
    sampled_cells,
    subdivision_tower,
)
from posetreal.covers import FiniteMetric, cover_from_balls, singleton_cover
from posetreal.errors import DeltaNotGrid, NotStarRefinement, PreconditionFailed, TooFar
from posetreal.experiments import circle_fixture, hahn_fixture, near_point, random_hahn_instance
from posetreal.poset import Poset, chain
from posetreal.randgen import random_point, random_poset
from posetreal.realization import RPoint, coords, dist, same_chain_hull


# ------------------------------------------------------------- towers

def test_lift_and_push_are_inverse():
    rng = random.Random(5)
    for _ in range(30):
        P = random_poset(rng, rng.randint(1, 4))
        T = subdivision_tower(P, 2)
        x = random_point(rng, P, denom=12)
        assert push(lift(x, T), T) == x


def test_cell_sample_fixes_vertices():
    pts, tower = cell_sample(chain(2), 1)
    assert len(pts) == len(tower[-1]) == 3
    assert coords(pts[next(e for e in pts if e.lo == e.hi == "a")]) == {"a": 1}


# ------------------------------------------------------------- Hahn

def test_hahn_fixture_golden():
    f, Q, n = hahn_fixture()
    res = hahn_phi(f, Q, n)
    assert res.ok
    expected = {
        0: RPoint.vertex(Q, "a"),
        1: RPoint.make(Q, [("a", F(7, 8)), ("b", F(1, 8))]),
        2: RPoint.make(Q, [("a", F(5, 8)), ("b", F(3, 8))]),
        3: RPoint.make(Q, [("a", F(1, 2)), ("b", F(1, 2))]),
    }
    assert res.phi == expected
    assert [res.certificates[x].distance for x in range(4)] == [0, F(1, 16), F(5, 16), F(3, 8)]
    assert all(res.certificates[x].distance <= F(2) ** (1 - n) for x in range(4))


def test_hahn_preconditions():
    f, Q, _ = hahn_fixture()
    with pytest.raises(PreconditionFailed):
        hahn_phi(f, Q, 0)
    with pytest.raises(PreconditionFailed):
        hahn_phi(f, Q, 2)  # delta = 1/4 is above 2^-3
    bowtie = Poset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    g = SampledMap(f.domain, {x: RPoint.vertex(bowtie, "a") for x in range(4)}, f.gamma, f.delta)
    with pytest.raises(PreconditionFailed):
        hahn_phi(g, bowtie, 1)


def test_hahn_rejects_discontinuous_samples():
    Q = chain(2)
    X = FiniteMetric.from_function(range(2), lambda i, j: F(abs(i - j), 16))
    f = SampledMap(X, {0: RPoint.vertex(Q, "a"), 1: RPoint.vertex(Q, "b")}, F(1, 2), F(1, 4))
    assert f.continuity_violations()
    with pytest.raises(PreconditionFailed):
        hahn_phi(f, Q, 1)


@given(st.integers(0, 10_000))
def test_hahn_random_certificates(seed):
    f, Q, n = random_hahn_instance(random.Random(seed), n=1 + seed % 2)
    assert hahn_phi(f, Q, n).ok


# ------------------------------------------------ monotone approximation

def test_monotone_approx_identity_like():
    P = Q = chain(2)
    f = sampled_cells(P, 2, lambda x: x, F(1, 2), F(1, 4))
    with pytest.raises(PreconditionFailed):
        monotone_approx(f, P, Q, 2, 1)
    res = monotone_approx(f, P, Q, 2, 1, strict=False)
    assert res.ok and not res.bookkeeping
    assert all(d <= 1 for d in res.distances.values())


def test_monotone_approx_constant():
    P, Q = chain(2), chain(3)
    target = RPoint.vertex(Q, "b")
    f = sampled_cells(P, 1, lambda x: target, F(1, 2), F(1, 4))
    res = monotone_approx(f, P, Q, 1, 1, strict=False)
    assert res.ok
    assert all(d == 0 for d in res.distances.values())


# ----------------------------------------------------------- LCU

def staircase(v, delta, shift):
    """Coordinatewise form of the replacement: flat steps of width 3δ joined by slope-4 ramps."""
    w = (1 - v) / delta - shift
    if w <= 0:
        return F(1)
    k = floor(w / 4)
    return max(F(0), 1 - 4 * delta * (k + min(w - 4 * k, 1)))


def test_lcu_golden_on_four_chain():
    P = chain(4)
    x = RPoint(P, "abcd", [F(1, 4)] * 4)
    y = RPoint(P, "abcd", [F(1, 4), F(1, 4), F(1, 3), F(1, 6)])
    assert dist(x, y) == F(1, 12)
    xp, yp = lcu_pair(x, y, F(1, 4))
    assert xp == RPoint.vertex(P, "a")
    assert yp == RPoint.vertex(P, "c")


def test_lcu_errors():
    P = chain(2)
    x, y = RPoint.vertex(P, "a"), RPoint.vertex(P, "b")
    with pytest.raises(DeltaNotGrid):
        lcu_pair(x, x, F(1, 3))
    with pytest.raises(TooFar):
        lcu_pair(x, y, F(1, 4))


@given(st.integers(0, 10_000))
def test_lcu_matches_coordinatewise_oracle(seed):
    rng = random.Random(seed)
    P = random_poset(rng, rng.randint(2, 7))
    d = F(1, 4 * rng.randint(1, 3))
    x = random_point(rng, P, denom=48)
    y = near_point(rng, x)
    if dist(x, y) >= d:
        return
    xp, yp = lcu_pair(x, y, d)
    cx, cy, ax, ay = coords(x), coords(y), coords(xp), coords(yp)
    for p in P.elements:
        assert ax.get(p, 0) == staircase(cx.get(p, 0), d, 0)
        assert ay.get(p, 0) == staircase(cy.get(p, 0), d, 2)
    assert dist(x, xp) <= 3 * d and dist(y, yp) <= 3 * d
    assert same_chain_hull(x, xp) and same_chain_hull(xp, yp) and same_chain_hull(yp, y)


# ---------------------------------------------------------- nerve tower

def test_tower_requires_star_refinement():
    X, covers = circle_fixture()
    with pytest.raises(NotStarRefinement):
        nerve_tower(X, [covers[2], covers[0]])


def test_circle_tower_shape():
    X, covers = circle_fixture()
    # Radius 1/4 is the nearest-neighbour distance, so those open balls are points.
    assert dict(covers[2].items()) == dict(singleton_cover(X.points).items())
    T = nerve_tower(X, covers)
    assert T.depth == 4
    assert all(T.maps_simplex_into(i, x) for i in range(T.depth) for x in X.points)
    for n in range(T.depth + 1):
        assert max(T.image_diameter(0, n, x) for x in X.points) <= F(2) ** (1 - n)


def test_tower_separation_on_circle():
    X, covers = circle_fixture()
    T = nerve_tower(X, covers)
    # Antipodal points: the radius-1/2 balls have diameter 1/2, not below d/2.
    assert T.predicted_level(0, 4) == 2
    assert T.resolving_level(0, 4) == 2
    assert not (T.simplex(2, 0) & T.simplex(2, 4))
    assert T.predicted_level(0, 1) == 2 == T.resolving_level(0, 1)


def test_ball_cover_of_line():
    X = FiniteMetric.from_function(range(5), lambda a, b: F(abs(a - b), 4))
    C = cover_from_balls(X, F(1, 2))
    assert C[2] == {1, 2, 3}
