import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from posetreal.covers import (
    Cover,
    FiniteMetric,
    atom_star_cover,
    atomic_values,
    bonding,
    cover_from_balls,
    delta,
    hereditarily_star_refines,
    image_within,
    ip,
    lebesgue,
    nerve,
    nerve_pou,
    shrink,
    singleton_cover,
    star_of_point,
    star_of_set,
    star_refines,
    strongly_star_refines,
    vd,
    weakly_hereditarily_star_refines,
)
from posetreal.errors import InvalidMetric, NotCovered, NotStarRefinement
from posetreal.poset import chain, is_conditionally_complete
from posetreal.randgen import random_cover
from posetreal.subdivision import canonical

fs = frozenset


def line(n):
    """Points 0..n-1 on a line, unit spacing scaled to diameter 1."""
    return FiniteMetric.from_function(range(n), lambda a, b: F(abs(a - b), max(n - 1, 1)))


def three_arcs():
    return Cover("abcd", {"U": "ab", "V": "bc", "W": "cd"})


# ------------------------------------------------------------ basics

def test_cover_must_cover():
    with pytest.raises(NotCovered):
        Cover("abc", {"U": "ab"})
    with pytest.raises(ValueError):
        Cover("ab", {"U": "abz"})


def test_finite_metric_validation():
    with pytest.raises(InvalidMetric):
        FiniteMetric("ab", [[0, 1], [2, 0]])
    with pytest.raises(InvalidMetric):
        FiniteMetric("abc", [[0, 1, 5], [1, 0, 1], [5, 1, 0]])


def test_delta_and_stars():
    C = three_arcs()
    assert delta(C, "b") == {"U", "V"}
    assert delta(C, {"b", "c"}) == {"V"}
    with pytest.raises(NotCovered):
        delta(C, {"a", "d"})
    assert star_of_point(C, "b") == set("abc")
    assert star_of_set(C, {"a"}) == set("ab")


def test_nerve_of_three_arcs_is_a_path():
    N = nerve(three_arcs())
    assert set(N.elements) == {fs("U"), fs("V"), fs("W"), fs("UV"), fs("VW")}


def test_nerve_of_triple_overlap_is_filled():
    C = Cover("xyz", {"A": "xy", "B": "yz", "C": "xzy"})
    assert fs("ABC") in nerve(C).elements


@given(st.integers(0, 10_000))
def test_nerve_matches_brute_force(seed):
    rng = random.Random(seed)
    ground = range(rng.randint(1, 6))
    C = Cover(ground, random_cover(rng, ground, rng.randint(1, 4), 0.5))
    brute = {
        fs(s)
        for r in range(1, len(C) + 1)
        for s in combinations(C.labels, r)
        if C.intersection(s)
    }
    assert set(nerve(C).elements) == brute


# ------------------------------------------------------ refinements

def test_refinement_hierarchy_on_line():
    X = line(7)
    fine = singleton_cover(X.points)
    coarse = cover_from_balls(X, F(1, 2))
    assert strongly_star_refines(fine, coarse)
    assert star_refines(fine, coarse)
    assert hereditarily_star_refines(fine, coarse)
    assert weakly_hereditarily_star_refines(fine, coarse)


@given(st.integers(0, 10_000))
def test_refinement_implications(seed):
    rng = random.Random(seed)
    ground = list(range(rng.randint(1, 6)))
    C = Cover(ground, random_cover(rng, ground, rng.randint(1, 5), 0.4))
    D = Cover(ground, random_cover(rng, ground, rng.randint(1, 4), 0.6))
    if strongly_star_refines(C, D):
        assert star_refines(C, D)
    if hereditarily_star_refines(C, D):
        assert star_refines(C, D)
        assert weakly_hereditarily_star_refines(C, D)


def test_shrink():
    C = three_arcs()
    D = singleton_cover("abcd")
    S = shrink(C, D)
    assert dict(S.items()) == dict(C.items())
    with pytest.raises(NotStarRefinement):
        shrink(D, C)


@given(st.integers(0, 10_000))
def test_shrink_is_a_shrinking(seed):
    rng = random.Random(seed)
    ground = list(range(rng.randint(1, 6)))
    C = Cover(ground, random_cover(rng, ground, rng.randint(1, 4), 0.6))
    D = Cover(ground, random_cover(rng, ground, rng.randint(1, 6), 0.3))
    if not star_refines(D, C):
        return
    S = shrink(C, D)
    assert all(S[k] <= C[k] for k in C.labels)


# -------------------------------------------------------------- IP / VD

def test_ip_vd_on_three_arcs():
    # V = {b, c} lies in U ∪ W but in neither U nor W alone.
    C = three_arcs()
    assert set(ip(C).elements) == {fs("U"), fs("V"), fs("W"), fs("UV"), fs("VW")}
    assert set(vd(C).elements) == {fs("U"), fs("W"), fs("UV"), fs("VW")}


def test_ip_keeps_triangle_boundary():
    C = Cover("abc", {"A": "ab", "B": "bc", "C": "ac"})
    assert set(ip(C).elements) == set(nerve(C).elements)
    assert set(vd(C).elements) == {fs("AB"), fs("BC"), fs("AC")}


def test_vd_inside_ip():
    rng = random.Random(3)
    for _ in range(100):
        ground = list(range(rng.randint(1, 6)))
        C = Cover(ground, random_cover(rng, ground, rng.randint(1, 5), 0.5))
        assert set(vd(C).elements) <= set(ip(C).elements)


def test_atom_star_cover_of_chain_ccp():
    P = canonical(chain(2))
    C = atom_star_cover(P)
    assert is_conditionally_complete(P)
    assert set(ip(C).elements) == set(vd(C).elements)


# ------------------------------------------------------------- bonding

def test_bonding_singletons_into_arcs():
    C = three_arcs()
    f = bonding(singleton_cover("abcd"), C)
    assert f(fs("b")).lo == fs("UV") and f(fs("b")).hi == fs("UV")
    assert image_within(f, ip(C))
    assert image_within(f, vd(C))


def test_bonding_requires_star_refinement():
    with pytest.raises(NotStarRefinement):
        bonding(three_arcs(), singleton_cover("abcd"))


def test_bonding_bad_pair_leaves_vd():
    # Star-refining but not hereditarily so: the image stays in ip but leaves vd.
    ground = "abcd"
    C = Cover(ground, {"U0": "cd", "U1": "abc", "U2": "ac"})
    D = Cover(ground, {"V0": "bcd", "V1": "ad", "V2": "abcd"})
    assert star_refines(C, D) and not hereditarily_star_refines(C, D)
    f = bonding(C, D)
    assert image_within(f, ip(D))
    assert not image_within(f, vd(D))


@given(st.integers(0, 10_000))
def test_bonding_lands_in_ip(seed):
    rng = random.Random(seed)
    ground = list(range(rng.randint(1, 6)))
    C = Cover(ground, random_cover(rng, ground, rng.randint(1, 5), 0.3))
    D = Cover(ground, random_cover(rng, ground, rng.randint(1, 4), 0.6))
    if not star_refines(C, D):
        return
    f = bonding(C, D)
    assert image_within(f, ip(D))
    if hereditarily_star_refines(C, D):
        assert image_within(f, vd(D))


# ------------------------------------------------------- metric covers

def test_lebesgue_on_line():
    X = line(5)
    C = Cover(X.points, {"L": {0, 1, 2}, "R": {2, 3, 4}})
    # At the shared point 2 the closed ball of radius 1/4 already spills over.
    assert lebesgue(C, X) == F(1, 4)
    assert lebesgue(Cover(X.points, {"all": X.points}), X) == 1


def test_nerve_pou_support_and_top():
    X = line(5)
    C = Cover(X.points, {"L": {0, 1, 2}, "R": {2, 3, 4}})
    D = singleton_cover(X.points)
    phi = nerve_pou(C, D, X)
    for x in X.points:
        vals = atomic_values(phi[x])
        assert {k for k, v in vals.items() if v > 0} == delta(C, x)
        assert max(vals.values()) == 1
