"""Acceptance checks: exact values, randomized suites and wall-clock limits.

Each test records one ``PASS``/``FAIL`` line, printed in the terminal summary,
and then asserts the same condition.
"""
import time
from fractions import Fraction as F

from conftest import ACCEPTANCE
from posetreal import experiments as ex
from posetreal.poset import inclusion_poset
from posetreal.realization import RPoint, dist

fs = frozenset


def verdict(number, ok, detail, elapsed, limit):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    ACCEPTANCE.append(f"{status} criterion {number}: {detail} ({elapsed:.2f}s, limit {limit}s)")
    assert within, f"criterion {number} took {elapsed:.2f}s"
    assert ok, f"criterion {number}: {detail}"


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def failing(rep):
    return ", ".join(f"{c.name} ({c.detail})" if c.detail else c.name for c in rep.checks if not c.passed)


def summary(rep):
    return failing(rep) or ", ".join(c.name for c in rep.checks)


# ------------------------------------------------------------------ 1

def worked_examples():
    P = inclusion_poset([fs(), fs("a"), fs("ab"), fs("abc"), fs("c")])
    x = RPoint.make(P, [(fs(), F(1, 4)), (fs("a"), F(1, 4)), (fs("ab"), F(1, 4)), (fs("abc"), F(1, 4))])
    y = RPoint.make(P, [(fs(), F(1, 4)), (fs("c"), F(1, 4)), (fs("abc"), F(1, 2))])
    j = {s: s for s in P.elements}
    j[fs("c")] = fs("b")
    first = (dist(x, y), dist(x, y, j))

    Q = inclusion_poset([fs(), fs("a"), fs("b")])
    u = RPoint.make(Q, [(fs(), F(1, 2)), (fs("a"), F(1, 2))])
    v = RPoint.vertex(Q, fs("b"))
    k = {s: s for s in Q.elements}
    k[fs("a")] = fs("ab")
    second = (dist(u, v), dist(u, v, k))
    return first, second


def test_criterion_01_worked_examples():
    (first, second), t = timed(worked_examples)
    ok = first == (F(1, 2), F(1, 4)) and second == (F(1), F(1, 2))
    verdict(1, ok, f"first example {first[0]}, {first[1]}; second example {second[0]}, {second[1]}", t, 1)


# -------------------------------------------------------------- 2-5

def test_criterion_02_isometry_fuzz():
    rep, t = timed(ex.experiment_isometry_fuzz, trials=1000, seed=0, max_size=8)
    verdict(2, rep.ok, f"1000 instances, {rep.values['violations']['value']} violations", t, 30)


def test_criterion_03_chain_formula():
    rep, t = timed(ex.experiment_chain_formula, trials=500, seed=0, max_size=8)
    verdict(3, rep.ok, f"500 pairs, {rep.values['violations']['value']} mismatches", t, 10)


def test_criterion_04_metric_sandwich():
    rep, t = timed(ex.experiment_metric_bounds, trials=500, seed=0, max_size=8)
    worst = rep.values["worst_ratio"]["value"]
    verdict(4, rep.ok, f"500 pairs, worst d3/d ratio {worst}", t, 60)


def test_criterion_05_factor_two():
    rep, t = timed(ex.experiment_factor2, trials=500, seed=0, max_size=7)
    verdict(5, rep.ok, f"500 same-chain pairs: {summary(rep)}", t, 30)


# ------------------------------------------------------------------ 6

def test_criterion_06_pigeonhole():
    t0 = time.perf_counter()
    reps = [ex.experiment_pigeonhole(n, samples=200, seed=0) for n in range(2, 9)]
    t = time.perf_counter() - t0
    parts = []
    for n, rep in zip(range(2, 9), reps):
        eq = rep.values["equal_gap_distance"]["value"]
        worst = rep.values["worst_sampled"]["value"]
        parts.append(f"n={n}: equal-gap {eq}, worst {worst} vs 1/(2n)={F(1, 2 * n)}")
    target_met = all(
        c.passed for rep in reps for c in rep.checks
        if c.name in ("equal_gap_equals_1/(2n)", "samples_within_1/(2n)")
    )
    verdict(6, target_met, "; ".join(parts), t, 10)


# ------------------------------------------------------------- 7-8

def test_criterion_07_codeleted():
    rep, t = timed(ex.experiment_codeleted, 1)
    diam = rep.values["image_diameter"]["value"]
    verdict(7, rep.ok, f"image diameter {diam} <= 1/2, {summary(rep)}", t, 30)


def test_criterion_08_sphere_nerve():
    rep, t = timed(ex.experiment_sphere_nerve, 1)
    nb = rep.values["nerve_reduced_betti"]["value"]
    vb = rep.values["vd_betti"]["value"]
    retractions = [c.passed for c in rep.checks if c.name.startswith("R_")]
    ok = rep.ok and all(b == 0 for b in nb) and len(vb) > 2 and vb[2] == 1 and retractions and all(retractions)
    verdict(8, ok, f"nerve reduced betti {nb}, vd betti {vb}, {len(retractions)} retractions", t, 60)


# ------------------------------------------------------------ 9-13

def test_criterion_09_ip_vd():
    rep, t = timed(ex.experiment_ipvd, max_size=6)
    n = rep.values["atomic_posets"]["value"]
    c = rep.values["conditionally_complete"]["value"]
    verdict(9, rep.ok, f"{n} atomic posets, {c} conditionally complete, {summary(rep)}", t, 60)


def test_criterion_10_bonding():
    rep, t = timed(ex.experiment_bonding, trials=200, seed=0, max_ground=8)
    h = rep.values["hereditary_pairs"]["value"]
    ok = all(c.passed for c in rep.checks if c.name in ("monotone_into_ip", "hereditary_into_vd"))
    verdict(10, ok and h > 0, f"200 pairs, {h} hereditary: {summary(rep)}", t, 30)


def test_criterion_11_hahn():
    rep, t = timed(ex.experiment_hahn, trials=20, seed=0)
    verdict(11, rep.ok, f"fixture and 20 random instances: {summary(rep)}", t, 30)


def test_criterion_12_lcu():
    rep, t = timed(ex.experiment_lcu, trials=200, seed=0)
    verdict(12, rep.ok, f"200 trials: {summary(rep)}", t, 30)


def test_criterion_13_nerve_tower():
    rep, t = timed(ex.experiment_tower)
    diams = rep.values["diameters"]["value"]
    top = {k: str(v) for k, v in diams.items() if k.startswith("0,")}
    verdict(13, rep.ok, f"level-0 diameters by depth {top}: {summary(rep)}", t, 30)
