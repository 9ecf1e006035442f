"""Experiment suites: each returns a deterministic ``Report`` of exact checks."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as iproduct

from posetreal.approximation import cell_sample, hahn_phi, lcu_pair, nerve_tower, SampledMap
from posetreal.covers import (
    Cover,
    FiniteMetric,
    atom_star_cover,
    bonding,
    cover_from_balls,
    hereditarily_star_refines,
    image_within,
    ip,
    nerve,
    singleton_cover,
    star_refines,
    vd,
    weakly_hereditarily_star_refines,
)
from posetreal.errors import SizeBound
from posetreal.homology import Complex, closure_under_faces, is_essential_cycle, z2_betti, z2_reduced_betti
from posetreal.poset import (
    Poset,
    Preposet,
    Star,
    antichain,
    chain,
    codeleted_prejoin,
    is_atomic,
    is_conditionally_complete,
    is_isomorphism,
    ordinal_sum,
)
from posetreal.randgen import (
    naturally_labelled_posets,
    random_cover,
    random_embedding,
    random_point,
    random_point_on_chain,
    random_poset,
)
from posetreal.realization import (
    RPoint,
    coords,
    d3_upper,
    dist,
    dist_chain_formula,
    h_down,
    h_down_vertex_coords,
    h_up,
    vertex_set_diameter,
)
from posetreal.subdivision import Interval, barycentric, canonical, interval_leq

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    """Outcome of one suite.  ``to_dict()`` is deterministic for a fixed seed."""

    suite: str
    seed: int | None = None
    trials: int | None = None
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def check(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def value(self, name, value, oracle):
        """Record an observed quantity and how it was computed."""
        self.values[name] = {"value": value, "oracle": oracle}

    def to_dict(self, timing=False):
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "ok": self.ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "values": {k: dict(v) for k, v in sorted(self.values.items())},
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _trial_rng(seed, trial):
    return random.Random(f"{seed}:{trial}")


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.wall_time = time.perf_counter() - t0
        return report

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# ------------------------------------------------------------ pigeonhole

def _ordered(P):
    return [P.elements[i] for i in P.topological_order]


def gaps_point(P, gaps):
    """Point of ``|P|`` for a chain ``P`` with weight ``gaps[i]`` on the ``i``-th element."""
    return RPoint.make(P, zip(_ordered(P), gaps))


def dist_to_face(x, i):
    """Distance from a point of ``|[n]|`` to the face where the ``i``-th weight vanishes.

    Returns the distance and a nearest point.  The two end weights sit next to
    a pinned coordinate and cost their full size; an interior weight is closed
    by moving both neighbouring coordinates half way.
    """
    P = x.base
    order = _ordered(P)
    n = len(order)
    w = [x.weight_of(p) for p in order]
    if i in (0, n - 1):
        cost = w[i]
        new = list(w)
        new[i] = ZERO
        if i == 0:
            new[1] += cost
        else:
            new[n - 2] += cost
    else:
        cost = w[i] / 2
        new = list(w)
        new[i] = ZERO
        new[i - 1] += cost
        new[i + 1] += cost
    y = RPoint.make(P, zip(order, new)) if any(new) else None
    return cost, y


def dist_to_proper_faces(x):
    """``d(x, X_n)`` with ``X_n`` the union of the proper faces of ``|[n]|``."""
    n = len(x.base)
    best = None
    for i in range(n):
        cost, y = dist_to_face(x, i)
        if y is not None and dist(x, y) != cost:
            raise AssertionError("face projection disagrees with the coordinate metric")
        best = cost if best is None else min(best, cost)
    return best


def extremal_gaps(n):
    """Gaps ``(a, 2a, ..., 2a, a)`` maximizing the distance to the proper faces."""
    if n == 2:
        return [Fraction(1, 2)] * 2
    a = Fraction(1, 2 * (n - 1))
    return [a] + [2 * a] * (n - 2) + [a]


@_timed
def experiment_pigeonhole(n, samples=200, seed=0):
    """Distance from points of ``|[n]|`` to the union of its proper faces.

    Checks the target bound ``1/(2n)`` at the equal-gap point and on samples,
    and separately the exact supremum ``1/(2(n-1))``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rep = Report(f"pigeonhole-{n}", seed, samples)
    P = chain(n)
    target = Fraction(1, 2 * n)
    exact_sup = Fraction(1, 2 * (n - 1))
    eq = dist_to_proper_faces(gaps_point(P, [Fraction(1, n)] * n))
    rep.value("equal_gap_distance", eq, "min over face projections")
    rep.value("target_bound", target, "1/(2n)")
    rep.value("exact_sup", exact_sup, "1/(2(n-1)), attained at gaps (a, 2a, ..., 2a, a)")
    rep.check("equal_gap_equals_1/(2n)", eq == target, f"equal-gap distance {eq}")
    ext = dist_to_proper_faces(gaps_point(P, extremal_gaps(n)))
    rng = random.Random(seed)
    worst = ext
    for _ in range(samples):
        x = random_point(rng, P, denom=12 * n, chain=_ordered(P))
        worst = max(worst, dist_to_proper_faces(x))
    rep.value("worst_sampled", worst, "max over the extremal point and random samples")
    rep.check("samples_within_1/(2n)", worst <= target, f"worst sampled distance {worst}")
    rep.check("extremal_attains_sup", ext == exact_sup, f"extremal point distance {ext}")
    rep.check("samples_within_sup", worst <= exact_sup, f"worst {worst} vs {exact_sup}")
    vert = all(dist_to_proper_faces(RPoint.vertex(P, p)) == 0 for p in P.elements) if n > 1 else True
    rep.check("vertices_at_zero", vert)
    return rep


# ---------------------------------------------------- co-deleted tower

def circle_preposet():
    """``0 ∈ {0,1}, {0,2} ∈ {{0,1},{0,2}}``: four elements, realization a circle."""
    return Preposet(["0", "01", "02", "X"], [("0", "01"), ("0", "02"), ("01", "X"), ("02", "X")])


def codeleted_tower(n):
    """``[K_0, K_1, ..., K_n]`` with ``K_{i+1} = K_i ⊞ K_i*`` (copies tagged with stage ``i``)."""
    out = [circle_preposet()]
    for i in range(n):
        out.append(codeleted_prejoin(out[-1], stage=i))
    return out


def _j(p, stage):
    return Interval(p, Star(p, stage))


def _twisted(level, e):
    """Image of ``e ∈ K_level^{#level}`` under the subdivided ``p ↦ [p, p*]``.

    That map reverses order, so its first subdivision swaps endpoints and is
    order preserving; deeper levels act on both endpoints.
    """
    stage = level

    def go(k, e):
        if k == 0:
            return _j(e, stage)
        if k == 1:
            return Interval(_j(e.hi, stage), _j(e.lo, stage))
        return Interval(go(k - 1, e.lo), go(k - 1, e.hi))

    return go(level, e)


def codeleted_map(n, p):
    """``f_n(p) ∈ K_n^{#n}``: order reversing for ``n ≥ 1``."""
    e = p
    for level in range(n):
        e = _twisted(level, e)
    return e


@_timed
def experiment_codeleted(n=1):
    """Small essential loops: the circle ``K_0`` inside ``|K_n|`` with diameter ``≤ 2^{-n}``."""
    if not 1 <= n <= 2:
        raise SizeBound("co-deleted tower is run for n = 1 and n = 2")
    rep = Report(f"codeleted-{n}")
    Ks = codeleted_tower(n)
    K0, Kn = Ks[0].closure(), Ks[-1]
    leq = Kn.closure().leq
    images = {p: codeleted_map(n, p) for p in K0.elements}
    ok = all(
        interval_leq(n, images[q], images[p], leq) == K0.leq(p, q)
        for p in K0.elements for q in K0.elements
    )
    rep.check("order_reversing_embedding", ok)
    j_ok = True
    for i, (K, K1) in enumerate(zip(Ks, Ks[1:])):
        Kc, K1c = K.closure(), K1.closure()
        for p in K.elements:
            j_ok &= K1c.leq(p, Star(p, i))
            for q in K.elements:
                j_ok &= Kc.leq(p, q) == interval_leq(1, _j(q, i), _j(p, i), K1c.leq)
    rep.check("j_reflects_order", j_ok)
    verts = [h_down_vertex_coords(images[p], n, Kn) for p in K0.elements]
    diam = vertex_set_diameter(verts)
    bound = Fraction(1, 2 ** n)
    rep.value("image_diameter", diam, "max l-infinity distance among images of the four vertices")
    rep.check("diameter_bound", diam <= bound, f"{diam} <= {bound}")
    if n == 1:
        B = barycentric(Kn)
        K = Complex.of(B)
        cycle = []
        for u, v in Ks[0].edges:
            mid = frozenset({u, v, Star(u), Star(v)})
            cycle.append(frozenset({frozenset({u, Star(u)}), mid}))
            cycle.append(frozenset({frozenset({v, Star(v)}), mid}))
        ess = is_essential_cycle(K, 1, cycle)
        rep.check("essential_1_cycle", ess, f"{len(cycle)}-edge cycle in the order complex of the barycentric subdivision")
        b = z2_betti(K)
        rep.value("betti", b, "boundary-matrix ranks over Z/2")
        rep.check("circle_homology", b[:2] == [1, 1] and all(v == 0 for v in b[2:]))
    return rep


# ------------------------------------------------------ sphere vs nerve

def levels_poset(k, width=2):
    """Ordinal sum of ``k`` antichains of size ``width``; labels ``(level, i)``."""
    P = antichain(width, [(1, i) for i in range(width)])
    for lvl in range(2, k + 1):
        P = ordinal_sum(P, antichain(width, [(lvl, i) for i in range(width)]))
    return P


def _seq_leq(P, seq):
    return all(P.leq(a, b) for a, b in zip(seq, seq[1:]))


def sequence_atoms(P, n):
    """Atoms of ``P^{#n}`` as non-decreasing sequences ``(a_2, a_4, ..., a_{2^n})``."""
    return [s for s in iproduct(P.elements, repeat=2 ** (n - 1)) if _seq_leq(P, s)]


def sequence_nerve(P, n):
    """Maximal simplices of the nerve of the atom-star cover of ``P^{#n}``, by sequences.

    A set of atoms spans a simplex iff all lie below one coatom
    ``(s_1 ≤ s_3 ≤ ... ≤ s_{2^n+1})`` with ``s_1`` minimal and ``s_last`` maximal.
    """
    A = sequence_atoms(P, n)
    mins, maxs = set(P.minimal()), set(P.maximal())
    k = 2 ** (n - 1)
    cones = set()
    for s in iproduct(P.elements, repeat=k + 1):
        if s[0] not in mins or s[-1] not in maxs or not _seq_leq(P, s):
            continue
        cone = frozenset(
            a for a in A
            if all(P.leq(s[i], a[i]) and P.leq(a[i], s[i + 1]) for i in range(k))
        )
        cones.add(cone)
    return A, _maximal_sets(cones)


def _maximal_sets(sets):
    sets = sorted(set(sets), key=len, reverse=True)
    out = []
    for s in sets:
        if not any(s <= t for t in out):
            out.append(s)
    return out


def flatten_interval(e, n):
    """The non-decreasing sequence of an element of ``K^{#n}`` for ``n ≤ 2``."""
    if n == 1:
        return (e.lo, e.hi)
    if n == 2:
        u, v = e.lo, e.hi
        return (v.lo, u.lo, u.hi, v.hi)
    raise ValueError("only n <= 2 is supported")


def _retraction_steps(P, n, A):
    """Vertex sets ``V_0 ⊇ V_1 ⊇ ... ⊇ V_{2^n}`` and the vertex maps between them."""
    k = 2 ** (n - 1)
    level = {p: p[0] for p in P.elements}

    def first_at(lvl):
        return min(p for p in P.elements if level[p] == lvl)

    def in_L(a, j):
        return all(level[a[i - 1]] <= 2 * i for i in range(1, j + 1))

    def in_R(a, j):
        return all(level[a[i - 1]] >= 2 * i for i in range(k + 1 - j, k + 1))

    steps = []
    V = [frozenset(A)]
    for j in range(1, k + 1):
        Vj = frozenset(a for a in A if in_L(a, j))

        def r(a, j=j, Vj=Vj):
            if a in Vj:
                return a
            b = list(a)
            b[j - 1] = first_at(2 * j)
            return tuple(b)

        steps.append((V[-1], Vj, r))
        V.append(Vj)
    Lk = V[-1]
    for j in range(1, k + 1):
        Vj = frozenset(a for a in Lk if in_R(a, j))
        idx = k + 1 - j

        def r(a, idx=idx, Vj=Vj):
            if a in Vj:
                return a
            b = list(a)
            b[idx - 1] = first_at(2 * idx)
            return tuple(b)

        steps.append((V[-1], Vj, r))
        V.append(Vj)
    return steps


def check_retractions(A, maximal, steps):
    """Each step is a simplicial retraction ``N_{i-1} → N_i`` with ``S ∪ r(S)`` a simplex."""
    results = []
    for Vprev, Vnext, r in steps:
        faces_prev = _maximal_sets(M & Vprev for M in maximal)
        ok = all(r(a) in Vnext for a in Vprev) and all(r(a) == a for a in Vnext)
        for S in faces_prev:
            union = S | frozenset(r(a) for a in S)
            if not any(union <= M for M in faces_prev):
                ok = False
                break
        results.append(ok)
    final = _maximal_sets(M & steps[-1][1] for M in maximal)
    return results, len(final) == 1 and final[0] == steps[-1][1]


@_timed
def experiment_sphere_nerve(n=1):
    """A sphere whose star-cover nerve is contractible."""
    rep = Report(f"sphere-nerve-{n}")
    P = levels_poset(2 ** n + 1)
    A, maximal = sequence_nerve(P, n)
    steps = _retraction_steps(P, n, A)
    results, full = check_retractions(A, maximal, steps)
    rep.value("atoms", len(A), "non-decreasing sequences")
    rep.value("maximal_simplices", len(maximal), "cones of coatoms")
    for i, ok in enumerate(results, 1):
        rep.check(f"R_{i}_retraction", ok)
    rep.check("final_full_simplex", full)
    if n == 1:
        Q = canonical(P)
        C = atom_star_cover(Q)
        ident = {a: (a.lo,) for a in C.labels}
        N = nerve(C)
        direct = {frozenset(ident[u] for u in s) for s in N.elements}
        model = closure_under_faces(maximal)
        rep.check("sequence_model_matches", direct == model, f"{len(direct)} nerve simplices")
        V = vd(C)
        fwd = {q: frozenset(a for a in C.labels if Q.leq(a, q)) for q in Q.elements}
        rep.check("vd_isomorphic_to_subdivision", is_isomorphism(Q, V, fwd))
        nerve_b = z2_reduced_betti(Complex(N.elements))
        vd_b = z2_betti(V)
        sphere_b = z2_betti(P)
        rep.value("nerve_reduced_betti", nerve_b, "boundary-matrix ranks over Z/2")
        rep.value("vd_betti", vd_b, "order complex of the Venn diagram")
        rep.value("sphere_betti", sphere_b, "order complex of the level poset")
        rep.check("nerve_acyclic", all(b == 0 for b in nerve_b))
        rep.check("vd_two_sphere", vd_b == [1, 0, 1])
        rep.check("level_poset_two_sphere", sphere_b == [1, 0, 1])
    elif n == 2:
        Q = canonical(canonical(P))
        ats = [q for q in Q.minimal()]
        ident = {a: tuple(flatten_interval(a, 2)[1::2]) for a in ats}
        direct = _maximal_sets(
            frozenset(ident[a] for a in ats if Q.leq(a, q)) for q in Q.maximal()
        )
        rep.check("sequence_model_matches", sorted(map(sorted, direct)) == sorted(map(sorted, maximal)))
    return rep


# ----------------------------------------------------------- fuzz suites

@_timed
def experiment_isometry_fuzz(trials=1000, seed=0, max_size=8):
    """Distance through a random order embedding equals the standard distance."""
    rep = Report("isometry", seed, trials)
    bad = 0
    for t in range(trials):
        rng = _trial_rng(seed, t)
        P = random_poset(rng, rng.randint(1, max_size))
        j = random_embedding(rng, P)
        x, y = random_point(rng, P), random_point(rng, P)
        if dist(x, y, j) != dist(x, y):
            bad += 1
    rep.value("violations", bad, "coordinate metric through j vs standard")
    rep.check("isometry", bad == 0, f"{bad} violations")
    return rep


@_timed
def experiment_chain_formula(trials=500, seed=0, max_size=8):
    rep = Report("chain-formula", seed, trials)
    bad = 0
    for t in range(trials):
        rng = _trial_rng(seed, t)
        P = random_poset(rng, rng.randint(1, max_size))
        x, y = random_point(rng, P), random_point(rng, P)
        if dist_chain_formula(x, y)[0] != dist(x, y):
            bad += 1
    rep.value("violations", bad, "chain-pair formula vs coordinate metric")
    rep.check("chain_formula", bad == 0, f"{bad} violations")
    return rep


@_timed
def experiment_metric_bounds(trials=500, seed=0, max_size=8):
    """``d ≤ d₃ ≤ 9d`` with the worst observed ratio."""
    rep = Report("metric-bounds", seed, trials)
    bad, worst = 0, ZERO
    for t in range(trials):
        rng = _trial_rng(seed, t)
        P = random_poset(rng, rng.randint(1, max_size))
        x, y = random_point(rng, P), random_point(rng, P)
        d = dist(x, y)
        d3 = d3_upper(x, y)[0]
        if not d <= d3 <= 9 * d:
            bad += 1
        if d > 0:
            worst = max(worst, d3 / d)
    rep.value("worst_ratio", worst, "max of d3_upper/dist over trials")
    rep.check("sandwich", bad == 0, f"{bad} violations, worst ratio {worst}")
    return rep


@_timed
def experiment_factor2(trials=500, seed=0, max_size=7):
    """``d(x,y) = 2 d(h x, h y)`` on same-chain pairs of ``|P#|``; ``h⁻¹ h = id``."""
    rep = Report("factor2", seed, trials)
    bad_law = bad_inv = 0
    for t in range(trials):
        rng = _trial_rng(seed, t)
        P = random_poset(rng, rng.randint(1, max_size))
        S = canonical(P)
        chains = S.maximal_chains()
        ch = chains[rng.randrange(len(chains))]
        x = random_point_on_chain(rng, S, ch, denom=24)
        y = random_point_on_chain(rng, S, ch, denom=24)
        hx, hy = h_down(x, P), h_down(y, P)
        if dist(x, y) != 2 * dist(hx, hy):
            bad_law += 1
        if h_up(hx, S) != x or h_up(hy, S) != y or h_down(h_up(hx, S), P) != hx:
            bad_inv += 1
    rep.check("factor_two_law", bad_law == 0, f"{bad_law} violations")
    rep.check("h_inverse", bad_inv == 0, f"{bad_inv} violations")
    return rep


@_timed
def experiment_ipvd(max_size=6):
    """For the dual-cone-of-atoms cover: ``IP = VD`` iff conditionally complete."""
    rep = Report("ipvd", trials=None)
    total = ccp = bad = bad_iso = 0
    for n in range(1, max_size + 1):
        for P in naturally_labelled_posets(n):
            if not is_atomic(P):
                continue
            total += 1
            C = atom_star_cover(P)
            V = vd(C)
            equal = set(ip(C).elements) == set(V.elements)
            c = is_conditionally_complete(P)
            ccp += c
            bad += equal != c
            fwd = {p: frozenset(a for a in C.labels if P.leq(a, p)) for p in P.elements}
            bad_iso += not is_isomorphism(P, V, fwd)
    rep.value("atomic_posets", total, "naturally labelled posets, all sizes up to the cap")
    rep.value("conditionally_complete", ccp, "pairwise join scan")
    rep.check("ip_equals_vd_iff_ccp", bad == 0, f"{bad} mismatches over {total}")
    rep.check("vd_isomorphic", bad_iso == 0, f"{bad_iso} failures")
    return rep


@_timed
def experiment_bonding(trials=200, seed=0, max_ground=8):
    """Bonding maps of random star-refining pairs: monotone, into ``IP#``, into ``VD#`` when hereditary."""
    rep = Report("bonding", seed, trials)
    found = hered = weak = bad_ip = bad_vd = bad_weak = attempts = 0
    while found < trials:
        rng = _trial_rng(seed, attempts)
        attempts += 1
        g = list(range(rng.randint(1, max_ground)))
        D = Cover(g, random_cover(rng, g, rng.randint(1, 4), 0.6))
        C = Cover(g, random_cover(rng, g, rng.randint(1, 6), 0.3))
        if not star_refines(C, D):
            continue
        found += 1
        f = bonding(C, D)
        bad_ip += not image_within(f, ip(D))
        if hereditarily_star_refines(C, D):
            hered += 1
            bad_vd += not image_within(f, vd(D))
        if weakly_hereditarily_star_refines(C, D):
            weak += 1
            bad_weak += not image_within(f, vd(D))
    rep.value("attempts", attempts, "random cover pairs drawn")
    rep.value("hereditary_pairs", hered, "exhaustive subfamily scan")
    rep.value("weakly_hereditary_pairs", weak, "exhaustive subfamily scan")
    rep.check("monotone_into_ip", bad_ip == 0, f"{bad_ip} failures")
    rep.check("hereditary_into_vd", bad_vd == 0, f"{bad_vd} failures over {hered}")
    rep.check("weakly_hereditary_into_vd", bad_weak == 0, f"{bad_weak} failures over {weak}")
    return rep


def near_point(rng, x, denom=48):
    """A point close to ``x``: some weight moved onto an element compatible with part of its chain."""
    P = x.base.closure()
    keep = [c for c in x.chain if rng.random() < 0.7] or [x.chain[0]]
    cands = [p for p in P.elements if all(P.comparable(p, c) for c in keep)]
    p = rng.choice(cands)
    eps = Fraction(rng.randint(1, 4), denom)
    kept = [(c, w) for c, w in zip(x.chain, x.weights) if c in keep]
    total = sum(w for _, w in kept)
    return RPoint.make(x.base, [(c, w / total * (1 - eps)) for c, w in kept] + [(p, eps)])


@_timed
def experiment_lcu(trials=200, seed=0, max_size=7):
    """Staircase replacements: ``3δ``-close, in common chain hulls, independent of witness chains, 4-Lipschitz."""
    from posetreal.realization import same_chain_hull

    rep = Report("lcu", seed, trials)
    far = hull = enlarge = lip = 0
    done = attempts = 0
    while done < trials:
        rng = _trial_rng(seed, attempts)
        attempts += 1
        P = random_poset(rng, rng.randint(2, max_size))
        d = Fraction(1, 4 * rng.randint(1, 3))
        x = random_point(rng, P, denom=48)
        y = near_point(rng, x)
        if dist(x, y) >= d:
            continue
        done += 1
        xp, yp = lcu_pair(x, y, d)
        far += not (dist(x, xp) <= 3 * d and dist(y, yp) <= 3 * d)
        hull += not (same_chain_hull(x, xp) and same_chain_hull(xp, yp) and same_chain_hull(yp, y))
        A = _enlarge(rng, P, x.chain)
        B = _enlarge(rng, P, y.chain)
        enlarge += lcu_pair(x, y, d, A, B) != (xp, yp)
        eta_cap = min(Fraction(1, 4) * d, d / 2)
        xt = _perturb_on_chain(rng, x, eta_cap)
        if dist(xt, y) < d:
            xtp, _ = lcu_pair(xt, y, d)
            lip += dist(xp, xtp) > 4 * dist(x, xt)
    rep.value("attempts", attempts, "random pairs drawn")
    rep.check("within_3_delta", far == 0, f"{far} failures")
    rep.check("chain_hulls", hull == 0, f"{hull} failures")
    rep.check("chain_enlargement_invariance", enlarge == 0, f"{enlarge} failures")
    rep.check("modulus_4_eta", lip == 0, f"{lip} failures")
    return rep


def _enlarge(rng, P, chain_):
    C = P.closure()
    chain_ = list(chain_)
    for p in rng.sample(list(C.elements), len(C.elements)):
        if p not in chain_ and all(C.comparable(p, c) for c in chain_):
            chain_.append(p)
    return list(C.sort_chain(chain_))


def _perturb_on_chain(rng, x, cap):
    """Move at most ``cap`` of weight between two elements of ``x``'s chain."""
    if len(x.chain) < 2:
        return x
    i, j = rng.sample(range(len(x.chain)), 2)
    amount = min(x.weights[i], cap) * Fraction(rng.randint(0, 4), 4)
    w = list(x.weights)
    w[i] -= amount
    w[j] += amount
    return RPoint.make(x.base, zip(x.chain, w))


# ------------------------------------------------------------ Hahn and tower

def hahn_fixture():
    """Chain target, four sample points spaced ``1/16`` apart, a jumpy but close table."""
    Q = chain(2)
    X = FiniteMetric.from_function(range(4), lambda i, j: Fraction(abs(i - j), 16))
    ts = [ZERO, Fraction(3, 16), Fraction(1, 16), Fraction(1, 8)]
    vals = {i: RPoint.make(Q, [("a", 1 - t), ("b", t)]) for i, t in enumerate(ts)}
    return SampledMap(X, vals, Fraction(1, 2), Fraction(1, 4)), Q, 1


def random_hahn_instance(rng, n=1):
    """A conditionally complete target and a sampled map whose values are pairwise close."""
    targets = [
        chain(2),
        chain(3),
        Poset(["x", "y", "z"], [("x", "z"), ("y", "z")]),
        Poset(["z", "x", "y"], [("z", "x"), ("z", "y")]),
    ]
    Q = targets[rng.randrange(len(targets))]
    delta = Fraction(1, 2 ** (n + 1))
    k = rng.randint(2, 6)
    X = FiniteMetric.from_function(range(k), lambda i, j: Fraction(abs(i - j), k))
    base = random_point(rng, Q, denom=24)
    vals = {}
    for i in range(k):
        for _ in range(20):
            y = near_point(rng, base, denom=96)
            if d3_upper(base, y)[0] < delta / 2:
                break
        else:
            y = base
        vals[i] = y
    return SampledMap(X, vals, Fraction(1, 2), delta), Q, n


@_timed
def experiment_hahn(trials=20, seed=0):
    rep = Report("hahn", seed, trials)
    f, Q, n = hahn_fixture()
    res = hahn_phi(f, Q, n)
    rep.value("fixture_phi", {str(k): _point_str(v) for k, v in res.phi.items()}, "step-by-step pipeline")
    rep.check("fixture_certificates", res.ok)
    bad = 0
    for t in range(trials):
        rng = _trial_rng(seed, t)
        f, Q, n = random_hahn_instance(rng, n=1 + t % 2)
        bad += not hahn_phi(f, Q, n).ok
    rep.check("random_certificates", bad == 0, f"{bad} failures")
    return rep


def _point_str(x):
    return ", ".join(f"{c!r}:{w}" for c, w in zip(x.chain, x.weights))


def circle_fixture():
    X = FiniteMetric.from_function(
        range(8), lambda i, j: Fraction(min(abs(i - j), 8 - abs(i - j)), 4)
    )
    covers = [cover_from_balls(X, ONE), cover_from_balls(X, Fraction(1, 2)), cover_from_balls(X, Fraction(1, 4))]
    covers += [singleton_cover(X.points), singleton_cover(X.points)]
    return X, covers


@_timed
def experiment_tower(X=None, covers=None):
    """Contraction of simplex images down the nerve tower and separation of points."""
    if X is None:
        X, covers = circle_fixture()
    rep = Report("tower")
    T = nerve_tower(X, covers)
    depth = T.depth
    table = {}
    ok = True
    for i in range(depth + 1):
        for n in range(depth - i + 1):
            w = max(T.image_diameter(i, n, x) for x in X.points)
            table[f"{i},{n}"] = w
            ok &= w <= Fraction(2) ** (1 - n)
    rep.value("diameters", table, "max over points of vertex-image diameters")
    rep.check("contraction", ok)
    rep.check(
        "simplices_map_inside",
        all(T.maps_simplex_into(i, x) for i in range(depth) for x in X.points),
    )
    sep = True
    for x, y in combinations(X.points, 2):
        lvl = T.predicted_level(x, y)
        if lvl is None:
            continue
        actual = T.resolving_level(x, y)
        sx, sy = T.simplex(lvl, x), T.simplex(lvl, y)
        lx, ly = T.lam(lvl, x), T.lam(lvl, y)
        inside = all(c <= sx for c in lx.chain) and all(c <= sy for c in ly.chain)
        sep &= actual is not None and actual <= lvl and not (sx & sy) and inside
    rep.check("separation", sep)
    return rep


EXPERIMENTS = {
    "pigeonhole": experiment_pigeonhole,
    "codeleted": experiment_codeleted,
    "sphere-nerve": experiment_sphere_nerve,
    "tower": experiment_tower,
}

SUITES = {
    "isometry": experiment_isometry_fuzz,
    "chain-formula": experiment_chain_formula,
    "metric-bounds": experiment_metric_bounds,
    "factor2": experiment_factor2,
    "ipvd": experiment_ipvd,
    "bonding": experiment_bonding,
    "lcu": experiment_lcu,
    "hahn": experiment_hahn,
}
