"""Covers of finite sets and finite metric spaces, and their combinatorics.

Covers are indexed families: two labels may carry the same subset.  Nerves,
intersection posets and Venn diagrams are posets of label sets ordered by
inclusion.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from posetreal.errors import (
    InvalidMetric,
    NotCovered,
    NotStarRefinement,
    ZeroLebesgue,
)
from posetreal.poset import MonotoneMap, inclusion_poset
from posetreal.realization import RPoint
from posetreal.subdivision import Interval, canonical


@dataclass(frozen=True)
class FiniteMetric:
    """Finite metric space with exact rational distances."""

    points: tuple
    d: tuple

    def __init__(self, points, d, check=True):
        points = tuple(points)
        d = tuple(tuple(Fraction(v) for v in row) for row in d)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(points)})
        if check:
            self._validate()

    def _validate(self):
        n = len(self.points)
        if len(self._index) != n:
            raise InvalidMetric("point labels must be unique")
        if len(self.d) != n or any(len(row) != n for row in self.d):
            raise InvalidMetric("distance matrix has the wrong shape")
        d = self.d
        for i in range(n):
            if d[i][i] != 0:
                raise InvalidMetric(f"d({self.points[i]!r}, itself) != 0")
            for j in range(n):
                if d[i][j] != d[j][i]:
                    raise InvalidMetric("distance matrix is not symmetric")
                if i != j and d[i][j] <= 0:
                    raise InvalidMetric("distinct points at distance zero")
                for k in range(n):
                    if d[i][k] > d[i][j] + d[j][k]:
                        raise InvalidMetric("triangle inequality fails")

    @classmethod
    def from_function(cls, points, fn, check=True):
        points = tuple(points)
        return cls(points, [[fn(a, b) for b in points] for a in points], check=check)

    def __call__(self, x, y):
        return self.d[self._index[x]][self._index[y]]

    def __len__(self):
        return len(self.points)

    def ball(self, x, r):
        """Open ball ``{y : d(x, y) < r}``."""
        row = self.d[self._index[x]]
        return frozenset(p for p, v in zip(self.points, row) if v < r)

    def dist_to_set(self, x, S):
        """``d(x, S)``; ``None`` stands for the empty set's infinite distance."""
        row = self.d[self._index[x]]
        vals = [row[self._index[s]] for s in S]
        return min(vals) if vals else None

    def diameter(self):
        return max((v for row in self.d for v in row), default=Fraction(0))


@dataclass(frozen=True)
class Cover:
    """Indexed family ``label ↦ subset`` whose union is the ground set."""

    ground: frozenset
    labels: tuple
    members: tuple

    def __init__(self, ground, sets, check=True):
        items = list(sets.items()) if hasattr(sets, "items") else list(sets)
        object.__setattr__(self, "ground", frozenset(ground))
        object.__setattr__(self, "labels", tuple(k for k, _ in items))
        object.__setattr__(self, "members", tuple(frozenset(v) for _, v in items))
        if check:
            if len(set(self.labels)) != len(self.labels):
                raise ValueError("cover labels must be unique")
            covered = frozenset().union(*self.members) if self.members else frozenset()
            if not covered <= self.ground:
                raise ValueError("cover sets leave the ground set")
            if covered != self.ground:
                raise NotCovered(f"points not covered: {sorted(map(repr, self.ground - covered))}")

    def __getitem__(self, label):
        return self.members[self.labels.index(label)]

    def __len__(self):
        return len(self.labels)

    def items(self):
        return zip(self.labels, self.members)

    def union(self, labels):
        return frozenset().union(*(self[k] for k in labels))

    def intersection(self, labels):
        labels = list(labels)
        if not labels:
            return self.ground
        out = self[labels[0]]
        for k in labels[1:]:
            out = out & self[k]
        return out

    def restrict(self, subset):
        """``C ∩ Y``: the family ``U ∩ Y`` as a cover of ``Y`` (empty traces dropped)."""
        subset = frozenset(subset)
        return Cover(subset, {k: U & subset for k, U in self.items() if U & subset}, check=False)

    def sub(self, labels):
        labels = set(labels)
        return Cover(self.union(labels), {k: U for k, U in self.items() if k in labels}, check=False)


def cover_from_balls(X, radius, centers=None):
    """Cover of ``X`` by the open balls ``B(c, radius)``, labelled by centre."""
    centers = X.points if centers is None else centers
    return Cover(X.points, {c: X.ball(c, radius) for c in centers})


def singleton_cover(ground):
    return Cover(ground, {x: {x} for x in ground})


# ------------------------------------------------------------ nerve and Δ

def delta(C, T):
    """``Δ_C(T)``: labels of the sets containing ``T``."""
    T = frozenset([T]) if not isinstance(T, (set, frozenset)) else frozenset(T)
    if not T:
        raise ValueError("T must be nonempty")
    out = frozenset(k for k, U in C.items() if T <= U)
    if not out:
        raise NotCovered(f"no set of the cover contains {sorted(map(repr, T))}")
    return out


def delta_point(C, x):
    return delta(C, frozenset([x]))


def nerve(C):
    """Label sets with nonempty common intersection, ordered by inclusion.

    Every simplex sits inside some ``Δ_C(x)``, so it is enough to collect their
    faces.
    """
    faces = set()
    for top in {delta_point(C, x) for x in C.ground}:
        items = sorted(top, key=repr)
        for r in range(1, len(items) + 1):
            faces.update(frozenset(c) for c in combinations(items, r))
    return inclusion_poset(sorted(faces, key=lambda s: (len(s), sorted(map(repr, s)))))


def star_of_set(C, A):
    """``st(A, C)``: union of the sets meeting ``A``."""
    A = frozenset(A)
    return frozenset().union(*(U for U in C.members if U & A))


def star_of_point(C, x):
    """``st(x, C)``: union of the sets containing ``x``."""
    return frozenset().union(*(U for U in C.members if x in U))


def star_of_label(C, label):
    return star_of_set(C, C[label])


# ---------------------------------------------------- star refinements

def star_refines(C, D):
    """Each ``st(x, C)`` lies in some element of ``D``."""
    return all(
        any(star_of_point(C, x) <= V for V in D.members) for x in C.ground
    )


def strongly_star_refines(C, D):
    """Each ``st(U, C)`` with ``U ∈ C`` lies in some element of ``D``."""
    return all(any(star_of_set(C, U) <= V for V in D.members) for U in C.members)


def _restricted_star_refines(C, Y, family):
    for x in Y:
        st = star_of_point(C, x) & Y
        if not any(st <= V for V in family):
            return False
    return True


def _label_subsets(D, min_size=0):
    for r in range(min_size, len(D) + 1):
        yield from combinations(D.labels, r)


def hereditarily_star_refines(C, D):
    """For each nonempty ``E ⊆ D``, ``C ∩ ⋃E`` star-refines ``E`` as a cover of ``⋃E``."""
    for E in _label_subsets(D, 1):
        Y = D.union(E)
        if not _restricted_star_refines(C, Y, [D[k] for k in E]):
            return False
    return True


def weakly_hereditarily_star_refines(C, D):
    """For each ``F ⊆ D`` with ``⋂F ⊆ ⋃(D∖F)``, ``C ∩ ⋂F`` star-refines ``(D∖F) ∩ ⋂F``."""
    for F in _label_subsets(D, 0):
        rest = [k for k in D.labels if k not in F]
        Y = D.intersection(F)
        if not Y <= D.union(rest):
            continue
        if not _restricted_star_refines(C, Y, [D[k] & Y for k in rest]):
            return False
    return True


def shrink(C, D):
    """Strict shrinking ``C_D``: ``U_D = X ∖ st(X ∖ U, D)``."""
    if not star_refines(D, C):
        raise NotStarRefinement("shrink needs D to star-refine C")
    X = C.ground
    out = {k: X - star_of_set(D, X - U) for k, U in C.items()}
    return Cover(X, out)


# ------------------------------------------------------------ IP and VD

def ip(C):
    """Intersection poset: simplices ``B`` whose intersection lies in no set outside ``B``."""
    keep = []
    for B in nerve(C).elements:
        meet = C.intersection(B)
        if not any(meet <= U for k, U in C.items() if k not in B):
            keep.append(B)
    return inclusion_poset(keep)


def vd(C):
    """Venn diagram: label sets ``B`` with ``⋂B ⊄ ⋃(C ∖ B)``."""
    keep = []
    for B in nerve(C).elements:
        outside = C.union(k for k in C.labels if k not in B)
        if not C.intersection(B) <= outside:
            keep.append(B)
    return inclusion_poset(keep)


def atom_star_cover(P):
    """Cover of the elements of an atomic poset by the dual cones of its atoms.

    On the open cells of ``|P|`` (one per element) this is also the cover by
    open stars of vertices: the cell of ``p`` meets the open star of the atom
    ``a`` iff ``a ≤ p``.
    """
    P = P.closure()
    return Cover(P.elements, {a: P.dual_cone_of(a) for a in P.minimal()})


# ------------------------------------------------------------ bonding

def bonding(C, D, target=None):
    """Canonical bonding map ``σ ↦ [Δ_D(⋃σ), Δ_D(⋂σ)]`` from ``N(C)`` to ``N(D)#``."""
    if not star_refines(C, D):
        raise NotStarRefinement("bonding map needs C to star-refine D")
    source = nerve(C)
    target = target if target is not None else canonical(nerve(D))
    assign = {
        s: Interval(delta(D, C.union(s)), delta(D, C.intersection(s)))
        for s in source.elements
    }
    return MonotoneMap(source, target, assign)


def image_within(f, P):
    """True iff every image interval of ``f`` has both endpoints in ``P``."""
    inside = set(P.elements)
    return all(f(s).lo in inside and f(s).hi in inside for s in f.source.elements)


# ------------------------------------------------- metric-space covers

def lebesgue(C, X):
    """Largest ``λ`` such that every open ball ``B(x, λ)`` lies in some element of ``C``.

    For each ``x`` the open ball only changes at the distances from ``x``, so
    the answer is one of those distances.  When every ball fits (some element
    is the whole space) the value is capped at the diameter of ``X``, or 1 for
    a one-point space.
    """
    best = None
    for x in X.points:
        row = sorted(set(X.d[X._index[x]]))
        lam_x = None
        for k, r in enumerate(row):
            closed = frozenset(p for p in X.points if X(x, p) <= r)
            if not any(closed <= U for U in C.members):
                lam_x = r
                break
        if lam_x is None:
            continue
        if lam_x == 0:
            raise ZeroLebesgue(f"point {x!r} is not covered")
        best = lam_x if best is None else min(best, lam_x)
    if best is None:
        diam = X.diameter()
        return diam if diam > 0 else Fraction(1)
    return best


def atomic_point(base, values):
    """Point of ``|base|`` from atomic coordinates ``{atom: value}`` with max 1.

    The superlevel sets ``{a : v_a ≥ θ}`` must be elements of ``base``; the
    weight of each one is the gap to the next lower value.
    """
    levels = sorted({v for v in values.values() if v > 0}, reverse=True)
    if not levels or levels[0] != 1:
        raise ValueError("atomic coordinates must reach 1")
    pairs = []
    for i, a in enumerate(levels):
        nxt = levels[i + 1] if i + 1 < len(levels) else Fraction(0)
        pairs.append((frozenset(k for k, v in values.items() if v >= a), a - nxt))
    return RPoint.make(base, pairs)


def atomic_values(x):
    """Atomic coordinates of a point of a nerve: ``v_U = Σ {t_i : U ∈ c_i}``."""
    out = {}
    for c, t in zip(x.chain, x.weights):
        for U in c:
            out[U] = out.get(U, Fraction(0)) + t
    return out


def pou_values(C, X, lam):
    """``x ↦ {U : min(d(x, X∖U)/λ, 1)}`` restricted to the positive values."""
    table = {}
    for x in X.points:
        vals = {}
        for k, U in C.items():
            if x not in U:
                continue
            gap = X.dist_to_set(x, set(X.points) - U)
            vals[k] = Fraction(1) if gap is None else min(gap / lam, Fraction(1))
        table[x] = vals
    return table


def nerve_pou(C, D, X, base=None):
    """Partition-of-unity map ``X → |N(C)|`` controlled by the star-refinement ``D``.

    Returns ``x ↦ RPoint``; the positive atomic coordinates of ``x`` are exactly
    ``Δ_C(x)`` and every label of ``Δ_{C_D}(x)`` has coordinate 1.
    """
    if not star_refines(D, C):
        raise NotStarRefinement("nerve_pou needs D to star-refine C")
    lam = lebesgue(D, X)
    base = base if base is not None else nerve(C)
    return {x: atomic_point(base, v) for x, v in pou_values(C, X, lam).items()}


__all__ = [
    "FiniteMetric",
    "Cover",
    "cover_from_balls",
    "singleton_cover",
    "delta",
    "delta_point",
    "nerve",
    "star_of_set",
    "star_of_point",
    "star_of_label",
    "star_refines",
    "strongly_star_refines",
    "hereditarily_star_refines",
    "weakly_hereditarily_star_refines",
    "shrink",
    "ip",
    "vd",
    "atom_star_cover",
    "bonding",
    "image_within",
    "lebesgue",
    "atomic_point",
    "atomic_values",
    "pou_values",
    "nerve_pou",
]
