"""Certified approximation of sampled maps through nerves and subdivisions.

Everything runs on finite samples.  Each routine returns exact certificates
(containments, chain memberships, rational bounds) next to its output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from posetreal.covers import (
    Cover,
    FiniteMetric,
    bonding,
    cover_from_balls,
    delta,
    delta_point,
    lebesgue,
    nerve,
    pou_values,
    star_refines,
)
from posetreal.errors import DeltaNotGrid, NotStarRefinement, PreconditionFailed, TooFar
from posetreal.poset import MonotoneMap, atoms, is_conditionally_complete
from posetreal.realization import (
    RPoint,
    _hatted,
    coords,
    d3_upper,
    dist,
    h_down,
    h_down_vertex_coords,
    h_up,
    map_point,
    vertex_set_diameter,
)
from posetreal.subdivision import Interval, canonical, iterate_canonical

ZERO = Fraction(0)
ONE = Fraction(1)


def _pow2(k):
    return Fraction(2) ** k


def subdivision_tower(P, n, max_size=200_000):
    """``[P, P#, ..., P^{#n}]``."""
    out = [P.closure()]
    for _ in range(n):
        out.append(iterate_canonical(out[-1], 1, max_size=max_size))
    return out


def lift(x, tower):
    """``h^{-k}``: carry a point of ``|tower[0]|`` up to ``|tower[k]|``."""
    for base in tower[1:]:
        x = h_up(x, base)
    return x


def push(x, tower):
    """``h^k``: carry a point of ``|tower[-1]|`` down to ``|tower[0]|``."""
    for base in reversed(tower[:-1]):
        x = h_down(x, base)
    return x


def atom_sets(P):
    """``q ↦ {atoms below q}`` for an atomic poset, and its inverse."""
    P = P.closure()
    A = set(atoms(P))
    fwd = {q: frozenset(a for a in P.cone_of(q) if a in A) for q in P.elements}
    inv = {v: q for q, v in fwd.items()}
    return fwd, inv


@dataclass
class SampledMap:
    """A map from a finite metric sample into ``|Q|`` with continuity moduli."""

    domain: FiniteMetric
    values: dict
    gamma: Fraction
    delta: Fraction

    def __post_init__(self):
        self.gamma = Fraction(self.gamma)
        self.delta = Fraction(self.delta)
        missing = set(self.domain.points) - set(self.values)
        if missing:
            raise ValueError(f"no value for {sorted(map(repr, missing))}")

    def __call__(self, x):
        return self.values[x]

    def continuity_violations(self):
        """Pairs with ``d(x,y) < γ`` whose images are not certified ``δ``-close.

        Closeness is certified by the three-step path bound, which dominates
        the path metric on ``|Q|``.
        """
        bad = []
        pts = self.domain.points
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                if self.domain(x, y) < self.gamma:
                    bound = d3_upper(self.values[x], self.values[y])[0]
                    if bound >= self.delta:
                        bad.append((x, y, bound))
        return bad


# ------------------------------------------------------------- Hahn's Φ

@dataclass(frozen=True)
class HahnCertificate:
    point: object
    carrier: object
    top_before_push: object
    contained: bool
    cone_diameter: Fraction
    distance: Fraction
    bound: Fraction

    @property
    def ok(self):
        return self.contained and self.cone_diameter <= self.bound and self.distance <= self.bound


@dataclass
class HahnResult:
    phi: dict
    certificates: dict
    n: int
    nerve_points: dict = field(repr=False, default=None)
    bonded: dict = field(repr=False, default=None)

    @property
    def ok(self):
        return all(c.ok for c in self.certificates.values())


def _pullback_star_cover(f, tower):
    """Carriers ``q_x`` in ``Q^{#n}`` and the cover ``D_w = {x : w ≤ q_x}``."""
    Qn = tower[-1]
    carrier = {x: lift(f(x), tower).top for x in f.domain.points}
    D = {w: frozenset(x for x in f.domain.points if Qn.leq(w, carrier[x])) for w in atoms(Qn)}
    return carrier, Cover(f.domain.points, D)


def _bond_chain(E, D, inv, chain_pairs):
    """Image of a nerve point under the bonding map, relabelled into ``Q^{#n}``."""
    out = []
    for sigma, t in chain_pairs:
        lo = delta(D, E.union(sigma))
        hi = delta(D, E.intersection(sigma))
        if lo not in inv or hi not in inv:
            raise PreconditionFailed("bonding image leaves the intersection poset of the star cover")
        out.append((Interval(inv[lo], inv[hi]), t))
    return out


def _certify(x, fx, image, carrier, Q, tower):
    n = len(tower) - 1
    Qn = tower[-1]
    top = image.top
    below = Qn.leq(top, carrier)
    verts = [h_down_vertex_coords(p, n, Q) for p in Qn.cone_of(carrier)]
    phi = push(image, tower)
    return phi, HahnCertificate(
        point=x,
        carrier=carrier,
        top_before_push=top,
        contained=below,
        cone_diameter=vertex_set_diameter(verts),
        distance=dist(phi, fx),
        bound=_pow2(1 - n),
    )


def hahn_phi(f, Q, n, max_size=200_000):
    """Continuous replacement ``Φ`` of a sampled ``(γ,δ)``-continuous map into ``|Q|``.

    Pipeline: partition of unity into the nerve of the ``γ/4``-ball cover,
    canonical bonding map into the star cover pulled back from ``|Q^{#n}|``,
    then ``h`` down to ``|Q|``.
    """
    if n < 1:
        raise PreconditionFailed("n must be at least 1 so that the subdivision is atomic")
    Q = Q.closure()
    if not is_conditionally_complete(Q):
        raise PreconditionFailed("target poset is not conditionally complete")
    if f.delta > _pow2(-n - 1):
        raise PreconditionFailed(
            f"delta {f.delta} exceeds the Lebesgue number 2^-{n + 1} of the star cover"
        )
    bad = f.continuity_violations()
    if bad:
        raise PreconditionFailed(f"map is not certified (gamma, delta)-continuous at {bad[0][:2]!r}")
    tower = subdivision_tower(Q, n, max_size)
    top_base = canonical(tower[-1])
    carrier, D = _pullback_star_cover(f, tower)
    X = f.domain
    E = cover_from_balls(X, f.gamma / 4)
    if not star_refines(E, D):
        raise PreconditionFailed("the gamma/4-ball cover does not star-refine the pulled-back star cover")
    _, inv = atom_sets(tower[-1])
    lam = lebesgue(E, X)
    phi, certs, nerve_pts, bonded = {}, {}, {}, {}
    for x, vals in pou_values(E, X, lam).items():
        levels = sorted(set(vals.values()), reverse=True)
        pairs = []
        for i, a in enumerate(levels):
            nxt = levels[i + 1] if i + 1 < len(levels) else ZERO
            pairs.append((frozenset(k for k, v in vals.items() if v >= a), a - nxt))
        nerve_pts[x] = pairs
        up = RPoint.make(top_base, _bond_chain(E, D, inv, pairs))
        bonded[x] = up
        image = h_down(up, tower[-1])
        phi[x], certs[x] = _certify(x, f(x), image, carrier[x], Q, tower)
    return HahnResult(phi, certs, n, nerve_pts, bonded)


# ------------------------------------------------ monotone approximation

def cell_sample(P, m, max_size=200_000):
    """One point of ``|P|`` in the open cell of each element of ``P^{#m}``.

    The point is ``h_m`` of the barycenter of a maximal chain of ``⌊p⌋``
    ending at ``p``; vertices of ``P^{#m}`` map to themselves.
    """
    tower = subdivision_tower(P, m, max_size)
    Pm = tower[-1]
    return {p: push(_cell_point(p, Pm), tower) for p in Pm.elements}, tower


@dataclass
class MonotoneApproximation:
    g: MonotoneMap
    source_tower: list = field(repr=False)
    target_tower: list = field(repr=False)
    distances: dict = field(repr=False)
    contained: dict = field(repr=False)
    bound: Fraction = ONE
    bookkeeping: bool = False

    @property
    def ok(self):
        return all(self.contained.values()) and all(v <= self.bound for v in self.distances.values())


def monotone_approx(f, P, Q, m, n, strict=True, max_size=200_000):
    """Monotone ``g: P^{#m} → Q^{#(n+1)}`` approximating a sampled map ``|P| → |Q|``.

    ``f.domain`` is a sample of ``|P|`` whose labels are the elements of
    ``P^{#m}`` (see ``cell_sample``).  The output lands in ``(Q^{#n})#``,
    which is where the bonding map actually goes; composing with ``h^{n+1}``
    gives a map to ``|Q|`` that is ``2^{-n+1}``-close to ``f`` on the sample.

    With ``strict`` the moduli must satisfy ``δ < 2^{-n-1}`` and
    ``2^{-m+1} < γ/4``.  Otherwise only the finite facts the proof uses are
    required: ``δ ≤ 2^{-n-1}`` and that the cell-star cover star-refines the
    pulled-back star cover.
    """
    if m < 1 or n < 1:
        raise PreconditionFailed("m and n must be at least 1")
    Q = Q.closure()
    if not is_conditionally_complete(Q):
        raise PreconditionFailed("target poset is not conditionally complete")
    bookkeeping = f.delta < _pow2(-n - 1) and _pow2(-m + 1) < f.gamma / 4
    if strict and not bookkeeping:
        raise PreconditionFailed("moduli violate delta < 2^-(n+1) or 2^-(m-1) < gamma/4")
    if f.delta > _pow2(-n - 1):
        raise PreconditionFailed("delta exceeds the Lebesgue number of the star cover")
    src = subdivision_tower(P, m, max_size)
    Pm = src[-1]
    missing = set(Pm.elements) - set(f.domain.points)
    if missing:
        raise PreconditionFailed("sample lacks a point in the cell of some element of the subdivision")
    tgt = subdivision_tower(Q, n, max_size)
    target = canonical(tgt[-1])
    carrier, D = _pullback_star_cover(f, tgt)
    A_src, _ = atom_sets(Pm)
    # E_v: sample points whose cell lies in the open star of the vertex v.
    E = Cover(f.domain.points, {v: frozenset(p for p in Pm.elements if Pm.leq(v, p)) for v in atoms(Pm)})
    if not star_refines(E, D):
        raise PreconditionFailed("cell-star cover does not star-refine the pulled-back star cover")
    _, inv = atom_sets(tgt[-1])
    assign = {}
    for p in Pm.elements:
        sigma = A_src[p]
        (iv, _), = _bond_chain(E, D, inv, [(sigma, ONE)])
        assign[p] = iv
    g = MonotoneMap(Pm, target, assign)
    distances, contained = {}, {}
    full = tgt + [target]
    for p in Pm.elements:
        y = map_point(g, _cell_point(p, Pm))
        contained[p] = tgt[-1].leq(y.top.hi, carrier[p])
        distances[p] = dist(push(y, full), f(p))
    return MonotoneApproximation(g, src, full, distances, contained, _pow2(1 - n), bookkeeping)


def _cell_point(p, Pm):
    """Barycenter of a maximal chain of ``⌊p⌋`` ending at ``p``, in ``|P^{#m}|``."""
    chain = [p]
    while True:
        below = [q for q in Pm.cone_of(chain[0]) if q != chain[0]]
        if not below:
            break
        chain.insert(0, max(below, key=lambda q: len(Pm.cone_of(q))))
    w = Fraction(1, len(chain))
    return RPoint(Pm, chain, [w] * len(chain))


def sampled_cells(P, m, fn, gamma, delta, max_size=200_000):
    """``SampledMap`` on ``cell_sample(P, m)`` with values ``fn(point of |P|)``.

    The sample metric is the coordinate distance in ``|P|``.
    """
    pts, _ = cell_sample(P, m, max_size)
    labels = list(pts)
    X = FiniteMetric.from_function(labels, lambda a, b: dist(pts[a], pts[b]), check=False)
    return SampledMap(X, {p: fn(pts[p]) for p in labels}, gamma, delta)


# ------------------------------------------------------- LCU staircase

def _grid(delta_):
    delta_ = Fraction(delta_)
    if delta_ <= 0:
        raise DeltaNotGrid("delta must be positive")
    N = 1 / (4 * delta_)
    if N.denominator != 1:
        raise DeltaNotGrid(f"1/(4 delta) = {N} is not an integer")
    return delta_, int(N)


def _last_at_least(levels, bound):
    return max(j for j in range(1, len(levels)) if levels[j] >= bound)


def _staircase(x, chain, delta_, N, shift):
    """Staircase point on the hatted chain of ``x``.

    ``shift`` is 0 for the ``x``-side thresholds ``1-4iδ, 1-(4i+1)δ`` and 2 for
    the ``y``-side thresholds ``1-(4i+2)δ, 1-(4i+3)δ``.
    """
    a, alpha = _hatted(x, chain)
    m = len(a) - 1
    new = [None] * (m + 1)
    prev_hi = 1
    for i in range(N + 1):
        D = 1 - 4 * i * delta_
        u = _last_at_least(alpha, 1 - (4 * i + shift) * delta_)
        up = _last_at_least(alpha, 1 - (4 * i + shift + 1) * delta_)
        for j in range(prev_hi + 1, u + 1):
            new[j] = D
        for j in range(u + 1, up + 1):
            new[j] = D - 4 * ((1 - (4 * i + shift) * delta_) - alpha[j])
        prev_hi = max(prev_hi, up)
    new[m] = ZERO
    pairs = [(a[j], new[j] - new[j + 1]) for j in range(2, m)]
    return RPoint.make(x.base, pairs)


def lcu_pair(x, y, delta_, A=None, B=None):
    """Uniformly continuous replacements ``x′ = φ(x,y)``, ``y′ = ψ(x,y)``.

    Requires ``1/(4δ)`` integral and ``d(x,y) < δ``.  ``A`` and ``B`` may
    enlarge the chains carrying ``x`` and ``y``; the result does not depend on
    them.
    """
    delta_, N = _grid(delta_)
    d = dist(x, y)
    if d >= delta_:
        raise TooFar(f"d(x, y) = {d} is not below delta = {delta_}")
    return _staircase(x, A, delta_, N, 0), _staircase(y, B, delta_, N, 2)


# ---------------------------------------------------------- nerve tower

@dataclass
class Tower:
    """Nerves of a refining sequence of covers with their bonding maps."""

    space: FiniteMetric
    covers: list
    nerves: list
    bondings: list
    targets: list = field(repr=False)
    _vertex_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def depth(self):
        return len(self.covers) - 1

    def p(self, i, x):
        """``p_i = h ∘ |φ^{C_{i+1}}_{C_i}|``: a point of ``|N_{i+1}|`` to ``|N_i|``."""
        return h_down(map_point(self.bondings[i], x), self.nerves[i])

    def push(self, j, i, x):
        """``p^j_i``: from ``|N_j|`` down to ``|N_i|``."""
        for k in range(j - 1, i - 1, -1):
            x = self.p(k, x)
        return x

    def simplex(self, i, x):
        return delta_point(self.covers[i], x)

    def faces(self, i, x):
        top = self.simplex(i, x)
        N = self.nerves[i]
        return [s for s in N.elements if s <= top]

    def image_diameter(self, i, n, x):
        """Largest distance among ``p^{i+n}_i``-images of the vertices of ``|s_{i+n}(x)|``.

        The map is affine on each simplex of the order complex, so this is the
        diameter of the whole image.
        """
        return vertex_set_diameter([self._vertex_image(i + n, i, s) for s in self.faces(i + n, x)])

    def _vertex_image(self, j, i, s):
        key = (j, i, s)
        if key not in self._vertex_cache:
            self._vertex_cache[key] = coords(self.push(j, i, RPoint.vertex(self.nerves[j], s)))
        return self._vertex_cache[key]

    def maps_simplex_into(self, i, x):
        """``φ_i`` sends every face of ``s_{i+1}(x)`` to an interval inside ``s_i(x)``."""
        top = self.simplex(i, x)
        return all(self.bondings[i](s).hi <= top for s in self.faces(i + 1, x))

    def lam(self, i, x, depth=None):
        """``λ_i(x)`` to precision ``2^{1-n}``: push the vertex ``Δ_{C_{i+n}}(x)`` down ``n`` levels."""
        depth = self.depth if depth is None else depth
        return self.push(depth, i, RPoint.vertex(self.nerves[depth], self.simplex(depth, x)))

    def resolving_level(self, x, y):
        """First level at which every set containing ``x`` misses every set containing ``y``."""
        for i, C in enumerate(self.covers):
            if all(not (U & V) for U in C.members if x in U for V in C.members if y in V):
                return i
        return None

    def predicted_level(self, x, y):
        """First level whose sets all have diameter below ``d(x,y)/2``."""
        X = self.space
        for i, C in enumerate(self.covers):
            diam = max(max((X(a, b) for a in U for b in U), default=ZERO) for U in C.members)
            if 2 * diam < X(x, y):
                return i
        return None


def nerve_tower(X, basis):
    """Build the tower ``N(C_0) ← N(C_1) ← ...`` of canonical bonding maps."""
    basis = list(basis)
    for i in range(len(basis) - 1):
        if not star_refines(basis[i + 1], basis[i]):
            raise NotStarRefinement(f"cover {i + 1} does not star-refine cover {i}", level=i)
    nerves = [nerve(C) for C in basis]
    targets = [canonical(N) for N in nerves[:-1]]
    bondings = [bonding(basis[i + 1], basis[i], targets[i]) for i in range(len(basis) - 1)]
    return Tower(X, basis, nerves, bondings, targets)


__all__ = [
    "SampledMap",
    "HahnCertificate",
    "HahnResult",
    "hahn_phi",
    "MonotoneApproximation",
    "monotone_approx",
    "cell_sample",
    "sampled_cells",
    "subdivision_tower",
    "lift",
    "push",
    "atom_sets",
    "lcu_pair",
    "Tower",
    "nerve_tower",
]
