"""Points of geometric realizations and their exact l∞ metrics.

A point of ``|P|`` is a chain ``c_1 < ... < c_k`` with positive rational
weights summing to one.  Its coordinate vector over the ground set is
``v_s = Σ {t_i : s ∈ ⌊c_i⌋}``; a different injection ``j: P → 2^S`` gives
``|P|_j`` with ``v_s = Σ {t_i : s ∈ j(c_i)}``.

Three routes to distances are provided: coordinates (``dist``), the chain-pair
formula over the hatted chains (``dist_chain_formula``), and the three-step
path bound through an intermediary chain (``d3_upper``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from posetreal.errors import BaseMismatch, NotInRealization
from posetreal.poset import _bits
from posetreal.subdivision import Interval

ONE = Fraction(1)
ZERO = Fraction(0)
HALF = Fraction(1, 2)


class RPoint:
    """Immutable point of ``|base|`` in canonical form."""

    __slots__ = ("base", "chain", "weights")

    def __init__(self, base, chain, weights):
        chain = tuple(chain)
        weights = tuple(Fraction(w) for w in weights)
        if len(chain) != len(weights) or not chain:
            raise ValueError("chain and weights must be nonempty and of equal length")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        if sum(weights) != 1:
            raise ValueError(f"weights sum to {sum(weights)}, not 1")
        if not base.is_chain(chain):
            raise NotInRealization(f"{chain!r} is not an increasing chain of the base")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "chain", chain)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name, value):
        raise AttributeError("RPoint is immutable")

    @classmethod
    def make(cls, base, pairs):
        """Canonicalize ``(element, weight)`` pairs: merge repeats, drop zeros, sort."""
        acc = {}
        for e, w in pairs:
            acc[e] = acc.get(e, ZERO) + Fraction(w)
        acc = {e: w for e, w in acc.items() if w != 0}
        chain = _sort_chain(base, acc)
        return cls(base, chain, [acc[e] for e in chain])

    @classmethod
    def vertex(cls, base, p):
        return cls(base, (p,), (ONE,))

    def __eq__(self, other):
        if not isinstance(other, RPoint):
            return NotImplemented
        return (
            self.chain == other.chain
            and self.weights == other.weights
            and (self.base is other.base or self.base == other.base)
        )

    def __hash__(self):
        return hash((self.chain, self.weights))

    def __repr__(self):
        body = ", ".join(f"{c!r}:{w}" for c, w in zip(self.chain, self.weights))
        return f"RPoint({body})"

    @property
    def top(self):
        return self.chain[-1]

    def weight_of(self, p):
        for c, w in zip(self.chain, self.weights):
            if c == p:
                return w
        return ZERO


def _sort_chain(base, elements):
    C = base.closure()
    items = sorted(elements, key=lambda e: bin(C.down[C.index[e]]).count("1"))
    return tuple(items)


# ------------------------------------------------------------ coordinates

def coords(x, j=None):
    """Sparse coordinate vector of ``x`` in ``|P|_j`` (default ``j = j_P``)."""
    out = {}
    if j is None:
        C = x.base.closure()
        for c, t in zip(x.chain, x.weights):
            for i in _bits(C.down[C.index[c]]):
                s = C.elements[i]
                out[s] = out.get(s, ZERO) + t
    else:
        for c, t in zip(x.chain, x.weights):
            for s in j[c]:
                out[s] = out.get(s, ZERO) + t
    return out


def sup_dist(u, v):
    """l∞ distance between two sparse vectors."""
    keys = set(u) | set(v)
    return max((abs(u.get(k, ZERO) - v.get(k, ZERO)) for k in keys), default=ZERO)


def _same_base(x, y):
    if x.base is y.base:
        return
    if x.base.closure() != y.base.closure():
        raise BaseMismatch("points live over different posets")


def dist(x, y, j=None):
    """Exact l∞ distance of the coordinate vectors."""
    _same_base(x, y)
    return sup_dist(coords(x, j), coords(y, j))


def decompose(v, base, j=None):
    """Invert ``coords``: find the point of ``|base|_j`` with coordinates ``v``.

    Each superlevel set ``{s : v_s ≥ λ}`` must be ``j(c)`` for some ``c``, and
    these ``c`` must form a chain of ``base``.
    """
    C = base.closure()
    if j is None:
        j = {p: C.cone_of(p) for p in C.elements}
    lookup = {frozenset(s): p for p, s in j.items()}
    v = {s: Fraction(a) for s, a in v.items() if a != 0}
    for s, a in v.items():
        if not 0 <= a <= 1:
            raise NotInRealization(f"coordinate {s!r} = {a} outside [0, 1]", level=a)
    levels = sorted(set(v.values()), reverse=True)
    if not levels or levels[0] != 1:
        raise NotInRealization("no coordinate equals 1", level=ONE)
    chain = []
    for lam in levels:
        sup = frozenset(s for s, a in v.items() if a >= lam)
        c = lookup.get(sup)
        if c is None:
            raise NotInRealization(f"superlevel set at {lam} is not an image of j", level=lam)
        chain.append(c)
    if not base.is_chain(chain):
        raise NotInRealization("superlevel sets do not form a chain of the base")
    weights = [levels[i] - (levels[i + 1] if i + 1 < len(levels) else ZERO) for i in range(len(levels))]
    return RPoint(base, chain, weights)


# ------------------------------------------------------- hatted chains

class _Hat:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


BOT = _Hat("0^")
TOP = _Hat("1^")


def _hat_leq(C, u, v):
    if u is v or u is BOT or v is TOP:
        return True
    if u is TOP or v is BOT:
        return False
    return C.leq(u, v)


def _hatted(x, chain=None):
    """1-based hatted chain ``a`` and its levels ``α`` (index 0 unused).

    ``α_1 = 1``, ``α_i`` for ``i ≥ 2`` is the coordinate of ``x`` on
    ``a(i) ∖ a(i-1)``, and ``α_m = 0``.
    """
    chain = tuple(x.chain if chain is None else chain)
    if not set(x.chain) <= set(chain):
        raise ValueError("witness chain must contain the support of the point")
    a = [None, BOT, *chain, TOP]
    m = len(a) - 1
    alpha = [None] * (m + 1)
    alpha[m] = ZERO
    for i in range(m - 1, 1, -1):
        alpha[i] = alpha[i + 1] + x.weight_of(a[i])
    alpha[1] = ONE
    return a, alpha


@dataclass(frozen=True)
class ChainPairWitness:
    """Index data of the chain-pair distance formula (1-based)."""

    pairs: tuple
    pairs_prime: tuple
    Z: frozenset
    Z_prime: frozenset
    delta: tuple
    delta_prime: tuple
    argmax: tuple = field(default=None)


def _chain_pairs(C, a, b):
    m, n = len(a) - 1, len(b) - 1
    A, B = set(a[1:]), set(b[1:])
    union = list(dict.fromkeys(a[1:] + b[1:]))

    def lt(u, v):
        return u is not v and _hat_leq(C, u, v) and not _hat_leq(C, v, u)

    def covers(u, v):
        return lt(u, v) and not any(lt(u, w) and lt(w, v) for w in union)

    pairs, pairs_p = [], []
    for k in range(1, m + 1):
        for l in range(1, n + 1):
            u, v = a[k], b[l]
            if u is v or u == v:
                pairs.append((k, l))
                pairs_p.append((k, l))
            elif u not in B and v not in A:
                if covers(u, v):
                    pairs.append((k, l))
                if covers(v, u):
                    pairs_p.append((k, l))
    pairs.sort()
    pairs_p.sort()
    Z = frozenset(i for i, (k, l) in enumerate(pairs) if a[k] == b[l])
    Zp = frozenset(i for i, (k, l) in enumerate(pairs_p) if a[k] == b[l])
    return pairs, pairs_p, Z, Zp


def dist_chain_formula(x, y, A=None, B=None):
    """Distance as ``max |α_k − β_l|`` over ``Δ ∪ Δ′``, with its witness.

    ``A`` and ``B`` optionally enlarge the chains carrying ``x`` and ``y``.
    """
    _same_base(x, y)
    C = x.base.closure()
    a, alpha = _hatted(x, A)
    b, beta = _hatted(y, B)
    pairs, pairs_p, Z, Zp = _chain_pairs(C, a, b)
    delta = tuple((pairs[i][0] + 1, pairs[i + 1][1]) for i in range(len(pairs) - 1))
    delta_p = tuple((pairs_p[i + 1][0], pairs_p[i][1] + 1) for i in range(len(pairs_p) - 1))
    best, arg = ZERO, None
    for k, l in delta + delta_p:
        gap = abs(alpha[k] - beta[l])
        if arg is None or gap > best:
            best, arg = gap, (k, l)
    witness = ChainPairWitness(tuple(pairs), tuple(pairs_p), Z, Zp, delta, delta_p, arg)
    return best, witness


# ------------------------------------------------------------- d3 bound

def _intermediary_chain(C, a, b, pairs, pairs_p, Z, Zp):
    m, n = len(a) - 1, len(b) - 1
    pos_a = {a[k]: k for k in range(1, m + 1)}
    pos_b = {b[l]: l for l in range(1, n + 1)}
    jump_a = {pairs[i][0]: pairs[i][1] for i in range(len(pairs)) if i not in Z}
    jump_b = {pairs_p[i][1]: pairs_p[i][0] for i in range(len(pairs_p)) if i not in Zp}
    c = [a[1]]
    while c[-1] is not TOP:
        cur = c[-1]
        k, l = pos_a.get(cur), pos_b.get(cur)
        if k is not None and l is not None:
            na, nb = a[k + 1], b[l + 1]
            if _hat_leq(C, na, nb) or not _hat_leq(C, nb, na):
                c.append(na)
            else:
                c.append(nb)
        elif k is not None:
            c.append(b[jump_a[k]] if k in jump_a else a[k + 1])
        else:
            c.append(a[jump_b[l]] if l in jump_b else b[l + 1])
        if len(c) > m + n:
            raise RuntimeError("intermediary chain did not terminate")
    return c


def _restrict_to(x, a, alpha, keep):
    """The point ``x′`` on ``A ∩ C`` using the least admissible ``h_i``."""
    m = len(a) - 1
    positions = [k for k in range(1, m + 1) if a[k] in keep]
    mp = len(positions)
    alpha_p = [None, ONE]
    for i in range(2, mp + 1):
        h = m if i == mp else positions[i - 2] + 1
        alpha_p.append(alpha[h])
    pairs = []
    for i in range(2, mp):
        pairs.append((a[positions[i - 1]], alpha_p[i] - alpha_p[i + 1]))
    return RPoint.make(x.base, pairs)


def d3_upper(x, y):
    """Three-step path bound ``d(x,x′) + d(x′,y′) + d(y′,y)`` and the points ``x′, y′``."""
    _same_base(x, y)
    C = x.base.closure()
    a, alpha = _hatted(x)
    b, beta = _hatted(y)
    pairs, pairs_p, Z, Zp = _chain_pairs(C, a, b)
    c = set(_intermediary_chain(C, a, b, pairs, pairs_p, Z, Zp))
    if not any(e in c for e in x.chain) or not any(e in c for e in y.chain):
        # The intermediary chain misses one of the chains entirely.  This only
        # happens when no element of A ∪ B links them, and then d(x, y) = 1;
        # the path is the single jump between chain copies, of length 1.
        return ONE, x, y
    xp = _restrict_to(x, a, alpha, c)
    yp = _restrict_to(y, b, beta, c)
    return dist(x, xp) + dist(xp, yp) + dist(yp, y), xp, yp


def intermediary_chain(x, y):
    """The real elements of the intermediary chain used by ``d3_upper``."""
    C = x.base.closure()
    a, _ = _hatted(x)
    b, _ = _hatted(y)
    pairs, pairs_p, Z, Zp = _chain_pairs(C, a, b)
    return tuple(e for e in _intermediary_chain(C, a, b, pairs, pairs_p, Z, Zp) if not isinstance(e, _Hat))


def same_chain_hull(*points):
    """True iff the union of the supports is a chain of the common base."""
    base = points[0].base
    support = set()
    for p in points:
        support.update(p.chain)
    return base.is_chain(_sort_chain(base, support))


# ----------------------------------------------------------- maps and h

def map_point(f, x):
    """Image of ``x`` under the affine extension ``|f|`` of a monotone map."""
    target = f.target
    acc = {}
    for c, t in zip(x.chain, x.weights):
        acc[f(c)] = acc.get(f(c), ZERO) + t
    chain = _sort_chain(target, acc)
    if not target.is_chain(chain):
        target = target.closure()
    return RPoint(target, chain, [acc[e] for e in chain])


def h_down(x, base):
    """``h: |P#| → |P|``: ``[σ,σ] ↦ σ``, ``[σ,τ] ↦`` midpoint, linear on chains."""
    acc = {}
    for iv, t in zip(x.chain, x.weights):
        if iv.lo == iv.hi:
            acc[iv.lo] = acc.get(iv.lo, ZERO) + t
        else:
            acc[iv.lo] = acc.get(iv.lo, ZERO) + t / 2
            acc[iv.hi] = acc.get(iv.hi, ZERO) + t / 2
    chain = _sort_chain(base, acc)
    if not base.is_chain(chain):
        base = base.closure()
    return RPoint(base, chain, [acc[e] for e in chain])


def h_up(x, target):
    """Inverse of ``h_down``: the point of ``|target|`` (``= P#``) over ``x``.

    With ``α_i`` the level of ``x`` on its ``i``-th chain element, the lifted
    point is ``∫_0^1 [c_{a(θ)}, c_{b(θ)}] dθ`` where ``a(θ)`` and ``b(θ)`` read
    off the levels ``A_i = max(0, 2α_i − 1)`` and ``B_i = min(1, 2α_i)``.
    """
    c = x.chain
    k = len(c)
    alpha = [ZERO] * k
    acc = ZERO
    for i in range(k - 1, -1, -1):
        acc += x.weights[i]
        alpha[i] = acc
    A = [max(ZERO, 2 * a - 1) for a in alpha]
    B = [min(ONE, 2 * a) for a in alpha]
    cuts = sorted({ZERO, ONE} | {1 - a for a in A} | set(B))
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        ia = max(i for i in range(k) if A[i] > 1 - hi)
        ib = max(i for i in range(k) if B[i] >= hi)
        pieces.append((Interval(c[ia], c[ib]), hi - lo))
    merged = {}
    for iv, w in pieces:
        merged[iv] = merged.get(iv, ZERO) + w
    chain = sorted(merged, key=lambda iv: (c.index(iv.lo), -c.index(iv.hi)), reverse=True)
    return RPoint(target, chain, [merged[iv] for iv in chain])


def h_down_vertex_coords(element, level, base):
    """Coordinates in ``|base|`` of ``h^level`` applied to a vertex of ``base^{#level}``.

    Avoids building the iterated subdivision: each step averages the endpoints.
    """
    if level == 0:
        C = base.closure()
        return {s: ONE for s in C.cone_of(element)}
    lo = h_down_vertex_coords(element.lo, level - 1, base)
    hi = h_down_vertex_coords(element.hi, level - 1, base)
    out = {}
    for s in set(lo) | set(hi):
        out[s] = (lo.get(s, ZERO) + hi.get(s, ZERO)) / 2
    return out


def dual_point(x, dual_base):
    """The same point read in ``|P*|`` (chain reversed)."""
    return RPoint(dual_base, tuple(reversed(x.chain)), tuple(reversed(x.weights)))


def vertex_set_diameter(vectors):
    """Largest pairwise l∞ distance among coordinate vectors.

    Equal to the largest spread of a single coordinate, so it is linear in
    the input; absent keys count as zero.
    """
    vectors = list(vectors)
    if len(vectors) < 2:
        return ZERO
    keys = set().union(*vectors)
    best = ZERO
    for k in keys:
        vals = [v.get(k, ZERO) for v in vectors]
        best = max(best, max(vals) - min(vals))
    return best


__all__ = [
    "RPoint",
    "ChainPairWitness",
    "coords",
    "dist",
    "sup_dist",
    "decompose",
    "dist_chain_formula",
    "d3_upper",
    "intermediary_chain",
    "same_chain_hull",
    "map_point",
    "h_down",
    "h_up",
    "h_down_vertex_coords",
    "dual_point",
    "vertex_set_diameter",
]
