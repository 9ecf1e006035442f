"""Finite preposets and posets, monotone maps, and the order constructions.

A preposet is stored as its generating acyclic digraph; its chains are the
cliques of the underlying undirected graph.  A poset is the special case whose
edge set is transitively closed, so ``Poset`` subclasses ``Preposet``.

Internally every element gets an index and relations are kept as int bitsets.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from posetreal.errors import (
    DirectedCycle,
    LabelClash,
    NotInjective,
    NotMonotone,
    SizeBound,
)
from posetreal.kernels import reach_closure


@dataclass(frozen=True)
class Star:
    """The copy ``p*`` of an element ``p`` in a starred (dual) copy.

    ``stage`` keeps copies made at different iterations apart: in
    ``(P ⊞ P*) ⊞ (P ⊞ P*)*`` the copy of ``p*`` is ``Star(Star(p), 1)``,
    while the copy of ``p`` is ``Star(p, 1) ≠ Star(p, 0)``.
    """

    base: object
    stage: int = 0

    def __repr__(self):
        return f"{self.base!r}*" if self.stage == 0 else f"{self.base!r}*{self.stage}"


@dataclass(frozen=True)
class Adjoined:
    """A new extremal element adjoined by ``cone`` or ``dual_cone``."""

    kind: str  # "top" or "bottom"
    level: int = 0

    def __repr__(self):
        mark = "1^" if self.kind == "top" else "0^"
        return mark if self.level == 0 else f"{mark}{self.level}"


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _find_cycle(elements, succ):
    color = [0] * len(elements)
    parent = [-1] * len(elements)
    for root in range(len(elements)):
        if color[root]:
            continue
        stack = [(root, iter(list(_bits(succ[root]))))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
                continue
            if color[nxt] == 1:
                path = [nxt]
                w = v
                while w != nxt:
                    path.append(w)
                    w = parent[w]
                path.append(nxt)
                return [elements[i] for i in reversed(path)]
            if color[nxt] == 0:
                color[nxt] = 1
                parent[nxt] = v
                stack.append((nxt, iter(list(_bits(succ[nxt])))))
    return None


class Preposet:
    """Acyclic relation digraph on a finite set of hashable labels."""

    def __init__(self, elements, edges=()):
        elements = tuple(elements)
        index = {}
        for i, e in enumerate(elements):
            if e in index:
                raise LabelClash(f"duplicate label {e!r}")
            index[e] = i
        succ = [0] * len(elements)
        clean = set()
        for u, v in edges:
            if u not in index or v not in index:
                raise KeyError(f"edge ({u!r}, {v!r}) uses an unknown label")
            if u == v:
                raise DirectedCycle([u, u])
            clean.add((u, v))
            succ[index[u]] |= 1 << index[v]
        self.elements = elements
        self.index = index
        self.edges = frozenset(clean)
        self.succ = succ
        cycle = _find_cycle(elements, succ)
        if cycle is not None:
            raise DirectedCycle(cycle)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        if not isinstance(other, Preposet):
            return NotImplemented
        return (
            type(self) is type(other)
            and set(self.elements) == set(other.elements)
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.elements), self.edges))

    def __repr__(self):
        return f"{type(self).__name__}({list(self.elements)!r}, {len(self.edges)} edges)"

    def related(self, u, v):
        """The reflexive generating relation ``u ⪯ v`` (not its closure)."""
        return u == v or (u, v) in self.edges

    @cached_property
    def pred(self):
        out = [0] * len(self.elements)
        for i, s in enumerate(self.succ):
            for j in _bits(s):
                out[j] |= 1 << i
        return out

    def closure(self):
        """The transitive closure ``⟨P⟩`` as a poset."""
        return self._closure

    @cached_property
    def _closure(self):
        reach = reach_closure(self.succ)
        down = [1 << i for i in range(len(self.elements))]
        for i, r in enumerate(reach):
            for j in _bits(r):
                down[j] |= 1 << i
        return Poset._from_down(self.elements, down)

    @cached_property
    def topological_order(self):
        """Indices in an order compatible with every edge."""
        return sorted(range(len(self.elements)), key=lambda i: bin(self._closure.down[i]).count("1"))

    def is_chain(self, seq):
        """True if ``seq`` lists a clique in increasing order."""
        seq = list(seq)
        if len(set(seq)) != len(seq):
            return False
        return all(self.related(a, b) for a, b in combinations(seq, 2))

    def sort_chain(self, items):
        """Sort a clique increasingly; raises ValueError if it is not a clique."""
        items = list(items)
        pos = {i: k for k, i in enumerate(self.topological_order)}
        items.sort(key=lambda e: pos[self.index[e]])
        if not self.is_chain(items):
            raise ValueError(f"{items!r} is not a chain")
        return tuple(items)

    def chains(self):
        """All nonempty chains (cliques), each listed increasingly."""
        order = self.topological_order
        pos = {i: k for k, i in enumerate(order)}
        out = []

        def grow(clique, cand):
            out.append(tuple(self.elements[i] for i in clique))
            for j in sorted(_bits(cand), key=pos.__getitem__):
                grow(clique + [j], cand & self.succ[j])

        for i in order:
            grow([i], self.succ[i])
        return out

    def maximal_chains(self):
        out = []
        for c in self.chains():
            idx = [self.index[e] for e in c]
            common = ~0
            for i in idx:
                common &= self.succ[i] | self.pred[i]
            if not common & ~sum(1 << i for i in idx):
                out.append(c)
        return out

    def subposet(self, items):
        """Induced sub-preposet on ``items``."""
        items = [e for e in self.elements if e in set(items)]
        keep = set(items)
        return Preposet(items, [(u, v) for u, v in self.edges if u in keep and v in keep])


class Poset(Preposet):
    """Finite partial order; ``edges`` holds every strict comparability."""

    def __init__(self, elements, relations=()):
        pre = Preposet(elements, [(u, v) for u, v in relations if u != v])
        closed = pre.closure()
        self.__dict__.update(closed.__dict__)

    @classmethod
    def _from_down(cls, elements, down):
        self = cls.__new__(cls)
        elements = tuple(elements)
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        up = [0] * n
        for i, d in enumerate(down):
            for j in _bits(d):
                up[j] |= 1 << i
        self.down = list(down)
        self.up = up
        self.succ = [u & ~(1 << i) for i, u in enumerate(up)]
        self.edges = frozenset(
            (elements[i], elements[j]) for i in range(n) for j in _bits(self.succ[i])
        )
        self._closure = self
        return self

    def closure(self):
        return self

    def leq(self, a, b):
        return bool(self.down[self.index[b]] >> self.index[a] & 1)

    def lt(self, a, b):
        return a != b and self.leq(a, b)

    def comparable(self, a, b):
        return self.leq(a, b) or self.leq(b, a)

    def related(self, u, v):
        return self.leq(u, v)

    def _mask(self, items):
        m = 0
        for e in items:
            m |= 1 << self.index[e]
        return m

    def _labels(self, mask):
        return frozenset(self.elements[i] for i in _bits(mask))

    def cone_of(self, p):
        """``⌊p⌋ = {q : q ≤ p}``."""
        return self._labels(self.down[self.index[p]])

    def dual_cone_of(self, p):
        """``⌈p⌉ = {q : q ≥ p}``."""
        return self._labels(self.up[self.index[p]])

    def star_of(self, p):
        """``⌊⌈p⌉⌋``: everything below something above ``p``."""
        m = 0
        for i in _bits(self.up[self.index[p]]):
            m |= self.down[i]
        return self._labels(m)

    def minimal(self):
        return [e for i, e in enumerate(self.elements) if self.down[i] == 1 << i]

    def maximal(self):
        return [e for i, e in enumerate(self.elements) if self.up[i] == 1 << i]

    def upper_bounds_mask(self, items):
        m = (1 << len(self.elements)) - 1
        for e in items:
            m &= self.up[self.index[e]]
        return m

    def least(self, mask):
        """Index of the least element of the index set ``mask``, or None."""
        cands = [i for i in _bits(mask) if mask & ~self.up[i] == 0]
        return cands[0] if cands else None

    def supremum(self, items):
        """Least upper bound of ``items``, or None if it does not exist."""
        i = self.least(self.upper_bounds_mask(items))
        return None if i is None else self.elements[i]

    def infimum(self, items):
        m = (1 << len(self.elements)) - 1
        for e in items:
            m &= self.down[self.index[e]]
        cands = [i for i in _bits(m) if m & ~self.down[i] == 0]
        return self.elements[cands[0]] if cands else None

    def covers(self):
        """Hasse diagram edges ``(a, b)`` with ``a ⋖ b``."""
        out = []
        for i in range(len(self.elements)):
            strict = self.succ[i]
            for j in _bits(strict):
                if not any(self.succ[k] >> j & 1 for k in _bits(strict)):
                    out.append((self.elements[i], self.elements[j]))
        return out

    def chains(self):
        return Preposet.chains(self)

    def subposet(self, items):
        keep = set(items)
        idx = [i for i, e in enumerate(self.elements) if e in keep]
        remap = {i: k for k, i in enumerate(idx)}
        down = []
        for i in idx:
            m = 0
            for j in _bits(self.down[i]):
                if j in remap:
                    m |= 1 << remap[j]
            down.append(m)
        return Poset._from_down([self.elements[i] for i in idx], down)


# ---------------------------------------------------------------- builders

def chain(n, labels=None):
    """The ``n``-element chain, labelled ``a, b, c, ...`` by default."""
    labels = list(labels) if labels is not None else _default_labels(n)
    return Poset(labels, list(zip(labels, labels[1:])))


def antichain(n, labels=None):
    labels = list(labels) if labels is not None else _default_labels(n)
    return Poset(labels)


def _default_labels(n):
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    if n <= len(alphabet):
        return list(alphabet[:n])
    return [f"e{i}" for i in range(n)]


def powerset_poset(ground):
    ground = list(ground)
    subsets = [frozenset(c) for k in range(len(ground) + 1) for c in combinations(ground, k)]
    index = {s: i for i, s in enumerate(subsets)}
    down = []
    for s in subsets:
        m = 0
        for t in subsets:
            if t <= s:
                m |= 1 << index[t]
        down.append(m)
    return Poset._from_down(subsets, down)


def inclusion_poset(sets):
    """Poset of the given distinct sets ordered by inclusion."""
    sets = list(dict.fromkeys(frozenset(s) for s in sets))
    down = []
    for s in sets:
        m = 0
        for i, t in enumerate(sets):
            if t <= s:
                m |= 1 << i
        down.append(m)
    return Poset._from_down(sets, down)


# ------------------------------------------------------------ constructions

def _check_disjoint(P, Q):
    clash = set(P.elements) & set(Q.elements)
    if clash:
        raise LabelClash(f"shared labels {sorted(map(repr, clash))}")


def dual(P):
    """Reverse every relation; preposets stay preposets."""
    if isinstance(P, Poset):
        return Poset._from_down(P.elements, P.up)
    return Preposet(P.elements, [(v, u) for u, v in P.edges])


def disjoint_union(P, Q):
    _check_disjoint(P, Q)
    P, Q = P.closure(), Q.closure()
    k = len(P)
    down = list(P.down) + [d << k for d in Q.down]
    return Poset._from_down(P.elements + Q.elements, down)


def ordinal_sum(P, Q):
    """``P + Q``: every element of ``P`` below every element of ``Q``."""
    _check_disjoint(P, Q)
    P, Q = P.closure(), Q.closure()
    k = len(P)
    allp = (1 << k) - 1
    down = list(P.down) + [(d << k) | allp for d in Q.down]
    return Poset._from_down(P.elements + Q.elements, down)


def product(P, Q):
    """Componentwise order on pairs ``(p, q)``."""
    P, Q = P.closure(), Q.closure()
    elements = [(p, q) for p in P.elements for q in Q.elements]
    nq = len(Q)
    down = []
    for i in range(len(P)):
        for j in range(nq):
            m = 0
            for a in _bits(P.down[i]):
                for b in _bits(Q.down[j]):
                    m |= 1 << (a * nq + b)
            down.append(m)
    return Poset._from_down(elements, down)


def _next_level(P, kind):
    levels = [e.level for e in P.elements if isinstance(e, Adjoined) and e.kind == kind]
    return Adjoined(kind, max(levels) + 1 if levels else 0)


def cone(P):
    """``CP``: adjoin a new greatest element."""
    top = _next_level(P, "top")
    P = P.closure()
    n = len(P)
    return Poset._from_down(P.elements + (top,), list(P.down) + [(1 << (n + 1)) - 1])


def dual_cone(P):
    """``C*P``: adjoin a new least element."""
    bottom = _next_level(P, "bottom")
    P = P.closure()
    down = [1] + [(d << 1) | 1 for d in P.down]
    return Poset._from_down((bottom,) + P.elements, down)


def _adjoin_bottom_preposet(P):
    bottom = _next_level(P, "bottom")
    return bottom, Preposet((bottom,) + P.elements, list(P.edges) + [(bottom, p) for p in P.elements])


def join(P, Q):
    """``P * Q`` as the sub-preposet ``C*P × Q ∪ P × C*Q`` of ``C*P × C*Q``."""
    bp, CP = _adjoin_bottom_preposet(P)
    bq, CQ = _adjoin_bottom_preposet(Q)
    elements = [(p, q) for p in CP.elements for q in CQ.elements if not (p == bp and q == bq)]
    edges = []
    for u in elements:
        for v in elements:
            if u != v and CP.related(u[0], v[0]) and CQ.related(u[1], v[1]):
                edges.append((u, v))
    return Preposet(elements, edges)


def codeleted_prejoin(P, stage=0):
    """The co-deleted prejoin ``P ⊞ P*`` on ``P ⊔ P*``.

    Rules, with ``≤`` the generating relation of ``P``: ``p ⪯ q`` iff ``p ≤ q``;
    ``p* ⪯ q*`` iff ``p ≥ q``; never ``p* ⪯ q``; ``p ⪯ q*`` iff ``p ≤ q`` or
    ``p ≥ q``.  The result need not be transitive.
    """
    stars = [Star(p, stage) for p in P.elements]
    _check_disjoint(P, Preposet(stars))
    edges = set()
    for p in P.elements:
        for q in P.elements:
            if p != q and P.related(p, q):
                edges.add((p, q))
                edges.add((Star(q, stage), Star(p, stage)))
            if P.related(p, q) or P.related(q, p):
                edges.add((p, Star(q, stage)))
    return Preposet(P.elements + tuple(stars), edges)


# -------------------------------------------------------------------- maps

class MonotoneMap:
    """Element map between preposets, checked monotone on generating edges."""

    def __init__(self, source, target, assign, check=True):
        self.source = source
        self.target = target
        self.assign = dict(assign)
        missing = [p for p in source.elements if p not in self.assign]
        if missing:
            raise KeyError(f"map undefined on {missing!r}")
        bad = [p for p in source.elements if self.assign[p] not in target.index]
        if bad:
            raise KeyError(f"images of {bad!r} are not in the target")
        if check:
            tc = target.closure()
            for u, v in source.edges:
                if not tc.leq(self.assign[u], self.assign[v]):
                    raise NotMonotone(u, v)

    def __call__(self, p):
        return self.assign[p]

    def __eq__(self, other):
        return (
            isinstance(other, MonotoneMap)
            and self.source == other.source
            and self.target == other.target
            and self.assign == other.assign
        )

    def __repr__(self):
        return f"MonotoneMap({len(self.source)} -> {len(self.target)})"

    def compose(self, first):
        """``self ∘ first``."""
        return MonotoneMap(first.source, self.target, {p: self.assign[first.assign[p]] for p in first.source.elements})

    @classmethod
    def identity(cls, P):
        return cls(P, P, {p: p for p in P.elements}, check=False)

    @classmethod
    def constant(cls, P, Q, value):
        return cls(P, Q, {p: value for p in P.elements}, check=False)


def is_monotone(source, target, assign):
    tc = target.closure()
    return all(tc.leq(assign[u], assign[v]) for u, v in source.edges)


def mapping_cylinder(f, variant="lower"):
    """``MC(f)`` on ``source ⊔ target`` with labels ``("dom", p)`` / ``("cod", q)``.

    ``lower`` adds the generators ``f(p) ≺ p`` (range below domain), ``upper``
    adds ``p ≺ f(p)``.
    """
    if variant not in ("lower", "upper"):
        raise ValueError("variant must be 'lower' or 'upper'")
    dom = [("dom", p) for p in f.source.elements]
    cod = [("cod", q) for q in f.target.elements]
    edges = [(("dom", u), ("dom", v)) for u, v in f.source.edges]
    edges += [(("cod", u), ("cod", v)) for u, v in f.target.edges]
    for p in f.source.elements:
        a, b = ("cod", f(p)), ("dom", p)
        edges.append((a, b) if variant == "lower" else (b, a))
    return Preposet(dom + cod, edges)


def hmc(f, max_source=6):
    """The huge mapping cylinder ``⟨MC(F)⟩`` with ``F(p, T) = (f(p), ⌊p⌋)``.

    ``F`` maps ``P × 2^S`` to ``Q × 2^S`` where ``S`` is the underlying set of
    ``P``.  Labels are ``("dom", p, T)`` and ``("cod", q, T)``.
    """
    P, Q = f.source.closure(), f.target.closure()
    if len(P) > max_source:
        raise SizeBound(f"source has {len(P)} > {max_source} elements")
    subsets = powerset_poset(P.elements)
    dom = product(P, subsets)
    cod = product(Q, subsets)
    relabel_d = {e: ("dom",) + e for e in dom.elements}
    relabel_c = {e: ("cod",) + e for e in cod.elements}
    edges = [(relabel_d[u], relabel_d[v]) for u, v in dom.covers()]
    edges += [(relabel_c[u], relabel_c[v]) for u, v in cod.covers()]
    for p, T in dom.elements:
        edges.append((("cod", f(p), P.cone_of(p)), ("dom", p, T)))
    pre = Preposet(list(relabel_d.values()) + list(relabel_c.values()), edges)
    return pre.closure()


# -------------------------------------------------------------- predicates

def atoms(P):
    """Minimal elements (the atoms of an atomic poset)."""
    return P.closure().minimal()


def is_atomic(P):
    """True iff ``p ↦ {atoms below p}`` is an order embedding.

    Equivalently every element is the least upper bound of the atoms below it.
    """
    P = P.closure()
    atom_mask = sum(1 << P.index[a] for a in P.minimal())
    for i in range(len(P)):
        below = P.down[i] & atom_mask
        if P.least(P.upper_bounds_mask(P.elements[j] for j in _bits(below))) != i:
            return False
    return True


def is_conditionally_complete(P):
    """Every nonempty subset with an upper bound has a least upper bound.

    For finite posets it suffices to check pairs: joins of bounded pairs give
    joins of all bounded finite sets by induction.
    """
    P = P.closure()
    n = len(P)
    for i in range(n):
        for j in range(i + 1, n):
            ub = P.up[i] & P.up[j]
            if ub and P.least(ub) is None:
                return False
    return True


def is_embedding(P, j):
    """True iff ``p ≤ q ⇔ j(p) ⊆ j(q)`` for the map ``j: P → 2^S``."""
    P = P.closure()
    images = [frozenset(j[p]) for p in P.elements]
    if len(set(images)) != len(images):
        raise NotInjective("j identifies two elements")
    for a in range(len(P)):
        for b in range(len(P)):
            if bool(P.down[b] >> a & 1) != (images[a] <= images[b]):
                return False
    return True


def standard_embedding(P):
    """``j_P: p ↦ ⌊p⌋``."""
    P = P.closure()
    return {p: P.cone_of(p) for p in P.elements}


def is_isomorphism(P, Q, assign):
    """True iff ``assign`` is an order isomorphism between the closures."""
    P, Q = P.closure(), Q.closure()
    if len(P) != len(Q) or set(assign.values()) != set(Q.elements):
        return False
    return all(P.leq(a, b) == Q.leq(assign[a], assign[b]) for a in P.elements for b in P.elements)
