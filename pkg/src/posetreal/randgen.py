"""Seeded random posets, points, embeddings and covers for fuzzing.

Posets come from a random acyclic orientation of an Erdős–Rényi graph (a random
permutation orients every edge forward), followed by transitive closure.
"""
from __future__ import annotations

import random
from fractions import Fraction

from posetreal.poset import Poset, Preposet
from posetreal.realization import RPoint


def random_preposet(rng: random.Random, n: int, p: float = 0.4, labels=None):
    labels = list(labels) if labels is not None else [f"v{i}" for i in range(n)]
    order = labels[:]
    rng.shuffle(order)
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Preposet(labels, edges)


def random_poset(rng: random.Random, n: int, p: float = 0.4, labels=None):
    return random_preposet(rng, n, p, labels).closure()


def random_weights(rng: random.Random, k: int, denom: int = 12):
    """``k`` positive fractions with common denominator summing to one."""
    denom = max(denom, k)
    cuts = sorted(rng.sample(range(1, denom), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    return [Fraction(x, denom) for x in parts]


def random_point(rng: random.Random, P, denom: int = 12, chain=None):
    if chain is None:
        chains = P.chains()
        chain = chains[rng.randrange(len(chains))]
    return RPoint(P, chain, random_weights(rng, len(chain), denom))


def random_point_on_chain(rng: random.Random, P, chain, denom: int = 12):
    """Random point in the closed hull of ``chain`` (some weights may vanish)."""
    chain = list(chain)
    k = rng.randint(1, len(chain))
    sub = sorted(rng.sample(range(len(chain)), k))
    return RPoint(P, [chain[i] for i in sub], random_weights(rng, k, denom))


def random_embedding(rng: random.Random, P, pool: int = 4):
    """Random order embedding ``j: P → 2^S``.

    ``j(p)`` is the union over ``q ≤ p`` of a private token for ``q`` plus a
    random subset of a shared pool, so ``j`` is monotone and reflects order.
    """
    C = P.closure()
    tokens = {}
    for q in C.elements:
        extra = {f"s{i}" for i in range(pool) if rng.random() < 0.3}
        tokens[q] = {("own", q)} | extra
    return {p: frozenset().union(*(tokens[q] for q in C.cone_of(p))) for p in C.elements}


def random_cover(rng: random.Random, ground, k: int, p: float = 0.4):
    """Random indexed cover with ``k`` sets; every point lands in some set."""
    ground = list(ground)
    sets = [set(x for x in ground if rng.random() < p) for _ in range(k)]
    for x in ground:
        if not any(x in s for s in sets):
            sets[rng.randrange(k)].add(x)
    return {f"U{i}": frozenset(s) for i, s in enumerate(sets)}


def naturally_labelled_posets(n: int):
    """Every poset on ``0..n-1`` in which ``i < j`` in the order forces ``i < j`` as integers.

    Each isomorphism class appears at least once.  Grown one new maximal
    element at a time, whose strict down-set is any order ideal of the rest.
    """
    def grow(down):
        k = len(down)
        if k == n:
            yield Poset._from_down(list(range(n)), list(down))
            return
        for mask in range(1 << k):
            if all(down[i] & mask == down[i] for i in range(k) if mask >> i & 1):
                yield from grow(down + [mask | 1 << k])

    yield from grow([])
