"""Barycentric and canonical subdivisions and the subdivision functor."""
from __future__ import annotations

from typing import NamedTuple

from posetreal.errors import SizeBound
from posetreal.poset import MonotoneMap, Poset, _bits, dual

DEFAULT_SIZE_LIMIT = 200_000


class Interval(NamedTuple):
    """An element ``[lo, hi]`` of a canonical subdivision."""

    lo: object
    hi: object

    def __repr__(self):
        return f"[{self.lo!r},{self.hi!r}]"


def barycentric(P):
    """``P♭``: nonempty chains (cliques) as frozensets, ordered by inclusion."""
    chains = [frozenset(c) for c in P.chains()]
    chains.sort(key=len)
    index = {c: i for i, c in enumerate(chains)}
    down = []
    for c in chains:
        m = 0
        for d in chains:
            if len(d) > len(c):
                break
            if d <= c:
                m |= 1 << index[d]
        down.append(m)
    return Poset._from_down(chains, down)


def _intervals(P, keep=None):
    out = []
    for i, lo in enumerate(P.elements):
        for j in _bits(P.up[i]):
            hi = P.elements[j]
            if keep is None or keep(lo, hi):
                out.append(Interval(lo, hi))
    return out


def _interval_poset(P, intervals):
    index = {iv: k for k, iv in enumerate(intervals)}
    down = []
    for iv in intervals:
        s, t = P.index[iv.lo], P.index[iv.hi]
        m = 0
        for a in _bits(P.up[s] & P.down[t]):
            for b in _bits(P.up[a] & P.down[t]):
                k = index.get(Interval(P.elements[a], P.elements[b]))
                if k is not None:
                    m |= 1 << k
        down.append(m)
    return Poset._from_down(intervals, down)


def canonical(P):
    """``P#``: intervals ``[σ, τ]`` ordered by containment, ``[p, p]`` minimal."""
    P = P.closure()
    return _interval_poset(P, _intervals(P))


def canonical_preposet(P):
    """Intervals ``[σ, τ]`` of ``⟨P⟩`` whose endpoints lie in a common chain of ``P``.

    For a preposet this keeps ``σ = τ`` and the generating edges ``σ ≺ τ``;
    the order is the one induced from ``⟨P⟩#``.  For a poset it is ``P#``.
    """
    C = P.closure()
    return _interval_poset(C, _intervals(C, keep=P.related))


def h_dual(P):
    """``(P#)*``."""
    return dual(canonical(P))


def iterate_canonical(P, n, max_size=DEFAULT_SIZE_LIMIT):
    """``P^{#n}``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = P.closure()
    for _ in range(n):
        count = sum(bin(u).count("1") for u in out.up)
        if count > max_size:
            raise SizeBound(f"next subdivision would have {count} > {max_size} elements")
        out = canonical(out)
    return out


def subdiv_map(f, source=None, target=None):
    """``f#: [σ, τ] ↦ [f σ, f τ]`` between canonical subdivisions of the closures."""
    source = source if source is not None else canonical(f.source)
    target = target if target is not None else canonical(f.target)
    return MonotoneMap(source, target, {iv: Interval(f(iv.lo), f(iv.hi)) for iv in source.elements})


def interval_leq(level, a, b, leq):
    """Order of ``P^{#level}`` on nested intervals, given the order ``leq`` of ``P``.

    Useful when the iterated subdivision is too large to build.
    """
    if level == 0:
        return leq(a, b)
    return interval_leq(level - 1, b.lo, a.lo, leq) and interval_leq(level - 1, a.hi, b.hi, leq)
