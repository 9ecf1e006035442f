"""Simplicial homology over the two-element field."""
from __future__ import annotations

from itertools import combinations

from posetreal.kernels import gf2_rank
from posetreal.poset import Preposet


def order_complex(P):
    """Simplices of the order complex: the nonempty chains of ``P``."""
    return [frozenset(c) for c in P.chains()]


def closure_under_faces(simplices):
    """All nonempty faces of the given simplices."""
    out = set()
    for s in simplices:
        s = tuple(s)
        if frozenset(s) in out:
            continue
        for r in range(1, len(s) + 1):
            out.update(frozenset(c) for c in combinations(s, r))
    return out


class Complex:
    """Finite simplicial complex with faces indexed by dimension."""

    def __init__(self, simplices):
        faces = closure_under_faces(simplices)
        top = max((len(s) for s in faces), default=0) - 1
        self.faces = [
            sorted((s for s in faces if len(s) == k + 1), key=lambda s: sorted(map(repr, s)))
            for k in range(top + 1)
        ]
        self.index = [{s: i for i, s in enumerate(level)} for level in self.faces]

    @classmethod
    def of(cls, K):
        if isinstance(K, Complex):
            return K
        if isinstance(K, Preposet):
            return cls(order_complex(K))
        return cls(K)

    @property
    def dim(self):
        return len(self.faces) - 1

    def boundary_rows(self, k):
        """Rows of ``∂_k`` as bitsets over the ``(k-1)``-faces, one per ``k``-face."""
        if k <= 0 or k > self.dim:
            return []
        idx = self.index[k - 1]
        rows = []
        for s in self.faces[k]:
            m = 0
            for v in s:
                m |= 1 << idx[s - {v}]
            rows.append(m)
        return rows

    def boundary_of_chain(self, k, chain):
        idx = self.index[k - 1]
        m = 0
        for s in chain:
            for v in s:
                m ^= 1 << idx[frozenset(s) - {v}]
        return m

    def chain_mask(self, k, chain):
        m = 0
        for s in chain:
            m ^= 1 << self.index[k][frozenset(s)]
        return m


def z2_betti(K):
    """Betti numbers ``b_0, ..., b_dim`` over ℤ/2."""
    K = Complex.of(K)
    ranks = [gf2_rank(K.boundary_rows(k)) for k in range(K.dim + 2)]
    return [len(K.faces[k]) - ranks[k] - ranks[k + 1] for k in range(K.dim + 1)]


def z2_reduced_betti(K):
    b = z2_betti(K)
    if b:
        b[0] -= 1
    return b


def is_cycle(K, k, chain):
    K = Complex.of(K)
    return k == 0 or K.boundary_of_chain(k, chain) == 0


def is_boundary(K, k, chain):
    """True iff the ``k``-chain is the boundary of some ``(k+1)``-chain."""
    K = Complex.of(K)
    rows = K.boundary_rows(k + 1)
    c = K.chain_mask(k, chain)
    return gf2_rank(rows + [c]) == gf2_rank(rows)


def is_essential_cycle(K, k, chain):
    """A cycle that is not a boundary, i.e. a nonzero homology class."""
    K = Complex.of(K)
    return is_cycle(K, k, chain) and not is_boundary(K, k, chain)


__all__ = [
    "Complex",
    "order_complex",
    "closure_under_faces",
    "z2_betti",
    "z2_reduced_betti",
    "is_cycle",
    "is_boundary",
    "is_essential_cycle",
]
