"""Pure-Python bitset kernels (fallback for the compiled extension).

Bitsets are Python ints; bit ``j`` of ``rows[i]`` is the matrix entry (i, j).
"""


def gf2_rank(rows):
    """Rank over the two-element field of the rows given as int bitsets."""
    pivots = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = r
                rank += 1
                break
            r ^= p
    return rank


def reach_closure(succ):
    """Strict reachability: bit j of out[i] is set iff there is a path i -> j.

    ``succ`` must describe an acyclic digraph; cycles are reported by the caller.
    """
    n = len(succ)
    indeg = [0] * n
    for i in range(n):
        s = succ[i]
        while s:
            low = s & -s
            indeg[low.bit_length() - 1] += 1
            s ^= low
    order = [i for i in range(n) if indeg[i] == 0]
    k = 0
    while k < len(order):
        i = order[k]
        k += 1
        s = succ[i]
        while s:
            low = s & -s
            j = low.bit_length() - 1
            indeg[j] -= 1
            if indeg[j] == 0:
                order.append(j)
            s ^= low
    if len(order) != n:
        raise ValueError("digraph has a directed cycle")
    out = [0] * n
    for i in reversed(order):
        acc = succ[i]
        s = succ[i]
        while s:
            low = s & -s
            acc |= out[low.bit_length() - 1]
            s ^= low
        out[i] = acc
    return out
