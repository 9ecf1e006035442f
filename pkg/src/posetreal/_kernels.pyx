# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitset kernels; same contract as ``_kernels_py``.

Rows are packed little-endian into uint64 words.
"""
from libc.stdint cimport uint64_t
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy


cdef uint64_t* _pack(list rows, Py_ssize_t nwords) except NULL:
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i
    cdef bytes raw
    cdef uint64_t* buf = <uint64_t*>calloc(max(n * nwords, 1), sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        raw = (<object>rows[i]).to_bytes(nwords * 8, "little")
        memcpy(&buf[i * nwords], <char*>raw, nwords * 8)
    return buf


cdef list _unpack(uint64_t* buf, Py_ssize_t n, Py_ssize_t nwords):
    cdef Py_ssize_t i
    out = []
    for i in range(n):
        out.append(int.from_bytes((<char*>&buf[i * nwords])[:nwords * 8], "little"))
    return out


def gf2_rank(rows):
    rows = [r for r in rows if r]
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return 0
    cdef Py_ssize_t ncols = max(r.bit_length() for r in rows)
    cdef Py_ssize_t nw = (ncols + 63) // 64
    cdef uint64_t* buf = _pack(rows, nw)
    cdef Py_ssize_t rank = 0, col, w, piv, ri, k
    cdef uint64_t bit, tmp
    try:
        for col in range(ncols):
            if rank == n:
                break
            w = col >> 6
            bit = (<uint64_t>1) << (col & 63)
            piv = -1
            for ri in range(rank, n):
                if buf[ri * nw + w] & bit:
                    piv = ri
                    break
            if piv < 0:
                continue
            if piv != rank:
                for k in range(nw):
                    tmp = buf[piv * nw + k]
                    buf[piv * nw + k] = buf[rank * nw + k]
                    buf[rank * nw + k] = tmp
            for ri in range(rank + 1, n):
                if buf[ri * nw + w] & bit:
                    for k in range(w, nw):
                        buf[ri * nw + k] ^= buf[rank * nw + k]
            rank += 1
    finally:
        free(buf)
    return rank


def reach_closure(succ):
    succ = list(succ)
    cdef Py_ssize_t n = len(succ)
    if n == 0:
        return []
    cdef Py_ssize_t nw = (n + 63) // 64
    cdef uint64_t* buf = _pack(succ, nw)
    cdef Py_ssize_t i, k, w, q
    cdef uint64_t bit
    try:
        for k in range(n):
            w = k >> 6
            bit = (<uint64_t>1) << (k & 63)
            for i in range(n):
                if buf[i * nw + w] & bit:
                    for q in range(nw):
                        buf[i * nw + q] |= buf[k * nw + q]
        for i in range(n):
            if buf[i * nw + (i >> 6)] & ((<uint64_t>1) << (i & 63)):
                raise ValueError("digraph has a directed cycle")
        return _unpack(buf, n, nw)
    finally:
        free(buf)
