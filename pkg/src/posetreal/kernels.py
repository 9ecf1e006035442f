"""Bitset kernel dispatch.

The compiled extension is used when it was built; set ``POSETREAL_PURE=1`` to
force the pure-Python fallback.
"""
import os

if os.environ.get("POSETREAL_PURE"):
    from posetreal import _kernels_py as _impl
else:
    try:
        from posetreal import _kernels as _impl
    except ImportError:
        from posetreal import _kernels_py as _impl

BACKEND = "python" if _impl.__name__.endswith("_py") else "cython"

gf2_rank = _impl.gf2_rank
reach_closure = _impl.reach_closure
