"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
module stands in. Set ``DELTAIDX_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("DELTAIDX_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _u8(a):
    return np.ascontiguousarray(a, dtype=np.uint8)


def rle_boundaries(seq, active):
    return _impl.rle_boundaries(_i64(seq), _u8(active))


def bc_boundaries(seq, active, rank):
    return _impl.bc_boundaries(_i64(seq), _u8(active), _i64(rank))


def suffix_array(text):
    return _impl.suffix_array(_i64(text))


def lcp_array(text, sa):
    return _impl.lcp_array(_i64(text), _i64(sa))


def distinct_counts(sa, lcp):
    return _impl.distinct_counts(_i64(sa), _i64(lcp))


def failure_function(seq):
    return _impl.failure_function(_i64(seq))


def shortest_period(seq):
    """Smallest ``p`` such that ``seq`` is a prefix of ``seq[:p]`` repeated."""
    if len(seq) == 0:
        return 0
    fail = failure_function(seq)
    return len(seq) - int(fail[-1])


def backend_module(name):
    """Return the kernel module for ``"cython"`` or ``"python"`` (benchmarks, tests)."""
    if name == "python":
        return _pykernels
    from . import _ckernels
    return _ckernels
