"""Kernel selection: compiled int64 kernels when available, Python otherwise.

Set ``ADELCOH_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

_LIMIT = 1 << 31

BACKEND = "python"
_c = None
if not os.environ.get("ADELCOH_PURE_PYTHON"):
    try:
        from . import _ckernels as _c  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _c = None


def _small(rows) -> bool:
    return all(-_LIMIT < x < _LIMIT for r in rows for x in r)


def rank(rows: list[list[int]]) -> int:
    """Rank over Q of an integer matrix."""
    if not rows or not rows[0]:
        return 0
    if _c is not None and _small(rows):
        r = _c.bareiss_rank(rows)
        if r >= 0:
            return r
    return _kernels_py.bareiss_rank(rows)


def matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if _c is not None and a and b and b[0] and _small(a) and _small(b):
        out = _c.matmul(a, b)
        if out is not None:
            return out
    return _kernels_py.matmul(a, b)
