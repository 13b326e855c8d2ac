"""Kernel selection: compiled extension when importable, numpy otherwise.

Set ``SKEWPS_PURE=1`` to force the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

BACKEND = "numpy"
_compiled = None
if os.environ.get("SKEWPS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _compiled = None


def batch_mul(A: np.ndarray, B: np.ndarray, L: int, p: int, red: np.ndarray) -> np.ndarray:
    """Batched product of (n, s, t, LA, k) and (n, t, u, LB, k) digit arrays."""
    if L <= 0:
        n = max(A.shape[0], B.shape[0])
        return np.zeros((n, A.shape[1], B.shape[2], 0, A.shape[4]), dtype=np.int64)
    if _compiled is not None:
        return _compiled.batch_mul(A, B, L, p, red)
    return _pykernels.batch_mul(A, B, L, p, red)
