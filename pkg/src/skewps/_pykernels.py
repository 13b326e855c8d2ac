"""Numpy implementation of the batched matrix-Laurent product.

Same contract as the compiled ``batch_mul``; used when the extension is not
built or when ``SKEWPS_PURE=1`` is set.
"""
from __future__ import annotations

import numpy as np

_SHIFT_CACHE: dict[tuple[int, int, int], tuple[np.ndarray, np.ndarray]] = {}


def _toeplitz_index(la: int, lb: int, L: int):
    key = (la, lb, L)
    hit = _SHIFT_CACHE.get(key)
    if hit is None:
        a = np.arange(la)[:, None]
        n = np.arange(L)[None, :]
        src = n - a
        valid = (src >= 0) & (src < lb)
        hit = (np.where(valid, src, lb), valid)
        _SHIFT_CACHE[key] = hit
    return hit


def batch_mul(A: np.ndarray, B: np.ndarray, L: int, p: int, red: np.ndarray) -> np.ndarray:
    nA, s, t, LA, k = A.shape
    nB, _, u, LB, _ = B.shape
    n = max(nA, nB)
    la = min(LA, L)
    if L <= 0 or la == 0 or LB == 0:
        return np.zeros((n, s, u, max(L, 0), k), dtype=np.int64)
    A = A[:, :, :, :la, :]
    idx, _ = _toeplitz_index(la, LB, L)
    # pad B with one zero slot so out-of-range shifts read zeros
    Bp = np.concatenate([B, np.zeros((nB, t, u, 1, k), dtype=np.int64)], axis=3)
    Bt = Bp[:, :, :, idx, :]  # (nB, t, u, la, L, k)
    raw = np.einsum("nilax,nljaby->nijbxy", np.broadcast_to(A, (n, s, t, la, k)),
                    np.broadcast_to(Bt, (n, t, u, la, L, k)), optimize=True)
    raw %= p
    comb = _combine(k, red)
    out = np.einsum("nijbxy,xyd->nijbd", raw, comb, optimize=True)
    return out % p


_COMB_CACHE: dict[bytes, np.ndarray] = {}


def _combine(k: int, red: np.ndarray) -> np.ndarray:
    key = red.tobytes() + bytes([k])
    hit = _COMB_CACHE.get(key)
    if hit is None:
        xs = np.arange(k)
        hit = red[xs[:, None] + xs[None, :]]  # (k, k, k)
        _COMB_CACHE[key] = hit
    return hit
