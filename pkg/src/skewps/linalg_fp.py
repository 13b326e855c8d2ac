"""Dense linear algebra over the prime field F_p on int64 numpy arrays."""
from __future__ import annotations

import numpy as np


def _inv(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns only the nonzero rows and pivot columns."""
    R = np.array(A, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = (R[r] * _inv(R[r, c], p)) % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit] = (R[hit] - np.outer(col[hit], R[r])) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Rows spanning {x : A @ x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for n, f in enumerate(free):
        out[n, f] = 1
        for r, c in enumerate(piv):
            out[n, c] = (-R[r, f]) % p
    return out


def row_basis(U, p: int, width: int | None = None) -> np.ndarray:
    U = np.asarray(U, dtype=np.int64)
    if U.size == 0:
        w = width if width is not None else (U.shape[1] if U.ndim == 2 else 0)
        return np.zeros((0, w), dtype=np.int64)
    return rref(U, p)[0]


def intersect(U, V, p: int) -> np.ndarray:
    """Basis (rref) of rowspace(U) ∩ rowspace(V)."""
    U = np.asarray(U, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    width = U.shape[1] if U.ndim == 2 else V.shape[1]
    if U.shape[0] == 0 or V.shape[0] == 0:
        return np.zeros((0, width), dtype=np.int64)
    M = np.vstack([U, V])
    lam = nullspace(M.T, p)
    if lam.shape[0] == 0:
        return np.zeros((0, width), dtype=np.int64)
    W = (lam[:, : U.shape[0]] @ U) % p
    return row_basis(W, p, width)


def solve(A, b, p: int) -> np.ndarray | None:
    """One solution x of A @ x = b, or None."""
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    aug = np.hstack([A, b])
    R, piv = rref(aug, p)
    cols = A.shape[1]
    if cols in piv:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, cols]
    return x


def in_span(U, v, p: int) -> bool:
    U = np.asarray(U, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64) % p
    if not v.any():
        return True
    if U.shape[0] == 0:
        return False
    return rank(np.vstack([U, v]), p) == rank(U, p)


def same_space(U, V, p: int) -> bool:
    U = row_basis(U, p)
    V = row_basis(V, p)
    return U.shape == V.shape and bool(np.array_equal(U, V))


def inverse(A, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64) % p
    n = A.shape[0]
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)) or R.shape[0] < n:
        raise ZeroDivisionError("matrix is singular mod p")
    return R[:n, n:]


def batch_column_deficient(M: np.ndarray, p: int) -> np.ndarray:
    """For a stack (B, R, C) return a bool array: rank < C for each matrix."""
    M = np.array(M, dtype=np.int64) % p
    Bn, R, C = M.shape
    used = np.zeros((Bn, R), dtype=bool)
    deficient = np.zeros(Bn, dtype=bool)
    ar = np.arange(Bn)
    inv_tab = np.array([0] + [_inv(a, p) for a in range(1, p)], dtype=np.int64)
    for c in range(C):
        cand = (M[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        deficient |= ~has
        piv = np.argmax(cand, axis=1)
        live = has & ~deficient
        if not live.any():
            continue
        idx = ar[live]
        prow = piv[live]
        rows = M[idx, prow, :]
        rows = (rows * inv_tab[rows[:, c]][:, None]) % p
        M[idx, prow, :] = rows
        factors = M[idx, :, c].copy()
        factors[np.arange(idx.size), prow] = 0
        M[idx] = (M[idx] - factors[:, :, None] * rows[:, None, :]) % p
        used[idx, prow] = True
    return deficient
