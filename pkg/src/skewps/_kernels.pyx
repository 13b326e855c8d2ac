# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loop: batched products of matrices over F_q((pi)).

Arrays hold F_p digit vectors on the last axis; axis -2 is the pi-exponent
offset.  Shapes: A (nA, s, t, LA, k), B (nB, t, u, LB, k) with nA, nB equal
or 1 (broadcast).  Result (n, s, u, L, k), truncated to L exponents.
"""
import numpy as np
cimport numpy as cnp

ctypedef long long i64


def batch_mul(const i64[:, :, :, :, :] A, const i64[:, :, :, :, :] B,
              Py_ssize_t L, i64 p, const i64[:, :] red):
    cdef Py_ssize_t nA = A.shape[0], nB = B.shape[0]
    cdef Py_ssize_t n = nA if nA > nB else nB
    cdef Py_ssize_t s = A.shape[1], t = A.shape[2], LA = A.shape[3], k = A.shape[4]
    cdef Py_ssize_t u = B.shape[2], LB = B.shape[3]
    cdef Py_ssize_t K2 = 2 * k - 1
    out = np.zeros((n, s, u, L, k), dtype=np.int64)
    cdef i64[:, :, :, :, ::1] O = out
    acc_arr = np.zeros((L, K2), dtype=np.int64)
    cdef i64[:, ::1] acc = acc_arr
    cdef Py_ssize_t b, ia, ib, i, j, l, a, x, bb, y, z, d, na, nb
    cdef i64 av, v
    na = LA if LA < L else L
    for b in range(n):
        ia = b if nA > 1 else 0
        ib = b if nB > 1 else 0
        for i in range(s):
            for j in range(u):
                for a in range(L):
                    for z in range(K2):
                        acc[a, z] = 0
                for l in range(t):
                    for a in range(na):
                        nb = L - a
                        if nb > LB:
                            nb = LB
                        for x in range(k):
                            av = A[ia, i, l, a, x]
                            if av == 0:
                                continue
                            for bb in range(nb):
                                for y in range(k):
                                    acc[a + bb, x + y] += av * B[ib, l, j, bb, y]
                for a in range(L):
                    for z in range(K2):
                        v = acc[a, z] % p
                        if v == 0:
                            continue
                        for d in range(k):
                            O[b, i, j, a, d] += v * red[z, d]
                    for d in range(k):
                        O[b, i, j, a, d] %= p
    return out
