"""Finite-dimensional crossed products A * Z/p^m over F_p.

Everything is restriction of scalars to F_p: an F_q-algebra of dimension d is
an F_p-algebra of dimension d*k with structure tensor T, e_i e_j = sum_k
T[i, j, k] e_k.  Vectors are rows; sigma acts as v -> v @ S.

In R = A * Z/P the basis element e_i g^a has index a*n + i, so the g-support
of a vector is the set of blocks with a nonzero entry.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg_fp as la
from .errors import BaseNotPrime, HypothesisFail, InstanceError, TooLarge, ZeroIdeal
from .fields import GF, field as gf_field

EXHAUSTIVE_CAP = 1 << 16
LATTICE_CAP = 1 << 12


class FdAlgebra:
    def __init__(self, p: int, T: np.ndarray, unit: np.ndarray, sigma: np.ndarray | None = None,
                 name: str = "", check: bool = True):
        self.p = p
        self.T = np.asarray(T, dtype=np.int64) % p
        self.n = self.T.shape[0]
        self.unit = np.asarray(unit, dtype=np.int64) % p
        self.S = np.eye(self.n, dtype=np.int64) if sigma is None else np.asarray(sigma, dtype=np.int64) % p
        self.name = name
        if check:
            self.check()

    def __repr__(self):
        return f"FdAlgebra({self.name or 'dim ' + str(self.n)} over F_{self.p})"

    @property
    def size(self) -> int:
        return self.p**self.n

    def basis(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.int64)

    def zero(self) -> np.ndarray:
        return np.zeros(self.n, dtype=np.int64)

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.T) % self.p

    def mul_batch(self, X, Y) -> np.ndarray:
        return np.einsum("bi,bj,ijk->bk", X, Y, self.T) % self.p

    def left_matrix(self, x) -> np.ndarray:
        """M with x*y = y @ M."""
        return np.einsum("i,ijk->jk", x, self.T) % self.p

    def right_matrix(self, x) -> np.ndarray:
        """M with y*x = y @ M."""
        return np.einsum("j,ijk->ik", x, self.T) % self.p

    def sigma(self, x) -> np.ndarray:
        return (np.asarray(x) @ self.S) % self.p

    def power(self, x, e: int) -> np.ndarray:
        out = self.unit.copy()
        base = np.asarray(x) % self.p
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    # structure checks -----------------------------------------------------------------
    def check(self):
        p, T = self.p, self.T
        lhs = np.einsum("ijm,mkl->ijkl", T, T) % p
        rhs = np.einsum("jkm,iml->ijkl", T, T) % p
        if not np.array_equal(lhs, rhs):
            raise InstanceError("structure constants are not associative")
        E = self.basis()
        if not all(np.array_equal(self.mul(self.unit, e), e) and np.array_equal(self.mul(e, self.unit), e)
                   for e in E):
            raise InstanceError("declared unit is not a two-sided identity")
        if la.rank(self.S, p) != self.n:
            raise InstanceError("sigma is not invertible")
        if not np.array_equal(self.sigma(self.unit), self.unit):
            raise InstanceError("sigma does not fix 1")
        SE = self.S  # rows: sigma(e_i)
        lhs = np.einsum("ijm,mk->ijk", T, SE) % p
        rhs = np.einsum("ia,jb,abk->ijk", SE, SE, T) % p
        if not np.array_equal(lhs, rhs):
            raise InstanceError("sigma is not multiplicative on basis pairs")

    def centre(self) -> np.ndarray:
        """Basis of Z: x with x e_j = e_j x for all j."""
        # x e_j - e_j x = sum_i x_i (T[i,j,:] - T[j,i,:])
        D = (self.T - self.T.transpose(1, 0, 2)) % self.p  # (i, j, k)
        M = D.reshape(self.n, -1)  # rows indexed by i
        return la.nullspace(M.T, self.p)

    def fixed_space(self) -> np.ndarray:
        return la.nullspace((self.S - np.eye(self.n, dtype=np.int64)).T % self.p, self.p)

    def elements(self):
        for t in itertools.product(range(self.p), repeat=self.n):
            yield np.array(t, dtype=np.int64)

    def is_unit(self, x) -> bool:
        return la.rank(self.left_matrix(x), self.p) == self.n

    def is_nilpotent(self, x) -> bool:
        y = np.asarray(x) % self.p
        for _ in range(self.n + 1):
            if not y.any():
                return True
            y = self.mul(y, x)
        return not y.any()

    # presets ------------------------------------------------------------------------------
    @classmethod
    def finite_field(cls, F: GF, frobenius: int = 0) -> "FdAlgebra":
        k, p = F.k, F.p
        T = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                T[i, j] = F.digits(F.mul(F.pow(F.theta() or 1, i) if k > 1 else 1,
                                         F.pow(F.theta() or 1, j) if k > 1 else 1))
        unit = np.zeros(k, dtype=np.int64)
        unit[0] = 1
        S = F.frob_matrix(frobenius % k) if k > 1 else np.eye(1, dtype=np.int64)
        return cls(p, T, unit, S, name=f"F_{F.q}" + (f" frob^{frobenius}" if frobenius % k else ""))

    @classmethod
    def matrix_algebra(cls, s: int, F: GF, conj: np.ndarray | None = None) -> "FdAlgebra":
        """M_s(F_q); conj (codes) gives sigma = conjugation by that invertible matrix."""
        k, p = F.k, F.p
        n = s * s * k
        idx = lambda a, b, d: (a * s + b) * k + d  # noqa: E731
        T = np.zeros((n, n, n), dtype=np.int64)
        th = [F.pow(F.theta(), d) if k > 1 else 1 for d in range(k)]
        for a, b, d1, c, e, d2 in itertools.product(range(s), range(s), range(k), range(s), range(s), range(k)):
            if b != c:
                continue
            dig = F.digits(F.mul(th[d1], th[d2]))
            for d3 in range(k):
                T[idx(a, b, d1), idx(c, e, d2), idx(a, e, d3)] = dig[d3]
        unit = np.zeros(n, dtype=np.int64)
        for a in range(s):
            unit[idx(a, a, 0)] = 1
        alg = cls(p, T, unit, None, name=f"M_{s}(F_{F.q})", check=False)
        if conj is not None:
            U = _matrix_element(alg, np.asarray(conj), F, s)
            Uinv = _inverse_element(alg, U)
            S = np.array([alg.mul(alg.mul(U, e), Uinv) for e in alg.basis()], dtype=np.int64)
            alg.S = S
            alg.name += " conj"
        alg.check()
        return alg


def _matrix_element(alg: FdAlgebra, codes: np.ndarray, F: GF, s: int) -> np.ndarray:
    v = np.zeros(alg.n, dtype=np.int64)
    for a in range(s):
        for b in range(s):
            v[(a * s + b) * F.k:(a * s + b + 1) * F.k] = F.digits(int(codes[a, b]))
    return v


def _inverse_element(alg: FdAlgebra, x: np.ndarray) -> np.ndarray:
    y = la.solve(alg.left_matrix(x).T, alg.unit, alg.p)
    if y is None:
        raise InstanceError("element is not invertible")
    return y % alg.p


class FdCrossed:
    """R = A * Z/p^m with g a = sigma(a) g and g^(p^m) = gamma."""

    def __init__(self, A: FdAlgebra, m: int, gamma: np.ndarray | None = None, name: str = ""):
        self.A = A
        self.p = A.p
        self.m = m
        self.P = self.p**m
        self.n = A.n
        self.N = self.n * self.P
        self.gamma = A.unit.copy() if gamma is None else np.asarray(gamma, dtype=np.int64) % self.p
        self.name = name or f"{A.name}*Z/{self.P}"
        self._validate()
        self.alg = FdAlgebra(self.p, self._structure(), self._unit(), self._sigma_ext(),
                             name=self.name, check=True)

    def __repr__(self):
        return f"FdCrossed({self.name})"

    def _validate(self):
        A, P = self.A, self.P
        if not np.array_equal(A.sigma(self.gamma), self.gamma):
            raise InstanceError("g^(p^m) must be fixed by sigma")
        if not A.is_unit(self.gamma):
            raise InstanceError("g^(p^m) must be a unit of A")
        SP = np.linalg.matrix_power(A.S, P) % self.p if P > 1 else np.eye(A.n, dtype=np.int64)
        for e in A.basis():
            # g^P a = sigma^P(a) g^P forces sigma^P(a) gamma = gamma a
            if not np.array_equal(A.mul((e @ SP) % self.p, self.gamma), A.mul(self.gamma, e)):
                raise InstanceError("sigma^(p^m) is not conjugation by g^(p^m)")

    def _structure(self) -> np.ndarray:
        A, P, n, p = self.A, self.P, self.n, self.p
        N = self.N
        T = np.zeros((N, N, N), dtype=np.int64)
        Gr = A.right_matrix(self.gamma)
        Spow = [np.eye(n, dtype=np.int64)]
        for _ in range(1, P):
            Spow.append((Spow[-1] @ A.S) % p)
        for a in range(P):
            # e_i * sigma^a(e_j)
            prod = np.einsum("jk,ikl->ijl", Spow[a], A.T) % p
            for b in range(P):
                c = a + b
                blk = prod
                if c >= P:
                    c -= P
                    blk = (prod @ Gr) % p
                T[a * n:(a + 1) * n, b * n:(b + 1) * n, c * n:(c + 1) * n] = blk
        return T

    def _unit(self) -> np.ndarray:
        u = np.zeros(self.N, dtype=np.int64)
        u[: self.n] = self.A.unit
        return u

    def _sigma_ext(self) -> np.ndarray:
        """Conjugation by g, blockwise sigma (g a g^i g^-1 = sigma(a) g^i)."""
        S = np.zeros((self.N, self.N), dtype=np.int64)
        for a in range(self.P):
            S[a * self.n:(a + 1) * self.n, a * self.n:(a + 1) * self.n] = self.A.S
        return S

    # element helpers --------------------------------------------------------------------
    def g_power(self, i: int) -> np.ndarray:
        i %= self.P
        v = np.zeros(self.N, dtype=np.int64)
        v[i * self.n: i * self.n + self.n] = self.A.unit
        return v

    def from_blocks(self, blocks: dict[int, np.ndarray]) -> np.ndarray:
        v = np.zeros(self.N, dtype=np.int64)
        for i, b in blocks.items():
            v[i * self.n:(i + 1) * self.n] = np.asarray(b) % self.p
        return v

    def block(self, v, i: int) -> np.ndarray:
        return np.asarray(v)[i * self.n:(i + 1) * self.n]

    def support(self, v) -> tuple[int, ...]:
        v = np.asarray(v).reshape(self.P, self.n)
        return tuple(int(i) for i in np.flatnonzero(v.any(axis=1)))

    def embed_A(self, a) -> np.ndarray:
        return self.from_blocks({0: a})

    def mul(self, x, y) -> np.ndarray:
        return self.alg.mul(x, y)

    def power(self, x, e: int) -> np.ndarray:
        return self.alg.power(x, e)

    def is_central(self, x) -> bool:
        return all(np.array_equal(self.mul(x, e), self.mul(e, x)) for e in self.alg.basis())

    def A_subspace(self) -> np.ndarray:
        return np.eye(self.N, dtype=np.int64)[: self.n]

    def block_subspace(self, S) -> np.ndarray:
        rows = [np.eye(self.N, dtype=np.int64)[i * self.n + j] for i in S for j in range(self.n)]
        return np.array(rows, dtype=np.int64).reshape(-1, self.N)

    def subring(self) -> "FdCrossed":
        """S = A * <g^p>, the crossed product with sigma^p and exponent m - 1."""
        if self.m == 0:
            raise InstanceError("no g^p-subring when m = 0")
        A = self.A
        Sp = np.linalg.matrix_power(A.S, self.p) % self.p
        A2 = FdAlgebra(self.p, A.T, A.unit, Sp, name=A.name, check=False)
        return FdCrossed(A2, self.m - 1, self.gamma, name=f"{A.name}*<g^{self.p}>")

    def subring_embedding(self) -> np.ndarray:
        """Matrix E with iota(s) = s @ E from S-coordinates to R-coordinates."""
        sub_P = self.P // self.p
        E = np.zeros((sub_P * self.n, self.N), dtype=np.int64)
        for b in range(sub_P):
            for j in range(self.n):
                E[b * self.n + j, (b * self.p) * self.n + j] = 1
        return E

    # presets ---------------------------------------------------------------------------------
    @classmethod
    def group_algebra(cls, p: int, m: int, k: int = 1) -> "FdCrossed":
        F = gf_field(p, k)
        return cls(FdAlgebra.finite_field(F), m, name=f"F_{F.q}[Z/{p**m}]")

    @classmethod
    def matrix(cls, s: int, p: int, k: int = 1, m: int = 0, conj=None, gamma_codes=None) -> "FdCrossed":
        F = gf_field(p, k)
        A = FdAlgebra.matrix_algebra(s, F, None if conj is None else np.asarray(conj))
        gamma = None if gamma_codes is None else _matrix_element(A, np.asarray(gamma_codes), F, s)
        name = f"M_{s}(F_{F.q})" + (f"*Z/{p**m}" if m else "")
        return cls(A, m, gamma, name=name)

    @classmethod
    def twisted(cls, p: int, k: int, gpow: int, m: int = 1, frobenius: int = 1) -> "FdCrossed":
        """F_q^t[Z/p^m]: sigma = Frob^frobenius, g^(p^m) = gpow (a field code)."""
        F = gf_field(p, k)
        A = FdAlgebra.finite_field(F, frobenius)
        gamma = F.digits(gpow)
        return cls(A, m, gamma, name=f"F_{F.q}^t[Z/{p**m}] g^{p**m}={gpow}")


def preset(spec: str) -> FdCrossed:
    """'group-algebra p m [k]', 'matrix s q', 'twisted q gpow [m] [r]'."""
    parts = spec.split()
    kind, args = parts[0], [int(a) for a in parts[1:]]
    if kind == "group-algebra":
        return FdCrossed.group_algebra(args[0], args[1], args[2] if len(args) > 2 else 1)
    if kind == "matrix":
        s, q = args[0], args[1]
        p, k = _prime_power(q)
        return FdCrossed.matrix(s, p, k)
    if kind == "twisted":
        q, gpow = args[0], args[1]
        p, k = _prime_power(q)
        m = args[2] if len(args) > 2 else 1
        r = args[3] if len(args) > 3 else 1
        return FdCrossed.twisted(p, k, gpow, m, r)
    raise InstanceError(f"unknown preset {kind!r}")


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                raise InstanceError(f"{q} is not a prime power")
            return p, k
    raise InstanceError(f"{q} is not a prime power")


# ------------------------------------------------------------------------------------
# ideals

@dataclass
class FdIdeal:
    alg: FdAlgebra
    basis: np.ndarray  # reduced row echelon rows

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, v) -> bool:
        return la.in_span(self.basis, v, self.alg.p) if self.dim else not np.asarray(v).any()

    def __le__(self, other: "FdIdeal") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        return isinstance(other, FdIdeal) and np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash((self.basis.shape, self.basis.tobytes()))

    def __add__(self, other: "FdIdeal") -> "FdIdeal":
        return FdIdeal(self.alg, _rb(np.vstack([self.basis, other.basis]), self.alg))

    def __mul__(self, other: "FdIdeal") -> "FdIdeal":
        if self.is_zero() or other.is_zero():
            return FdIdeal(self.alg, _rb(np.zeros((0, self.alg.n), dtype=np.int64), self.alg))
        prods = np.einsum("ai,bj,ijk->abk", self.basis, other.basis, self.alg.T) % self.alg.p
        return FdIdeal(self.alg, _rb(prods.reshape(-1, self.alg.n), self.alg))

    def intersect(self, other: "FdIdeal") -> "FdIdeal":
        return FdIdeal(self.alg, _rb(la.intersect(self.basis, other.basis, self.alg.p), self.alg))

    def is_two_sided(self) -> bool:
        return closure_of_rows(self.alg, self.basis).shape[0] == self.dim

    def is_nilpotent(self) -> bool:
        J = self
        for _ in range(self.alg.n + 1):
            if J.is_zero():
                return True
            J = J * self
        return J.is_zero()

    def elements(self):
        for c in itertools.product(range(self.alg.p), repeat=self.dim):
            yield (np.array(c, dtype=np.int64) @ self.basis) % self.alg.p if self.dim else np.zeros(self.alg.n, dtype=np.int64)


def _rb(rows, alg: FdAlgebra) -> np.ndarray:
    return la.row_basis(np.asarray(rows, dtype=np.int64).reshape(-1, alg.n), alg.p, width=alg.n)


def closure_of_rows(alg: FdAlgebra, rows) -> np.ndarray:
    V = _rb(rows, alg)
    while True:
        if V.shape[0] == 0:
            return V
        left = np.einsum("rj,ijk->rik", V, alg.T).reshape(-1, alg.n)  # e_i * v
        right = np.einsum("ri,ijk->rjk", V, alg.T).reshape(-1, alg.n)  # v * e_j
        W = _rb(np.vstack([V, left % alg.p, right % alg.p]), alg)
        if W.shape[0] == V.shape[0]:
            return W
        V = W


def ideal_closure(gens, R) -> FdIdeal:
    alg = R.alg if isinstance(R, FdCrossed) else R
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, alg.n)
    return FdIdeal(alg, closure_of_rows(alg, gens))


def whole(R) -> FdIdeal:
    alg = R.alg if isinstance(R, FdCrossed) else R
    return FdIdeal(alg, np.eye(alg.n, dtype=np.int64))


def zero_ideal(R) -> FdIdeal:
    alg = R.alg if isinstance(R, FdCrossed) else R
    return FdIdeal(alg, np.zeros((0, alg.n), dtype=np.int64))


def minimal_support_element(I: FdIdeal, R: FdCrossed) -> np.ndarray:
    """First support set (by size, then lexicographic) meeting I, and the first rref vector there."""
    if I.is_zero():
        raise ZeroIdeal("minimal support of the zero ideal")
    for size in range(1, R.P + 1):
        for S in itertools.combinations(range(R.P), size):
            W = R.block_subspace(S)
            X = la.intersect(I.basis, W, R.p)
            if X.shape[0]:
                return _rb(X, R.alg)[0]
    raise ZeroIdeal("no nonzero element found")


def minimal_elements(I: FdIdeal, R: FdCrossed) -> list[np.ndarray]:
    """All nonzero elements of I of minimal support size (exhaustive)."""
    v = minimal_support_element(I, R)
    size = len(R.support(v))
    out = []
    for S in itertools.combinations(range(R.P), size):
        X = la.intersect(I.basis, R.block_subspace(S), R.p)
        if X.shape[0]:
            for c in itertools.product(range(R.p), repeat=X.shape[0]):
                w = (np.array(c) @ X) % R.p
                if w.any():
                    out.append(w)
    return out


def p1_witness(I_basis, A: FdAlgebra) -> np.ndarray | None:
    """Nonzero element of I ∩ Z(A) ∩ A^sigma, or None."""
    I_basis = np.asarray(I_basis, dtype=np.int64).reshape(-1, A.n)
    if I_basis.shape[0] == 0:
        return None
    X = la.intersect(I_basis, A.centre(), A.p)
    if X.shape[0] == 0:
        return None
    X = la.intersect(X, A.fixed_space(), A.p)
    if X.shape[0] == 0:
        return None
    return _rb(X, A)[0]


def a_ideals_sigma_stable(A: FdAlgebra) -> list[np.ndarray]:
    """Nonzero sigma-stable two-sided ideals of A (exhaustive over principal ideals and sums)."""
    lattice = ideal_lattice(A)
    out = []
    for J in lattice:
        if J.is_zero():
            continue
        img = (J.basis @ A.S) % A.p
        if la.same_space(img, J.basis, A.p):
            out.append(J.basis)
    return out


def check_p1(A: FdAlgebra) -> bool:
    return all(p1_witness(J, A) is not None for J in a_ideals_sigma_stable(A))


@dataclass
class CentralMinimalResult:
    element: np.ndarray | None
    trace: list[str] = field(default_factory=list)
    ok: bool = False
    failed_step: str | None = None


def central_minimal_with_p_nilpotence(I: FdIdeal, R: FdCrossed) -> CentralMinimalResult:
    """Minimal central a in I with a_0 != 0, a^p = 0 and support on multiples of p^(m-1)."""
    res = CentralMinimalResult(None)
    if I.is_zero():
        raise ZeroIdeal("ideal is zero")
    A_part = la.intersect(I.basis, R.A_subspace(), R.p)
    if A_part.shape[0]:
        raise HypothesisFail("I ∩ A != 0", stage="I∩A")
    c = minimal_support_element(I, R)
    supp = R.support(c)
    res.trace.append(f"minimal element support {list(supp)}")
    j = supp[0]
    if j:
        c = R.mul(c, R.g_power(R.P - j))
        supp = R.support(c)
        res.trace.append(f"shifted by g^{R.P - j}: support {list(supp)}")
    W = la.intersect(I.basis, R.block_subspace(supp), R.p)
    C0 = _rb(W[:, : R.n], R.A)
    if not la.same_space((C0 @ R.A.S) % R.p, C0, R.p):
        res.failed_step = "C0 not sigma-stable"
        return res
    z = p1_witness(C0, R.A)
    if z is None:
        raise HypothesisFail("(P1) fails on the ideal C0", stage="P1")
    res.trace.append(f"C0 has dimension {C0.shape[0]}; witness z = {z.tolist()}")
    # a in W with block 0 equal to z
    coeffs = la.solve(W[:, : R.n].T, z, R.p)
    if coeffs is None:
        res.failed_step = "no element with a_0 = z"
        return res
    a = (coeffs @ W) % R.p
    if len(R.support(a)) != len(supp):
        res.failed_step = "element with a_0 = z is not minimal"
        return res
    if not R.is_central(a):
        res.failed_step = "element with central sigma-fixed a_0 is not central"
        return res
    res.trace.append(f"central minimal element {a.tolist()}")
    for step in range(R.m + 1):
        ap = R.power(a, R.p)
        if not ap.any():
            break
        if len(R.support(ap)) != len(R.support(a)):
            res.failed_step = "p-th power changed the support size"
            return res
        a = ap
        res.trace.append(f"replaced by its p-th power: support {list(R.support(a))}")
    else:
        res.failed_step = "a^(p^m) != 0"
        return res
    q = R.P // R.p
    b = a.copy()
    for i in range(R.P):
        if i % q:
            b[i * R.n:(i + 1) * R.n] = 0
    if R.power(b, R.p).any():
        res.failed_step = "projection b has b^p != 0"
        return res
    if not I.contains(b):
        res.failed_step = "projection b is not in I"
        res.element = a
        return res
    if not b[: R.n].any():
        res.failed_step = "b_0 = 0"
        return res
    res.element = b
    res.ok = True
    res.trace.append(f"projected to multiples of {q}: {b.tolist()}")
    return res


# ------------------------------------------------------------------------------------
# nilradical and primality

def _mat_lift_power_trace(M: np.ndarray, e: int, mod: int) -> int:
    X = np.eye(M.shape[0], dtype=object)
    B = M.astype(object)
    while e:
        if e & 1:
            X = (X @ B) % mod
        e >>= 1
        if e:
            B = (B @ B) % mod
    return int(np.trace(X)) % mod


def radical(alg: FdAlgebra) -> FdIdeal:
    """Jacobson radical over F_p by the iterated trace method.

    I_{-1} = R, I_i = {x in I_{i-1} : g_i(x y) = 0 for all basis y}, with
    g_i(a) = (Tr(A^(p^i)) mod p^(i+1)) / p^i for A the integer lift of the
    left regular matrix of a.
    """
    p, n = alg.p, alg.n
    V = np.eye(n, dtype=np.int64)
    i = 0
    while p**i <= n and V.shape[0]:
        mod = p ** (i + 1)
        G = np.zeros((V.shape[0], n), dtype=np.int64)
        for a, v in enumerate(V):
            for b, e in enumerate(np.eye(n, dtype=np.int64)):
                Lxy = alg.left_matrix(alg.mul(v, e)).T  # column convention
                G[a, b] = _mat_lift_power_trace(Lxy, p**i, mod) // p**i
        K = la.nullspace(G.T % p, p)  # coefficient vectors c with c @ G = 0
        V = _rb((K @ V) % p if K.shape[0] else np.zeros((0, n), dtype=np.int64), alg)
        i += 1
    return FdIdeal(alg, V)


def radical_bruteforce(alg: FdAlgebra) -> FdIdeal:
    """x in J iff 1 - r x is a unit for every r (exhaustive)."""
    if alg.size > EXHAUSTIVE_CAP:
        raise TooLarge(f"{alg.size} elements")
    elems = list(alg.elements())
    J = []
    for x in elems:
        if all(alg.is_unit((alg.unit - alg.mul(r, x)) % alg.p) for r in elems):
            J.append(x)
    return FdIdeal(alg, _rb(np.array(J), alg))


def is_prime_fd(R, batch: int = 4096) -> bool:
    """x R y != 0 for all nonzero x, y: for each projective x, y -> (x e_k y)_k is injective."""
    alg = R.alg if isinstance(R, FdCrossed) else R
    p, n = alg.p, alg.n
    if alg.size > EXHAUSTIVE_CAP:
        raise TooLarge(f"p^N = {alg.size} exceeds the exhaustive cap")
    # U[i,k,j,c] = (e_i e_k e_j)_c
    U = np.einsum("ikm,mjc->ikjc", alg.T, alg.T) % p
    pts = _projective_points(p, n)
    for s in range(0, len(pts), batch):
        X = pts[s:s + batch]
        M = np.einsum("bi,ikjc->bkcj", X, U).reshape(len(X), n * n, n) % p
        if la.batch_column_deficient(M, p).any():
            return False
    return True


def _projective_points(p: int, n: int) -> np.ndarray:
    """Vectors with first nonzero entry 1."""
    rows = []
    for lead in range(n):
        rest = n - lead - 1
        tails = np.array(list(itertools.product(range(p), repeat=rest)), dtype=np.int64).reshape(p**rest, rest)
        block = np.zeros((tails.shape[0], n), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = tails
        rows.append(block)
    return np.vstack(rows)


def nilradical_fd(R: FdCrossed, check_base: bool = True) -> FdIdeal:
    """Largest nilpotent ideal; asserts nilpotency and P ∩ A = 0."""
    if check_base:
        if R.A.size > EXHAUSTIVE_CAP:
            raise TooLarge("base too large for the primality check")
        if not is_prime_fd(R.A):
            raise BaseNotPrime(f"{R.A.name} is not prime")
    J = radical(R.alg)
    if not J.is_nilpotent():
        raise InstanceError("computed radical is not nilpotent")
    if J.dim and la.intersect(J.basis, R.A_subspace(), R.p).shape[0]:
        raise InstanceError("radical meets A")
    return J


# ------------------------------------------------------------------------------------
# ideal lattices and the contraction/extension maps

def ideal_lattice(R, cap: int = LATTICE_CAP) -> list[FdIdeal]:
    """All two-sided ideals: principal ideals of every projective point, closed under sums."""
    alg = R.alg if isinstance(R, FdCrossed) else R
    if alg.size > cap:
        raise TooLarge(f"{alg.size} elements exceeds the lattice cap {cap}")
    found: dict[bytes, FdIdeal] = {}
    zero = zero_ideal(alg)
    found[zero.basis.tobytes() + b"0"] = zero
    for v in _projective_points(alg.p, alg.n):
        I = FdIdeal(alg, closure_of_rows(alg, v[None, :]))
        found.setdefault(_key(I), I)
    changed = True
    while changed:
        changed = False
        items = list(found.values())
        for a, b in itertools.combinations(items, 2):
            s = a + b
            k = _key(s)
            if k not in found:
                found[k] = s
                changed = True
    return sorted(found.values(), key=lambda I: (I.dim, I.basis.tobytes()))


def _key(I: FdIdeal) -> bytes:
    return I.basis.tobytes() + bytes([I.dim])


def contract(I: FdIdeal, R: FdCrossed, S: FdCrossed) -> FdIdeal:
    """Phi(I) = I ∩ S, in S-coordinates."""
    E = R.subring_embedding()
    X = la.intersect(I.basis, E, R.p)
    if X.shape[0] == 0:
        return zero_ideal(S)
    # X rows lie in the image: read off S-coordinates at the embedded columns
    cols = E.argmax(axis=1)
    return FdIdeal(S.alg, _rb(X[:, cols], S.alg))


def extend(J: FdIdeal, R: FdCrossed, S: FdCrossed) -> FdIdeal:
    """Psi(J) = J R, the right R-span of the image of J."""
    if J.is_zero():
        return zero_ideal(R)
    E = R.subring_embedding()
    img = (J.basis @ E) % R.p
    prods = np.einsum("ri,ijk->rjk", img, R.alg.T).reshape(-1, R.N) % R.p
    return FdIdeal(R.alg, _rb(prods, R.alg))


def g_stable(J: FdIdeal, R: FdCrossed, S: FdCrossed) -> bool:
    """g J g^{-1} = J, i.e. J is stable under sigma applied blockwise in S."""
    img = (J.basis @ S.alg.S) % S.p if J.dim else J.basis
    return la.same_space(img, J.basis, S.p)


@dataclass
class PhiPsiReport:
    ideals_R: int
    ideals_S: int
    psi_phi_identity: bool
    phi_psi_identity: bool
    inclusion: bool
    phi_products: bool
    psi_products: bool
    psi_two_sided: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return all([self.psi_phi_identity, self.phi_psi_identity, self.inclusion,
                    self.phi_products, self.psi_products, self.psi_two_sided])


def phi_psi_check(R: FdCrossed) -> PhiPsiReport:
    S = R.subring()
    LR = ideal_lattice(R)
    LS = [J for J in ideal_lattice(S) if g_stable(J, R, S)]
    fails: list[str] = []
    psi_two = all(extend(J, R, S).is_two_sided() for J in LS)
    psi_phi = True
    for I in LR:
        if extend(contract(I, R, S), R, S) != I:
            psi_phi = False
            fails.append(f"Psi(Phi(I)) != I for dim {I.dim}")
    phi_psi = True
    for J in LS:
        if contract(extend(J, R, S), R, S) != J:
            phi_psi = False
            fails.append(f"Phi(Psi(J)) != J for dim {J.dim}")
    incl = True
    for I, I2 in itertools.product(LR, repeat=2):
        if I <= I2 and not contract(I, R, S) <= contract(I2, R, S):
            incl = False
    for J, J2 in itertools.product(LS, repeat=2):
        if J <= J2 and not extend(J, R, S) <= extend(J2, R, S):
            incl = False
    phi_prod = all(contract(I * I2, R, S) == contract(I, R, S) * contract(I2, R, S)
                   for I, I2 in itertools.product(LR, repeat=2))
    if not phi_prod:
        fails.append("Phi(II') != Phi(I)Phi(I') for some pair")
    psi_prod = all(extend(J * J2, R, S) == extend(J, R, S) * extend(J2, R, S)
                   for J, J2 in itertools.product(LS, repeat=2))
    return PhiPsiReport(len(LR), len(LS), psi_phi, phi_psi, incl, phi_prod, psi_prod, psi_two, fails[:6])


# ------------------------------------------------------------------------------------
# lemma witnesses

def coefficients_qualify(a, R: FdCrossed) -> bool:
    """All coefficients sigma-fixed and pairwise commuting."""
    A = R.A
    blocks = [R.block(a, i) for i in range(R.P)]
    if any(not np.array_equal(A.sigma(b), b) for b in blocks):
        return False
    for b1, b2 in itertools.combinations(blocks, 2):
        if not np.array_equal(A.mul(b1, b2), A.mul(b2, b1)):
            return False
    return True


def supp_lemma_exhaustive(R: FdCrossed) -> tuple[int, int]:
    """(qualifying elements checked, violations) of |supp(a^p)| <= |supp(a)|."""
    if R.alg.size > EXHAUSTIVE_CAP:
        raise TooLarge("exhaustive support check too large")
    checked = bad = 0
    for a in R.alg.elements():
        if not coefficients_qualify(a, R):
            continue
        checked += 1
        if len(R.support(R.power(a, R.p))) > len(R.support(a)):
            bad += 1
    return checked, bad


def rigidity_residuals(a, R: FdCrossed, I: FdIdeal) -> dict:
    """Build the c-elements for the three rigidity statements about a minimal a.

    Each entry is True when the corresponding c is nonzero (a violation).
    """
    A, p = R.A, R.p
    out = {"sigma": [], "commute": [], "proportional": []}
    supp = R.support(a)
    if any(np.array_equal(A.sigma(R.block(a, j)), R.block(a, j)) for j in supp):
        # g a g^-1 - a
        out["sigma"].append(bool(((R.alg.sigma(a) - a) % p).any()))
    j = supp[0]
    aj = R.block(a, j)
    Sj = np.linalg.matrix_power(A.S, j) % p if j else np.eye(A.n, dtype=np.int64)
    # q with q a_j = a_j sigma^j(q): linear in q
    M = (A.right_matrix(aj) - Sj @ A.left_matrix(aj)) % p
    for q in la.nullspace(M.T, p):
        c = (R.mul(R.embed_A(q), a) - R.mul(a, R.embed_A(q))) % p
        out["commute"].append(bool(c.any()))
    W = la.intersect(I.basis, R.block_subspace(supp), p)
    for b in W:
        q = la.solve(A.right_matrix(aj).T, R.block(b, j), p)
        if q is None:
            continue
        c = (b - R.mul(R.embed_A(q), a)) % p
        out["proportional"].append(bool(c.any()))
    return out


def centrality_criterion(a, R: FdCrossed) -> tuple[bool, bool]:
    """(a is central, a_0 in Z(A)^sigma) for a minimal element with a_0 != 0."""
    A = R.A
    a0 = R.block(a, 0)
    in_centre = la.in_span(A.centre(), a0, R.p) if A.centre().shape[0] else not a0.any()
    fixed = np.array_equal(A.sigma(a0), a0)
    return R.is_central(a), bool(in_centre and fixed)


def twisted_basis_change(R: FdCrossed, gamma) -> dict:
    """l = gamma h with h = g^(p^(m-1)); reports whether l centralises A."""
    h = R.g_power(R.P // R.p)
    ell = R.mul(R.embed_A(gamma), h)
    cent = all(np.array_equal(R.mul(ell, R.embed_A(e)), R.mul(R.embed_A(e), ell)) for e in R.A.basis())
    ellp = R.power(ell, R.p)
    return {"ell": ell, "centralises_A": cent, "ell_p_in_A": R.support(ellp) in ((0,), ())}


def sampled_ideals(R, rng, count: int = 64, gens: int = 2) -> list[FdIdeal]:
    """Ideals generated by random small generator sets, for rings above the lattice cap."""
    alg = R.alg if isinstance(R, FdCrossed) else R
    seen: dict[bytes, FdIdeal] = {}
    for _ in range(count):
        X = rng.integers(0, alg.p, size=(int(rng.integers(1, gens + 1)), alg.n))
        I = FdIdeal(alg, closure_of_rows(alg, X))
        seen.setdefault(_key(I), I)
    return list(seen.values())
