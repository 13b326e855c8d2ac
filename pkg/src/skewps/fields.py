"""Finite fields GF(p^k).

Elements are integers 0..q-1 read as base-p digit vectors: the code
``sum(d_i * p**i)`` stands for ``sum(d_i * theta**i)`` where theta is a root
of the field's modulus.  Array code works directly on digit vectors.
"""
from __future__ import annotations

import itertools
import warnings
from functools import cached_property, lru_cache

import numpy as np

from .errors import FieldError

IRREDUCIBILITY_CAP = 2**20
TABLE_CAP = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_rem(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = [c % p for c in a]
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    return a


def _monic_polys(p: int, d: int):
    """Monic degree-d polynomials (low-to-high tuples) in increasing code order."""
    for code in range(p**d):
        low = [(code // p**i) % p for i in range(d)]
        yield tuple(low) + (1,)


def is_irreducible(mod: tuple[int, ...], p: int) -> bool:
    k = len(mod) - 1
    if k <= 1:
        return k == 1
    for d in range(1, k // 2 + 1):
        for div in _monic_polys(p, d):
            if not any(_poly_rem(list(mod), div, p)):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k.

    Order: the integer code sum(c_i p^i) of the non-leading coefficients.
    """
    for cand in _monic_polys(p, k):
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


class GF:
    """The field F_p[X]/(modulus)."""

    def __init__(self, p: int, k: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise FieldError("p not prime")
        if k < 1:
            raise FieldError("degree must be >= 1")
        self.p = p
        self.k = k
        self.q = p**k
        if modulus is None:
            modulus = least_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        self.modulus = modulus
        self.unchecked = False
        if self.q <= IRREDUCIBILITY_CAP:
            if not is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        else:
            self.unchecked = True
            warnings.warn(f"GF({p}^{k}): modulus accepted without irreducibility check")
        self._pows = np.array([p**i for i in range(k)], dtype=np.int64)
        red = []
        for j in range(2 * k - 1):
            mono = [0] * j + [1]
            r = _poly_rem(mono, modulus, p)
            red.append(r + [0] * (k - len(r)))
        self.red = np.array(red, dtype=np.int64)
        self._mul_t = self._inv_t = self._add_t = self._neg_t = None
        if self.q <= TABLE_CAP:
            self._build_tables()

    # identity -----------------------------------------------------------
    def _key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GF) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    # digits ---------------------------------------------------------------
    def digits(self, a: int) -> np.ndarray:
        return (int(a) // self._pows) % self.p

    def codes_to_digits(self, arr) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64)
        return (arr[..., None] // self._pows) % self.p

    def digits_to_codes(self, d) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._pows

    def from_digits(self, d) -> int:
        return int(self.digits_to_codes(d))

    # scalar arithmetic on codes -------------------------------------------
    def _build_tables(self):
        q = self.q
        D = self.codes_to_digits(np.arange(q))
        prod = np.zeros((q, q, self.k), dtype=np.int64)
        for x in range(self.k):
            for y in range(self.k):
                prod += np.einsum("a,b,d->abd", D[:, x], D[:, y], self.red[x + y])
        self._mul_t = self.digits_to_codes(prod % self.p)
        inv = np.zeros(q, dtype=np.int64)
        one_hits = np.argwhere(self._mul_t == 1)
        for a, b in one_hits:
            inv[a] = b
        self._inv_t = inv
        self._add_t = self.digits_to_codes((D[:, None, :] + D[None, :, :]) % self.p)
        self._neg_t = self.digits_to_codes(-D % self.p)

    def add(self, a: int, b: int) -> int:
        if self._add_t is not None:
            return int(self._add_t[a, b])
        return self.from_digits(self.digits(a) + self.digits(b))

    def sub(self, a: int, b: int) -> int:
        if self._add_t is not None:
            return int(self._add_t[a, self._neg_t[b]])
        return self.from_digits(self.digits(a) - self.digits(b))

    def neg(self, a: int) -> int:
        if self._neg_t is not None:
            return int(self._neg_t[a])
        return self.from_digits(-self.digits(a))

    def mul(self, a: int, b: int) -> int:
        if self._mul_t is not None:
            return int(self._mul_t[a, b])
        da, db = self.digits(a), self.digits(b)
        conv = np.convolve(da, db) % self.p
        return self.from_digits(conv @ self.red[: conv.size])

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r, base = 1, a
        while n:
            if n & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            n >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self._inv_t is not None:
            return int(self._inv_t[a])
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def scalar(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return int(n) % self.p

    def frob(self, a: int, r: int = 1) -> int:
        return self.from_digits(self.digits(a) @ self.frob_matrix(r) % self.p)

    def elements(self) -> range:
        return range(self.q)

    def theta(self) -> int:
        return self.p if self.k > 1 else 0

    # linear structure -------------------------------------------------------
    @cached_property
    def _frob1(self) -> np.ndarray:
        rows = [self.digits(self.pow(self.from_digits(np.eye(self.k, dtype=np.int64)[i]), self.p))
                for i in range(self.k)]
        return np.array(rows, dtype=np.int64)

    @lru_cache(maxsize=64)
    def frob_matrix(self, r: int) -> np.ndarray:
        """Matrix F with digits(x^(p^r)) = digits(x) @ F (mod p)."""
        r %= self.k
        F = np.eye(self.k, dtype=np.int64)
        for _ in range(r):
            F = (F @ self._frob1) % self.p
        return F

    def mul_matrix(self, a: int) -> np.ndarray:
        """Matrix of y -> a*y acting on row digit vectors: digits(a*y) = digits(y) @ M."""
        rows = [self.digits(self.mul(a, self.from_digits(np.eye(self.k, dtype=np.int64)[i])))
                for i in range(self.k)]
        return np.array(rows, dtype=np.int64)

    def spot_check_group_order(self, samples: int = 8, seed: int = 0) -> bool:
        rng = np.random.default_rng(seed)
        for a in rng.integers(1, self.q, size=samples):
            if self.pow(int(a), self.q - 1) != 1:
                return False
        return True

    # subfields and embeddings ------------------------------------------------
    def roots_of(self, coeffs: list[int], other: "GF | None" = None) -> list[int]:
        """Roots in self of a polynomial with coefficients (low to high) in self."""
        roots = []
        for x in self.elements():
            acc = 0
            for c in reversed(coeffs):
                acc = self.add(self.mul(acc, x), c)
            if acc == 0:
                roots.append(x)
        return roots

    def embedding_into(self, big: "GF") -> np.ndarray:
        """Digit matrix E (k x big.k) of the embedding theta -> least root of modulus."""
        if big.p != self.p or big.k % self.k:
            raise FieldError(f"{self!r} does not embed in {big!r}")
        return _embedding(self, big)

    def random(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.q))


@lru_cache(maxsize=None)
def _embedding(small: GF, big: GF) -> np.ndarray:
    if small.k == 1:
        E = np.zeros((1, big.k), dtype=np.int64)
        E[0, 0] = 1
        return E
    roots = big.roots_of(list(small.modulus))
    if not roots:
        raise FieldError("modulus has no root in the larger field")
    r = roots[0]
    rows, acc = [], 1
    for _ in range(small.k):
        rows.append(big.digits(acc))
        acc = big.mul(acc, r)
    return np.array(rows, dtype=np.int64)


@lru_cache(maxsize=1 << 16)
def embed_code(small: GF, big: GF, a: int) -> int:
    return big.from_digits(small.digits(a) @ small.embedding_into(big) % big.p)


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> GF:
    """Shared instance of GF(p^k) with the least irreducible modulus."""
    return GF(p, k)


def enumerate_tuples(p: int, n: int):
    return itertools.product(range(p), repeat=n)
