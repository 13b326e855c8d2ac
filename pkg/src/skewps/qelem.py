"""Truncated Laurent series over F_q and s x s matrices of them.

A ``QElem`` stores one digit array ``data[i, j, n, :]`` holding the
coefficient of ``var**(lo + n)`` in entry (i, j), for ``lo <= lo + n < prec``.
``prec`` is the absolute precision shared by all entries.  An element with
no nonzero coefficient below ``prec`` is *zero at precision*: its valuation
is the ``INF`` sentinel and ``lo == prec``.
"""
from __future__ import annotations

import math
import re
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import NotAUnit, NotInvertible
from .fields import GF

INF = math.inf


class MatRing:
    """Context for M_s(F_q((var))) with a default working precision."""

    def __init__(self, field: GF, s: int = 1, prec: int = 16, var: str = "pi"):
        if s < 1:
            raise ValueError("matrix size must be >= 1")
        self.field = field
        self.s = s
        self.prec = prec
        self.var = var
        self.p = field.p
        self.k = field.k

    def _key(self):
        return (self.field, self.s, self.var)

    def __eq__(self, other):
        return isinstance(other, MatRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"M_{self.s}({self.field!r}(({self.var})))"

    def with_prec(self, prec: int) -> "MatRing":
        return MatRing(self.field, self.s, prec, self.var)

    @cached_property
    def scalars(self) -> "MatRing":
        return MatRing(self.field, 1, self.prec, self.var)

    # constructors -----------------------------------------------------------
    def _empty(self, prec: int) -> "QElem":
        return QElem(self, prec, prec, np.zeros((self.s, self.s, 0, self.k), dtype=np.int64))

    def zero(self, prec: int | None = None) -> "QElem":
        return self._empty(self.prec if prec is None else prec)

    def const(self, codes, prec: int | None = None) -> "QElem":
        """Constant matrix with F_q entries given as codes (nested lists)."""
        prec = self.prec if prec is None else prec
        codes = np.asarray(codes, dtype=np.int64).reshape(self.s, self.s)
        if prec <= 0:
            return self._empty(prec)
        data = np.zeros((self.s, self.s, prec, self.k), dtype=np.int64)
        data[:, :, 0, :] = self.field.codes_to_digits(codes)
        return QElem(self, 0, prec, data)

    def scalar(self, c, prec: int | None = None) -> "QElem":
        """c * identity for an F_q code or a scalar LaurentElem."""
        if isinstance(c, QElem):
            if c.s != 1:
                raise ValueError("scalar() expects a 1x1 element")
            data = np.zeros((self.s, self.s, c.data.shape[2], self.k), dtype=np.int64)
            for i in range(self.s):
                data[i, i] = c.data[0, 0]
            out = QElem(self, c.lo, c.prec, data)
            return out if prec is None else out.truncate(prec)
        return self.const(np.eye(self.s, dtype=np.int64) * int(c), prec)

    def one(self, prec: int | None = None) -> "QElem":
        return self.scalar(1, prec)

    def unit_matrix(self, i: int, j: int, prec: int | None = None) -> "QElem":
        codes = np.zeros((self.s, self.s), dtype=np.int64)
        codes[i, j] = 1
        return self.const(codes, prec)

    def pi_power(self, n: int, prec: int | None = None) -> "QElem":
        """var**n * identity, known to absolute precision prec (default n + ring prec)."""
        prec = (self.prec + max(n, 0)) if prec is None else prec
        return self.one(prec - n).shift(n)

    def laurent(self, coeffs: dict[int, int], prec: int | None = None) -> "LaurentElem":
        prec = self.prec if prec is None else prec
        R = self.scalars
        if not coeffs:
            return LaurentElem(R, prec, prec, np.zeros((1, 1, 0, self.k), dtype=np.int64))
        lo = min(coeffs)
        if lo >= prec:
            return LaurentElem(R, prec, prec, np.zeros((1, 1, 0, self.k), dtype=np.int64))
        data = np.zeros((1, 1, prec - lo, self.k), dtype=np.int64)
        for n, c in coeffs.items():
            if n < prec:
                data[0, 0, n - lo] = self.field.digits(c)
        return LaurentElem(R, lo, prec, data)

    def from_entries(self, entries) -> "QElem":
        """Build from an s x s nested list of LaurentElem, text, or int codes."""
        rows = [[self._as_laurent(e) for e in row] for row in entries]
        if len(rows) != self.s or any(len(r) != self.s for r in rows):
            raise ValueError(f"expected a {self.s}x{self.s} matrix")
        prec = min(e.prec for row in rows for e in row)
        lo = min(min(e.lo for row in rows for e in row), prec)
        L = prec - lo
        data = np.zeros((self.s, self.s, max(L, 0), self.k), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                data[i, j] = e._window(lo, prec)[0, 0]
        return QElem(self, lo, prec, data)

    def _as_laurent(self, e) -> "LaurentElem":
        if isinstance(e, QElem):
            if e.s != 1:
                raise ValueError("matrix entry must be scalar")
            return e if isinstance(e, LaurentElem) else LaurentElem(self.scalars, e.lo, e.prec, e.data)
        if isinstance(e, str):
            return parse_laurent(e, self)
        return self.laurent({0: int(e)} if int(e) else {}, self.prec)

    def random(self, rng: np.random.Generator, low: int = 0, high: int | None = None,
               prec: int | None = None, density: float = 1.0) -> "QElem":
        """Random element with coefficients at exponents [low, high)."""
        prec = self.prec if prec is None else prec
        high = prec if high is None else min(high, prec)
        if high <= low:
            return self.zero(prec)
        data = np.zeros((self.s, self.s, prec - low, self.k), dtype=np.int64)
        block = rng.integers(0, self.p, size=(self.s, self.s, high - low, self.k))
        if density < 1.0:
            block *= rng.random(size=(self.s, self.s, high - low, 1)) < density
        data[:, :, : high - low] = block
        return QElem(self, low, prec, data)

    def random_unit(self, rng: np.random.Generator, prec: int | None = None) -> "QElem":
        """Random element of the unit group of the valuation ring."""
        while True:
            res = rng.integers(0, self.field.q, size=(self.s, self.s))
            if codes_inverse(res, self.field) is not None:
                break
        return self.const(res, prec) + self.random(rng, low=1, prec=prec)

    def residue_basis(self) -> list["QElem"]:
        """F_p-basis {theta^d e_ij} of the residue algebra, lifted as constants."""
        return list(self._residue_basis)

    @cached_property
    def _residue_basis(self) -> tuple["QElem", ...]:
        out = []
        for i in range(self.s):
            for j in range(self.s):
                for d in range(self.k):
                    data = np.zeros((self.s, self.s, self.prec, self.k), dtype=np.int64)
                    data[i, j, 0, d] = 1
                    out.append(QElem(self, 0, self.prec, data))
        return tuple(out)

    def parse(self, text: str) -> "QElem":
        return parse_matrix(text, self)


def _trim_leading(data: np.ndarray, lo: int, prec: int):
    L = data.shape[2]
    if L == 0:
        return data, prec
    nz = np.flatnonzero(data.any(axis=(0, 1, 3)))
    if nz.size == 0:
        return data[:, :, :0], prec
    first = int(nz[0])
    if first:
        data = data[:, :, first:]
    return data, lo + first


class QElem:
    """Element of M_s(F_q((var))) with absolute precision."""

    __slots__ = ("ring", "lo", "prec", "data", "__weakref__")

    def __init__(self, ring: MatRing, lo: int, prec: int, data: np.ndarray, *, trusted: bool = False):
        if not trusted:
            if data.shape[2] != prec - lo:
                if data.shape[2] > prec - lo:
                    data = data[:, :, : max(prec - lo, 0)]
                else:
                    pad = np.zeros(data.shape[:2] + (prec - lo - data.shape[2], data.shape[3]), dtype=np.int64)
                    data = np.concatenate([data, pad], axis=2)
            data, lo = _trim_leading(data, lo, prec)
        self.ring = ring
        self.lo = int(lo)
        self.prec = int(prec)
        self.data = data

    # basic properties ------------------------------------------------------
    @property
    def s(self) -> int:
        return self.ring.s

    @property
    def u(self):
        """Matrix filtration value: min valuation of the entries, INF if zero."""
        return INF if self.lo >= self.prec else self.lo

    val = u

    def is_zero(self) -> bool:
        return self.lo >= self.prec

    def _window(self, lo: int, hi: int) -> np.ndarray:
        """Digits for exponents [lo, hi); zero outside the stored range."""
        out = np.zeros((self.s, self.s, max(hi - lo, 0), self.ring.k), dtype=np.int64)
        a = max(lo, self.lo)
        b = min(hi, self.prec)
        if b > a:
            out[:, :, a - lo: b - lo] = self.data[:, :, a - self.lo: b - self.lo]
        return out

    def coeff(self, n: int) -> np.ndarray:
        """F_q codes of the coefficient matrix of var**n (requires n < prec)."""
        if n >= self.prec:
            raise ValueError(f"exponent {n} beyond precision {self.prec}")
        return self.ring.field.digits_to_codes(self._window(n, n + 1)[:, :, 0])

    def residue(self) -> np.ndarray:
        """Residue matrix over F_q; requires u >= 0."""
        if self.u < 0:
            raise NotAUnit("element is not in the valuation ring")
        if self.prec <= 0:
            raise NotAUnit("precision too low to read the residue")
        return self.coeff(0)

    def entry(self, i: int, j: int) -> "LaurentElem":
        return LaurentElem(self.ring.scalars, self.lo, self.prec, self.data[i: i + 1, j: j + 1])

    def entries(self) -> list[list["LaurentElem"]]:
        return [[self.entry(i, j) for j in range(self.s)] for i in range(self.s)]

    def _check(self, other: "QElem"):
        if not isinstance(other, QElem) or other.ring != self.ring:
            raise TypeError(f"ring mismatch: {self.ring!r} vs {getattr(other, 'ring', other)!r}")

    def _new(self, lo: int, prec: int, data: np.ndarray) -> "QElem":
        return type(self)(self.ring, lo, prec, data)

    # arithmetic -----------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other % self.ring.p, self.prec)
        self._check(other)
        prec = min(self.prec, other.prec)
        lo = min(self.lo, other.lo, prec)
        data = (self._window(lo, prec) + other._window(lo, prec)) % self.ring.p
        return self._new(lo, prec, data)

    __radd__ = __add__

    def __neg__(self):
        return self._new(self.lo, self.prec, (-self.data) % self.ring.p)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other % self.ring.p, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self._new(self.lo, self.prec, (self.data * int(other)) % self.ring.p)
        self._check(other)
        ua, ub = self.u, other.u
        prec = int(min(self.prec + ub, other.prec + ua, max(self.prec, other.prec)))
        if self.is_zero() or other.is_zero():
            return self.ring.zero(prec) if type(self) is QElem else self._new(prec, prec, self.data[:, :, :0])
        lo = self.lo + other.lo
        L = prec - lo
        if L <= 0:
            return self._new(prec, prec, self.data[:, :, :0])
        out = kernels.batch_mul(self.data[None], other.data[None], L, self.ring.p, self.ring.field.red)[0]
        return self._new(lo, prec, out)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        if result is None:
            return self.ring.one(self.prec) if type(self) is QElem else self._new(0, self.prec, self.ring.one(self.prec).data)
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other % self.ring.p, self.prec)
        if not isinstance(other, QElem) or other.ring != self.ring:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def frob(self, r: int = 1) -> "QElem":
        """Apply x -> x^(p^r) to every coefficient."""
        if r % self.ring.k == 0:
            return self
        F = self.ring.field.frob_matrix(r % self.ring.k)
        return self._new(self.lo, self.prec, (self.data @ F) % self.ring.p)

    def scale_code(self, c: int) -> "QElem":
        M = self.ring.field.mul_matrix(c)
        return self._new(self.lo, self.prec, (self.data @ M) % self.ring.p)

    def shift(self, n: int) -> "QElem":
        """Multiply by var**n (exact; precision shifts too)."""
        return type(self)(self.ring, self.lo + n, self.prec + n, self.data, trusted=True)

    def truncate(self, prec: int) -> "QElem":
        if prec >= self.prec:
            return self
        lo = min(self.lo, prec)
        return self._new(lo, prec, self.data[:, :, : prec - lo])

    def inverse(self) -> "QElem":
        """Two-sided inverse in M_s(F); precision loss is tracked."""
        if self.is_zero():
            raise NotInvertible("zero at precision")
        v = self.lo
        try:
            return invert_in_O(self.shift(-v)).shift(-v)
        except NotAUnit:
            pass
        return _gauss_inverse(self)

    def commutator(self, other: "QElem") -> "QElem":
        return self * other - other * self

    # text -------------------------------------------------------------------------
    def to_text(self) -> str:
        rows = ["[" + ", ".join(str(e) for e in row) + "]" for row in self.entries()]
        return "[" + ", ".join(rows) + "]"

    def __repr__(self):
        return f"QElem({self.to_text()})"

    def to_json(self) -> dict:
        return {"u": None if self.is_zero() else self.u, "prec": self.prec,
                "entries": [[str(e) for e in row] for row in self.entries()]}


class LaurentElem(QElem):
    """A 1x1 QElem: a truncated Laurent series."""

    __slots__ = ()

    @property
    def coeffs(self) -> dict[int, int]:
        codes = self.ring.field.digits_to_codes(self.data[0, 0])
        return {self.lo + n: int(c) for n, c in enumerate(codes) if c}

    def __str__(self) -> str:
        v = self.ring.var
        parts = []
        for n, c in sorted(self.coeffs.items()):
            if n == 0:
                parts.append(f"{c}")
            elif n == 1:
                parts.append(f"{c}*{v}")
            else:
                parts.append(f"{c}*{v}^{n}")
        parts.append(f"O({v}^{self.prec})")
        return " + ".join(parts)

    def __repr__(self):
        return f"LaurentElem({self})"


def as_laurent(q: QElem) -> LaurentElem:
    if q.s != 1:
        raise ValueError("not a scalar")
    return q if isinstance(q, LaurentElem) else LaurentElem(q.ring, q.lo, q.prec, q.data, trusted=True)


# ----------------------------------------------------------------------------------
# valuation helpers

def val(x: QElem):
    return x.u


def matrix_filtration(q: QElem):
    return q.u


def graded_regular(q: QElem, samples: Iterable[QElem]) -> bool:
    """True iff u(qs) = u(q) + u(s) and u(sq) = u(s) + u(q) for every sample."""
    uq = q.u
    for s in samples:
        want = uq + s.u
        if (q * s).u != want or (s * q).u != want:
            return False
    return True


def codes_inverse(mat, F: GF) -> np.ndarray | None:
    """Inverse of a square matrix over F_q given as codes, or None if singular."""
    A = [[int(x) for x in row] for row in np.asarray(mat, dtype=np.int64)]
    n = len(A)
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        f = F.inv(A[c][c])
        A[c] = [F.mul(f, x) for x in A[c]]
        inv[c] = [F.mul(f, x) for x in inv[c]]
        for r in range(n):
            if r != c and A[r][c]:
                g = A[r][c]
                A[r] = [F.sub(x, F.mul(g, y)) for x, y in zip(A[r], A[c])]
                inv[r] = [F.sub(x, F.mul(g, y)) for x, y in zip(inv[r], inv[c])]
    return np.array(inv, dtype=np.int64)


def invert_in_O(q: QElem) -> QElem:
    """Inverse of a unit of the valuation ring.

    Residue inversion over F_q, then the geometric series 1 - y + y^2 - ...
    evaluated as (1 - y)(1 + y^2)(1 + y^4)...
    """
    if q.is_zero() or q.u != 0:
        raise NotAUnit(f"u(q) = {q.u}, expected 0")
    R = q.ring
    res_inv = codes_inverse(q.residue(), R.field)
    if res_inv is None:
        raise NotAUnit("residue matrix is singular")
    h0 = R.const(res_inv, q.prec)
    h0 = h0 if type(q) is QElem else type(q)(q.ring, h0.lo, h0.prec, h0.data, trusted=True)
    y = q * h0 - 1
    acc = 1 - y
    pw = y
    while True:
        pw = pw * pw
        if pw.is_zero():
            break
        acc = acc * (pw + 1)
    return h0 * acc


def _gauss_inverse(q: QElem) -> QElem:
    """Gauss-Jordan over F with minimal-valuation pivots."""
    R = q.ring
    n = R.s
    one = R.scalars.one(q.prec)
    zero = R.scalars.zero(q.prec)
    A = [[q.entry(i, j) for j in range(n)] for i in range(n)]
    B = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        cands = [(A[r][c].u, r) for r in range(c, n) if not A[r][c].is_zero()]
        if not cands:
            raise NotInvertible("matrix is singular at this precision")
        _, piv = min(cands)
        A[c], A[piv] = A[piv], A[c]
        B[c], B[piv] = B[piv], B[c]
        f = A[c][c].inverse()
        A[c] = [f * x for x in A[c]]
        B[c] = [f * x for x in B[c]]
        for r in range(n):
            if r != c and not A[r][c].is_zero():
                g = A[r][c]
                A[r] = [x - g * y for x, y in zip(A[r], A[c])]
                B[r] = [x - g * y for x, y in zip(B[r], B[c])]
    return R.from_entries(B)


# ----------------------------------------------------------------------------------
# text parsing

_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?(?:([A-Za-z]+)(?:\^\(?(-?\d+)\)?)?)?$")


def parse_laurent(text: str, ring: MatRing) -> LaurentElem:
    """Parse 'c*pi^n + ... + O(pi^N)'; coefficients are F_q codes."""
    text = text.strip()
    prec = ring.prec
    coeffs: dict[int, int] = {}
    if not text:
        raise ValueError("empty Laurent text")
    for raw in text.split("+"):
        term = raw.strip().replace(" ", "")
        if not term:
            raise ValueError(f"bad term in {text!r}")
        if term.startswith("O("):
            m = re.match(r"^O\(([A-Za-z]+)\^\(?(-?\d+)\)?\)$", term)
            if not m:
                raise ValueError(f"bad precision term {term!r}")
            prec = int(m.group(2))
            continue
        m = _TERM.match(term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"bad term {term!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if c >= ring.field.q:
            raise ValueError(f"coefficient code {c} out of range for {ring.field!r}")
        if m.group(2) is None:
            n = 0
        else:
            if m.group(2) != ring.var:
                raise ValueError(f"unknown variable {m.group(2)!r}")
            n = int(m.group(3)) if m.group(3) is not None else 1
        coeffs[n] = ring.field.add(coeffs.get(n, 0), c)
    return ring.laurent({n: c for n, c in coeffs.items() if c}, prec)


def parse_matrix(text: str, ring: MatRing) -> QElem:
    text = text.strip()
    if not text.startswith("["):
        return ring.scalar(parse_laurent(text, ring))
    inner = text[1:-1].strip()
    rows = re.findall(r"\[([^\[\]]*)\]", inner)
    entries = [[c.strip() for c in r.split(",")] for r in rows]
    return ring.from_entries(entries)


# ----------------------------------------------------------------------------------
# batches

class QBatch:
    """A stack of n elements of one ring sharing a storage offset ``lo``.

    ``prec`` is per element; digits at exponents >= prec are kept zero.
    """

    __slots__ = ("ring", "lo", "prec", "data")

    def __init__(self, ring: MatRing, lo: int, prec: np.ndarray, data: np.ndarray):
        self.ring = ring
        self.lo = int(lo)
        self.prec = np.asarray(prec, dtype=np.int64)
        self.data = data

    def __len__(self):
        return self.data.shape[0]

    @staticmethod
    def stack(ring: MatRing, elems: Sequence[QElem]) -> "QBatch":
        if not elems:
            return QBatch(ring, 0, np.zeros(0, dtype=np.int64),
                          np.zeros((0, ring.s, ring.s, 0, ring.k), dtype=np.int64))
        lo = min(e.lo for e in elems)
        prec = np.array([e.prec for e in elems], dtype=np.int64)
        hi = int(prec.max())
        data = np.zeros((len(elems), ring.s, ring.s, max(hi - lo, 0), ring.k), dtype=np.int64)
        for i, e in enumerate(elems):
            if not e.is_zero():
                data[i, :, :, e.lo - lo: e.prec - lo] = e.data
        return QBatch(ring, lo, prec, data)

    @staticmethod
    def constant(ring: MatRing, e: QElem, n: int) -> "QBatch":
        b = QBatch.stack(ring, [e])
        return QBatch(ring, b.lo, np.repeat(b.prec, n), np.repeat(b.data, n, axis=0))

    def element(self, i: int) -> QElem:
        P = int(self.prec[i])
        lo = min(self.lo, P)
        return QElem(self.ring, lo, P, self.data[i, :, :, : P - lo])

    def to_list(self) -> list[QElem]:
        return [self.element(i) for i in range(len(self))]

    @property
    def u(self) -> np.ndarray:
        n, L = self.data.shape[0], self.data.shape[3]
        out = np.full(n, INF)
        if L == 0 or n == 0:
            return out
        nz = self.data.any(axis=(1, 2, 4))
        exps = self.lo + np.arange(L)
        nz &= exps[None, :] < self.prec[:, None]
        has = nz.any(axis=1)
        first = np.argmax(nz, axis=1)
        out[has] = self.lo + first[has]
        return out

    def _mask(self):
        L = self.data.shape[3]
        if L == 0:
            return
        exps = self.lo + np.arange(L)
        bad = exps[None, :] >= self.prec[:, None]
        if bad.any():
            self.data[bad.nonzero()[0], :, :, bad.nonzero()[1], :] = 0

    def take(self, idx) -> "QBatch":
        idx = np.asarray(idx, dtype=np.int64)
        return QBatch(self.ring, self.lo, self.prec[idx], self.data[idx])

    def window(self, lo: int, hi: int) -> np.ndarray:
        n = len(self)
        out = np.zeros((n, self.ring.s, self.ring.s, max(hi - lo, 0), self.ring.k), dtype=np.int64)
        a = max(lo, self.lo)
        b = min(hi, self.lo + self.data.shape[3])
        if b > a:
            out[:, :, :, a - lo: b - lo] = self.data[:, :, :, a - self.lo: b - self.lo]
        return out

    def __add__(self, other: "QBatch") -> "QBatch":
        prec = np.minimum(self.prec, other.prec)
        lo = min(self.lo, other.lo)
        hi = int(prec.max()) if prec.size else lo
        hi = max(hi, lo)
        data = (self.window(lo, hi) + other.window(lo, hi)) % self.ring.p
        out = QBatch(self.ring, lo, prec, data)
        out._mask()
        return out

    def __neg__(self) -> "QBatch":
        return QBatch(self.ring, self.lo, self.prec, (-self.data) % self.ring.p)

    def __sub__(self, other: "QBatch") -> "QBatch":
        return self + (-other)

    def __mul__(self, other: "QBatch") -> "QBatch":
        """Elementwise product; a batch of length 1 broadcasts."""
        ua, ub = self.u, other.u
        pa = self.prec.astype(float)
        pb = other.prec.astype(float)
        prec = np.minimum(np.minimum(pa + ub, pb + ua), np.maximum(pa, pb)).astype(np.int64)
        lo = self.lo + other.lo
        hi = int(prec.max()) if prec.size else lo
        L = hi - lo
        n = max(len(self), len(other))
        if L <= 0 or self.data.shape[3] == 0 or other.data.shape[3] == 0:
            data = np.zeros((n, self.ring.s, self.ring.s, max(L, 0), self.ring.k), dtype=np.int64)
        else:
            data = kernels.batch_mul(self.data, other.data, L, self.ring.p, self.ring.field.red)
        out = QBatch(self.ring, lo, prec, data)
        out._mask()
        return out

    def scale_ints(self, ints) -> "QBatch":
        ints = np.asarray(ints, dtype=np.int64).reshape(-1, 1, 1, 1, 1)
        return QBatch(self.ring, self.lo, self.prec, (self.data * ints) % self.ring.p)

    def frob(self, r: int) -> "QBatch":
        if r % self.ring.k == 0:
            return self
        F = self.ring.field.frob_matrix(r % self.ring.k)
        return QBatch(self.ring, self.lo, self.prec, (self.data @ F) % self.ring.p)

    def cap_prec(self, prec) -> "QBatch":
        new = np.minimum(self.prec, np.asarray(prec, dtype=np.int64))
        out = QBatch(self.ring, self.lo, new, self.data.copy())
        out._mask()
        return out

    @staticmethod
    def group_sum(terms: "QBatch", index: np.ndarray, n_out: int, base_prec) -> "QBatch":
        """out[j] = sum of terms[i] with index[i] == j; empty groups are zero at base_prec."""
        R = terms.ring
        prec = np.array(np.broadcast_to(np.asarray(base_prec, dtype=np.int64), (n_out,)))
        if len(terms):
            np.minimum.at(prec, index, terms.prec)
        L = terms.data.shape[3]
        data = np.zeros((n_out, R.s, R.s, L, R.k), dtype=np.int64)
        if len(terms):
            np.add.at(data, index, terms.data)
        data %= R.p
        out = QBatch(R, terms.lo, prec, data)
        out._mask()
        return out


def concat_batches(ring: MatRing, parts: Sequence[QBatch]) -> QBatch:
    """Stack batches along the element axis on a common storage window."""
    parts = [b for b in parts if len(b)]
    if not parts:
        return QBatch.stack(ring, [])
    lo = min(b.lo for b in parts)
    hi = max(b.lo + b.data.shape[3] for b in parts)
    data = np.concatenate([b.window(lo, hi) for b in parts], axis=0)
    prec = np.concatenate([b.prec for b in parts])
    return QBatch(ring, lo, prec, data)
