"""Skew polynomials Q[x; sigma, delta] in left normal form sum q_n x^n."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DatumMismatch, DegreeCapExceeded
from .qelem import QBatch, QElem, concat_batches
from .skew import SkewDatum


def _same_datum(a: SkewDatum, b: SkewDatum) -> bool:
    return a is b


class OrePoly:
    def __init__(self, datum: SkewDatum, coeffs: Sequence[QElem]):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.datum = datum
        self.coeffs = tuple(coeffs)

    # constructors ------------------------------------------------------------------
    @classmethod
    def zero(cls, datum: SkewDatum) -> "OrePoly":
        return cls(datum, [])

    @classmethod
    def const(cls, datum: SkewDatum, q: QElem) -> "OrePoly":
        return cls(datum, [q])

    @classmethod
    def monomial(cls, datum: SkewDatum, n: int, q: QElem | None = None) -> "OrePoly":
        R = datum.ring
        q = R.one() if q is None else q
        return cls(datum, [R.zero()] * n + [q])

    @classmethod
    def x(cls, datum: SkewDatum) -> "OrePoly":
        return cls.monomial(datum, 1)

    @classmethod
    def g(cls, datum: SkewDatum) -> "OrePoly":
        """x - t."""
        return cls(datum, [-datum.t, datum.ring.one()])

    # structure ------------------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def ring(self):
        return self.datum.ring

    def coeff(self, n: int) -> QElem:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return self.ring.zero(self.min_prec())

    def min_prec(self) -> int:
        return min((c.prec for c in self.coeffs), default=self.ring.prec)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "OrePoly"):
        if not isinstance(other, OrePoly) or not _same_datum(self.datum, other.datum):
            raise DatumMismatch("operands use different skew data")

    # arithmetic ---------------------------------------------------------------------------
    def __add__(self, other: "OrePoly") -> "OrePoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return OrePoly(self.datum, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self) -> "OrePoly":
        return OrePoly(self.datum, [-c for c in self.coeffs])

    def __sub__(self, other: "OrePoly") -> "OrePoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QElem):
            other = OrePoly.const(self.datum, other)
        if isinstance(other, OrePoly):
            return ore_mul(self, other)
        if isinstance(other, int):
            return OrePoly(self.datum, [c * other for c in self.coeffs])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, QElem):
            return OrePoly(self.datum, [other * c for c in self.coeffs])
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "OrePoly":
        result = OrePoly.const(self.datum, self.ring.one())
        base = self
        while n:
            if n & 1:
                result = ore_mul(result, base)
            n >>= 1
            if n:
                base = ore_mul(base, base)
        return result

    def __eq__(self, other):
        if not isinstance(other, OrePoly):
            return NotImplemented
        self._check(other)
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for n in range(self.degree, -1, -1):
            c = self.coeffs[n]
            if c.is_zero():
                continue
            body = c.to_text() if c.s > 1 else str(c.entry(0, 0))
            if n == 0:
                parts.append(f"({body})")
            elif n == 1:
                parts.append(f"({body})*x")
            else:
                parts.append(f"({body})*x^{n}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"OrePoly({self.to_text()})"

    def to_right_coeffs(self) -> list[QElem]:
        """r_n with self = sum x^n r_n."""
        d = self.datum
        rem = self
        out: list[QElem] = [self.ring.zero(self.min_prec()) for _ in range(len(self.coeffs))]
        for n in range(self.degree, -1, -1):
            a = rem.coeff(n)
            if a.is_zero():
                continue
            r = d.sigma_power(n).inverse()(a) if n else a
            out[n] = r
            rem = rem - ore_mul(OrePoly.monomial(d, n), OrePoly.const(d, r))
        return out

    @classmethod
    def from_right_coeffs(cls, datum: SkewDatum, r: Sequence[QElem]) -> "OrePoly":
        total = cls.zero(datum)
        for n, c in enumerate(r):
            if not c.is_zero():
                total = total + ore_mul(cls.monomial(datum, n), cls.const(datum, c))
        return total


def x_times(datum: SkewDatum, H: QBatch) -> QBatch:
    """Coefficients of x * (sum H_n x^n): sigma(H_n) moves up, delta(H_n) stays."""
    R = datum.ring
    S = datum.sigma.apply_batch(H)
    tb = QBatch.stack(R, [datum.t])
    D = tb * H - S * tb
    n = len(H)
    terms = concat_batches(R, [D, S])
    idx = np.concatenate([np.arange(n), np.arange(1, n + 1)])
    return QBatch.group_sum(terms, idx, n + 1, int(min(H.prec.min(), R.prec)) if n else R.prec)


def ore_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    """Product by pushing x leftward through g one power at a time."""
    f._check(g)
    d = f.datum
    R = d.ring
    if f.is_zero() or g.is_zero():
        return OrePoly.zero(d)
    out_len = f.degree + g.degree + 1
    if out_len - 1 > 4 * d.xcap:
        raise DegreeCapExceeded(f"degree {out_len - 1} exceeds cap {4 * d.xcap}")
    H = QBatch.stack(R, list(g.coeffs))
    parts = []
    idx = []
    for i, a in enumerate(f.coeffs):
        if i:
            H = x_times(d, H)
        if a.is_zero():
            continue
        parts.append(QBatch.stack(R, [a]) * H)
        idx.append(np.arange(len(H)))
    base = min(f.min_prec(), g.min_prec())
    if not parts:
        return OrePoly.zero(d)
    total = QBatch.group_sum(concat_batches(R, parts), np.concatenate(idx), out_len, base)
    return OrePoly(d, total.to_list())


def frobenius_power_relation(d: SkewDatum, s: QElem, n: int) -> tuple[OrePoly, OrePoly]:
    """(x^(p^n) * s expanded, sigma^(p^n)(s) x^(p^n) + delta^(p^n)(s))."""
    P = d.p**n
    lhs = ore_mul(OrePoly.monomial(d, P), OrePoly.const(d, s))
    for i, c in enumerate(lhs.coeffs):
        if i not in (0, P) and not c.is_zero():
            raise AssertionError(f"x^{P} s has a nonzero coefficient at degree {i}")
    R = d.ring
    coeffs = [d.delta_iter(s, P)] + [R.zero(s.prec)] * (P - 1) + [d.sigma_power(P)(s)]
    rhs = OrePoly(d, coeffs)
    return lhs, rhs
