"""Truncated bounded skew power series over (Q, sigma, delta).

A series keeps coefficients of x^0..x^M, each with its own precision, and a
lower bound B for the valuations of all coefficients (including the unseen
ones beyond M).  ``tail_zero`` marks series known to vanish beyond the
stored coefficients (polynomials).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CommutationFail, NoConvergence, NotAUnit, NotTriangular, UnboundedTail
from .maps import FiltMap
from .ore import OrePoly
from .qelem import INF, QBatch, QElem, concat_batches, invert_in_O
from .skew import SkewDatum

BIG = 10**9


@lru_cache(maxsize=None)
def binom_mod_table(n: int, p: int) -> np.ndarray:
    """C(i, e) mod p for 0 <= e <= i <= n."""
    T = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i in range(n + 1):
        T[i, 0] = 1
        for e in range(1, i + 1):
            T[i, e] = (T[i - 1, e - 1] + T[i - 1, e]) % p
    return T


def _finite_min(vals, default):
    vals = [v for v in vals if v != INF]
    return min(vals) if vals else default


class BoundedSeries:
    def __init__(self, datum: SkewDatum, coeffs: Sequence[QElem], xcap: int | None = None,
                 tail_zero: bool = True, lower_bound=None):
        xcap = datum.xcap if xcap is None else xcap
        coeffs = list(coeffs)
        if len(coeffs) > xcap + 1:
            dropped = coeffs[xcap + 1:]
            coeffs = coeffs[: xcap + 1]
            if any(not c.is_zero() for c in dropped):
                extra = _finite_min([c.u for c in dropped], INF)
                lower_bound = extra if lower_bound is None else min(lower_bound, extra)
                tail_zero = False
        if tail_zero:
            while coeffs and coeffs[-1].is_zero():
                coeffs.pop()
        self.datum = datum
        self.coeffs = tuple(coeffs)
        self.xcap = xcap
        self.tail_zero = tail_zero
        lb = _finite_min([c.u for c in coeffs], 0)
        if lower_bound is not None:
            lb = min(lb, lower_bound)
        self.lower_bound = lb

    # constructors ------------------------------------------------------------------
    @classmethod
    def from_poly(cls, f: OrePoly, xcap: int | None = None) -> "BoundedSeries":
        return cls(f.datum, f.coeffs, xcap)

    @classmethod
    def const(cls, datum: SkewDatum, q: QElem, xcap: int | None = None) -> "BoundedSeries":
        return cls(datum, [q], xcap)

    @classmethod
    def one(cls, datum: SkewDatum, xcap: int | None = None) -> "BoundedSeries":
        return cls(datum, [datum.ring.one()], xcap)

    @classmethod
    def x(cls, datum: SkewDatum, xcap: int | None = None) -> "BoundedSeries":
        R = datum.ring
        return cls(datum, [R.zero(), R.one()], xcap)

    @classmethod
    def g(cls, datum: SkewDatum, xcap: int | None = None) -> "BoundedSeries":
        return cls(datum, [-datum.t, datum.ring.one()], xcap)

    @classmethod
    def random(cls, datum: SkewDatum, rng: np.random.Generator, degree: int | None = None,
               low: int = 0, xcap: int | None = None, density: float = 1.0) -> "BoundedSeries":
        """Random polynomial of the given degree, or a full truncated series if degree is None."""
        xcap = datum.xcap if xcap is None else xcap
        R = datum.ring
        if degree is None:
            return cls(datum, [R.random(rng, low=low, density=density) for _ in range(xcap + 1)],
                       xcap, tail_zero=False, lower_bound=low)
        return cls(datum, [R.random(rng, low=low, density=density) for _ in range(degree + 1)], xcap)

    # structure -----------------------------------------------------------------------
    @property
    def ring(self):
        return self.datum.ring

    @property
    def cprec(self) -> list[int]:
        return [c.prec for c in self.coeffs]

    def min_prec(self) -> int:
        return min(self.cprec, default=self.ring.prec)

    def coeff(self, n: int) -> QElem:
        if n < len(self.coeffs):
            return self.coeffs[n]
        if n > self.xcap:
            raise IndexError(f"degree {n} beyond x-cap {self.xcap}")
        return self.ring.zero(self.min_prec())

    def padded(self, n: int) -> list[QElem]:
        return [self.coeff(i) for i in range(n)]

    def f_value(self):
        """min_n u(q_n) + n, including the certified tail when not exact."""
        v = _finite_min([c.u + n for n, c in enumerate(self.coeffs)], INF)
        if not self.tail_zero:
            v = min(v, self.lower_bound + self.xcap + 1)
        return v

    def residual_value(self):
        """Coefficientwise guaranteed valuation: u if nonzero, else the precision."""
        vals = [c.prec if c.is_zero() else c.u for c in self.coeffs]
        return min(vals, default=INF)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def to_poly(self) -> OrePoly:
        return OrePoly(self.datum, self.coeffs)

    def _check(self, other: "BoundedSeries"):
        if not isinstance(other, BoundedSeries) or other.datum is not self.datum:
            from .errors import DatumMismatch
            raise DatumMismatch("series over different skew data")

    # arithmetic -----------------------------------------------------------------------
    def __add__(self, other: "BoundedSeries") -> "BoundedSeries":
        self._check(other)
        M = min(self.xcap, other.xcap)
        tz = self.tail_zero and other.tail_zero
        n = max(len(self.coeffs), len(other.coeffs)) if tz else M + 1
        n = min(n, M + 1)
        coeffs = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else None
            b = other.coeffs[i] if i < len(other.coeffs) else None
            if a is None and b is None:
                coeffs.append(self.ring.zero(min(self.min_prec(), other.min_prec())))
            elif a is None:
                coeffs.append(b if self.tail_zero else b.truncate(self._unknown_prec()))
            elif b is None:
                coeffs.append(a if other.tail_zero else a.truncate(other._unknown_prec()))
            else:
                coeffs.append(a + b)
        return BoundedSeries(self.datum, coeffs, M, tz, min(self.lower_bound, other.lower_bound))

    def _unknown_prec(self) -> int:
        """Precision of a coefficient past the stored ones in a non-exact series."""
        return self.min_prec()

    def __neg__(self) -> "BoundedSeries":
        return BoundedSeries(self.datum, [-c for c in self.coeffs], self.xcap, self.tail_zero,
                             self.lower_bound)

    def __sub__(self, other: "BoundedSeries") -> "BoundedSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BoundedSeries):
            return series_mul(self, other)
        if isinstance(other, QElem):
            return series_mul(self, BoundedSeries.const(self.datum, other, self.xcap))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, QElem):
            return self.left_scale(other)
        return NotImplemented

    def left_scale(self, q: QElem) -> "BoundedSeries":
        """q * f, coefficientwise."""
        lb = self.lower_bound + (q.u if q.u != INF else 0)
        return BoundedSeries(self.datum, [q * c for c in self.coeffs], self.xcap, self.tail_zero,
                             min(lb, self.lower_bound + min(0, q.u)))

    def scale_int(self, n: int) -> "BoundedSeries":
        return BoundedSeries(self.datum, [c * n for c in self.coeffs], self.xcap, self.tail_zero,
                             self.lower_bound)

    def truncate_x(self, M: int) -> "BoundedSeries":
        return BoundedSeries(self.datum, self.coeffs, M, self.tail_zero and len(self.coeffs) <= M + 1,
                             self.lower_bound)

    def power(self, n: int) -> "BoundedSeries":
        result = BoundedSeries.one(self.datum, self.xcap)
        base = self
        while n:
            if n & 1:
                result = series_mul(result, base)
            n >>= 1
            if n:
                base = series_mul(base, base)
        return result

    def to_json(self) -> dict:
        return {
            "xcap": self.xcap,
            "exact_tail": self.tail_zero,
            "lower_bound": self.lower_bound,
            "terms": [[n, c.to_json()] for n, c in enumerate(self.coeffs) if not c.is_zero()],
        }

    def __repr__(self):
        return f"BoundedSeries(deg<={len(self.coeffs) - 1}, M={self.xcap}, tail_zero={self.tail_zero})"


# ----------------------------------------------------------------------------------
# multiplication

def _sigma_conjugators(d: SkewDatum, M: int):
    """Batches (c_e, c_e^{-1}) with sigma^e = conj(c_e) ∘ Frob^(r e), e = 0..M."""
    cache = d.__dict__.setdefault("_conj_table", {})
    if M in cache:
        return cache[M]
    sig = d.sigma
    R = d.ring
    if sig.c is None:
        cache[M] = None
        return None
    cs, cis = [R.one()], [R.one()]
    for e in range(1, M + 1):
        # sigma^e = sigma ∘ sigma^(e-1): c_e = c * Frob^r(c_{e-1})
        cs.append(sig.c * cs[-1].frob(sig.r))
        cis.append(cis[-1].frob(sig.r) * sig.cinv)
    out = (QBatch.stack(R, cs), QBatch.stack(R, cis),
           min(0, min(c.u for c in cs)) + min(0, min(c.u for c in cis)))
    cache[M] = out
    return out


def _delta_table(d: SkewDatum, B: QBatch, jmax: int):
    """delta^j applied to the batch B for j = 0..jmax; stops early at all-zero."""
    table = [B]
    cur = B
    for _ in range(jmax):
        if np.all(cur.u == INF):
            break
        cur = d.delta.apply_batch(cur)
        table.append(cur)
    return table


def series_mul(f: BoundedSeries, g: BoundedSeries) -> BoundedSeries:
    """Coefficient k of fg is sum_{e<=k} sum_{i>=e} C(i,e) a_i sigma^e delta^(i-e)(b_(k-e))."""
    f._check(g)
    d = f.datum
    R = d.ring
    p = d.p
    M = min(f.xcap, g.xcap)
    na, nb = len(f.coeffs), len(g.coeffs)
    exact = f.tail_zero and g.tail_zero and na + nb - 2 <= M
    if (na == 0 and f.tail_zero) or (nb == 0 and g.tail_zero):
        return BoundedSeries(d, [], M, True)
    if not f.tail_zero and d.tail_degree_bound is None:
        raise UnboundedTail("no certified lower bound for deg(delta^j) beyond the table")
    n_out = min(M + 1, na + nb - 1) if (f.tail_zero and g.tail_zero) else M + 1
    n_out = max(n_out, 0)
    if n_out == 0:
        return BoundedSeries(d, [], M, True)

    A = QBatch.stack(R, list(f.coeffs))
    Bb = QBatch.stack(R, list(g.coeffs))
    ua, Pa = A.u, A.prec
    jmax = (na - 1) if f.tail_zero else M
    jmax = min(jmax, M)
    Dtab = _delta_table(d, Bb, jmax)
    J = len(Dtab)
    uD = np.full((M + 1, nb), INF)
    PD = np.zeros((M + 1, nb), dtype=np.int64)
    for j, Dj in enumerate(Dtab):
        uD[j] = Dj.u
        PD[j] = Dj.prec
    step_loss = min(0, d.t.u if d.t.u != INF else 0)
    conj = _sigma_conjugators(d, M)
    closs = conj[2] if conj is not None else 0
    if closs:
        step_loss += closs
    for j in range(J, M + 1):  # all-zero region: zero at the propagated precision
        uD[j] = INF
        PD[j] = PD[J - 1] + (j - J + 1) * step_loss
    sigdeg = closs

    binom = binom_mod_table(max(M, na), p)

    # precision of each coefficient from every binomially nonzero term -----------------
    prec_out = np.full(n_out, BIG, dtype=np.int64)
    I_list, E_list, N_list = [], [], []
    for e in range(0, min(M, n_out - 1) + 1):
        i = np.arange(e, min(na - 1, M) + 1)
        if i.size == 0:
            continue
        i = i[binom[i, e] != 0]
        if i.size == 0:
            continue
        nmax = min(nb - 1, n_out - 1 - e)
        if nmax < 0:
            continue
        n = np.arange(nmax + 1)
        II, NN = np.meshgrid(i, n, indexing="ij")
        I_list.append(II.ravel())
        N_list.append(NN.ravel())
        E_list.append(np.full(II.size, e))
    if I_list:
        I = np.concatenate(I_list)
        E = np.concatenate(E_list)
        N = np.concatenate(N_list)
        Jx = I - E
        uS = uD[Jx, N] + E * sigdeg
        PS = PD[Jx, N] + E * closs
        tp = np.minimum(np.minimum(Pa[I] + uS, PS + ua[I]), np.maximum(Pa[I], PS))
        tp = np.where(np.isfinite(tp), tp, BIG).astype(np.int64)
        np.minimum.at(prec_out, E + N, tp)
        live = np.isfinite(ua[I]) & np.isfinite(uD[Jx, N])
        I, E, N, Jx = I[live], E[live], N[live], Jx[live]
    else:
        I = E = N = Jx = np.zeros(0, dtype=np.int64)

    # the products themselves ------------------------------------------------------------
    if I.size:
        Dall = concat_batches(R, Dtab)
        Y = Dall.take(Jx * nb + N)
        if d.sigma.r:
            shifts = (E * d.sigma.r) % R.k
            data = Y.data.copy()
            for c in np.unique(shifts):
                if c == 0:
                    continue
                sel = np.flatnonzero(shifts == c)
                data[sel] = (data[sel] @ R.field.frob_matrix(int(c))) % p
            Y = QBatch(R, Y.lo, Y.prec, data)
        if conj is not None:
            Y = (conj[0].take(E) * Y) * conj[1].take(E)
        T = A.take(I) * Y
        T = T.scale_ints(binom[I, E])
        C = QBatch.group_sum(T, E + N, n_out, BIG)
    else:
        C = QBatch.stack(R, [R.zero(0)] * n_out)
        C = QBatch(R, 0, np.full(n_out, BIG, dtype=np.int64), C.data)

    # tail from the unseen coefficients a_i, i > M -------------------------------------------
    if not f.tail_zero:
        dlow = d.tail_degree_bound
        U = np.where(np.isfinite(uD), uD, PD)
        suffix = np.minimum.accumulate(U[::-1], axis=0)[::-1]  # suffix[j, n] = min_{j'>=j} U[j', n]
        tail = np.full(n_out, BIG, dtype=np.int64)
        for k in range(n_out):
            best = BIG
            for e in range(0, k + 1):
                n = k - e
                if n >= nb:
                    continue
                cand = U[M, n] + dlow if dlow != INF else BIG
                if e >= 1:
                    cand = min(cand, suffix[M + 1 - e, n])
                best = min(best, f.lower_bound + e * sigdeg + cand)
            tail[k] = best
        prec_out = np.minimum(prec_out, tail)

    prec_out = np.where(prec_out >= BIG, min(f.min_prec(), g.min_prec()), prec_out)
    C = C.cap_prec(prec_out)
    coeffs = C.to_list()
    lb = _finite_min([c.u for c in coeffs], 0)
    if not exact:
        dmin = 0
        if not f.tail_zero:
            dmin = min(0, d.tail_degree_bound)
        tab = d.degree_table
        dmin = min(dmin, min(x for x in tab[: max(1, min(len(tab), na))]))
        lb = min(lb, f.lower_bound + g.lower_bound + dmin + M * sigdeg)
    return BoundedSeries(d, coeffs, M, exact, lb)


# ----------------------------------------------------------------------------------
# maps on series

def extend_map_to_series(alpha: FiltMap, f: BoundedSeries, check: bool = True) -> BoundedSeries:
    """sum alpha(q_n) x^n, after checking alpha commutes with sigma and delta on a basis."""
    d = f.datum
    if check:
        for b in d.ring.residue_basis():
            if not (alpha(d.sigma(b)) - d.sigma(alpha(b))).is_zero():
                raise CommutationFail(f"{alpha.describe()} does not commute with sigma")
            if not (alpha(d.delta(b)) - d.delta(alpha(b))).is_zero():
                raise CommutationFail(f"{alpha.describe()} does not commute with delta")
    if f.coeffs:
        B = alpha.apply_batch(QBatch.stack(d.ring, list(f.coeffs))).to_list()
    else:
        B = []
    return BoundedSeries(d, B, f.xcap, f.tail_zero, None if f.tail_zero else f.lower_bound)


def sigma_tilde(f: BoundedSeries) -> BoundedSeries:
    return extend_map_to_series(f.datum.sigma, f, check=False)


def delta_tilde(f: BoundedSeries) -> BoundedSeries:
    """t f - sigma~(f) t; coefficientwise delta since x commutes with t."""
    return extend_map_to_series(f.datum.delta, f, check=False)


# ----------------------------------------------------------------------------------
# inversion

def _truncate_exact(h: BoundedSeries) -> BoundedSeries:
    return BoundedSeries(h.datum, h.coeffs, h.xcap, True)


def invert_unit_series(g: BoundedSeries, max_iter: int = 64) -> BoundedSeries:
    """h with gh = hg = 1 mod (x^(M+1), precision), by h <- h + h(1 - gh)."""
    d = g.datum
    if not g.coeffs:
        raise NotAUnit("zero series")
    try:
        h0 = invert_in_O(g.coeffs[0])
    except NotAUnit as exc:
        raise NotAUnit(f"constant term: {exc}") from None
    one = BoundedSeries.one(d, g.xcap)
    h = BoundedSeries.const(d, h0, g.xcap)
    prev = None
    for _ in range(max_iter):
        defect = one - series_mul(g, h)
        if defect.is_zero():
            lb = _finite_min([c.u for c in h.coeffs], 0)
            exact = g.tail_zero and len(g.coeffs) == 1
            return BoundedSeries(d, h.coeffs, h.xcap, exact, lb)
        v = defect.f_value()
        if prev is not None and not v > prev:
            raise NoConvergence(f"defect value stalled at {v}")
        prev = v
        h = _truncate_exact(h + series_mul(h, _truncate_exact(defect)))
    raise NoConvergence("iteration limit reached")


# ----------------------------------------------------------------------------------
# change of variable

def substitute(h: BoundedSeries, new_var: BoundedSeries) -> BoundedSeries:
    """sum h_n X^n evaluated in the ring of new_var."""
    d = new_var.datum
    total = BoundedSeries(d, [], new_var.xcap, True)
    power = BoundedSeries.one(d, new_var.xcap)
    for n, c in enumerate(h.coeffs):
        if n:
            power = series_mul(power, new_var)
        if not c.is_zero():
            total = total + BoundedSeries.const(d, c, new_var.xcap) * power
    return total


def change_variable(f: BoundedSeries, new_var: BoundedSeries, new_datum: SkewDatum) -> BoundedSeries:
    """Coefficients h_n with f = sum h_n X^n, returned as a series over new_datum.

    Solved top-down: X^n has degree n with leading coefficient lead_n, so the
    top coefficient of the remainder fixes h_n.  Exact for polynomial f.
    """
    d = f.datum
    if new_var.datum is not d:
        raise NotTriangular("new variable lives over a different datum")
    if len(new_var.coeffs) < 2 or new_var.coeffs[1].is_zero():
        raise NotTriangular("new variable has no degree-1 term")
    try:
        invert_in_O(new_var.coeffs[1])
    except NotAUnit:
        raise NotTriangular("degree-1 coefficient is not a unit") from None
    if any(not c.is_zero() for c in new_var.coeffs[2:]) or not new_var.tail_zero:
        raise NotTriangular("only affine substitutions X = c0 + c1 x are supported")
    top = len(f.coeffs) - 1 if f.tail_zero else f.xcap
    powers = [BoundedSeries.one(d, f.xcap)]
    for _ in range(top):
        powers.append(series_mul(powers[-1], new_var))
    rem = f
    h: list[QElem] = [d.ring.zero() for _ in range(top + 1)]
    for n in range(top, -1, -1):
        a = rem.coeff(n)
        if a.is_zero():
            h[n] = d.ring.zero(a.prec)
            continue
        lead = powers[n].coeffs[n]
        h[n] = a * lead.inverse()
        rem = rem - BoundedSeries.const(d, h[n], f.xcap) * powers[n]
    return BoundedSeries(new_datum, h, f.xcap, f.tail_zero,
                         None if f.tail_zero else f.lower_bound)
