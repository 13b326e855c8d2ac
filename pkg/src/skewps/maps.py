"""Filtered additive maps on M_s(F_q((pi))) and their degrees.

Every map here fixes pi and commutes with multiplication by pi, so its
degree is read off an F_p-basis of the residue algebra.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import NotPiEquivariant
from .qelem import INF, MatRing, QBatch, QElem, invert_in_O


class FiltMap:
    kind = "abstract"
    ring_map = False

    def __call__(self, q: QElem) -> QElem:
        raise NotImplementedError

    def apply_batch(self, X: QBatch) -> QBatch:
        return QBatch.stack(X.ring, [self(e) for e in X.to_list()])

    def degree(self, ring: MatRing):
        cache = self.__dict__.setdefault("_deg_cache", {})
        key = (ring, ring.prec)
        if key not in cache:
            cache[key] = degree_of_map(self, ring)
        return cache[key]

    def describe(self) -> str:
        return self.kind

    def __repr__(self):
        return self.describe()


class Identity(FiltMap):
    kind = "identity"
    ring_map = True

    def __call__(self, q):
        return q

    def apply_batch(self, X):
        return X


class FrobeniusPower(FiltMap):
    kind = "frobenius-power"
    ring_map = True

    def __init__(self, r: int):
        self.r = r

    def __call__(self, q):
        return q.frob(self.r)

    def apply_batch(self, X):
        return X.frob(self.r)

    def describe(self):
        return f"frobenius-power({self.r})"


class Inner(FiltMap):
    """q -> c q c^{-1}."""

    kind = "inner"
    ring_map = True

    def __init__(self, unit: QElem, inverse: QElem | None = None):
        self.unit = unit
        self.inv = unit.inverse() if inverse is None else inverse

    def __call__(self, q):
        return self.unit * q * self.inv

    def apply_batch(self, X):
        n = len(X)
        c = QBatch.stack(X.ring, [self.unit])
        ci = QBatch.stack(X.ring, [self.inv])
        return (c * X) * ci if n else X

    def describe(self):
        return f"inner({self.unit.to_text()})"


class Composite(FiltMap):
    """Composite(f, g, h)(q) = f(g(h(q)))."""

    kind = "composite"

    def __init__(self, maps: Sequence[FiltMap]):
        self.maps = tuple(maps)
        self.ring_map = all(m.ring_map for m in self.maps)

    def __call__(self, q):
        for m in reversed(self.maps):
            q = m(q)
        return q

    def apply_batch(self, X):
        for m in reversed(self.maps):
            X = m.apply_batch(X)
        return X

    def describe(self):
        return "composite(" + ", ".join(m.describe() for m in self.maps) + ")"


class SigmaMinusId(FiltMap):
    kind = "sigma-minus-id"

    def __init__(self, of: FiltMap):
        self.of = of

    def __call__(self, q):
        return self.of(q) - q

    def apply_batch(self, X):
        return self.of.apply_batch(X) - X

    def describe(self):
        return f"sigma-minus-id({self.of.describe()})"


class InnerDerivation(FiltMap):
    """q -> t q - sigma(q) t."""

    kind = "inner-derivation"

    def __init__(self, t: QElem, sigma: FiltMap):
        self.t = t
        self.sigma = sigma

    def __call__(self, q):
        return self.t * q - self.sigma(q) * self.t

    def apply_batch(self, X):
        if not len(X):
            return X
        tb = QBatch.stack(X.ring, [self.t])
        return tb * X - self.sigma.apply_batch(X) * tb

    def describe(self):
        return f"inner-derivation(t={self.t.to_text()}, {self.sigma.describe()})"


class Iterate(FiltMap):
    """n-fold composite f∘...∘f."""

    kind = "iterate"

    def __init__(self, f: FiltMap, n: int):
        self.f = f
        self.n = n
        self.ring_map = f.ring_map

    def __call__(self, q):
        for _ in range(self.n):
            q = self.f(q)
        return q

    def apply_batch(self, X):
        for _ in range(self.n):
            X = self.f.apply_batch(X)
        return X

    def describe(self):
        return f"iterate({self.f.describe()}, {self.n})"


class FunctionMap(FiltMap):
    """Wraps an arbitrary callable (used for tests and user-supplied maps)."""

    kind = "function"

    def __init__(self, fn: Callable[[QElem], QElem], name: str = "function", ring_map: bool = False):
        self.fn = fn
        self.name = name
        self.ring_map = ring_map

    def __call__(self, q):
        return self.fn(q)

    def describe(self):
        return self.name


def _normalize_conjugator(c: QElem) -> QElem:
    """Drop the central pi-power; conjugation is unchanged."""
    return c.shift(-c.u) if not c.is_zero() else c


def _safe_inverse(c: QElem) -> QElem:
    try:
        return invert_in_O(c)
    except Exception:
        return c.inverse()


class SkewAuto(FiltMap):
    """q -> c * Frob^r(q) * c^{-1}.

    ``conjugator`` is kept as given (it may carry a central pi-power) while
    the applied matrix is the pi-normalized one, so no precision is lost
    when c is a pi-power times a unit.
    """

    kind = "composite"
    ring_map = True

    def __init__(self, ring: MatRing, r: int = 0, conjugator: QElem | None = None,
                 _norm: tuple[QElem, QElem] | None = None):
        self.ring = ring
        self.r = r % ring.k
        self.conjugator = conjugator
        if _norm is not None:
            self.c, self.cinv = _norm
        elif conjugator is None:
            self.c = self.cinv = None
        else:
            c = _normalize_conjugator(conjugator)
            if c == ring.one(c.prec):
                self.c = self.cinv = None
            else:
                self.c = c
                self.cinv = _safe_inverse(c)

    @property
    def is_inner(self) -> bool:
        return self.r == 0

    def conj_unit(self) -> QElem:
        return self.c if self.c is not None else self.ring.one()

    def __call__(self, q):
        q = q.frob(self.r)
        if self.c is None:
            return q
        return self.c * q * self.cinv

    def apply_batch(self, X):
        X = X.frob(self.r)
        if self.c is None or not len(X):
            return X
        c = QBatch.stack(X.ring, [self.c])
        ci = QBatch.stack(X.ring, [self.cinv])
        return (c * X) * ci

    def compose(self, other: "SkewAuto") -> "SkewAuto":
        """self ∘ other."""
        if self.c is None and other.c is None:
            return SkewAuto(self.ring, self.r + other.r)
        one = self.ring.one()
        c1 = self.c if self.c is not None else one
        c1i = self.cinv if self.cinv is not None else one
        c2 = other.c.frob(self.r) if other.c is not None else one
        c2i = other.cinv.frob(self.r) if other.cinv is not None else one
        raw = None
        if self.conjugator is not None or other.conjugator is not None:
            a1 = self.conjugator if self.conjugator is not None else one
            a2 = other.conjugator.frob(self.r) if other.conjugator is not None else one
            raw = a1 * a2
        return SkewAuto(self.ring, self.r + other.r, raw, _norm=(c1 * c2, c2i * c1i))

    def power(self, n: int) -> "SkewAuto":
        if n < 0:
            return self.inverse().power(-n)
        result = SkewAuto(self.ring, 0)
        base = self
        while n:
            if n & 1:
                result = base.compose(result)
            n >>= 1
            if n:
                base = base.compose(base)
        return result

    def inverse(self) -> "SkewAuto":
        """(c, r)^{-1} = (Frob^{-r}(c^{-1}), -r)."""
        back = (-self.r) % self.ring.k
        if self.c is None:
            return SkewAuto(self.ring, back)
        raw = self.conjugator.inverse().frob(back) if self.conjugator is not None else None
        return SkewAuto(self.ring, back, raw, _norm=(self.cinv.frob(back), self.c.frob(back)))

    def describe(self):
        parts = []
        if self.c is not None:
            parts.append(f"inner({self.c.to_text()})")
        if self.r:
            parts.append(f"frobenius-power({self.r})")
        if not parts:
            return "identity"
        return parts[0] if len(parts) == 1 else "composite(" + ", ".join(parts) + ")"


def degree_info(f: FiltMap, ring: MatRing, equivariance_samples: int = 4) -> tuple[object, bool]:
    """(min over the residue basis of u(f(b)), pi-equivariance held on samples)."""
    basis = ring.residue_basis()
    Y = f.apply_batch(QBatch.stack(ring, basis))
    d = float(np.min(Y.u)) if len(Y) else INF
    d = INF if d == INF else int(d)
    exact = True
    step = max(1, len(basis) // equivariance_samples)
    for b in basis[::step]:
        lhs = f(b.shift(1))
        rhs = f(b).shift(1)
        if not (lhs - rhs).is_zero():
            exact = False
            break
    return d, exact


def degree_of_map(f: FiltMap, ring: MatRing, strict: bool = False):
    """deg_u(f); INF when f vanishes on the residue basis at precision.

    With ``strict`` a failed pi-equivariance sample raises NotPiEquivariant;
    otherwise the value is returned as a lower-bound tag via ``degree_info``.
    """
    d, exact = degree_info(f, ring)
    if not exact and strict:
        raise NotPiEquivariant(f"{f.describe()} does not commute with pi; degree {d} is only a bound")
    return d
