"""Finite-field Galois helpers and finite extensions of the Laurent field F_q((pi)).

An extension K is always presented as F_{q^f}((rho)) with rho^e = pi and the
integer valuation v_K(rho) = 1, so v_K(pi) = e.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Callable

import numpy as np

from . import linalg_fp
from .errors import BadDegree, FieldError, NotAnAutomorphism, RootNotFound
from .fields import GF, embed_code, field
from .qelem import INF, MatRing, QElem, invert_in_O


# ---------------------------------------------------------------------------------
# Frobenius, subfields, Artin-Schreier

def frobenius_orbit(F: GF, x: int, base_degree: int = 1) -> list[int]:
    """Orbit of x under y -> y^(p^base_degree)."""
    if F.k % base_degree:
        raise FieldError(f"base degree {base_degree} does not divide {F.k}")
    orbit = [x]
    y = F.frob(x, base_degree)
    while y != x:
        orbit.append(y)
        y = F.frob(y, base_degree)
    return orbit


@dataclass(frozen=True)
class Subfield:
    field: GF
    ambient: GF
    elements: tuple[int, ...]  # codes in the ambient field

    @property
    def degree(self) -> int:
        return self.field.k

    def embed(self, a: int) -> int:
        return embed_code(self.field, self.ambient, a)


def _as_code_map(auto, F: GF) -> tuple[Callable[[int], int], int | None]:
    if isinstance(auto, int):
        return (lambda a: F.frob(a, auto)), auto % F.k
    r = getattr(auto, "r", None)
    if r is not None and getattr(auto, "c", None) is None:
        return (lambda a: F.frob(a, r)), r % F.k
    if callable(auto):
        return auto, None
    raise NotAnAutomorphism(f"cannot read {auto!r} as a field map")


def fixed_field(auto, F: GF, samples: int = 16, seed: int = 0) -> Subfield:
    """Subfield of F fixed by a Frobenius power (an int r, or a map with attribute r)."""
    fn, r = _as_code_map(auto, F)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        a, b = F.random(rng), F.random(rng)
        if fn(F.mul(a, b)) != F.mul(fn(a), fn(b)) or fn(F.add(a, b)) != F.add(fn(a), fn(b)):
            raise NotAnAutomorphism("map is not a field automorphism on samples")
    if fn(1) != 1:
        raise NotAnAutomorphism("map does not fix 1")
    fixed = tuple(a for a in F.elements() if fn(a) == a)
    deg = round(np.log(len(fixed)) / np.log(F.p))
    if F.p**deg != len(fixed) or F.k % deg:
        raise NotAnAutomorphism("fixed set is not a subfield")
    if r is not None and deg != gcd(r if r else F.k, F.k):
        raise NotAnAutomorphism("fixed field has unexpected degree")
    return Subfield(field(F.p, deg), F, fixed)


@dataclass(frozen=True)
class ArtinSchreier:
    base: GF
    a: int
    splitting: GF
    roots: tuple[int, ...]  # codes in the splitting field
    a_in_splitting: int

    def evaluate(self, x: int) -> int:
        S = self.splitting
        return S.sub(S.sub(S.pow(x, S.p), x), self.a_in_splitting)


def _as_roots(S: GF, a: int) -> list[int]:
    """Roots of X^p - X - a in S by solving the F_p-linear system."""
    A = (S._frob1 - np.eye(S.k, dtype=np.int64)) % S.p
    x = linalg_fp.solve(A.T, S.digits(a), S.p)
    if x is None:
        return []
    x0 = S.from_digits(x)
    return sorted(S.add(x0, i) for i in range(S.p))


def artin_schreier_split(F: GF, a: int) -> ArtinSchreier:
    roots = _as_roots(F, a)
    if roots:
        return ArtinSchreier(F, a, F, tuple(roots), a)
    S = field(F.p, F.k * F.p)
    a_big = embed_code(F, S, a)
    roots = _as_roots(S, a_big)
    if len(roots) != F.p:
        raise FieldError("Artin-Schreier polynomial failed to split in the degree-p extension")
    return ArtinSchreier(F, a, S, tuple(roots), a_big)


# ---------------------------------------------------------------------------------
# finite extensions of the Laurent field

@dataclass
class FiltBasis:
    """Basis {alpha_i rho^j} of K over Z with values j (valuation rescaled by e)."""

    elements: list[tuple[int, int]]  # (i, j): alpha_i * rho^j
    values: list[int]
    e: int
    f: int
    h: object = 1  # value gap of the maximal ideal; INF marks the no-uniformiser case

    def __len__(self):
        return len(self.elements)


@dataclass
class Extension:
    """K = F_{q^f}((rho)), rho^e = pi, over the centre Z = F_q((pi)) of ``base``."""

    base: MatRing
    e: int
    f: int
    zeta0: QElem | None = None  # chosen root, a 1x1 element over K
    C: int = 1
    z: QElem | None = None
    notes: list[str] = dc_field(default_factory=list)

    def __post_init__(self):
        F = self.base.field
        self.Z = F
        self.big = field(F.p, F.k * self.f)
        self.ring = MatRing(self.big, self.base.s, self.e * self.base.prec, "rho")
        self.scalars = self.ring.scalars
        self.E = F.embedding_into(self.big)  # digit matrix k x kf
        self.generator = self.big.theta() if self.f > 1 else 1
        self.basis = FiltBasis([(i, j) for i in range(self.f) for j in range(self.e)],
                               [j for i in range(self.f) for j in range(self.e)], self.e, self.f)
        # digits of alpha_i = generator^i, rows over F_p
        self._alpha_codes = [self.big.pow(self.generator, i) for i in range(self.f)]

    # properties ---------------------------------------------------------------------
    @property
    def is_trivial(self) -> bool:
        return self.e == 1 and self.f == 1

    @property
    def degree(self) -> int:
        return self.e * self.f

    def describe(self) -> dict:
        return {"e": self.e, "f": self.f, "residue_field": f"GF({self.big.p}^{self.big.k})",
                "modulus": list(self.big.modulus), "root_degree": self.C}

    # embeddings ---------------------------------------------------------------------
    def iota(self, q: QElem) -> QElem:
        """Q -> Q_K: pi -> rho^e, F_q -> F_{q^f}."""
        if q.ring != self.base and q.ring != self.base.scalars:
            if q.ring.field != self.base.field:
                raise FieldError("element is not over the base ring")
        target = self.ring if q.s == self.base.s else self.scalars
        e = self.e
        lo, prec = q.lo * e, q.prec * e
        if q.is_zero():
            return target.zero(prec)
        L = prec - lo
        data = np.zeros((q.s, q.s, L, self.big.k), dtype=np.int64)
        data[:, :, ::e, :] = (q.data @ self.E) % self.big.p
        return QElem(target, lo, prec, data)

    def embed_code(self, a: int) -> int:
        return embed_code(self.Z, self.big, a)

    def rho_power(self, n: int, prec: int | None = None) -> QElem:
        return self.scalars.pi_power(n, prec)

    def scalar(self, x: QElem) -> QElem:
        """A 1x1 element of K as a scalar matrix of Q_K."""
        return self.ring.scalar(x)

    # coordinates ----------------------------------------------------------------------
    def _field_coords(self, code: int) -> np.ndarray:
        """Coordinates (in F_q codes) of an F_{q^f} element in the basis alpha_i."""
        if self.f == 1:
            return np.array([self._restrict_code(code)])
        cache = self.__dict__.setdefault("_coord_cache", {})
        if code in cache:
            return cache[code]
        F, B = self.Z, self.big
        # columns: digits of (F_p-basis of F_q) * alpha_i
        cols = []
        for i in range(self.f):
            for d in range(F.k):
                basis_elt = embed_code(F, B, F.from_digits(np.eye(F.k, dtype=np.int64)[d]))
                cols.append(B.digits(B.mul(basis_elt, self._alpha_codes[i])))
        A = np.array(cols, dtype=np.int64).T
        sol = linalg_fp.solve(A, B.digits(code), B.p)
        if sol is None:
            raise FieldError("alpha basis does not span")
        out = np.array([F.from_digits(sol[i * F.k:(i + 1) * F.k]) for i in range(self.f)])
        cache[code] = out
        return out

    def _restrict_code(self, code: int) -> int:
        F, B = self.Z, self.big
        if F.k == B.k:
            return code
        sol = linalg_fp.solve(self.E.T, B.digits(code), B.p)
        if sol is None:
            raise FieldError("element does not lie in the base field")
        return F.from_digits(sol)

    def coords(self, x: QElem) -> dict[tuple[int, int], QElem]:
        """z_ij in Z with x = sum z_ij alpha_i rho^j, for a 1x1 element x of K."""
        Zr = self.base.scalars
        P = -(-x.prec // self.e)
        out = {}
        lo_m = (x.lo // self.e) if not x.is_zero() else P
        buckets = {(i, j): {} for (i, j) in self.basis.elements}
        if not x.is_zero():
            for off in range(x.data.shape[2]):
                n = x.lo + off
                code = self.big.from_digits(x.data[0, 0, off])
                if code == 0:
                    continue
                m, j = divmod(n, self.e)
                for i, c in enumerate(self._field_coords(code)):
                    if c:
                        buckets[(i, j)][m] = int(c)
        for (i, j), coeffs in buckets.items():
            # x is known mod rho^prec; the (i, j) coordinate is known mod pi^ceil((prec - j)/e)
            pj = -(-(x.prec - j) // self.e)
            out[(i, j)] = Zr.laurent(coeffs, pj) if coeffs else Zr.zero(pj)
        del lo_m
        return out

    def from_coords(self, z: dict[tuple[int, int], QElem]) -> QElem:
        total = self.scalars.zero(min(self.iota(v).prec + j for (i, j), v in z.items()))
        for (i, j), v in z.items():
            alpha = self.scalars.const([[self._alpha_codes[i]]])
            total = total + self.iota(v) * alpha * self.rho_power(j)
        return total

    def formula_value(self, x: QElem):
        """min_ij { e v(z_ij) + j } over the coordinates of x."""
        best = INF
        for (i, j), zij in self.coords(x).items():
            if not zij.is_zero():
                best = min(best, self.e * zij.u + j)
        return best

    # filtrations on Q_K ----------------------------------------------------------------
    def matrix_coords(self, X: QElem) -> dict[tuple[int, int], QElem]:
        """q_b in Q with X = sum_b b (x) q_b, b running over the filt-basis."""
        s = X.s
        Zr = self.base.scalars
        parts = {b: [[None] * s for _ in range(s)] for b in self.basis.elements}
        for a in range(s):
            for c in range(s):
                entry = X.entry(a, c)
                for b, z in self.coords(entry).items():
                    parts[b][a][c] = z
        return {b: _assemble(self.base, rows) for b, rows in parts.items()}

    def tensor_filtration(self, X: QElem):
        """min_b (value_b + e u(q_b))."""
        best = INF
        for (i, j), q in self.matrix_coords(X).items():
            if not q.is_zero():
                best = min(best, j + self.e * q.u)
        return best


def _assemble(ring: MatRing, rows) -> QElem:
    s = ring.s
    prec = min(r.prec for row in rows for r in row)
    lo = min(min((r.lo for row in rows for r in row if not r.is_zero()), default=prec), prec)
    data = np.zeros((s, s, prec - lo, ring.k), dtype=np.int64)
    for a in range(s):
        for c in range(s):
            r = rows[a][c]
            if not r.is_zero():
                hi = min(r.prec, prec)
                data[a, c, r.lo - lo: hi - lo] = r.data[0, 0, : hi - r.lo]
    return QElem(ring, lo, prec, data)


def unramified_extension(base: MatRing, f: int) -> Extension:
    return Extension(base, 1, f)


def trivial_extension(base: MatRing) -> Extension:
    return Extension(base, 1, 1)


def _unit_root(K: Extension, w: QElem, C: int) -> QElem:
    """mu in K with mu^C = w for a unit w of the valuation ring (1x1 over K)."""
    S = K.big
    p = S.p
    w0 = S.from_digits(w.data[0, 0, 0]) if w.lo == 0 else None
    if w0 is None or w0 == 0:
        raise BadDegree("unit part has zero constant term")
    a = 0
    Cp = C
    while Cp % p == 0:
        Cp //= p
        a += 1
    # residue root: x^C = w0
    roots = [x for x in S.roots_of([S.neg(w0)] + [0] * (C - 1) + [1])] if S.q <= 1 << 16 else []
    if not roots:
        raise RootNotFound(f"no {C}-th root of the residue in GF({p}^{S.k})")
    mu = K.scalars.const([[min(roots)]])
    if a:
        if not (w - K.scalars.const([[w0]], w.prec)).is_zero():
            raise BadDegree(f"{C}-th root of a non-constant unit is inseparable")
        return mu.truncate(w.prec)
    # Newton on mu^C = w; C is invertible mod p
    inv_C = pow(Cp, -1, p)
    for _ in range(64):
        err = mu**C - w
        if err.is_zero():
            return mu
        step = err * invert_in_O(mu ** (C - 1)) * inv_C
        mu = mu - step
    raise RootNotFound("Newton iteration for the unit root did not settle")


def _residue_root_degree(F: GF, w0: int, C: int) -> int:
    """Least f with a C-th root of w0 in F_{q^f}."""
    for f in range(1, 2 * C + 2):
        S = field(F.p, F.k * f)
        if S.q > 1 << 16:
            break
        w = embed_code(F, S, w0)
        if S.roots_of([S.neg(w)] + [0] * (C - 1) + [1]):
            return f
    raise RootNotFound(f"no {C}-th root of {w0} in a small extension")


def adjoin_root_of_unit_power(base: MatRing, z: QElem, C: int) -> Extension:
    """K = Z(zeta0) with zeta0^C = z, for a scalar z of positive valuation."""
    if z.s != 1:
        z = z.entry(0, 0)
    if z.is_zero() or z.u <= 0:
        raise BadDegree(f"need v(z) > 0, got {z.u}")
    if C < 1:
        raise BadDegree("root degree must be positive")
    v = z.u
    g = gcd(C, v)
    e = C // g
    F = base.field
    w = z.shift(-v)  # unit part
    w0 = F.from_digits(w.data[0, 0, 0])
    f = _residue_root_degree(F, w0, C)
    K = Extension(base, e, f, C=C, z=z)
    w_K = K.iota(w)
    mu = _unit_root(K, w_K, C)
    zeta0 = K.rho_power(v // g, w_K.prec) * mu
    if not (zeta0**C - K.iota(z)).is_zero():
        raise RootNotFound("constructed root fails zeta0^C = z")
    K.zeta0 = zeta0
    if e == 1 and f == 1:
        K.notes.append("root already in Z; trivial extension")
    return K


def compose_filt_bases(inner: FiltBasis, outer: FiltBasis) -> FiltBasis:
    """Filt-basis {alpha_i beta_k} of a tower; values rescaled to the top valuation."""
    elements, values = [], []
    for a, va in zip(inner.elements, inner.values):
        for b, vb in zip(outer.elements, outer.values):
            elements.append((a, b))
            values.append(va * outer.e + vb)
    return FiltBasis(elements, values, inner.e * outer.e, inner.f * outer.f)
