"""Inner skew derivations (sigma, delta) with delta(q) = t q - sigma(q) t.

Also the compatibility certificates used by the series layer: the table of
degrees of delta^j and the search for an exponent m with sigma^(p^m) - id and
delta^(p^m) landing in J^2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import HypothesisFail, NotPPower, PrecisionTooLow
from .maps import InnerDerivation, SigmaMinusId, SkewAuto, degree_of_map
from .qelem import INF, MatRing, QBatch, QElem

M_MAX = 8


@dataclass(frozen=True)
class Compatibility:
    kind: str  # "compatible" | "quasi-compatible" | "uncertified"
    m: int | None = None
    degrees: dict = field(default_factory=dict)

    def __str__(self):
        if self.kind == "quasi-compatible":
            return f"quasi-compatible-with({self.m})"
        return self.kind


class SkewDatum:
    """sigma = conj(c) ∘ Frob^r and t with sigma(t) = t.

    ``xcap`` bounds the length of the lazily computed degree table.
    """

    def __init__(self, ring: MatRing, sigma: SkewAuto, t: QElem, xcap: int = 32,
                 check: bool = True, name: str = ""):
        self.ring = ring
        self.sigma = sigma
        self.t = t
        self.xcap = xcap
        self.name = name
        self.p = ring.p
        if check and not (sigma(t) - t).is_zero():
            raise HypothesisFail("sigma(t) != t at precision")
        self.delta = InnerDerivation(t, sigma)
        self._pow_cache: dict[int, SkewAuto] = {1: sigma}

    def __repr__(self):
        return f"SkewDatum({self.name or self.sigma.describe()}, t={self.t.to_text()})"

    # maps ---------------------------------------------------------------------------
    def sigma_power(self, n: int) -> SkewAuto:
        if n not in self._pow_cache:
            self._pow_cache[n] = self.sigma.power(n)
        return self._pow_cache[n]

    def delta_iter(self, q: QElem, j: int) -> QElem:
        for _ in range(j):
            q = self.delta(q)
        return q

    def delta_power_closed(self, q: QElem, n: int) -> QElem:
        """delta^(p^n)(q) via t^(p^n) q - sigma^(p^n)(q) t^(p^n)."""
        P = self.p**n
        tp = self.t**P
        return tp * q - self.sigma_power(P)(q) * tp

    @property
    def is_iwasawa(self) -> bool:
        return (self.t + 1).is_zero()

    # degrees ------------------------------------------------------------------------
    def sigma_minus_id_degree(self, n: int = 1):
        return degree_of_map(SigmaMinusId(self.sigma_power(n)), self.ring)

    def delta_degree(self):
        return degree_of_map(self.delta, self.ring)

    def sigma_degree(self):
        return degree_of_map(self.sigma, self.ring)

    @cached_property
    def degree_table(self) -> list:
        """deg_u(delta^j) for j = 0..xcap from iterated images of the residue basis."""
        X = QBatch.stack(self.ring, self.ring.residue_basis())
        table = [0]
        for _ in range(self.xcap):
            X = self.delta.apply_batch(X)
            d = float(np.min(X.u))
            table.append(INF if d == INF else int(d))
            if d == INF:
                break
        while len(table) < self.xcap + 1:
            table.append(INF)
        return table

    @cached_property
    def tail_degree_bound(self):
        """Certified lower bound for deg_u(delta^j), all j >= 1, or None.

        Uses a period P = p^m with deg(delta^P) >= 0, so that delta^j =
        delta^r ∘ (delta^P)^q has degree >= min(table[1..P]).
        """
        tab = self.degree_table
        P = 1
        while P < len(tab):
            if tab[P] >= 0:
                return min(tab[1: P + 1])
            P *= self.p
        return None

    @cached_property
    def compatibility(self) -> Compatibility:
        return certify_compatibility(self)

    @cached_property
    def m(self) -> int | None:
        """Smallest m with (sigma^(p^m), delta^(p^m)) compatible, searched up to M_MAX."""
        for m in range(M_MAX + 1):
            d = iterate_datum(self, m, verify=False) if m else self
            if d.sigma_minus_id_degree() >= 1 and d.delta_degree() >= 1:
                return m
        return None


def iterate_datum(d: SkewDatum, n: int, verify: bool = True, samples: int = 2,
                  rng: np.random.Generator | None = None) -> SkewDatum:
    """(sigma^(p^n), delta^(p^n)) with inner element t^(p^n)."""
    if n == 0:
        return d
    P = d.p**n
    cache = d.__dict__.setdefault("_iterates", {})
    out = cache.get(n)
    if out is None:
        out = SkewDatum(d.ring, d.sigma_power(P), d.t**P, xcap=d.xcap, check=False,
                        name=f"{d.name}^(p^{n})" if d.name else "")
        cache[n] = out
    if verify and P <= 64:
        rng = rng or np.random.default_rng(0)
        for _ in range(samples):
            q = d.ring.random(rng)
            if not (d.delta_iter(q, P) - out.delta(q)).is_zero():
                raise HypothesisFail(f"delta^{P} differs from its closed inner form")
    return out


def certify_compatibility(d: SkewDatum, m_max: int = M_MAX) -> Compatibility:
    ds = d.sigma_minus_id_degree()
    dd = d.delta_degree()
    if ds >= 1 and dd >= 1:
        return Compatibility("compatible", 0, {"sigma-id": ds, "delta": dd})
    if d.ring.prec <= 2:
        raise PrecisionTooLow("J^2 membership needs precision > 2")
    for m in range(1, m_max + 1):
        it = iterate_datum(d, m, verify=False)
        s_m = it.sigma_minus_id_degree()
        d_m = it.delta_degree()
        if s_m >= 2 and d_m >= 2:
            return Compatibility("quasi-compatible", m, {"sigma-id": s_m, "delta": d_m})
    return Compatibility("uncertified", None, {"sigma-id": ds, "delta": dd})


def order_on_centre(d: SkewDatum, bound: int = 4096) -> int:
    """Least n with sigma^n trivial on the centre F_q((pi)); must be a p-power."""
    ring = d.ring
    gens = [ring.scalar(ring.field.theta()) if ring.k > 1 else ring.one(), ring.pi_power(1)]
    cur = list(gens)
    for n in range(1, bound + 1):
        cur = [d.sigma(g) for g in cur]
        if all((a - b).is_zero() for a, b in zip(cur, gens)):
            m = n
            while m % d.p == 0:
                m //= d.p
            if m != 1:
                raise NotPPower(f"sigma has order {n} on the centre, not a power of {d.p}")
            return n
    raise NotPPower(f"no finite order on the centre below {bound}")


def check_sigma_fixes_conjugator(d: SkewDatum, a: QElem, k: int,
                                 rng: np.random.Generator | None = None, samples: int = 4) -> bool:
    """Given sigma trivial on the centre and sigma^(p^k) = conj(a), report sigma(a) == a."""
    ring = d.ring
    rng = rng or np.random.default_rng(0)
    centre = [ring.pi_power(1)] + ([ring.scalar(ring.field.theta())] if ring.k > 1 else [])
    for z in centre:
        if not (d.sigma(z) - z).is_zero():
            raise HypothesisFail("sigma is not trivial on the centre")
    P = d.p**k
    sp = d.sigma_power(P)
    ainv = a.inverse()
    for q in ring.residue_basis() + [ring.random(rng) for _ in range(samples)]:
        if not (sp(q) - a * q * ainv).is_zero():
            raise HypothesisFail(f"sigma^{P} is not conjugation by a")
    return (d.sigma(a) - a).is_zero()
