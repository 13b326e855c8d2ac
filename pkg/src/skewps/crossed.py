"""Crossed-product structure of the series ring over S = Q+[[x^(p^m)]] with g = x - t.

Also: Iwasawa normalization, the formal derivative on (x - t)^(-r) * series,
component extraction by derivatives and the extension of ideals from the
x^p-subring.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import HypothesisFail, NotAUnit, NotSigmaInvariant, PrecisionExhausted
from .maps import SkewAuto
from .ore import OrePoly, ore_mul
from .qelem import INF, QElem, invert_in_O
from .series import BoundedSeries, binom_mod_table, extend_map_to_series, series_mul, sigma_tilde
from .skew import SkewDatum, iterate_datum


def _residual(diff) -> object:
    """Guaranteed valuation of a difference: INF-safe min over coefficients."""
    if isinstance(diff, QElem):
        return diff.prec if diff.is_zero() else diff.u
    if isinstance(diff, OrePoly):
        coeffs = diff.coeffs
        if not coeffs:
            return INF
        return min(c.prec if c.is_zero() else c.u for c in coeffs)
    return diff.residual_value()


def spread(c: BoundedSeries, d: SkewDatum, P: int, xcap: int) -> BoundedSeries:
    """c(y) with y = x^P, as a series in x over d."""
    R = d.ring
    n = (len(c.coeffs) - 1) * P + 1 if c.coeffs else 0
    coeffs = [R.zero(c.min_prec()) for _ in range(n)]
    for k, q in enumerate(c.coeffs):
        coeffs[k * P] = q
    return BoundedSeries(d, coeffs, xcap, c.tail_zero, None if c.tail_zero else c.lower_bound)


@dataclass
class CrossedDecomp:
    datum: SkewDatum
    sub: SkewDatum  # (sigma^(p^m), delta^(p^m))
    m: int
    components: list[BoundedSeries]
    xcap: int
    gpowers: list[OrePoly] = field(default_factory=list)

    @property
    def P(self) -> int:
        return self.datum.p**self.m

    @property
    def g(self) -> OrePoly:
        return OrePoly.g(self.datum)

    def recompose(self) -> BoundedSeries:
        """sum_i c_i(x^P) g^i, evaluated with series_mul."""
        d = self.datum
        total = BoundedSeries(d, [], self.xcap, True)
        for i, c in enumerate(self.components):
            if c.is_zero() and c.tail_zero:
                continue
            gi = BoundedSeries.from_poly(self.gpowers[i], self.xcap)
            total = total + series_mul(spread(c, d, self.P, self.xcap), gi)
        return total

    def to_json(self) -> dict:
        return {"m": self.m, "components": [[i, c.to_json()] for i, c in enumerate(self.components)]}


def _gpowers(d: SkewDatum, n: int) -> list[OrePoly]:
    g = OrePoly.g(d)
    out = [OrePoly.const(d, d.ring.one())]
    for _ in range(1, n):
        out.append(ore_mul(out[-1], g))
    return out


def decompose(f: BoundedSeries, m: int) -> CrossedDecomp:
    """Components c_i with f = sum_{i<p^m} c_i(x^(p^m)) g^i.

    x^(Pk) g^i = sum_j C(i,j) (-t)^(i-j) x^(Pk+j) because t commutes with x, so
    each block of P consecutive x-degrees is an upper-triangular solve with
    unit diagonal.  Series are cut to whole blocks.
    """
    d = f.datum
    R = d.ring
    p = d.p
    P = p**m
    sub = iterate_datum(d, m, verify=False)
    if f.tail_zero:
        top = len(f.coeffs) - 1
        nblocks = top // P + 1 if top >= 0 else 0
        xcap = f.xcap
    else:
        nblocks = (f.xcap + 1) // P
        if nblocks == 0:
            raise PrecisionExhausted(f"window x^0..x^{f.xcap} is shorter than one block of {P}")
        xcap = nblocks * P - 1
    binom = binom_mod_table(P, p)
    mt = -d.t
    mt_pows = [R.one()]
    for _ in range(P):
        mt_pows.append(mt_pows[-1] * mt)
    comps: list[list[QElem]] = [[R.zero() for _ in range(nblocks)] for _ in range(P)]
    for k in range(nblocks):
        block = [f.coeff(P * k + j) if P * k + j <= f.xcap else R.zero(f.min_prec()) for j in range(P)]
        for i in range(P - 1, -1, -1):
            c = block[i]
            comps[i][k] = c
            if c.is_zero():
                continue
            for j in range(i):
                b = int(binom[i, j])
                if b:
                    block[j] = block[j] - (c * mt_pows[i - j]) * b
    components = [BoundedSeries(sub, comps[i], max(nblocks - 1, 0), f.tail_zero,
                                None if f.tail_zero else f.lower_bound) for i in range(P)]
    return CrossedDecomp(d, sub, m, components, xcap, _gpowers(d, P))


def g_relations(d: SkewDatum, q: QElem) -> dict:
    """Residuals of g q - sigma(q) g and g x - x g."""
    g = OrePoly.g(d)
    r1 = ore_mul(g, OrePoly.const(d, q)) - ore_mul(OrePoly.const(d, d.sigma(q)), g)
    x = OrePoly.x(d)
    r2 = ore_mul(g, x) - ore_mul(x, g)
    return {"gq": _residual(r1), "gx": _residual(r2)}


# ---------------------------------------------------------------------------------
# Iwasawa normalization

@dataclass
class IwasawaCert:
    datum: SkewDatum  # (sigma0, sigma0 - id), t0 = -1
    unit: QElem  # -t^{-1}: h = unit * g
    checks: dict

    @property
    def sigma0(self) -> SkewAuto:
        return self.datum.sigma


def iwasawa_normalize(d: SkewDatum, rng: np.random.Generator | None = None,
                      samples: int = 8) -> IwasawaCert:
    """sigma0 = conj(t^{-1}) ∘ sigma, delta0 = sigma0 - id, h = -t^{-1} g."""
    R = d.ring
    try:
        tinv = invert_in_O(d.t)
    except NotAUnit as exc:
        raise NotAUnit(f"t is not a unit of O: {exc}") from None
    rng = rng or np.random.default_rng(0)
    if d.is_iwasawa:
        return IwasawaCert(d, R.one(), {"identity": True})
    sigma0 = SkewAuto(R, 0, tinv).compose(d.sigma)
    d0 = SkewDatum(R, sigma0, -R.one(), xcap=d.xcap, name=f"{d.name}-iwasawa" if d.name else "iwasawa")
    unit = -tinv
    worst_delta = INF
    worst_rel = INF
    y = OrePoly.monomial(d, 1, unit)  # y = -t^{-1} x
    for _ in range(samples):
        q = R.random(rng)
        worst_delta = min(worst_delta, _residual(d0.delta(q) - (sigma0(q) - q)))
        lhs = ore_mul(y, OrePoly.const(d, q))
        rhs = ore_mul(OrePoly.const(d, sigma0(q)), y) + OrePoly.const(d, d0.delta(q))
        worst_rel = min(worst_rel, _residual(lhs - rhs))
    g = OrePoly.g(d)
    h = OrePoly.const(d, unit) * g
    hp, gp = OrePoly.const(d, R.one()), OrePoly.const(d, R.one())
    worst_span = INF
    for i in range(1, 4):
        hp, gp = ore_mul(hp, h), ore_mul(gp, g)
        # h^i = u sigma(u) ... sigma^(i-1)(u) g^i
        lead = hp.coeff(i) * invert_in_O(gp.coeff(i))
        worst_span = min(worst_span, _residual(hp - OrePoly.const(d, lead) * gp))
    checks = {"delta0_is_sigma0_minus_id": worst_delta, "y_relation": worst_rel,
              "h_power_span": worst_span}
    return IwasawaCert(d0, unit, checks)


# ---------------------------------------------------------------------------------
# formal derivative on the localization at g

@dataclass
class Localized:
    """(x - t)^(-r) * body."""

    r: int
    body: BoundedSeries


def derivative_series(f: BoundedSeries) -> BoundedSeries:
    """sum n q_n x^(n-1)."""
    coeffs = [c * n for n, c in enumerate(f.coeffs)][1:]
    return BoundedSeries(f.datum, coeffs, f.xcap, f.tail_zero,
                         None if f.tail_zero else f.lower_bound)


def _left_divide_by_g(f: BoundedSeries) -> BoundedSeries | None:
    """b with (x - t) b = f, for polynomial f; None if g does not divide f."""
    if not f.tail_zero:
        return None
    d = f.datum
    D = len(f.coeffs) - 1
    if D < 1:
        return None if f.coeffs and not f.coeffs[0].is_zero() else BoundedSeries(d, [], f.xcap, True)
    sinv = d.sigma.inverse()
    # (x - t) b has x^n coefficient sigma(b_(n-1)) - sigma(b_n) t
    b = [None] * D
    b[D - 1] = sinv(f.coeffs[D])
    for n in range(D - 1, 0, -1):
        b[n - 1] = sinv(f.coeffs[n] + d.sigma(b[n]) * d.t)
    rem = f.coeffs[0] + d.sigma(b[0]) * d.t
    if not rem.is_zero():
        return None
    return BoundedSeries(d, b, f.xcap, True)


def formal_derivative(loc: Localized, minimize: bool = True) -> tuple[Localized, dict]:
    """d/dx of (x-t)^(-r) f, as (x-t)^(-r-1) * sum (n sigma(q_n) - r q_n - (n+1) sigma(q_(n+1)) t) x^n.

    Also evaluates -r f + (x - t) f' by ring multiplication and reports the
    agreement of the two routes.
    """
    f = loc.body
    d = f.datum
    r = loc.r
    R = d.ring
    n_out = len(f.coeffs) + 1 if f.tail_zero else f.xcap + 1
    coeffs = []
    for n in range(n_out):
        qn = f.coeff(n) if n < len(f.coeffs) or not f.tail_zero else R.zero(f.min_prec())
        term = d.sigma(qn) * n - qn * r
        if n + 1 < len(f.coeffs):
            term = term - d.sigma(f.coeffs[n + 1]) * d.t * (n + 1)
        elif not f.tail_zero and n + 1 <= f.xcap:
            term = term - d.sigma(f.coeff(n + 1)) * d.t * (n + 1)
        coeffs.append(term)
    rearranged = BoundedSeries(d, coeffs, f.xcap, f.tail_zero,
                               None if f.tail_zero else f.lower_bound)
    g = BoundedSeries.g(d, f.xcap)
    verbatim = f.scale_int(-r) + series_mul(g, derivative_series(f))
    diff = rearranged - verbatim
    if not f.tail_zero:  # the top coefficient needs q_(M+1), which the window lacks
        diff = BoundedSeries(d, diff.coeffs[: f.xcap], f.xcap, False, diff.lower_bound)
    out = Localized(r + 1, rearranged)
    if minimize:
        out = minimize_localized(out)
    return out, {"routes_residual": diff.residual_value()}


def minimize_localized(loc: Localized) -> Localized:
    r, body = loc.r, loc.body
    while r > 0:
        b = _left_divide_by_g(body)
        if b is None:
            break
        r, body = r - 1, b
    return Localized(r, body)


def derivative_invariance_check(g: BoundedSeries, alpha: QElem, i: int) -> tuple[bool, object]:
    """(g alpha - alpha g) i^{-1} = (d/dx g)(x - t), the identity with the denominator cleared."""
    d = g.datum
    p = d.p
    if i % p == 0:
        raise HypothesisFail("i must be nonzero mod p")
    if not (d.sigma(alpha) - alpha - d.ring.one() * (i % p)).is_zero():
        raise HypothesisFail("sigma(alpha) != alpha + i")
    a = BoundedSeries.const(d, alpha, g.xcap)
    inv_i = pow(i, -1, p)
    lhs = (series_mul(g, a) - series_mul(a, g)).scale_int(inv_i)
    rhs = series_mul(derivative_series(g), BoundedSeries.g(d, g.xcap))
    v = (lhs - rhs).residual_value()
    return v >= d.ring.prec, v


def g_power_alpha_check(d: SkewDatum, alpha: QElem, i: int, n: int) -> object:
    """Residual of (x-t)^n alpha - alpha (x-t)^n - i n (x-t)^n."""
    g = OrePoly.g(d)
    gn = OrePoly.const(d, d.ring.one())
    for _ in range(n):
        gn = ore_mul(gn, g)
    a = OrePoly.const(d, alpha)
    diff = ore_mul(gn, a) - ore_mul(a, gn) - gn * ((i * n) % d.p)
    return _residual(diff)


# ---------------------------------------------------------------------------------
# components over the x^p-subring

def split_by_residue(f: BoundedSeries) -> list[BoundedSeries]:
    """f_r with f = sum_r f_r(x^p) x^r, by regrouping coefficient indices mod p."""
    d = f.datum
    p = d.p
    sub = iterate_datum(d, 1, verify=False)
    top = len(f.coeffs) if f.tail_zero else f.xcap + 1
    out = []
    for r in range(p):
        cs = [f.coeff(n) for n in range(r, top, p)]
        out.append(BoundedSeries(sub, cs, max((f.xcap - r) // p, 0), f.tail_zero,
                                 None if f.tail_zero else f.lower_bound))
    return out


def extract_components_by_derivative(f: BoundedSeries) -> list[BoundedSeries]:
    """Descending derivatives: D^r(f - sum_{i>r} f_i(x^p) x^i) = r! f_r(x^p)."""
    d = f.datum
    p = d.p
    sub = iterate_datum(d, 1, verify=False)
    rest = f
    comps: list[BoundedSeries | None] = [None] * p
    for r in range(p - 1, -1, -1):
        D = rest
        for _ in range(r):
            D = derivative_series(D)
        inv = pow(factorial(r) % p, -1, p)
        D = D.scale_int(inv)
        # D = f_r(x^p): keep the multiples of p
        top = len(D.coeffs)
        cs = [D.coeff(n) for n in range(0, top, p)]
        comp = BoundedSeries(sub, cs, max((f.xcap - r) // p, 0), f.tail_zero,
                             None if f.tail_zero else f.lower_bound)
        comps[r] = comp
        term = series_mul(spread(comp, d, p, f.xcap),
                          BoundedSeries(d, [d.ring.zero()] * r + [d.ring.one()], f.xcap, True))
        rest = rest - term
    return comps


# ---------------------------------------------------------------------------------
# extension of ideals from S = Q+[[x^p]]

@dataclass
class PsiResult:
    generators: list[BoundedSeries]
    membership: list[bool]
    two_sided_residuals: list[object]


def _is_sigma_stable(gens: list[BoundedSeries]) -> bool:
    for gen in gens:
        s = sigma_tilde(gen)
        ok = False
        for other in gens:
            if len(other.coeffs) != len(s.coeffs) or not other.coeffs:
                continue
            try:
                u = s.coeffs[-1] * invert_in_O(other.coeffs[-1])
            except NotAUnit:
                u = s.coeffs[-1] * other.coeffs[-1].inverse()
            if (s - other.left_scale(u)).is_zero():
                ok = True
                break
        if not ok and not s.is_zero():
            return False
    return True


def extend_ideal_psi(gens: list[BoundedSeries], rng: np.random.Generator | None = None,
                     samples: int = 4) -> PsiResult:
    """Generators gen * x^i (i < p) of J R, with the witness x s = sigma(s) x + t s - sigma(s) t."""
    if not gens:
        return PsiResult([], [], [])
    d = gens[0].datum
    p = d.p
    R = d.ring
    nonzero = [g for g in gens if not g.is_zero()]
    if not nonzero:
        return PsiResult([BoundedSeries(d, [], gens[0].xcap, True)], [True], [])
    for g in nonzero:
        if any(not c.is_zero() for n, c in enumerate(g.coeffs) if n % p):
            raise NotSigmaInvariant("generator is not in the x^p-subring")
    if not _is_sigma_stable(nonzero):
        raise NotSigmaInvariant("generator list is not closed under sigma")
    xcap = nonzero[0].xcap
    out = []
    for g in nonzero:
        for i in range(p):
            xi = BoundedSeries(d, [R.zero()] * i + [R.one()], xcap, True)
            out.append(series_mul(g, xi))
    membership = [any((g - o).is_zero() for o in out) for g in nonzero]
    rng = rng or np.random.default_rng(0)
    x = BoundedSeries.x(d, xcap)
    t = BoundedSeries.const(d, d.t, xcap)
    residuals = []
    for _ in range(samples):
        g = nonzero[int(rng.integers(len(nonzero)))]
        s = BoundedSeries.const(d, R.random(rng), xcap) * g  # an element of J
        ss = sigma_tilde(s)
        lhs = series_mul(x, s)
        rhs = series_mul(ss, x) + series_mul(t, s) - series_mul(ss, t)
        residuals.append((lhs - rhs).residual_value())
    return PsiResult(out, membership, residuals)


def power_identity_check(d: SkewDatum, coeffs: list[QElem], h: OrePoly) -> object:
    """Residual of (sum b_i h^i)^p - sum b_i^p h^(ip)."""
    p = d.p
    one = OrePoly.const(d, d.ring.one())
    hp = [one]
    for _ in range(len(coeffs) * p):
        hp.append(ore_mul(hp[-1], h))
    a = OrePoly.zero(d)
    for i, b in enumerate(coeffs):
        a = a + ore_mul(OrePoly.const(d, b), hp[i])
    ap = one
    for _ in range(p):
        ap = ore_mul(ap, a)
    rhs = OrePoly.zero(d)
    for i, b in enumerate(coeffs):
        rhs = rhs + ore_mul(OrePoly.const(d, b**p), hp[i * p])
    return _residual(ap - rhs)


def extended_relation_residual(r: BoundedSeries) -> dict:
    """x r = sigma~(r) x + delta~(r) and delta~(r) = t r - sigma~(r) t."""
    d = r.datum
    x = BoundedSeries.x(d, r.xcap)
    t = BoundedSeries.const(d, d.t, r.xcap)
    sr = sigma_tilde(r)
    dr = extend_map_to_series(d.delta, r, check=False)
    lhs = series_mul(x, r)
    rhs = series_mul(sr, x) + dr
    inner = dr - (series_mul(t, r) - series_mul(sr, t))
    return {"x_relation": (lhs - rhs).residual_value(), "inner": inner.residual_value()}
