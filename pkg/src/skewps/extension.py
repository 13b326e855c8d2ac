"""Scalar extension of skew data and the reduction pipeline to a unit conjugator.

Extended data live on Q_K = M_s(K) with K = F_{q^f}((rho)), rho^e = pi, and
u_K measured in rho-units (so u_K(pi) = e).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import (CertificationFail, HypothesisFail, NoContraction, NotAUnit, NotCentralModJ,
                     NotCoprime, RootNotFound, SkewError, StageError)
from .galois import Extension, adjoin_root_of_unit_power, trivial_extension
from .maps import SkewAuto
from .qelem import INF, MatRing, QElem, invert_in_O
from .series import BoundedSeries
from .skew import Compatibility, SkewDatum, certify_compatibility, iterate_datum, order_on_centre


def residual(x: QElem):
    """Guaranteed valuation of a difference: u if nonzero, else its precision."""
    return x.prec if x.is_zero() else x.u


def _worst(vals):
    return min(vals, default=INF)


# ---------------------------------------------------------------------------------
# extended data

@dataclass
class ExtendedDatum:
    base: SkewDatum
    K: Extension
    datum: SkewDatum
    flags: dict
    constants: tuple[int, int]
    unit_basis_constants: tuple[int, int]
    window: int
    compat_base: Compatibility
    compat_ext: Compatibility

    def to_json(self) -> dict:
        return {"extension": self.K.describe(), "flags": self.flags,
                "ae3_constants": list(self.constants),
                "ae3_unit_basis_constants": list(self.unit_basis_constants),
                "window": [-self.window, self.window],
                "compatibility_base": str(self.compat_base), "compatibility_ext": str(self.compat_ext)}


def _inner_conjugator(d: SkewDatum) -> QElem:
    sig = d.sigma
    if sig.r % d.ring.k:
        raise CertificationFail("AE1", "sigma is not trivial on the centre; replace it by a p-power first")
    return sig.conj_unit()


def build_extended_datum(d: SkewDatum, K: Extension, window: int | None = None,
                         rng: np.random.Generator | None = None, samples: int = 8) -> ExtendedDatum:
    R = d.ring
    rng = rng or np.random.default_rng(0)
    c = _inner_conjugator(d)
    sigK = SkewAuto(K.ring, 0, K.iota(c))
    tK = K.iota(d.t)
    dK = SkewDatum(K.ring, sigK, tK, xcap=d.xcap, check=False,
                   name=f"{d.name}_K" if d.name else "extended")
    tests = R.residue_basis() + [R.random(rng) for _ in range(samples)]

    # AE1: sigma_K and delta_K restrict to sigma, delta
    s_res = _worst(residual(sigK(K.iota(q)) - K.iota(d.sigma(q))) for q in tests)
    d_res = _worst(residual(dK.delta(K.iota(q)) - K.iota(d.delta(q))) for q in tests)
    target = K.ring.prec
    s_zero = all((sigK(K.iota(q)) - K.iota(d.sigma(q))).is_zero() for q in tests)
    d_zero = all((dK.delta(K.iota(q)) - K.iota(d.delta(q))).is_zero() for q in tests)
    if not (s_zero and d_zero):
        raise CertificationFail("AE1", f"restriction residuals {s_res}, {d_res} (target {target})")
    if not (sigK(tK) - tK).is_zero():
        raise CertificationFail("AD4", "sigma_K does not fix t")

    # AE2 on the residue basis
    if any(K.iota(q).u < 0 for q in R.residue_basis() if q.u >= 0):
        raise CertificationFail("AE2", "a non-negative element lost positivity")

    # AE3': level-set comparison on filt-basis elements over the window
    W = 2 * R.prec if window is None else window
    diffs, diffs_unit = [], []
    for (i, j) in K.basis.elements:
        alpha = K.scalars.const([[K._alpha_codes[i]]])
        for n in range(-W, W + 1):
            ex = j + K.e * n
            prec = ex + K.ring.prec
            for a in range(R.s):
                for b in range(R.s):
                    X = K.ring.unit_matrix(a, b, K.ring.prec).shift(ex) * K.ring.scalar(alpha)
                    X = X.truncate(prec)
                    uK = X.u
                    ut = K.tensor_filtration(X)
                    diffs.append(ut - uK)
                    diffs_unit.append(K.e * n - uK)
    for _ in range(samples):
        X = K.ring.random(rng, low=-K.e, high=K.ring.prec)
        if not X.is_zero():
            diffs.append(K.tensor_filtration(X) - X.u)
    c1 = max(0, max(diffs))
    c2 = max(0, -min(diffs))
    unit_c = (max(0, max(diffs_unit)), max(0, -min(diffs_unit)))

    compat_base = d.compatibility
    compat_ext = certify_compatibility(dK)
    flags = {"AE1": True, "AE2": True, "AE3_prime": "windowed", "AE1_residuals": [s_res, d_res]}
    if compat_ext.kind == "uncertified":
        raise CertificationFail("AD6", "no compatibility exponent for the extended datum")
    return ExtendedDatum(d, K, dK, flags, (c1, c2), unit_c, W, compat_base, compat_ext)


def theta_map(f: BoundedSeries, ext: ExtendedDatum) -> BoundedSeries:
    """Coefficientwise embedding Q^+[[x]] -> Q_K^+[[y]]."""
    if f.datum is not ext.base:
        raise CertificationFail("theta", "series is not over the base datum of this extension")
    K = ext.K
    lb = None if f.tail_zero else K.e * f.lower_bound
    return BoundedSeries(ext.datum, [K.iota(c) for c in f.coeffs], xcap=f.xcap,
                         tail_zero=f.tail_zero, lower_bound=lb)


def theta_multiplicativity(f: BoundedSeries, g: BoundedSeries, ext: ExtendedDatum) -> tuple[bool, int, int]:
    """(difference zero at precision, residual, guarantee = e * min precision of fg)."""
    fg = f * g
    lhs = theta_map(fg, ext)
    rhs = theta_map(f, ext) * theta_map(g, ext)
    diff = lhs - rhs
    guarantee = ext.K.e * fg.min_prec()
    return diff.is_zero(), diff.residual_value(), guarantee


def ae_transitivity(inner: Extension, outer_e: int, outer_f: int, rng: np.random.Generator,
                    samples: int = 20) -> dict:
    """Compose a second layer (e2, f2) on top of an extension and check the product filt-basis.

    The tower is realised directly as the (e1 e2, f1 f2) extension of the base;
    the product basis {alpha_i beta_k} with values j1 e2 + j2 must give the
    filt-free formula for the valuation.
    """
    from .galois import compose_filt_bases, Extension as Ext
    outer_basis = Ext(inner.ring.with_prec(inner.base.prec), outer_e, outer_f).basis
    tower = Ext(inner.base, inner.e * outer_e, inner.f * outer_f)
    composed = compose_filt_bases(inner.basis, outer_basis)
    ok = True
    for _ in range(samples):
        x = tower.scalars.random(rng, low=-tower.e, high=tower.ring.prec)
        if x.is_zero():
            continue
        if tower.formula_value(x) != x.u:
            ok = False
    return {"e": composed.e, "f": composed.f, "basis_size": len(composed), "formula_exact": ok,
            "values": sorted(set(composed.values)), "status": "windowed"}


def tensor_filtration_oracle(K: Extension, X: QElem, rng: np.random.Generator, reps: int = 500) -> tuple[object, int]:
    """Max over random representations X = sum beta_i (x) w_i of min(v_K(beta_i) + e u(w_i)).

    Representations come from beta = D U alpha with U in GL(F_q) and D a diagonal of
    pi-powers; w = D^{-1} U^{-T} q.  Returns (best value, number of sampled
    representations exceeding the filt-basis formula).
    """
    F = K.Z
    coords = K.matrix_coords(X)
    keys = list(K.basis.elements)
    qs = [coords[b] for b in keys]
    n = len(keys)
    formula = K.tensor_filtration(X)
    # q_b on a common window, as digit arrays (n, s, s, L, k)
    lo = min(q.lo for q in qs)
    prec = min(q.prec for q in qs)
    Q = np.stack([q._window(lo, prec) for q in qs]) if prec > lo else None
    mul_mats = np.stack([F.mul_matrix(c) for c in range(F.q)])
    best, exceed = formula, 0
    for _ in range(reps):
        while True:
            U = rng.integers(0, F.q, size=(n, n))
            Uinv = _codes_inv(U, F)
            if Uinv is not None:
                break
        shifts = rng.integers(-2, 3, size=n)
        value = INF
        for i in range(n):
            # beta_i = pi^k_i sum_b U[i, b] b; its rho-value is the least j with a nonzero
            # residue-field coefficient, since every b has value j < e
            per_j: dict[int, int] = {}
            for b_idx, (a, j) in enumerate(keys):
                if U[i, b_idx]:
                    term = K.big.mul(K.embed_code(int(U[i, b_idx])), K._alpha_codes[a])
                    per_j[j] = K.big.add(per_j.get(j, 0), term)
            nonzero = [j for j, c in per_j.items() if c]
            if not nonzero:
                continue
            vb = min(nonzero) + K.e * int(shifts[i])
            # w_i = pi^-k_i sum_b Uinv^T[i, b] q_b
            if Q is None:
                continue
            W = np.einsum("bxylk,bkm->xylm", Q, mul_mats[Uinv[:, i]]) % F.p
            hits = np.nonzero(W.any(axis=(0, 1, 3)))[0]
            if hits.size == 0:
                continue
            value = min(value, vb + K.e * (lo + int(hits[0]) - int(shifts[i])))
        if value > formula:
            exceed += 1
        best = max(best, value) if value != INF else best
    return best, exceed


def _codes_inv(U, F):
    from .qelem import codes_inverse
    return codes_inverse(U, F)


def centre_check(ext: ExtendedDatum, rng: np.random.Generator, samples: int = 10) -> bool:
    """Central elements of Q_K are exactly the K-scalars, by commutator rank on the basis."""
    RK = ext.K.ring
    basis = RK.residue_basis()
    for _ in range(samples):
        z = ext.K.scalar(ext.K.scalars.random(rng, high=RK.prec))
        if any(not (z * b - b * z).is_zero() for b in basis):
            return False
        X = RK.random(rng, high=RK.prec)
        central = all((X * b - b * X).is_zero() for b in basis)
        scalar_like = all((X.entry(i, j).is_zero() if i != j else (X.entry(i, i) - X.entry(0, 0)).is_zero())
                          for i in range(RK.s) for j in range(RK.s))
        if central != scalar_like:
            return False
    return True


# ---------------------------------------------------------------------------------
# central scaling

@dataclass
class CentralScale:
    K: Extension
    ext: ExtendedDatum | None
    zeta: QElem
    c: QElem
    ell: int
    C: int
    v: int
    certificates: dict

    def to_json(self) -> dict:
        return {"extension": self.K.describe(), "C": self.C, "ell": self.ell, "u_b": self.v,
                "zeta": str(self.zeta), "c": self.c.to_json(), "certificates": self.certificates}


def _sigma_power_is_conj(sigma: SkewAuto, n: int, a: QElem, ring: MatRing, extra=()) -> tuple[bool, object]:
    """(all differences zero at precision, worst residual) for sigma^n against conj(a)."""
    sp = sigma.power(n)
    ainv = a.inverse()
    diffs = [sp(q) - a * q * ainv for q in list(ring.residue_basis()) + list(extra)]
    return all(x.is_zero() for x in diffs), _worst(residual(x) for x in diffs)


def central_scale(a: QElem, d: SkewDatum, n: int = 1, C: int | None = None,
                  rng: np.random.Generator | None = None) -> CentralScale:
    """sigma^n = conj(a); find K, zeta central in K and c = zeta^{-1} a^{p^ell} in O_K^x.

    C is the degree of the chosen central element z of J(O); for the desk rings
    the minimal choice is z = pi with C = 1.  A larger C (the 'central gap' of a
    rescaled filtration) adjoins a C-th root of pi.
    """
    R = d.ring
    rng = rng or np.random.default_rng(0)
    ok, res = _sigma_power_is_conj(d.sigma, n, a, R, [R.random(rng) for _ in range(2)])
    if not ok:
        raise HypothesisFail(f"sigma^{n} is not conjugation by a (residual {res})")
    z = R.scalars.pi_power(1)
    if z.is_zero():
        raise SkewError("Z ∩ J(O) is zero at precision")
    C = 1 if C is None else C
    if a.u == 0 and C == 1:
        K = trivial_extension(R)
    else:
        K = adjoin_root_of_unit_power(R, z, C)
    dn = d if n == 1 else SkewDatum(R, d.sigma.power(n), d.t, xcap=d.xcap, check=False)
    ext = build_extended_datum(dn, K, rng=rng)
    ell = ext.compat_ext.m
    aK = K.iota(a)
    b = aK ** (d.p**ell)
    v = b.u
    zeta = K.scalars.one(K.ring.prec) if v == 0 else K.zeta0 ** v
    c = K.scalar(zeta.inverse()) * b
    certs = {}
    try:
        cinv = invert_in_O(c)
    except NotAUnit as exc:
        raise CertificationFail("central-scale", f"c is not a unit: {exc}") from None
    certs["u_c"] = c.u
    certs["u_c_inverse"] = cinv.u
    certs["c_cinv_residual"] = residual(c * cinv - 1)
    certs["zeta_power_residual"] = residual(K.zeta0**C - K.iota(z)) if K.zeta0 is not None else INF
    sK = ext.datum.sigma.power(d.p**ell)
    certs["conjugation_residual"] = _worst(residual(sK(q) - c * q * cinv) for q in K.ring.residue_basis())
    return CentralScale(K, ext, zeta, c, ell, C, v, certs)


# ---------------------------------------------------------------------------------
# Frobenius-twisted lifting of the residue

@dataclass
class FrobLift:
    zeta: QElem
    T: int
    root: int
    twisted_poly: list[int]
    residual: object


def frobenius_twist_lift(b: QElem, fbar: list[int], T: int) -> FrobLift:
    """zeta central unit with b^(p^T) = zeta mod J, from the roots of Frob^T(f)."""
    R = b.ring
    F = R.field
    if b.is_zero() or b.u != 0:
        raise NotAUnit("b is not a unit of O")
    for q in R.residue_basis():
        if residual(b * q - q * b) < 1:
            raise NotCentralModJ("b does not commute with O modulo J")
    lam0_mat = b.residue()
    lam0 = int(lam0_mat[0, 0])
    if any(int(lam0_mat[i, j]) != (lam0 if i == j else 0) for i in range(R.s) for j in range(R.s)):
        raise NotCentralModJ("residue of b is not scalar")
    acc = 0
    for cf in reversed(fbar):
        acc = F.add(F.mul(acc, lam0), cf)
    if acc != 0:
        raise HypothesisFail("fbar does not vanish at the residue of b")
    twisted = [F.frob(int(cf), T) for cf in fbar]
    roots = F.roots_of(twisted)
    if len(roots) < len(fbar) - 1:
        raise RootNotFound(f"Frob^{T}(f) does not split over GF({F.p}^{F.k}); extend K and retry")
    target = F.frob(lam0, T)
    if target not in roots:
        raise RootNotFound("no root of Frob^T(f) matches the residue of b^(p^T)")
    zeta = R.scalar(target)
    bT = b ** (R.p**T)
    r = residual(bT - zeta)
    if r < 1:
        raise RootNotFound("matched root does not lift b^(p^T) modulo J")
    return FrobLift(zeta, T, target, twisted, r)


def minimal_polynomial_over_prime_field(F, a: int) -> list[int]:
    """Coefficients (low to high) of the minimal polynomial of a over F_p, computed in F."""
    orbit = [a]
    y = F.frob(a, 1)
    while y != a:
        orbit.append(y)
        y = F.frob(y, 1)
    poly = [1]
    for r in orbit:
        new = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = F.add(new[i + 1], c)
            new[i] = F.sub(new[i], F.mul(r, c))
        poly = new
    return poly


# ---------------------------------------------------------------------------------
# convergence

@dataclass
class ConvergenceRun:
    d: int
    r: int
    s: int
    sj: list[int]
    bj: list[QElem]
    gaps: list[object]
    limit: QElem
    c: QElem
    certificate: object | None = None

    def to_json(self) -> dict:
        return {"d": self.d, "r": self.r, "s": self.s, "s_j": self.sj,
                "gaps": [None if g == INF else g for g in self.gaps],
                "c": self.c.to_json(), "certificate": None if self.certificate in (None, INF) else self.certificate}


def order_mod(p: int, d: int) -> int:
    if gcd(p, d) != 1:
        raise NotCoprime(f"{p} divides {d}")
    r, x = 1, p % d
    while x != 1 % d:
        x = (x * p) % d
        r += 1
    return r


def converge_inner(c1: QElem, d: int, tau=None, max_steps: int = 64) -> ConvergenceRun:
    """b_j = c1^(s_j) with s_j = (p^(jr) - 1)/d; returns c = lim b_j^{-1}.

    conj(c1) = tau^d is the caller's hypothesis; with tau given the limit is
    certified against tau on the residue basis.
    """
    R = c1.ring
    p = R.p
    r = order_mod(p, d)
    s = (p**r - 1) // d
    if residual(c1 - 1) < 1:
        raise HypothesisFail("c1 is not in 1 + J(O)")
    c1s = c1**s
    sj, bj, gaps = [s], [c1s], []
    j = 1
    while True:
        nxt = bj[-1] ** (p**r) * c1s
        step = nxt - bj[-1]
        gap = residual(step)
        if gap < p ** (j * r) and not step.is_zero():
            raise NoContraction(f"u(b_{j + 1} - b_{j}) = {gap} < {p ** (j * r)}")
        gaps.append(gap)
        sj.append(p**r * sj[-1] + s)
        bj.append(nxt)
        j += 1
        if step.is_zero() or j > max_steps:
            break
    b = bj[-1]
    c = invert_in_O(b)
    cert = None
    if tau is not None:
        cert = _worst(residual(tau(q) - c * q * b) for q in R.residue_basis())
    return ConvergenceRun(d, r, s, sj, bj, gaps, b, c, cert)


# ---------------------------------------------------------------------------------
# pipeline

CITATIONS = {
    "gate": "admissible datum preconditions",
    "order-on-centre": "order of sigma on the centre",
    "p-power-replacement": "primality under p-power replacement",
    "iwasawa": "Iwasawa reduction",
    "central-scale": "central scaling lemma",
    "frobenius-lift": "Frobenius-twisted minimal polynomial lifting",
    "converge": "inner-automorphism convergence",
    "witness": "SFOH witness",
}


@dataclass
class PipelineReport:
    stages: list[dict] = field(default_factory=list)
    a: QElem | None = None
    ell: int | None = None
    extension: Extension | None = None
    passed: bool = False
    target: int | None = None

    def add(self, name: str, **data):
        rec = {"stage": len(self.stages), "name": name, "citation": CITATIONS[name]}
        rec.update(data)
        self.stages.append(rec)

    def to_json(self) -> dict:
        return {"stages": self.stages, "ell": self.ell, "passed": self.passed, "target": self.target,
                "a": None if self.a is None else self.a.to_json(),
                "extension": None if self.extension is None else self.extension.describe()}


def _run_stage(idx: int, name: str, fn):
    try:
        return fn()
    except StageError:
        raise
    except SkewError as exc:
        raise StageError(idx, name, exc) from exc


def reduce_to_sfoh(d: SkewDatum, C: int | None = None, rng: np.random.Generator | None = None,
                   target: int | None = None) -> PipelineReport:
    """Run the reduction stages; certificates must reach ``target`` (base units, default the ring precision)."""
    R = d.ring
    p = d.p
    target = R.prec if target is None else target
    rng = rng or np.random.default_rng(0)
    rep = PipelineReport()

    # stage 0: gate (errors are not wrapped, the gate is the precondition)
    if not (d.sigma(d.t) - d.t).is_zero():
        raise HypothesisFail("sigma(t) != t", stage=0)
    try:
        invert_in_O(d.t)
    except NotAUnit:
        raise HypothesisFail("t is not a unit of O", stage=0) from None
    rep.add("gate", sigma_fixes_t=True, t_unit=True)

    order = _run_stage(1, "order-on-centre", lambda: order_on_centre(d))
    s = 0
    while p**s < order:
        s += 1
    rep.add("order-on-centre", order=order, s=s)

    if s == 0 and d.sigma.r == 0 and d.is_iwasawa:
        a = d.sigma.conj_unit()
        cinv = invert_in_O(a)
        res = _worst(residual(d.sigma(q) - a * q * cinv) for q in R.residue_basis())
        rep.add("witness", short_circuit=True, ell=0, unit=a.to_json(), u_a=a.u, u_a_inverse=cinv.u,
                conjugation_residual=res)
        rep.a, rep.ell, rep.extension, rep.target = a, 0, trivial_extension(R), target
        rep.passed = res >= target
        return rep

    d1 = _run_stage(2, "p-power-replacement", lambda: iterate_datum(d, s, verify=False))
    if d1.sigma.r % R.k:
        raise StageError(2, "p-power-replacement", HypothesisFail("sigma^(p^s) still moves the centre"))
    t1 = d1.t
    rep.add("p-power-replacement", exponent=p**s, sigma=d1.sigma.describe())

    from .crossed import iwasawa_normalize
    cert = _run_stage(3, "iwasawa", lambda: iwasawa_normalize(d1, rng=rng))
    d2 = cert.datum
    a2 = d2.sigma.conj_unit()
    rep.add("iwasawa", unit=cert.unit.to_json(),
            checks={k: (None if v == INF else v) if not isinstance(v, bool) else v for k, v in cert.checks.items()})

    cs = _run_stage(4, "central-scale", lambda: central_scale(a2, d2, 1, C=C, rng=rng))
    K = cs.K
    rep.add("central-scale", extension=K.describe(), ell=cs.ell, u_b=cs.v, zeta=str(cs.zeta),
            unit=cs.c.to_json(), certificates=_clean(cs.certificates),
            extended=cs.ext.to_json() if cs.ext else None)
    L = cs.ell

    def lift():
        lam = int(cs.c.residue()[0, 0])
        fbar = minimal_polynomial_over_prime_field(K.big, lam)
        # f has coefficients in the residue centre; over K.big it is X - lam
        return frobenius_twist_lift(cs.c, [K.big.neg(lam), 1], 0), fbar

    fl, fbar = _run_stage(5, "frobenius-lift", lift)
    c1 = K.scalar(K.scalars.const([[K.big.inv(fl.root)]])) * cs.c
    rep.add("frobenius-lift", T=0, root=fl.root, min_poly_over_Fp=fbar, residual=_num(fl.residual),
            unit=c1.to_json())

    tau = cs.ext.datum.sigma.power(p**L)
    run = _run_stage(6, "converge", lambda: converge_inner(c1, 1, tau))
    rep.add("converge", **run.to_json())

    tK = K.iota(t1)
    a_final = tK ** (p**L) * run.c
    ell = s + L
    a_inv = invert_in_O(a_final)
    # sigma^(p^ell) is inner on Q; extend it to Q_K and compare
    sig_pow = d.sigma.power(p**ell)
    if sig_pow.r % R.k:
        raise StageError(7, "witness", HypothesisFail("sigma^(p^ell) is not inner"))
    sigK = SkewAuto(K.ring, 0, K.iota(sig_pow.conj_unit()))
    res = _worst(residual(sigK(q) - a_final * q * a_inv) for q in K.ring.residue_basis())
    c_inv = invert_in_O(run.c)
    rep.add("witness", ell=ell, unit=a_final.to_json(), u_a=a_final.u, u_a_inverse=a_inv.u,
            u_c=run.c.u, u_c_inverse=c_inv.u, conjugation_residual=_num(res))
    rep.a, rep.ell, rep.extension = a_final, ell, K
    rep.target = target
    rep.passed = (res >= K.e * target and a_final.u == 0 and a_inv.u == 0
                  and run.c.u == 0 and c_inv.u == 0)
    return rep


def _num(v):
    return None if v == INF else int(v)


def _clean(d: dict) -> dict:
    return {k: _num(v) if not isinstance(v, (bool, str, list, dict)) else v for k, v in d.items()}
