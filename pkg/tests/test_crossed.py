import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import F4, f4_datum, trivial_datum
from skewps.crossed import (
    Localized,
    decompose,
    derivative_invariance_check,
    derivative_series,
    extend_ideal_psi,
    extract_components_by_derivative,
    formal_derivative,
    g_relations,
    iwasawa_normalize,
    power_identity_check,
    split_by_residue,
)
from skewps.errors import HypothesisFail, NotSigmaInvariant
from skewps.maps import SkewAuto
from skewps.ore import OrePoly, ore_mul
from skewps.qelem import MatRing
from skewps.series import BoundedSeries, series_mul
from skewps.skew import SkewDatum

D = f4_datum(prec=8, xcap=16)
R = D.ring


def test_decompose_x_in_char_2():
    d = trivial_datum(p=2)
    dec = decompose(BoundedSeries.x(d), 1)
    c0, c1 = dec.components
    # x = 1 * g^0 + 1 * g^1 with g = x + 1
    assert [c.coeffs[0].entry(0, 0).coeffs for c in (c0, c1)] == [{0: 1}, {0: 1}]
    assert all(len(c.coeffs) == 1 for c in (c0, c1))


def test_decompose_powers_of_g():
    P = 4
    g = OrePoly.g(D)
    gi = OrePoly.const(D, R.one())
    for i in range(P):
        dec = decompose(BoundedSeries.from_poly(gi), 2)
        for j, c in enumerate(dec.components):
            if j == i:
                assert len(c.coeffs) == 1 and (c.coeffs[0] - R.one()).is_zero()
            else:
                assert c.is_zero()
        gi = ore_mul(gi, g)


@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2]))
def test_round_trip_degree_7(seed, m):
    f = BoundedSeries.random(D, np.random.default_rng(seed), degree=7)
    assert (decompose(f, m).recompose() - f).is_zero()


def test_components_live_over_the_iterate():
    f = BoundedSeries.random(D, np.random.default_rng(1), degree=9)
    dec = decompose(f, 1)
    assert all(c.datum is dec.sub for c in dec.components)


def test_g_relations_exact():
    rng = np.random.default_rng(2)
    for _ in range(10):
        r = g_relations(D, R.random(rng))
        assert r["gq"] >= R.prec and r["gx"] >= R.prec


def test_iwasawa_examples():
    d = trivial_datum()
    assert iwasawa_normalize(d).checks == {"identity": True}
    R2 = MatRing(F4, 2, 10)
    t = R2.parse("[[1, 0],[0, 2]]")
    cert = iwasawa_normalize(SkewDatum(R2, SkewAuto(R2), t))
    tinv = t.inverse()
    rng = np.random.default_rng(3)
    for _ in range(5):
        q = R2.random(rng)
        assert (cert.sigma0(q) - tinv * q * t).is_zero()
        assert (cert.datum.delta(q) - (cert.sigma0(q) - q)).is_zero()


def test_derivative_examples():
    d = trivial_datum(p=2)
    x2 = BoundedSeries(d, [d.ring.zero(), d.ring.zero(), d.ring.one()])
    assert derivative_series(x2).is_zero()
    assert derivative_series(BoundedSeries.const(d, d.ring.one())).is_zero()
    rng = np.random.default_rng(4)
    f = BoundedSeries.random(D, rng, degree=6)
    loc, info = formal_derivative(Localized(0, f), minimize=False)
    assert info["routes_residual"] >= R.prec
    assert loc.r == 1


def as_datum():
    c = R.parse("[[1, pi],[0, 1]]")
    return SkewDatum(R, SkewAuto(R, 1, c), c, xcap=16), R.scalar(2)


def test_derivative_invariance_for_constant_and_x():
    d, alpha = as_datum()
    ok, v = derivative_invariance_check(BoundedSeries.const(d, R.random(np.random.default_rng(5))), alpha, 1)
    assert ok
    ok, v = derivative_invariance_check(BoundedSeries.x(d), alpha, 1)
    assert ok and v >= R.prec
    with pytest.raises(HypothesisFail):
        derivative_invariance_check(BoundedSeries.x(d), alpha, 2)


def test_split_examples():
    d = D
    x = BoundedSeries.x(d)
    parts = split_by_residue(x)
    assert parts[0].is_zero() and (parts[1].coeffs[0] - R.one()).is_zero()
    f0 = BoundedSeries(d, [R.one(), R.zero(), R.pi_power(1)])
    parts = split_by_residue(f0)
    assert parts[1].is_zero() and len(parts[0].coeffs) == 2


@given(st.integers(0, 2**32 - 1))
def test_derivative_extraction_matches_regrouping(seed):
    d, _ = as_datum()
    f = BoundedSeries.random(d, np.random.default_rng(seed), degree=2 * d.p - 1)
    for a, b in zip(extract_components_by_derivative(f), split_by_residue(f)):
        assert (a - b).is_zero()


def test_psi_examples():
    d = D
    assert extend_ideal_psi([]).generators == []
    zero = extend_ideal_psi([BoundedSeries(d, [])])
    assert zero.generators[0].is_zero()
    one = extend_ideal_psi([BoundedSeries.one(d)])
    assert one.membership == [True]
    assert any((g - BoundedSeries.one(d)).is_zero() for g in one.generators)
    with pytest.raises(NotSigmaInvariant):
        extend_ideal_psi([BoundedSeries.x(d)])


def test_power_identity_on_commuting_coefficients():
    # over a commutative datum with sigma = id, delta = 0, (b0 + b1 h)^p = b0^p + b1^p h^p in char p
    d = trivial_datum(p=2)
    h = OrePoly.x(d)
    coeffs = [d.ring.one() + d.ring.pi_power(1), d.ring.pi_power(2)]
    assert power_identity_check(d, coeffs, h) >= d.ring.prec
