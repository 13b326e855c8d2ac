import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewps.errors import HypothesisFail, NotPPower
from skewps.fields import field
from skewps.maps import Identity, Inner, SigmaMinusId, SkewAuto, degree_of_map
from skewps.qelem import INF, MatRing
from skewps.skew import (
    SkewDatum,
    certify_compatibility,
    check_sigma_fixes_conjugator,
    iterate_datum,
    order_on_centre,
)

F4 = field(2, 2)
R = MatRing(F4, 2, 12)
S1 = MatRing(field(2, 1), 1, 12)


def test_degree_examples():
    assert degree_of_map(SigmaMinusId(Identity()), R) == INF
    c = S1.one() + S1.pi_power(1)
    # commutative ring: conjugation is trivial
    assert degree_of_map(SigmaMinusId(Inner(c)), S1) == INF
    c2 = R.parse("[[1, pi],[0, 1]]")
    assert degree_of_map(SigmaMinusId(Inner(c2)), R) == 1
    t = -R.one()
    d = SkewDatum(R, SkewAuto(R), t)
    assert d.delta_degree() == INF


def test_brute_force_degree_of_inner_on_basis():
    c = R.parse("[[1, pi],[pi, 1]]")
    sigma = SkewAuto(R, 0, c)
    worst = min((sigma(b) - b).u for b in R.residue_basis() if not (sigma(b) - b).is_zero())
    assert degree_of_map(SigmaMinusId(sigma), R) == worst == 1


def test_sigma_must_fix_t():
    sigma = SkewAuto(R, 1)
    with pytest.raises(HypothesisFail):
        SkewDatum(R, sigma, R.scalar(2))


def test_iterate_zero_and_trivial():
    d = SkewDatum(R, SkewAuto(R), -R.one())
    assert iterate_datum(d, 0) is d
    q = R.random(np.random.default_rng(0))
    assert d.delta(q).is_zero() and iterate_datum(d, 2).delta(q).is_zero()


def test_iterated_delta_matches_closed_form():
    c = R.parse("[[1, pi],[0, 1]]")
    d = SkewDatum(R, SkewAuto(R, 1, c), c)
    rng = np.random.default_rng(1)
    d2 = iterate_datum(d, 1)
    for _ in range(100):
        s = R.random(rng)
        assert (d.delta(d.delta(s)) - d2.delta(s)).is_zero()


def test_compatibility_examples():
    one_pi = R.one() + R.pi_power(1).shift(0) * R.parse("[[0, 1],[1, 0]]")
    d = SkewDatum(R, SkewAuto(R, 0, one_pi), -R.one())
    assert str(certify_compatibility(d)) == "compatible"
    frob = SkewDatum(MatRing(F4, 1, 12), SkewAuto(MatRing(F4, 1, 12), 1), -MatRing(F4, 1, 12).one())
    assert str(certify_compatibility(frob)) == "quasi-compatible-with(1)"
    ident = SkewDatum(R, SkewAuto(R), -R.one())
    assert str(certify_compatibility(ident)) == "compatible"


def test_order_on_centre_examples():
    c = R.parse("[[1, pi],[0, 1]]")
    assert order_on_centre(SkewDatum(R, SkewAuto(R, 0, c), R.one())) == 1
    assert order_on_centre(SkewDatum(R, SkewAuto(R), R.one())) == 1
    F8 = MatRing(field(2, 3), 1, 8)
    # Frobenius on F_8 has order 3: not a power of 2
    with pytest.raises(NotPPower):
        order_on_centre(SkewDatum(F8, SkewAuto(F8, 1), F8.one()))
    F27 = MatRing(field(3, 3), 1, 8)
    assert order_on_centre(SkewDatum(F27, SkewAuto(F27, 1), -F27.one())) == 3


def test_sigma_fixes_conjugator_examples():
    d = SkewDatum(R, SkewAuto(R), R.one())
    assert check_sigma_fixes_conjugator(d, R.one(), 0)
    c = R.one() + R.parse("[[0, pi],[pi, 0]]")
    d2 = SkewDatum(R, SkewAuto(R, 0, c), c)
    assert check_sigma_fixes_conjugator(d2, c**2, 1)
    assert check_sigma_fixes_conjugator(d2, d2.t**2, 1)


@given(st.integers(0, 2**32 - 1), st.integers(0, 3))
def test_sigma_is_ring_automorphism(seed, r):
    rng = np.random.default_rng(seed)
    c = R.random_unit(rng)
    sigma = SkewAuto(R, r, c)
    a, b = R.random(rng, low=-1), R.random(rng, low=-1)
    assert (sigma(a * b) - sigma(a) * sigma(b)).is_zero()
    assert (sigma.inverse()(sigma(a)) - a).is_zero()
    assert (sigma.power(3)(a) - sigma(sigma(sigma(a)))).is_zero()


@given(st.integers(0, 2**32 - 1))
def test_delta_is_sigma_derivation(seed):
    rng = np.random.default_rng(seed)
    c = R.random_unit(rng)
    t = c
    d = SkewDatum(R, SkewAuto(R, 0, c), t)
    a, b = R.random(rng), R.random(rng)
    assert (d.delta(a * b) - (d.delta(a) * b + d.sigma(a) * d.delta(b))).is_zero()
