import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import f4_datum, trivial_datum
from skewps.errors import NotAUnit
from skewps.maps import Identity
from skewps.ore import OrePoly, ore_mul
from skewps.qelem import INF
from skewps.series import (
    BoundedSeries,
    change_variable,
    extend_map_to_series,
    invert_unit_series,
    series_mul,
    substitute,
)

D = f4_datum(prec=8, xcap=12)
R = D.ring


def test_constant_coefficient_formula():
    rng = np.random.default_rng(3)
    f = BoundedSeries.random(D, rng, degree=4)
    g = BoundedSeries.random(D, rng, degree=3)
    prod = series_mul(f, g)
    want = R.zero()
    for i, a in enumerate(f.coeffs):
        want = want + a * D.delta_iter(g.coeffs[0], i)
    assert (prod.coeffs[0] - want).is_zero()


@given(st.integers(0, 2**32 - 1), st.integers(0, 5), st.integers(0, 5))
def test_polynomial_inputs_match_ore_mul(seed, da, db):
    rng = np.random.default_rng(seed)
    f = OrePoly(D, [R.random(rng) for _ in range(da + 1)])
    g = OrePoly(D, [R.random(rng) for _ in range(db + 1)])
    s = series_mul(BoundedSeries.from_poly(f), BoundedSeries.from_poly(g))
    assert (s - BoundedSeries.from_poly(ore_mul(f, g))).is_zero()
    assert s.tail_zero


def test_unit_is_neutral_and_keeps_precision():
    rng = np.random.default_rng(4)
    f = BoundedSeries.random(D, rng)
    one = BoundedSeries.one(D)
    prod = series_mul(f, one)
    assert (prod - f).is_zero()
    assert prod.cprec == f.cprec


@given(st.integers(0, 2**32 - 1))
def test_truncated_series_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (BoundedSeries.random(D, rng, degree=int(rng.integers(0, 6))) for _ in range(3))
    lhs = series_mul(series_mul(a, b), c)
    rhs = series_mul(a, series_mul(b, c))
    assert (lhs - rhs).is_zero()


def test_inversion_examples():
    one = BoundedSeries.one(D)
    assert (invert_unit_series(one) - one).is_zero()
    g = BoundedSeries.g(D)
    h = invert_unit_series(g)
    assert (series_mul(g, h) - one).is_zero() and (series_mul(h, g) - one).is_zero()
    assert (series_mul(g, h) - one).residual_value() >= R.prec
    with pytest.raises(NotAUnit):
        invert_unit_series(BoundedSeries.x(D))


def test_geometric_inverse_over_trivial_datum():
    d = trivial_datum(prec=6, xcap=8)
    # (1 - pi x)^-1 = sum pi^n x^n; pi^n vanishes once n reaches the precision
    g = BoundedSeries(d, [d.ring.one(), -d.ring.pi_power(1)])
    h = invert_unit_series(g)
    for n in range(7):
        assert (h.coeff(n) - d.ring.pi_power(n)).is_zero()
    assert all(h.coeff(n).is_zero() for n in range(7, 9))


def test_identity_map_and_variable_change():
    rng = np.random.default_rng(5)
    f = BoundedSeries.random(D, rng, degree=5)
    assert (extend_map_to_series(Identity(), f) - f).is_zero()
    x = BoundedSeries.x(D)
    assert (change_variable(f, x, D) - f).is_zero()
    assert (substitute(f, x) - f).is_zero()


def test_change_variable_to_g_round_trips():
    rng = np.random.default_rng(6)
    f = BoundedSeries.random(D, rng, degree=4)
    g = BoundedSeries.g(D)
    h = change_variable(f, g, D)
    assert (substitute(h, g) - f).is_zero()


def test_f_value_of_zero_is_inf():
    assert BoundedSeries(D, []).f_value() == INF
