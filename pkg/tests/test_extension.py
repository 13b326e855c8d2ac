import numpy as np
import pytest

from helpers import F4
from skewps.config import build_datum, load_config
from skewps.errors import HypothesisFail, NotAUnit, NotCoprime
from skewps.extension import (
    build_extended_datum,
    central_scale,
    converge_inner,
    frobenius_twist_lift,
    minimal_polynomial_over_prime_field,
    order_mod,
    reduce_to_sfoh,
    tensor_filtration_oracle,
    theta_map,
    theta_multiplicativity,
)
from skewps.fields import field
from skewps.galois import adjoin_root_of_unit_power, trivial_extension, unramified_extension
from skewps.maps import SkewAuto
from skewps.qelem import MatRing
from skewps.series import BoundedSeries
from skewps.skew import SkewDatum

Z2 = MatRing(field(2, 1), 1, 8)
R = MatRing(F4, 2, 12)


def test_root_adjunction_examples():
    K = adjoin_root_of_unit_power(Z2, Z2.pi_power(1), 2)
    assert (K.e, K.f) == (2, 1)
    assert K.iota(Z2.pi_power(1)).u == 2
    assert adjoin_root_of_unit_power(Z2, Z2.pi_power(1), 1).is_trivial


def test_cube_root_cases_over_f3():
    Z3 = MatRing(field(3, 1), 1, 8)
    # 2 = (-1)^3 is a cube in F_3, so 2 pi^3 already has a cube root in Z
    assert adjoin_root_of_unit_power(Z3, Z3.pi_power(3).scale_code(2), 3).is_trivial
    K = adjoin_root_of_unit_power(Z3, Z3.pi_power(1).scale_code(2), 3)
    assert K.e == 3 and K.rho_power(1).u == 1
    assert (K.zeta0**3 - K.iota(Z3.pi_power(1).scale_code(2))).is_zero()
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = K.scalars.random(rng, low=-3, density=0.5)
        if not x.is_zero():
            assert K.formula_value(x) == x.u


def test_tensor_filtration_examples():
    rng = np.random.default_rng(1)
    K = adjoin_root_of_unit_power(R, R.scalars.pi_power(1), 2)
    q = R.random(rng, low=1)
    assert K.tensor_filtration(K.iota(q)) == K.e * q.u
    assert K.tensor_filtration(K.scalar(K.rho_power(1))) == 1


@pytest.mark.parametrize("make", [lambda: adjoin_root_of_unit_power(R, R.scalars.pi_power(1), 2),
                                  lambda: unramified_extension(R, 2)])
def test_tensor_filtration_against_oracle(make):
    K = make()
    rng = np.random.default_rng(2)
    for _ in range(5):
        X = K.ring.random(rng, low=-K.e, density=0.6)
        best, exceed = tensor_filtration_oracle(K, X, rng, reps=100)
        assert exceed == 0 and best == K.tensor_filtration(X)


def commuting_datum():
    c = R.parse("[[1, pi],[pi, 1]]")
    return SkewDatum(R, SkewAuto(R, 0, c), R.one(), xcap=8)


def test_trivial_extension_constants_zero():
    ext = build_extended_datum(commuting_datum(), trivial_extension(R))
    assert list(ext.constants) == [0, 0]


def test_theta_one_and_multiplicativity():
    d = commuting_datum()
    K = adjoin_root_of_unit_power(R, R.scalars.pi_power(1), 2)
    ext = build_extended_datum(d, K)
    one = theta_map(BoundedSeries.one(d), ext)
    assert (one - BoundedSeries.one(ext.datum)).is_zero()
    rng = np.random.default_rng(3)
    for _ in range(5):
        f = BoundedSeries.random(d, rng, degree=3)
        g = BoundedSeries.random(d, rng, degree=3)
        zero, resid, guarantee = theta_multiplicativity(f, g, ext)
        assert zero and resid >= guarantee


def test_central_scale_unit_case():
    d = commuting_datum()
    a = d.sigma.conj_unit()
    cs = central_scale(a, d)
    assert cs.K.is_trivial and cs.v == 0
    assert (cs.c - cs.K.iota(a) ** (2**cs.ell)).is_zero()
    assert cs.certificates["u_c"] == 0


def test_central_scale_pi_scaled():
    d = commuting_datum()
    a = d.sigma.conj_unit().shift(1)
    cs = central_scale(a, d, C=2)
    assert cs.K.e == 2 and cs.certificates["u_c"] == 0


def test_frobenius_lift_examples():
    one_j = R.one() + R.pi_power(1)
    lift = frobenius_twist_lift(one_j, [1, 1], 3)  # f = X + 1 in char 2
    assert lift.root == 1
    prime = R.scalar(1) + R.parse("[[pi, 0],[0, pi]]")
    assert frobenius_twist_lift(prime, [1, 1], 0).root == 1
    b = R.scalar(2) + R.pi_power(1) * R.parse("[[0, 1],[1, 0]]")
    res = frobenius_twist_lift(b, [1, 1, 1], 1)
    assert res.root == 3  # omega^2
    with pytest.raises(NotAUnit):
        frobenius_twist_lift(R.pi_power(1), [0, 1], 0)


def test_minimal_polynomial_of_omega():
    assert minimal_polynomial_over_prime_field(F4, 2) == [1, 1, 1]
    assert minimal_polynomial_over_prime_field(F4, 1) == [1, 1]


def test_convergence_closed_form():
    S = MatRing(field(2, 1), 1, 16)
    run = converge_inner(S.one() + S.pi_power(1), 3)
    assert (run.r, run.s) == (2, 1)
    assert run.sj[:3] == [1, 5, 21] == [(2 ** (2 * j) - 1) // 3 for j in (1, 2, 3)]
    assert run.gaps[0] >= 4 and run.gaps[1] >= 16


def test_convergence_degenerate_d1():
    c1 = R.one() + R.pi_power(1) * R.parse("[[0, 1],[1, 0]]")
    run = converge_inner(c1, 1, SkewAuto(R, 0, c1))
    assert run.r == 1 and run.certificate >= R.prec


def test_order_mod():
    assert order_mod(2, 3) == 2 and order_mod(3, 2) == 1
    with pytest.raises(NotCoprime):
        order_mod(2, 4)


def test_pipeline_short_circuit():
    c = R.parse("[[1, pi],[pi, 1]]")
    d = SkewDatum(R, SkewAuto(R, 0, c), -R.one())
    rep = reduce_to_sfoh(d)
    assert rep.ell == 0 and rep.passed
    assert rep.stages[-1]["short_circuit"]


def test_pipeline_gate():
    d = SkewDatum(R, SkewAuto(R, 1), R.scalar(2), check=False)
    with pytest.raises(HypothesisFail) as exc:
        reduce_to_sfoh(d)
    assert exc.value.stage == 0


def test_pipeline_f4_ramified():
    cfg = load_config("F4-ramified.toml")
    rep = reduce_to_sfoh(build_datum(cfg), C=cfg.central_degree, rng=np.random.default_rng(0),
                         target=cfg.precision)
    assert rep.passed and rep.ell == 2
    assert (rep.extension.e, rep.extension.f) == (2, 1)
    conv = next(s for s in rep.stages if s["name"] == "converge")
    assert conv["c"]["entries"][0][0].startswith("1 + ")
    assert conv["c"]["entries"][1][1].startswith("1 + ")
