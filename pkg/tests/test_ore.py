import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from helpers import f4_datum, frobenius_datum
from skewps.ore import OrePoly, frobenius_power_relation, ore_mul

D = f4_datum()
R = D.ring


def rand_poly(rng, deg):
    return OrePoly(D, [R.random(rng) for _ in range(deg + 1)])


def naive_mul(f, g):
    """Oracle: expand monomial by monomial with x q = sigma(q) x + delta(q) applied recursively."""
    d = f.datum

    def x_power_times(n, q):
        # x^n q as a coefficient list
        if n == 0:
            return [q]
        inner = x_power_times(n - 1, q)  # x^(n-1) q = sum c_i x^i
        out = [R.zero()] * (len(inner) + 1)
        for i, c in enumerate(inner):
            out[i + 1] = out[i + 1] + d.sigma(c)
            out[i] = out[i] + d.delta(c)
        return out

    total = [R.zero()] * (f.degree + g.degree + 2)
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            for k, c in enumerate(x_power_times(i, b)):
                total[k + j] = total[k + j] + a * c
    return OrePoly(d, total)


def test_x_times_scalar():
    rng = np.random.default_rng(0)
    r = R.random(rng)
    prod = ore_mul(OrePoly.x(D), OrePoly.const(D, r))
    want = OrePoly(D, [D.delta(r), D.sigma(r)])
    assert (prod - want).is_zero()


def test_unit_and_associativity_witness():
    rng = np.random.default_rng(1)
    f = rand_poly(rng, 3)
    assert (ore_mul(f, OrePoly.const(D, R.one())) - f).is_zero()
    x = OrePoly.x(D)
    for _ in range(100):
        r = OrePoly.const(D, R.random(rng))
        assert (ore_mul(ore_mul(x, x), r) - ore_mul(x, ore_mul(x, r))).is_zero()


@given(st.integers(0, 2**32 - 1), st.integers(0, 4), st.integers(0, 4))
def test_product_matches_naive_expansion(seed, da, db):
    rng = np.random.default_rng(seed)
    f, g = rand_poly(rng, da), rand_poly(rng, db)
    assert (ore_mul(f, g) - naive_mul(f, g)).is_zero()


@given(st.integers(0, 2**32 - 1))
def test_ring_axioms(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rand_poly(rng, int(rng.integers(0, 4))) for _ in range(3))
    assert (ore_mul(ore_mul(a, b), c) - ore_mul(a, ore_mul(b, c))).is_zero()
    assert (ore_mul(a, b + c) - ore_mul(a, b) - ore_mul(a, c)).is_zero()


def test_going_up_relation_examples():
    rng = np.random.default_rng(2)
    for n in (0, 1, 2):
        lhs, rhs = frobenius_power_relation(D, R.random(rng), n)
        assert (lhs - rhs).is_zero()
    # central, sigma-fixed s: delta vanishes and x^(p^n) s = s x^(p^n)
    d = frobenius_datum()
    s = d.ring.pi_power(2)
    lhs, rhs = frobenius_power_relation(d, s, 2)
    assert (lhs - OrePoly.monomial(d, 4, s)).is_zero()
