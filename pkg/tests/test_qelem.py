import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewps.errors import NotAUnit, NotInvertible
from skewps.fields import field
from skewps.qelem import INF, MatRing, graded_regular, invert_in_O, matrix_filtration, val

F2, F4 = field(2, 1), field(2, 2)
R1 = MatRing(F2, 1, 8)
R2 = MatRing(F4, 2, 10)


def dense(q):
    """Oracle view: {(i, j): {exponent: code}}."""
    return {(i, j): e.coeffs for i, row in enumerate(q.entries()) for j, e in enumerate(row)}


def oracle_mul(a, b, F, s, prec):
    out = {(i, j): {} for i in range(s) for j in range(s)}
    A, B = dense(a), dense(b)
    for i in range(s):
        for j in range(s):
            acc = {}
            for l in range(s):
                for n1, c1 in A[(i, l)].items():
                    for n2, c2 in B[(l, j)].items():
                        if n1 + n2 < prec:
                            acc[n1 + n2] = F.add(acc.get(n1 + n2, 0), F.mul(c1, c2))
            out[(i, j)] = {n: c for n, c in acc.items() if c}
    return out


def elements(ring, low=-2):
    @st.composite
    def build(draw):
        seed = draw(st.integers(0, 2**32 - 1))
        lo = draw(st.integers(low, 3))
        return ring.random(np.random.default_rng(seed), low=lo, density=draw(st.sampled_from([0.3, 1.0])))

    return build()


def test_valuation_examples():
    S = R1.scalars
    assert val(R1.pi_power(3)) == 3
    assert val(R1.zero(8)) == INF
    assert val(S.laurent({-2: 1, 5: 1})) == -2
    D = R2.from_entries([["pi", 0], [0, "pi^-1"]])
    assert matrix_filtration(D) == -1
    assert matrix_filtration(R2.one()) == 0
    assert matrix_filtration(R2.zero(10)) == INF


def test_parse_round_trip_and_text():
    q = R2.parse("[[1 + 2*pi, pi^2],[0, 3 + O(pi^4)]]")
    assert q.prec == 4
    assert str(q.entry(0, 0)) .startswith("1 + 2*pi")
    assert R2.parse(q.to_text()) == q


def test_inverse_examples():
    S = MatRing(F2, 1, 12)
    x = S.one() + S.pi_power(1)
    inv = x.inverse()
    # char 2: 1/(1+pi) = 1 + pi + pi^2 + ...
    assert inv.entry(0, 0).coeffs == {n: 1 for n in range(12)}
    assert (x * inv - S.one()).is_zero()
    assert R2.one().inverse() == R2.one()
    with pytest.raises(NotAUnit):
        invert_in_O(R2.from_entries([["pi", 0], [0, 1]]))
    with pytest.raises(NotInvertible):
        R2.zero().inverse()


def test_non_unit_inverse_tracks_precision():
    q = R2.from_entries([["pi", 1], [0, "pi^-1"]])
    inv = q.inverse()
    assert (q * inv - R2.one()).u >= R2.prec - 4
    assert ((q * inv) - R2.one()).is_zero()


@given(elements(R2), elements(R2))
def test_mul_matches_oracle(a, b):
    c = a * b
    assert c.prec == min(a.prec + (b.u if not b.is_zero() else INF), b.prec + (a.u if not a.is_zero() else INF),
                         max(a.prec, b.prec))
    want = oracle_mul(a, b, F4, 2, c.prec)
    assert dense(c) == want


@given(elements(R2), elements(R2), elements(R2))
def test_ring_axioms(a, b, c):
    assert ((a * b) * c - a * (b * c)).is_zero()
    assert (a * (b + c) - (a * b + a * c)).is_zero()
    assert (a + b - b - a).is_zero()


@given(elements(R2, low=0))
def test_unit_inverse_is_two_sided(a):
    u = a + R2.one()
    try:
        inv = invert_in_O(u)
    except NotAUnit:
        return
    assert (u * inv - R2.one()).is_zero() and (inv * u - R2.one()).is_zero()
    assert inv.u == -u.u == 0


def test_graded_regular_examples(rng):
    S = MatRing(F4, 1, 10)
    assert graded_regular(S.pi_power(1), [S.random(rng, low=-1) for _ in range(5)])
    e11, e22 = R2.unit_matrix(0, 0), R2.unit_matrix(1, 1)
    assert not graded_regular(e11, [e22])
    unit = R2.random_unit(rng)
    assert graded_regular(unit, [R2.random(rng, low=-2) for _ in range(8)])
    assert invert_in_O(unit).u == -unit.u


@given(elements(R2))
def test_frobenius_is_multiplicative(a):
    b = R2.parse("[[2, pi],[1, 3*pi^2]]")
    assert ((a * b).frob() - a.frob() * b.frob()).is_zero()
    assert a.frob(2) == a
