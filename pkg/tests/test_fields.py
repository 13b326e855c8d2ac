import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewps.errors import FieldError, NotAnAutomorphism
from skewps.fields import GF, embed_code, field, is_prime, least_irreducible
from skewps.galois import artin_schreier_split, fixed_field, frobenius_orbit

F4 = field(2, 2)
OMEGA = 2  # code of theta, a root of X^2 + X + 1


def test_f4_tables_match_hand_computation():
    # omega^2 = omega + 1, omega^3 = 1
    assert F4.mul(OMEGA, OMEGA) == 3
    assert F4.mul(OMEGA, 3) == 1
    assert F4.inv(OMEGA) == 3
    assert F4.add(OMEGA, 1) == 3


def test_least_irreducible_moduli():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)


def test_non_prime_rejected():
    with pytest.raises(FieldError, match="p not prime"):
        GF(4)
    assert not is_prime(1) and is_prime(2) and not is_prime(9)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        GF(2, 2, (1, 0, 1))


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 1), (3, 3)])
def test_mul_is_polynomial_product_mod_modulus(p, k):
    F = field(p, k)
    # independent oracle: schoolbook product of digit vectors reduced by long division
    mod = F.modulus

    def slow(a, b):
        da, db = list(F.digits(a)), list(F.digits(b))
        prod = [0] * (2 * k - 1)
        for i, j in itertools.product(range(k), range(k)):
            prod[i + j] += da[i] * db[j]
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg] % p
            prod[deg] = 0
            for i in range(k):
                prod[deg - k + i] -= c * mod[i]
        return F.from_digits([x % p for x in prod[:k]])

    for a in range(0, F.q, max(1, F.q // 9)):
        for b in range(0, F.q, max(1, F.q // 7)):
            assert F.mul(a, b) == slow(a, b)


@given(st.integers(0, 26), st.integers(0, 26), st.integers(0, 26))
def test_field_axioms_f27(a, b, c):
    F = field(3, 3)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1


@given(st.integers(0, 15), st.integers(0, 15))
def test_frobenius_is_ring_map(a, b):
    F = field(2, 4)
    assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
    assert F.frob(a, 4) == a
    assert F.frob(a) == F.pow(a, 2)


def test_frobenius_orbits():
    assert frobenius_orbit(field(2, 1), 1) == [1]
    assert frobenius_orbit(F4, 0) == [0]
    assert frobenius_orbit(F4, OMEGA) == [OMEGA, 3]


def test_fixed_fields():
    assert fixed_field(1, F4).elements == (0, 1)
    assert fixed_field(0, field(2, 3)).degree == 3
    F16 = field(2, 4)
    sub = fixed_field(2, F16)
    assert sub.degree == 2
    # oracle: enumerate x with x^4 = x
    assert sub.elements == tuple(x for x in range(16) if F16.pow(x, 4) == x)
    with pytest.raises(NotAnAutomorphism):
        fixed_field(lambda a: F16.add(a, 1), F16)


def test_artin_schreier():
    F2 = field(2, 1)
    zero = artin_schreier_split(F2, 0)
    assert zero.splitting == F2 and zero.roots == (0, 1)
    one = artin_schreier_split(F2, 1)
    assert one.splitting == F4 and set(one.roots) == {2, 3}
    # trace-zero elements of F4 split over F4: trace(a) = a + a^2
    for a in range(4):
        if F4.add(a, F4.pow(a, 2)) == 0:
            res = artin_schreier_split(F4, a)
            assert res.splitting == F4
            assert all(res.evaluate(x) == 0 for x in res.roots)


def test_embedding_is_ring_map():
    F8, F64 = field(2, 3), field(2, 6)
    for a in range(8):
        for b in range(8):
            assert embed_code(F8, F64, F8.mul(a, b)) == F64.mul(embed_code(F8, F64, a), embed_code(F8, F64, b))
    with pytest.raises(FieldError):
        F8.embedding_into(field(2, 4))
