import itertools

import numpy as np
import pytest

from skewps import fd
from skewps.errors import HypothesisFail, InstanceError, ZeroIdeal
from skewps.fields import field

GA = fd.FdCrossed.group_algebra


def vec(*xs):
    return np.array(xs, dtype=np.int64)


def test_group_algebra_multiplication():
    R = GA(2, 1)
    one_plus_g = vec(1, 1)
    assert R.mul(one_plus_g, R.g_power(1)).tolist() == [1, 1]
    assert not R.power(one_plus_g, 2).any()


def test_ideal_closure_examples():
    R = GA(2, 1)
    assert fd.ideal_closure(np.zeros((1, 2)), R).is_zero()
    assert fd.ideal_closure(vec(1, 0), R) == fd.whole(R)
    I = fd.ideal_closure(vec(1, 1), R)
    assert I.dim == 1 and I.contains(vec(1, 1))


def test_closure_matches_bruteforce_span():
    # oracle: the ideal generated by v is the span of all products a v b
    R = GA(3, 1)
    v = vec(1, 2, 0)
    elems = [np.array(c) for c in itertools.product(range(3), repeat=3)]
    prods = {tuple(R.mul(R.mul(a, v), b)) for a in elems for b in elems}
    I = fd.ideal_closure(v, R)
    assert all(I.contains(np.array(x)) for x in prods)
    assert 3**I.dim == len({tuple(x) for x in I.elements()})


def test_minimal_support_examples():
    R = GA(2, 1)
    assert len(R.support(fd.minimal_support_element(fd.whole(R), R))) == 1
    I = fd.ideal_closure(vec(1, 1), R)
    assert fd.minimal_support_element(I, R).tolist() == [1, 1]
    R4 = GA(2, 2)
    J = fd.nilradical_fd(R4)
    a = fd.minimal_support_element(J, R4)
    # 1 + g and 1 + g^2 both have support size 2; the search returns the lexicographically first
    assert R4.support(a) == (0, 1)
    assert any(w.tolist() == [1, 0, 1, 0] for w in fd.minimal_elements(J, R4))
    with pytest.raises(ZeroIdeal):
        fd.minimal_support_element(fd.zero_ideal(R), R)


@pytest.mark.parametrize("p,m,expected", [
    (2, 1, [1, 1]), (2, 2, [1, 0, 1, 0]), (2, 3, [1, 0, 0, 0, 1, 0, 0, 0]),
    (3, 1, [1, 2, 0]), (3, 2, [1, 0, 0, 2, 0, 0, 0, 0, 0]),
])
def test_central_minimal_frozen(p, m, expected):
    R = GA(p, m)
    res = fd.central_minimal_with_p_nilpotence(fd.nilradical_fd(R), R)
    assert res.ok and res.element.tolist() == expected


def test_central_minimal_requires_trivial_intersection():
    R = GA(2, 1)
    with pytest.raises(HypothesisFail):
        fd.central_minimal_with_p_nilpotence(fd.whole(R), R)


def test_p1_witness_examples():
    F4 = fd.FdAlgebra.finite_field(field(2, 2), 1)
    w = fd.p1_witness(F4.basis(), F4)
    assert w is not None and (F4.sigma(w) == w).all()
    M2 = fd.FdAlgebra.matrix_algebra(2, field(2, 1))
    w2 = fd.p1_witness(M2.basis(), M2)
    assert w2.tolist() == M2.unit.tolist()
    comm = fd.FdAlgebra.finite_field(field(3, 1))
    assert fd.p1_witness(vec(2), comm).tolist() == [1]
    assert fd.check_p1(F4) and fd.check_p1(M2)


@pytest.mark.parametrize("R", [GA(2, 1), GA(2, 2), GA(3, 1), GA(2, 1, 2),
                               fd.FdCrossed.matrix(2, 2, 1, 1, conj=[[0, 1], [1, 0]])])
def test_radical_matches_bruteforce(R):
    J = fd.nilradical_fd(R)
    assert J == fd.radical_bruteforce(R.alg)
    assert J.is_nilpotent() and J.is_two_sided()


def test_radical_of_base_alone_is_zero():
    R = fd.FdCrossed.matrix(2, 2)
    assert fd.nilradical_fd(R).is_zero()
    assert fd.is_prime_fd(R)


def test_group_algebra_not_prime():
    assert not fd.is_prime_fd(GA(2, 1))


def test_twisted_prime_instances_agree_with_radical():
    for R in [fd.FdCrossed.twisted(2, 2, 1, 1, 1), fd.FdCrossed.twisted(3, 3, 2, 1, 1)]:
        assert fd.is_prime_fd(R) == fd.nilradical_fd(R).is_zero()
        assert fd.la.intersect(fd.nilradical_fd(R).basis, R.A_subspace(), R.p).shape[0] == 0


def test_twisted_with_non_fixed_gamma_rejected():
    with pytest.raises(InstanceError, match="fixed by sigma"):
        fd.FdCrossed.twisted(2, 2, 2, 1, 1)


def test_presets():
    assert fd.preset("group-algebra 2 2").P == 4
    assert fd.preset("matrix 2 4").A.n == 8
    assert fd.preset("twisted 4 1 2").P == 4
    with pytest.raises(InstanceError):
        fd.preset("twisted 6 1")


def test_supp_lemma_counts():
    assert fd.supp_lemma_exhaustive(GA(2, 2)) == (16, 0)
    assert fd.supp_lemma_exhaustive(GA(2, 2, 2)) == (256, 0)


def test_phi_psi_group_algebra_fails_honestly():
    rep = fd.phi_psi_check(GA(2, 2))
    assert not rep.psi_phi_identity and not rep.phi_products
    assert rep.phi_psi_identity and rep.inclusion


def test_phi_psi_twisted_companion():
    assert fd.phi_psi_check(fd.FdCrossed.twisted(2, 2, 1, 2, 1)).ok


def test_basis_change_centralises():
    R = fd.FdCrossed.matrix(2, 2, 1, 1, conj=[[0, 1], [1, 0]])
    U = fd._matrix_element(R.A, np.array([[0, 1], [1, 0]]), field(2, 1), 2)
    assert fd.twisted_basis_change(R, U)["centralises_A"]


def test_lattice_of_group_algebra_is_a_chain():
    # F_2[Z/4] = F_2[y]/(y^4) with y = 1 + g: ideals are (y^i)
    dims = sorted(I.dim for I in fd.ideal_lattice(GA(2, 2)))
    assert dims == [0, 1, 2, 3, 4]


from hypothesis import given  # noqa: E402
from hypothesis import strategies as st  # noqa: E402


@given(st.lists(st.integers(0, 1), min_size=8, max_size=8))
def test_closure_is_two_sided_and_idempotent(bits):
    R = fd.FdCrossed.matrix(2, 2, 1, 1, conj=[[0, 1], [1, 0]])
    v = np.zeros(R.N, dtype=np.int64)
    v[: len(bits)] = bits
    I = fd.ideal_closure(v, R)
    assert I.is_two_sided() and I.contains(v)
    assert fd.ideal_closure(I.basis, R) == I


@given(st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_p_th_power_support_never_grows(coeffs):
    R = GA(3, 2)
    a = np.array(coeffs, dtype=np.int64)
    if fd.coefficients_qualify(a, R):
        assert len(R.support(R.power(a, 3))) <= len(R.support(a))
