import itertools

import pytest
from hypothesis import given, strategies as st

from lfwavelets.errors import ConfigurationError
from lfwavelets.galois_field import (DEFAULT_MODULI, FieldParams, find_modulus, gf_add, gf_inv,
                                     gf_mul, is_irreducible)

GF4 = FieldParams(2, 2, (1, 1, 1))


def el(F, digits):
    return F.element(digits)


def test_add_examples():
    F2, F3 = FieldParams(2, 1), FieldParams(3, 1)
    assert gf_add(F2.one, F2.one) == F2.zero
    zeta = el(GF4, [0, 1])
    assert gf_add(zeta, GF4.one) == el(GF4, [1, 1])
    assert gf_add(el(F3, [2]), el(F3, [2])) == el(F3, [1])


def test_mul_examples():
    F2, F3 = FieldParams(2, 1), FieldParams(3, 1)
    assert gf_mul(F2.one, F2.one) == F2.one
    zeta = el(GF4, [0, 1])
    assert gf_mul(zeta, zeta) == el(GF4, [1, 1])
    assert gf_mul(el(F3, [2]), el(F3, [2])) == el(F3, [1])


def test_inverse_examples():
    F2, F5 = FieldParams(2, 1), FieldParams(5, 1)
    assert gf_inv(F2.one) == F2.one
    assert gf_inv(el(F5, [2])) == el(F5, [3])
    assert gf_inv(el(GF4, [0, 1])) == el(GF4, [1, 1])


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        gf_inv(FieldParams(3, 1).zero)


def test_inverse_matches_exhaustive_search():
    for p, c in [(2, 3), (3, 2), (7, 1)]:
        F = FieldParams(p, c)
        for a in range(1, F.q):
            found = [b for b in range(F.q) if F.mul(a, b) == 1]
            assert found == [F.inv(a)]


@pytest.mark.parametrize("p,c", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 2)])
def test_default_moduli_are_irreducible(p, c):
    F = FieldParams(p, c)
    assert is_irreducible(F.modulus, p)
    assert F.modulus[-1] == 1 and len(F.modulus) == c + 1


def test_reducible_modulus_rejected():
    with pytest.raises(ConfigurationError):
        FieldParams(2, 2, (1, 0, 1))  # (x+1)^2


@pytest.mark.parametrize("bad", [dict(p=4, c=1), dict(p=2, c=0), dict(p=2, c=9), dict(p=3, c=1, modulus=(0, 2))])
def test_invalid_parameters(bad):
    with pytest.raises(ConfigurationError):
        FieldParams(**bad)


def test_find_modulus_agrees_with_irreducibility():
    for p, c in [(2, 4), (3, 3), (5, 2)]:
        assert is_irreducible(find_modulus(p, c), p)
    assert all(is_irreducible(m, p) for (p, c), m in DEFAULT_MODULI.items())


def test_json_round_trip():
    F = FieldParams(3, 2)
    assert FieldParams.from_json(F.to_json()) == F
    assert F.to_json()["modulus"] == list(F.modulus)


def test_multiplicative_group_is_cyclic_of_order_q_minus_1():
    for p, c in [(2, 3), (3, 2)]:
        F = FieldParams(p, c)
        orders = []
        for a in range(1, F.q):
            x, k = a, 1
            while x != 1:
                x, k = F.mul(x, a), k + 1
            orders.append(k)
        assert max(orders) == F.q - 1
        assert all((F.q - 1) % k == 0 for k in orders)


def test_frobenius_is_additive():
    F = FieldParams(3, 2)
    for a, b in itertools.product(range(F.q), repeat=2):
        lhs = F._pow_slow(F.add(a, b), 3)
        assert lhs == F.add(F._pow_slow(a, 3), F._pow_slow(b, 3))


codes9 = st.integers(0, 8)


@given(codes9, codes9, codes9)
def test_gf9_ring_axioms(a, b, c):
    F = FieldParams(3, 2)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a


@given(st.integers(1, 255))
def test_gf256_inverse(a):
    F = FieldParams(2, 8)
    assert F.mul(a, F.inv(a)) == 1


def test_trace0_reads_zeta0_digit():
    F = FieldParams(3, 2)
    assert [F.trace0(a) for a in range(9)] == [a % 3 for a in range(9)]
