from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lfwavelets.errors import PrecisionError, WindowError
from lfwavelets.galois_field import FieldParams
from lfwavelets.lambda_indexing import u_of
from lfwavelets.local_field import (EXACT, LocalField, element_from_json, element_to_json, fe_add,
                                    fe_inv, fe_mul, fe_norm, format_element)

K2 = LocalField(FieldParams(2, 1))
K3 = LocalField(FieldParams(3, 1))
K9 = LocalField(FieldParams(3, 2))
P = K2.prime_power


def test_addition_examples():
    assert fe_add(P(-1), P(-1)).is_zero
    s = fe_add(P(-1), K2.one)
    assert s.valuation == -1 and s.terms() == [(-1, 1), (0, 1)]
    assert fe_add(u_of(K3, 1), u_of(K3, 1)) == u_of(K3, 2)
    assert fe_add(u_of(K3, 1), u_of(K3, 1)) == K3.prime_power(-1, 2)


def test_multiplication_examples():
    assert fe_mul(P(1), P(-1)) == K2.one
    assert fe_mul(P(-1), P(-1)) == P(-2)
    x = K2.one + P(1)
    assert fe_mul(x, x) == K2.one + P(2)


def test_inverse_examples():
    assert fe_inv(P(-1)) == P(1)
    assert fe_inv(P(-1)).is_exact
    y = fe_inv(K2.one + P(1), 20)
    assert y.terms() == [(k, 1) for k in range(20)]
    assert y.precision == 20
    prod = fe_mul(y, K2.one + P(1))
    assert prod.equal_to_precision(K2.one.with_precision(prod.precision))
    for a in range(1, 9):
        assert fe_inv(K9.scalar(a)) == K9.scalar(K9.gf.inv(a))


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        fe_inv(K2.zero)


def test_norm_examples():
    assert fe_norm(P(1)) == Fraction(1, 2)
    assert fe_norm(K2.zero) == 0
    assert fe_norm(u_of(K2, 3)) == 4


def test_precision_propagation():
    x = K2.element([(0, 1)], precision=5)
    y = P(-2)
    assert fe_mul(x, y).precision == 3
    assert fe_add(x, K2.one).precision == 5
    with pytest.raises(PrecisionError):
        x.coeff(5)
    assert x.coeff(4) == 0


def test_window_floor():
    K = LocalField(FieldParams(2, 1), vmin=-4, vmax=4)
    with pytest.raises(WindowError):
        fe_mul(K.prime_power(-3), K.prime_power(-3))


def test_format_and_json():
    x = P(-2) + P(-1)
    assert format_element(x) == "[(-2,[1]),(-1,[1])]"
    y = K2.element([(0, 1)], precision=3)
    assert format_element(y).endswith("+O(P^3)")
    for z in (x, y, K9.element([(-1, 5), (2, 7)])):
        assert element_from_json(z.K, element_to_json(z)) == z


def test_truncate_and_negative_part():
    x = P(-2) + K2.one + P(3)
    assert x.negative_part() == P(-2)
    assert x.truncate(1) == P(-2) + K2.one


def elements(K, lo=-4, hi=4):
    return st.dictionaries(st.integers(lo, hi), st.integers(0, K.q - 1), max_size=6).map(
        lambda d: K.element(d.items()))


@given(elements(K9), elements(K9), elements(K9))
def test_field_axioms_exact(a, b, c):
    assert fe_mul(a, fe_add(b, c)) == fe_add(fe_mul(a, b), fe_mul(a, c))
    assert fe_mul(fe_mul(a, b), c) == fe_mul(a, fe_mul(b, c))
    assert fe_add(a, b) == fe_add(b, a)
    assert (a - a).is_zero


@settings(max_examples=50)
@given(elements(K3, -3, 3))
def test_inverse_times_element_is_one(x):
    if x.is_zero:
        return
    y = fe_inv(x, 12)
    prod = fe_mul(x, y)
    assert (prod - K3.one).valuation >= prod.precision or (prod - K3.one).is_zero


@given(elements(K2), elements(K2))
def test_norm_is_multiplicative_and_ultrametric(a, b):
    assert fe_norm(fe_mul(a, b)) == fe_norm(a) * fe_norm(b)
    assert fe_norm(fe_add(a, b)) <= max(fe_norm(a), fe_norm(b))


def test_exact_is_infinite():
    assert EXACT == float("inf")
    assert K2.one.is_exact
