import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import make_lattice
from lfwavelets.errors import ConfigurationError
from lfwavelets.galois_field import FieldParams
from lfwavelets.lambda_indexing import (COSET, SCALAR, DegenerateLambdaWarning, LambdaIndex,
                                        LambdaLattice, NumraParams, u_inverse, u_of)
from lfwavelets.local_field import LocalField, fe_mul, fe_norm, fe_sub

K2 = LocalField(FieldParams(2, 1))
K4 = LocalField(FieldParams(2, 2))


def test_u_of_examples():
    assert u_of(K2, 0).is_zero
    assert u_of(K2, 3) == K2.prime_power(-2) + K2.prime_power(-1)
    # zeta_1 has code 2 in GF(4)
    assert u_of(K4, 2) == K4.prime_power(-1, 2)


def test_u_inverse_examples():
    assert u_inverse(K2.zero) == 0
    assert u_inverse(K2.prime_power(-2) + K2.prime_power(-1)) == 3
    assert u_inverse(K2.one) is None


@given(st.integers(0, 10**6))
def test_u_round_trip(n):
    for K in (K2, K4):
        assert u_inverse(u_of(K, n)) == n


def test_embed_examples():
    lat = make_lattice(5, 1, 2, 1, SCALAR)
    assert lat.embed(LambdaIndex(0, 7)) == u_of(lat.K, 7)
    assert lat.theta == lat.K.prime_power(-1, 3)
    lat = make_lattice(2, 1, 3, 1, COSET)
    theta = lat.embed(LambdaIndex(1, 0))
    assert fe_norm(theta) == Fraction(1, 2)
    # theta * u(3) = u(1) up to the series precision
    prod = fe_mul(theta, u_of(lat.K, 3))
    assert (prod - u_of(lat.K, 1)).is_zero


def test_translate_examples():
    lat = make_lattice(2)
    assert lat.translate_index(LambdaIndex(0, 5), LambdaIndex(0, 0), 1) == LambdaIndex(0, 5)
    assert lat.translate_index(LambdaIndex(0, 2), LambdaIndex(0, 1), 1) == LambdaIndex(0, 0)
    assert lat.translate_index(LambdaIndex(0, 0), LambdaIndex(0, 1), 1) == LambdaIndex(0, 2)
    lat3 = make_lattice(3)
    assert lat3.translate_index(LambdaIndex(0, 0), LambdaIndex(0, 1), 1) == LambdaIndex(0, 6)


def test_policy_gates():
    with pytest.raises(ConfigurationError):
        NumraParams(FieldParams(3, 1), 3, 1, SCALAR)
    for bad in [dict(r=2), dict(r=0), dict(r=7)]:
        with pytest.raises(ConfigurationError):
            NumraParams(FieldParams(2, 1), 3, **bad)
    with pytest.raises(ConfigurationError):
        NumraParams(FieldParams(2, 1), 3, 3)  # gcd(r, N) != 1
    with pytest.raises(ConfigurationError):
        NumraParams(FieldParams(2, 1), 3, 1, "bogus")


def test_scalar_policy_is_always_degenerate():
    for p, N in [(2, 1), (2, 3), (5, 2), (3, 2), (7, 3)]:
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always")
            lat = LambdaLattice(NumraParams(FieldParams(p, 1), N, 1, SCALAR))
        assert lat.degenerate and lat.branches == (0,)
        assert any(issubclass(x.category, DegenerateLambdaWarning) for x in w)


def test_coset_policy_two_branches_for_N_above_one():
    for p, N in [(2, 3), (5, 2), (3, 2)]:
        lat = make_lattice(p, 1, N, 1, COSET)
        assert not lat.degenerate and lat.branches == (0, 1)
        assert lat.shift_count(1) == p ** (lat.delta_degree)


def test_delta_scales_z_into_z():
    for args in [(2, 1, 3, 1, COSET), (3, 1, 2, 1, COSET), (5, 1, 2, 1, SCALAR)]:
        lat = make_lattice(*args)
        for idx in lat.indices(2):
            x = fe_mul(lat.delta, lat.embed(idx))
            assert lat.reindex(x) is not None
            assert lat.reindex(x).eps == 0 or not lat.degenerate


def test_delta_power_inverse():
    lat = make_lattice(2, 1, 3, 1, COSET)
    d3 = lat.delta_power(3)
    dm3 = lat.delta_power(-3)
    prod = fe_mul(d3, dm3)
    assert (prod - lat.K.one).valuation >= prod.precision or (prod - lat.K.one).is_zero


LATTICES = [make_lattice(2), make_lattice(3), make_lattice(2, 1, 3, 1, COSET), make_lattice(3, 1, 2, 1, COSET)]


@pytest.mark.parametrize("lat", LATTICES, ids=lambda l: str(l.params.to_json()))
def test_shift_and_solve_are_inverse(lat):
    idx = lat.indices(2)
    for level in (1, 2):
        for tau in idx:
            for lam in idx[:: max(1, len(idx) // 6)]:
                x = lat.shift_index(tau, lam, level)
                assert lat.solve_shift(x, tau, level) == lam
                # compare with field arithmetic
                e = lat.embed(tau) + fe_mul(lat.delta_power(level), lat.embed(lam))
                ex = lat.embed(x)
                assert (e - ex).is_zero or (e - ex).valuation >= min(e.precision, ex.precision)


@pytest.mark.parametrize("lat", LATTICES[2:], ids=lambda l: str(l.params.to_json()))
def test_translates_never_leave_lambda(lat):
    # the exhaustive small-window enumeration that a naive implementation would flag
    idx = lat.indices(2)
    for sigma in idx:
        for lam in idx:
            assert lat.translate_index(sigma, lam, 1) is not None


def test_describe_keys():
    d = make_lattice(2, 1, 3, 1, COSET).describe()
    assert {"q", "nu", "delta", "theta", "degenerate", "arity", "branches", "shift_count"} <= set(d)


def test_params_json_round_trip():
    p = NumraParams(FieldParams(3, 1), 2, 1, COSET)
    assert NumraParams.from_json(p.to_json()) == p
    assert p.arity == 6 and math.gcd(p.r, p.N) == 1


def test_collapsed_canonical_relabels_theta_branch():
    lat = make_lattice(5, 1, 2, 1, SCALAR)
    c = lat.canonical(LambdaIndex(1, 0))
    assert c.eps == 0 and lat.embed(c) == lat.theta
    lat2 = make_lattice(2)
    assert fe_sub(lat2.embed(lat2.canonical((1, 2))), lat2.theta + u_of(lat2.K, 2)).is_zero
