import math

import numpy as np
import pytest

from conftest import make_lattice
from lfwavelets.characters import Sequence, fourier_at_points
from lfwavelets.errors import ConfigurationError, ResolutionError
from lfwavelets.first_stage import (FilterBank, gram_oracle, haar_bank, integer_cells, lazy_bank,
                                    m0_periodicity_check, mixed_lazy_bank, modulation_matrix,
                                    onb_conditions_check, oracle_equivalence, periodic_split,
                                    perturbed, phase_rotated, random_bank, random_unitary,
                                    reassemble, unitarity_check)
from lfwavelets.lambda_indexing import COSET, LambdaIndex
from lfwavelets.translations import translate

TOL = 1e-12


def test_split_examples(lat2):
    lat = make_lattice(2, 1, 3, 1, COSET)
    z = Sequence({(0, 1): 1, (0, 3): 2})
    assert len(periodic_split(z).part1) == 0
    sp = periodic_split(Sequence.delta((1, 0)))
    assert len(sp.part0) == 0 and sp.part1.max_abs_diff(Sequence.delta((0, 0))) == 0


def test_reassembly_matches_transform(rng):
    lat = make_lattice(2, 1, 3, 1, COSET)
    z = Sequence({(int(e), int(n)): complex(*rng.normal(size=2)) for e in (0, 1) for n in range(6)})
    xis = [lat.K.random(rng, -2, 6) for _ in range(100)]
    assert np.abs(reassemble(periodic_split(z), lat, xis) - fourier_at_points(z, lat, xis)).max() < 1e-12


def test_haar_inner_products(lat2):
    w0, w1 = haar_bank(lat2).filters
    assert abs(w0.inner(w1)) < 1e-15
    shifted = translate(w0, LambdaIndex(0, 1), lat2, 1)
    assert set(shifted.support) == {LambdaIndex(0, 2), LambdaIndex(0, 3)}
    assert w0.inner(shifted) == 0


def test_zero_filter_fails_with_unit_residual(lat2):
    bank = FilterBank(lat2, [haar_bank(lat2).filters[0], Sequence()])
    assert onb_conditions_check(bank)["self_orthonormality"].residual == pytest.approx(1.0)


def test_haar_conditions(lat2):
    rep = onb_conditions_check(haar_bank(lat2), 3)
    assert rep["cross_orthogonality"].residual < TOL
    assert rep["self_orthonormality"].residual < TOL
    assert rep.passed


def test_condition_homogeneity(lat2, rng):
    bank = random_bank(lat2, rng)
    a = onb_conditions_check(bank, 3)["printed_self_sum"].constant
    b = onb_conditions_check(bank.scaled(2), 3)["printed_self_sum"].constant
    assert b == pytest.approx(4 * a, rel=1e-14)


def test_delta_filter_has_flat_spectrum(lat2):
    xis = integer_cells(lat2, 3)
    assert np.all(np.abs(fourier_at_points(Sequence.delta((0, 0)), lat2, xis)) == 1)


def test_literal_block_matrix_for_haar(lat2):
    M = modulation_matrix(haar_bank(lat2), lat2.K.zero, "block")
    assert M.shape == (4, 4)
    assert np.abs(M @ M.conj().T - np.eye(4)).max() < TOL


def test_modulation_entries_bounded(lat2, rng):
    bank = random_bank(lat2, rng)
    bound = max(sum(abs(v) for _, v in f) for f in bank.filters) * bank.prefactor
    for xi in integer_cells(lat2, 2):
        assert np.abs(modulation_matrix(bank, xi, "block")).max() <= bound + 1e-12


def test_zero_bank_is_maximally_non_unitary(lat2):
    bank = FilterBank(lat2, [Sequence(), Sequence()])
    assert np.all(modulation_matrix(bank, lat2.K.zero) == 0)
    assert unitarity_check(bank)["unitarity"].residual == pytest.approx(1.0)


def test_unitarity_verdicts(lat2):
    assert unitarity_check(haar_bank(lat2), 3)["unitarity"].residual < TOL
    bad = perturbed(haar_bank(lat2), 1, (0, 0), 0.1)
    rep = unitarity_check(bad, 3)
    assert not rep.passed and rep["unitarity"].residual >= 0.05
    assert unitarity_check(lazy_bank(lat2)).passed


def test_unitarity_fixed_normalization_does_not_rescue_scaled_bank(lat2):
    rep = unitarity_check(haar_bank(lat2).scaled(2), 3)
    assert not rep.passed
    assert rep["unitarity"].constant == pytest.approx(4.0)


def test_oracle_verdicts(lat2, rng):
    assert oracle_equivalence(haar_bank(lat2), 3).meta["verdict"] == "agree-pass"
    assert oracle_equivalence(perturbed(haar_bank(lat2), 1), 3).meta["verdict"] == "agree-fail"
    for _ in range(5):
        assert oracle_equivalence(random_bank(lat2, rng), 3).meta["verdict"] == "agree-fail"
    U = random_unitary(2, rng)
    assert oracle_equivalence(mixed_lazy_bank(lat2, U), 3).meta["verdict"] == "agree-pass"


def test_gram_window_guard(lat2):
    bank = FilterBank(lat2, [Sequence.delta((0, 8)), Sequence.delta((0, 1))])
    with pytest.raises(ConfigurationError):
        gram_oracle(bank, 2)


def test_resolution_guard(lat2):
    with pytest.raises(ResolutionError):
        unitarity_check(FilterBank(lat2, [Sequence.delta((0, 8)), Sequence.delta((0, 1))]), 2)


def test_m0_periodicity(lat2, rng):
    assert m0_periodicity_check(haar_bank(lat2))["m0_periodicity"].residual < TOL
    bank = FilterBank(lat2, [Sequence.delta((0, 0)), Sequence.delta((0, 1))])
    assert m0_periodicity_check(bank)["m0_periodicity"].residual == 0
    rep = m0_periodicity_check(random_bank(lat2, rng))
    assert not rep["m0_periodicity"].primary


def test_haar_q3(lat3):
    bank = haar_bank(lat3)
    assert unitarity_check(bank).passed
    _, rep = gram_oracle(bank, 3)
    assert rep.passed


def test_phase_rotation_preserves_orthonormality(lat2):
    bank = phase_rotated(haar_bank(lat2), [1j, np.exp(0.3j)])
    assert oracle_equivalence(bank, 3).meta["verdict"] == "agree-pass"


def test_bank_json_round_trip(lat3, rng):
    bank = random_bank(lat3, rng)
    back = FilterBank.from_json(bank.to_json())
    assert all(a.max_abs_diff(b) == 0 for a, b in zip(bank.filters, back.filters))


def test_arity_is_enforced(lat2):
    with pytest.raises(ConfigurationError):
        FilterBank(lat2, [Sequence.delta((0, 0))])


def test_nonsquare_polyphase_warns():
    lat = make_lattice(2, 1, 3, 1, COSET)
    rep = unitarity_check(lazy_bank(lat))
    assert not rep.passed
    assert any("NOT_SQUARE" in w for w in rep.warnings)


def test_collapsed_overcomplete_case():
    lat = make_lattice(5, 1, 2, 1)
    chk = unitarity_check(lazy_bank(lat))["unitarity"]
    assert chk.details["shape"] == [10, 5]
    assert chk.residual >= 1.0


def test_haar_filters(lat2):
    w0, w1 = haar_bank(lat2).filters
    s = 1 / math.sqrt(2)
    assert w0.max_abs_diff(Sequence({(0, 0): s, (0, 1): s})) < 1e-15
    assert w1.max_abs_diff(Sequence({(0, 0): s, (0, 1): -s})) < 1e-15
