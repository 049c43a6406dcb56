"""Alias of :mod:`lfwavelets.characters` under its long module name."""

from .characters import (OmegaDomain, Sequence, SteppedFunction, UnitRoot, char_exponents, char_values,
                         character_gram, check_character_basis, chi, chi_pair, coset_character_sum,
                         fourier_at_points, fourier_sequence, integrate_character, integrate_character_exponents,
                         inverse_on_omega, inverse_on_omega_many, omega_domain, root_table, sample,
                         spectral_resolution, trace_mul_table)

__all__ = [
    "OmegaDomain", "Sequence", "SteppedFunction", "UnitRoot", "char_exponents", "char_values", "character_gram",
    "check_character_basis", "chi", "chi_pair", "coset_character_sum", "fourier_at_points", "fourier_sequence",
    "integrate_character", "integrate_character_exponents", "inverse_on_omega", "inverse_on_omega_many",
    "omega_domain", "root_table", "sample", "spectral_resolution", "trace_mul_table",
]
