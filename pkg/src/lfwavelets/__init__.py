"""Discrete wavelet systems on two-coset index sets over local fields of positive characteristic."""

__version__ = "0.1.0"

from .errors import (ConfigurationError, LFWaveletError, OutOfLambdaError, PrecisionError,
                     ResolutionError, WindowError, WindowOverflowError)
from .galois_field import FieldParams, GFElement
from .local_field import EXACT, FieldElement, LocalField
from .lambda_indexing import (COSET, SCALAR, DegenerateLambdaWarning, LambdaIndex, LambdaLattice,
                              NumraParams)
from .characters import (OmegaDomain, Sequence, SteppedFunction, check_character_basis, chi,
                         fourier_sequence, inverse_on_omega, omega_domain, sample)
from .reports import Check, VerificationReport
from .first_stage import (FilterBank, gram_oracle, haar_bank, lazy_bank, onb_conditions_check,
                          oracle_equivalence, random_bank, unitarity_check)
from .cascade import (FATHER_CHAIN, PAPER_LITERAL, DecompositionResult, build_stages, direct_coefficients,
                      dwt, idwt, splitting_check, stage_orthonormality_check)
from .bridge import (SymbolFunction, cascade_spectrum, filters_from_numra, symbol_conditions,
                     symbols_from_bank)

__all__ = [n for n in dir() if not n.startswith("_")]
