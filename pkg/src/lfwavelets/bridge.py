"""Filter banks on l2(Lambda) versus symbols m_l of a multiresolution on K.

Continuous objects are stepped functions only.  The symbol of a filter is
m_l(xi) = w_l-hat(xi) / sqrt(qN).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characters import (OmegaDomain, Sequence, SteppedFunction, chi_pair, fourier_at_points,
                         inverse_on_omega_many, omega_domain, spectral_resolution)
from .errors import ConfigurationError, ResolutionError
from .first_stage import (DEFAULT_TOLERANCE, FilterBank, periodic_split,
                          polyphase_analysis, row_products)
from .lambda_indexing import LambdaIndex, LambdaLattice, u_of
from .local_field import fe_mul
from .reports import Check, VerificationReport


@dataclass
class SymbolFunction:
    source: Sequence
    lattice: LambdaLattice

    @property
    def scale(self) -> float:
        return 1.0 / math.sqrt(self.lattice.arity)

    @property
    def resolution(self) -> int:
        return spectral_resolution(self.source, self.lattice)

    def evaluate(self, xis) -> np.ndarray:
        return fourier_at_points(self.source, self.lattice, list(xis)) * self.scale

    def split_parts(self, xis) -> tuple[np.ndarray, np.ndarray]:
        """(m_l0, m_l1): branch transforms, both periodic under B."""
        sp = periodic_split(self.source)
        return (fourier_at_points(sp.part0, self.lattice, list(xis)) * self.scale,
                fourier_at_points(sp.part1, self.lattice, list(xis)) * self.scale)

    def stepped(self, region: OmegaDomain, m: int | None = None) -> SteppedFunction:
        need = self.resolution
        m = need if m is None else m
        if m < need:
            raise ResolutionError(f"resolution {m} too coarse for this symbol (needs {need})")
        reps = region.cells(m)
        return SteppedFunction(m, reps, self.evaluate(reps), region)


def symbols_from_bank(bank: FilterBank) -> list[SymbolFunction]:
    return [SymbolFunction(w, bank.lattice) for w in bank.filters]


def symbol_tables(bank: FilterBank, region: OmegaDomain | None = None, m: int | None = None) -> list[SteppedFunction]:
    region = region or omega_domain(bank.lattice)
    m = max(bank.radius(), 1) if m is None else m
    return [s.stepped(region, m) for s in symbols_from_bank(bank)]


def _index_candidates(lattice: LambdaLattice, m: int) -> list[LambdaIndex]:
    out = []
    for eps in lattice.branches:
        for n in range(lattice.q ** max(m, 1)):
            idx = LambdaIndex(eps, n)
            e = lattice.embed(idx)
            if e.is_zero or -e.valuation <= m:
                out.append(idx)
    return out


def filters_from_numra(symbols: list[SteppedFunction], lattice: LambdaLattice,
                       tolerance: float = 1e-12, drop_below: float = 1e-14):
    """w_l(lambda) = sqrt(qN) * integral(m_l chi_lambda) / |Omega| over every resolvable lambda.

    Returns ``(bank, report)``; the report carries the re-synthesis residual.
    """
    if len(symbols) != lattice.arity:
        raise ConfigurationError(f"need {lattice.arity} symbols, got {len(symbols)}")
    filters = []
    worst = 0.0
    for f in symbols:
        if f.region is None:
            raise ConfigurationError("symbol has no region")
        measure = float(f.region.measure)
        lams = _index_candidates(lattice, f.m)
        vals = inverse_on_omega_many(f, lattice, lams) * math.sqrt(lattice.arity) / measure
        w = Sequence({l: v for l, v in zip(lams, vals) if abs(v) > drop_below})
        filters.append(w)
        back = SymbolFunction(w, lattice).evaluate(f.reps)
        worst = max(worst, float(np.abs(back - f.values).max()) if len(f.values) else 0.0)
    bank = FilterBank(lattice, filters)
    rep = VerificationReport("filters-from-symbols", params=lattice.params.to_json())
    chk = rep.add(Check("symbol_resynthesis", worst, tolerance))
    if not chk.passed:
        chk.warnings.append("TRUNCATION: symbols are not fully captured by the resolvable index window")
    return bank, rep


def bank_round_trip(bank: FilterBank, region: OmegaDomain | None = None, m: int | None = None) -> float:
    """max |taps(filters_from_numra(symbols_from_bank(bank))) - taps(bank)|."""
    tables = symbol_tables(bank, region, m)
    back, _ = filters_from_numra(tables, bank.lattice)
    return max(a.max_abs_diff(b) for a, b in zip(bank.filters, back.filters))


def symbol_round_trip(tables: list[SteppedFunction], lattice: LambdaLattice) -> float:
    bank, _ = filters_from_numra(tables, lattice)
    again = [SymbolFunction(w, lattice).evaluate(t.reps) for w, t in zip(bank.filters, tables)]
    return max(float(np.abs(a - t.values).max()) for a, t in zip(again, tables))


def symbol_conditions(bank: FilterBank, resolution: int | None = None,
                      tolerance: float = DEFAULT_TOLERANCE) -> VerificationReport:
    """Orthonormality conditions on the symbols, literal and corrected.

    Corrected reading: (a) sum_s sum_c m_l^c conj(m_k^c)(xi + eta_s) = (D/qN) delta_lk,
    (b) the same sum weighted by chi(delta theta (xi + eta_s)) vanishes
    (two-branch case only).  Together with a square polyphase matrix these are
    exactly the unitarity conditions, which is the transport verdict.
    """
    lat = bank.lattice
    A = lat.arity
    gens, m, xis, M = polyphase_analysis(bank.filters, lat, 1, resolution)
    D = lat.shift_count(1)
    P = row_products(M)
    eye = np.eye(A)
    block_a = P[:, :A, :A]
    res_a = float(np.abs(block_a - eye[None]).max())
    # symbol normalization: rows of M are sqrt(qN / D) times the symbol rows
    sym_a = block_a * D / A
    rep = VerificationReport("symbol-conditions", params=lat.params.to_json())
    rep.add(Check("symbol_a_corrected", res_a, tolerance,
                  constant=float(np.real(np.einsum("kii->ki", sym_a)).mean()),
                  details={"target_constant": D / A}))
    if not lat.degenerate:
        res_b = float(np.abs(P[:, :A, A:]).max())
        rep.add(Check("symbol_b_corrected", res_b, tolerance))
    square = M.shape[1] == M.shape[2]
    rows_ok = all(c.passed for c in rep.checks)
    rep.add(Check("orthonormality_transport", 0.0 if (rows_ok and square) else 1.0, 0.5,
                  details={"rows_orthonormal": rows_ok, "square": square}))

    # literal reading: second term repeats the branch-0 product; t < qN
    K = lat.K
    etas = [lat.shift_element(t, 1) for t in range(A)]
    pts = [x + e for x in xis for e in etas]
    parts = [SymbolFunction(w, lat).split_parts(pts) for w in bank.filters]
    m0 = np.array([p[0].reshape(len(xis), A) for p in parts])
    phase = np.array([complex(chi_pair(fe_mul(lat.theta, K.prime_power(1)), u_of(K, t)).conjugate())
                      for t in range(A)])
    prod = m0[:, None] * m0[None].conj()
    lit_a = (2 * prod).sum(axis=-1)
    lit_b = (2 * prod * phase[None, None, None, :]).sum(axis=-1)
    rep.add(Check("symbol_a_literal", float(np.abs(lit_a - eye[:, :, None]).max()), tolerance,
                  constant=float(np.real(np.einsum("iik->ik", lit_a)).mean()), primary=False))
    rep.add(Check("symbol_b_literal", float(np.abs(lit_b).max()), tolerance, primary=False))
    return rep


def cascade_spectrum(m0: SymbolFunction, J: int, region: OmegaDomain, m: int,
                     seed: bool = True) -> SteppedFunction:
    """prod_{j=1..J} m0(delta^-j xi) on the cells of ``region``.

    With ``seed`` the product is multiplied by the indicator of O at
    delta^-J xi, the starting guess for the scaling spectrum.
    """
    if J < 1:
        raise ConfigurationError("J must be >= 1")
    lat = m0.lattice
    need = m0.resolution - lat.delta_degree
    if m < need:
        raise ResolutionError(f"resolution {m} too coarse for the cascade (needs {need})")
    reps = region.cells(m)
    values = np.ones(len(reps), dtype=complex)
    for j in range(1, J + 1):
        dj = lat.delta_power(-j)
        values = values * m0.evaluate([fe_mul(dj, x) for x in reps])
    if seed:
        dJ = lat.delta_power(-J)
        inside = np.array([fe_mul(dJ, x).valuation >= 0 for x in reps])
        values = values * inside
    return SteppedFunction(m, reps, values, region)
