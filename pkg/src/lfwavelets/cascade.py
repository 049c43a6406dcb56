"""J-stage systems: cascaded filters, stage checks and the fast transform pair."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .characters import Sequence, fourier_at_points
from .errors import ConfigurationError, WindowOverflowError
from .first_stage import (DEFAULT_TOLERANCE, FilterBank, _identity_residual, column_products,
                          generators, integer_cells, polyphase_analysis, row_products)
from .lambda_indexing import LambdaIndex, LambdaLattice
from .reports import Check, VerificationReport
from .translations import DropCounter, analyze, synthesize, translate

FATHER_CHAIN = "fatherchain"
PAPER_LITERAL = "paperliteral"
MODES = (FATHER_CHAIN, PAPER_LITERAL)


@dataclass
class WaveletStages:
    lattice: LambdaLattice
    J: int
    banks: list[FilterBank]
    h: dict[tuple[int, int], Sequence]
    mode: str = FATHER_CHAIN
    dropped: int = 0
    support_sizes: dict[int, list[int]] = field(default_factory=dict)

    @property
    def arity(self) -> int:
        return self.lattice.arity

    def bank(self, level: int) -> FilterBank:
        return self.banks[level - 1]

    def filters(self, level: int) -> list[Sequence]:
        return [self.h[(level, i)] for i in range(self.arity)]


def build_stages(banks, J: int, mode: str = FATHER_CHAIN, strict: bool = False) -> WaveletStages:
    """h_{1,i} = w_i; h_{l,i} = sum_sigma w_i(sigma) T_{delta^(l-1) sigma} h_{l-1,0} (father chain).

    ``paperliteral`` chains h_{l-1,i} instead of h_{l-1,0}.  A single bank is
    reused at every level.
    """
    mode = mode.lower()
    if mode not in MODES:
        raise ConfigurationError(f"unknown cascade mode {mode!r}")
    if J < 1:
        raise ConfigurationError("J must be >= 1")
    if isinstance(banks, FilterBank):
        banks = [banks] * J
    banks = list(banks)
    if len(banks) == 1:
        banks = banks * J
    if len(banks) != J:
        raise ConfigurationError(f"need 1 or {J} banks, got {len(banks)}")
    lat = banks[0].lattice
    counter = DropCounter(strict)
    h: dict[tuple[int, int], Sequence] = {}
    sizes = {}
    for i, w in enumerate(banks[0].filters):
        h[(1, i)] = w
    sizes[1] = [len(w) for w in banks[0].filters]
    for level in range(2, J + 1):
        for i, w in enumerate(banks[level - 1].filters):
            parent = h[(level - 1, 0 if mode == FATHER_CHAIN else i)]
            h[(level, i)] = synthesize(w, parent, lat, level - 1, counter)
        sizes[level] = [len(h[(level, i)]) for i in range(lat.arity)]
    return WaveletStages(lat, J, banks, h, mode, counter.dropped, sizes)


def cascade_spot_check(stages: WaveletStages, rng: np.random.Generator, n_points: int = 16,
                       resolution: int = 6) -> float:
    """Max deviation between h_{l,i}-hat and the two-scale product at random frequencies."""
    lat = stages.lattice
    K = lat.K
    xis = [K.random(rng, 0, resolution - 1) for _ in range(n_points)]
    worst = 0.0
    for level in range(2, stages.J + 1):
        dl = lat.delta_power(level - 1)
        scaled = [dl * x for x in xis]
        for i in range(stages.arity):
            parent = stages.h[(level - 1, 0 if stages.mode == FATHER_CHAIN else i)]
            lhs = fourier_at_points(stages.h[(level, i)], lat, xis)
            rhs = fourier_at_points(parent, lat, xis) * fourier_at_points(stages.bank(level).filters[i], lat, scaled)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


# --- checks ------------------------------------------------------------------------

def stage_orthonormality_check(stages: WaveletStages, level: int, window: int,
                               resolution: int | None = None,
                               tolerance: float = DEFAULT_TOLERANCE) -> VerificationReport:
    """Gram oracle and polyphase rows for {T_{delta^l lambda} h_{l,i}}."""
    lat = stages.lattice
    hs = stages.filters(level)
    idx = lat.indices(window)
    res = 0.0
    rows = 0
    for i, hi in enumerate(hs):
        for lam in idx:
            v = translate(hi, lam, lat, level)
            rows += 1
            for k, hk in enumerate(hs):
                coeffs = analyze(v, hk, lat, level)
                seen = False
                for sigma, val in coeffs:
                    target = 1.0 if (k == i and sigma == lam) else 0.0
                    seen |= target == 1.0
                    res = max(res, abs(val - target))
                if k == i and not seen:
                    res = max(res, 1.0)
    rep = VerificationReport("stage-orthonormality", params=lat.params.to_json())
    rep.meta.update({"level": level, "mode": stages.mode})
    rep.add(Check(f"stage{level}_gram", res, tolerance, details={"window": window, "rows": rows}))

    gens, m, xis, M = polyphase_analysis(hs, lat, level, resolution)
    P = row_products(M)
    row_res = _identity_residual(P)
    rep.add(Check(f"stage{level}_polyphase_rows", row_res, tolerance,
                  constant=float(np.real(np.einsum("kii->ki", P)).mean()),
                  details={"resolution": m, "shifts": lat.shift_count(level)}))
    # printed stage sum: sum over (qN)^l shifts with the stated constant q (qN)^l
    q, A = lat.q, lat.arity
    S = A**level
    etas = [lat.shift_element(s, level) for s in range(S)]
    pts_a = [x + e for x in xis for e in etas]
    pts_b = [p + lat.omega for p in pts_a]
    Wa = np.array([fourier_at_points(hh, lat, pts_a).reshape(len(xis), S) for hh in hs])
    Wb = np.array([fourier_at_points(hh, lat, pts_b).reshape(len(xis), S) for hh in hs])
    T = (Wa[:, None] * Wa[None].conj() + Wb[:, None] * Wb[None].conj()).sum(axis=-1)
    target = q * A**level
    eye = np.eye(A)[:, :, None]
    rep.add(Check(f"stage{level}_printed_sum", float(np.abs(T - target * eye).max()), tolerance,
                  constant=float(np.real(np.einsum("iik->ik", T)).mean()), primary=False,
                  details={"stated_constant": target,
                           "row_index_reading": "shift index s of the first-stage matrix"}))
    return rep


def _random_coeffs(lattice: LambdaLattice, window: int, rng: np.random.Generator) -> Sequence:
    idx = lattice.indices(window)
    vals = rng.standard_normal(len(idx)) + 1j * rng.standard_normal(len(idx))
    return Sequence(dict(zip(idx, vals)))


def father(stages: WaveletStages, level: int) -> Sequence:
    return Sequence.delta((0, 0)) if level == 0 else stages.h[(level, 0)]


def coarse_signal(stages: WaveletStages, level: int, coeffs: Sequence) -> Sequence:
    """sum_lambda c(lambda) T_{delta^level lambda} h_{level,0}."""
    return synthesize(coeffs, father(stages, level), stages.lattice, level)


def splitting_check(stages: WaveletStages, level: int, window: int, samples: int = 50,
                    seed: int = 0, tolerance: float = DEFAULT_TOLERANCE,
                    cross_tolerance: float = 1e-12) -> VerificationReport:
    """||P_V z||^2 + ||P_W z||^2 = ||z||^2 for random z in V_{level-1}."""
    lat = stages.lattice
    rng = np.random.default_rng(seed)
    hs = stages.filters(level)
    energy_res = 0.0
    for _ in range(samples):
        z = coarse_signal(stages, level - 1, _random_coeffs(lat, window, rng))
        nz = z.norm2()
        ev = analyze(z, hs[0], lat, level).norm2()
        ew = sum(analyze(z, hh, lat, level).norm2() for hh in hs[1:])
        energy_res = max(energy_res, abs(ev + ew - nz))
    cross = 0.0
    for lam in lat.indices(window):
        v = translate(hs[0], lam, lat, level)
        for hh in hs[1:]:
            for _, val in analyze(v, hh, lat, level):
                cross = max(cross, abs(val))
    rep = VerificationReport("splitting", params=lat.params.to_json())
    rep.meta.update({"level": level, "samples": samples, "seed": seed, "mode": stages.mode})
    rep.add(Check(f"split{level}_energy", energy_res, tolerance))
    rep.add(Check(f"split{level}_cross_gram", cross, cross_tolerance))
    return rep


# --- transforms ----------------------------------------------------------------------

@dataclass
class DecompositionResult:
    approx: Sequence
    details: dict[tuple[int, int], Sequence]
    J: int
    window: int

    def energy_table(self) -> list[dict]:
        rows = [{"band": f"d[{l},{i}]", "level": l, "i": i, "energy": d.norm2()}
                for (l, i), d in sorted(self.details.items())]
        rows.append({"band": f"a[{self.J}]", "level": self.J, "i": 0, "energy": self.approx.norm2()})
        return rows

    def total_energy(self) -> float:
        return float(np.array([r["energy"] for r in self.energy_table()]).sum())

    def to_json(self) -> dict:
        return {
            "J": self.J,
            "window": self.window,
            "approx": self.approx.to_json(),
            "details": [{"level": l, "i": i, "taps": d.to_json()} for (l, i), d in sorted(self.details.items())],
        }

    @classmethod
    def from_json(cls, d: dict) -> "DecompositionResult":
        details = {(int(e["level"]), int(e["i"])): Sequence.from_json(e["taps"]) for e in d.get("details", [])}
        return cls(Sequence.from_json(d["approx"]), details, int(d["J"]), int(d.get("window", 0)))


def _check_window(z: Sequence, lattice: LambdaLattice, window: int | None) -> None:
    if window is None:
        return
    limit = lattice.q**window
    clipped = [tuple(k) for k in z.taps if k.n >= limit]
    if clipped:
        raise WindowOverflowError(f"{len(clipped)} taps lie outside the window n < {limit}", clipped)


def dwt(z: Sequence, stages: WaveletStages, J: int | None = None, window: int | None = None) -> DecompositionResult:
    """a_l(lambda) = <a_{l-1}, T_{delta lambda} w_0>, d_{l,i} likewise with w_i."""
    J = J or stages.J
    lat = stages.lattice
    _check_window(z, lat, window)
    a = z
    details = {}
    for level in range(1, J + 1):
        bank = stages.bank(level)
        for i in range(1, lat.arity):
            details[(level, i)] = analyze(a, bank.filters[i], lat, 1)
        a = analyze(a, bank.filters[0], lat, 1)
    return DecompositionResult(a, details, J, window or 0)


def idwt(dec: DecompositionResult, stages: WaveletStages) -> Sequence:
    lat = stages.lattice
    a = dec.approx
    for level in range(dec.J, 0, -1):
        bank = stages.bank(level)
        out = synthesize(a, bank.filters[0], lat, 1)
        for i in range(1, lat.arity):
            d = dec.details.get((level, i))
            if d is not None and d.taps:
                out = out + synthesize(d, bank.filters[i], lat, 1)
        a = out
    return a


def direct_coefficients(z: Sequence, stages: WaveletStages, J: int | None = None) -> DecompositionResult:
    """Slow path: <z, T_{delta^l lambda} h_{l,i}> from the cascaded filters."""
    J = J or stages.J
    lat = stages.lattice
    details = {(l, i): analyze(z, stages.h[(l, i)], lat, l) for l in range(1, J + 1) for i in range(1, lat.arity)}
    return DecompositionResult(analyze(z, stages.h[(J, 0)], lat, J), details, J, 0)


def decomposition_difference(a: DecompositionResult, b: DecompositionResult) -> float:
    worst = a.approx.max_abs_diff(b.approx)
    for key in set(a.details) | set(b.details):
        worst = max(worst, a.details.get(key, Sequence()).max_abs_diff(b.details.get(key, Sequence())))
    return worst


def tail_energy_check(stages: WaveletStages, Jmax: int | None = None, window: int = 3, seed: int = 0,
                      tolerance: float = DEFAULT_TOLERANCE, z: Sequence | None = None) -> VerificationReport:
    """||a_J||^2 for J = 1..Jmax; should be non-increasing."""
    Jmax = Jmax or stages.J
    lat = stages.lattice
    if z is None:
        z = _random_coeffs(lat, window, np.random.default_rng(seed))
    energies = [z.norm2()]
    a = z
    for level in range(1, Jmax + 1):
        a = analyze(a, stages.bank(level).filters[0], lat, 1)
        energies.append(a.norm2())
    increase = max([0.0] + [energies[j + 1] - energies[j] for j in range(Jmax)])
    rep = VerificationReport("tail-energy", params=lat.params.to_json())
    rep.meta.update({"energies": energies, "seed": seed})
    rep.add(Check("approx_energy_monotone", increase, tolerance, primary=False))
    return rep
