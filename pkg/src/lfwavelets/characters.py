"""Additive character, Fourier transform on l2(Lambda) and exact quadrature.

Character values stay as integer exponents mod p (``UnitRoot``) through all
algebra.  They are turned into complex numbers only when a weighted sum is
formed, always by elementwise numpy products followed by ordered ``sum``
reductions so that results are bit-identical across runs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import ConfigurationError, PrecisionError, ResolutionError
from .lambda_indexing import LambdaIndex, LambdaLattice, num_digits, u_of
from .local_field import EXACT, FieldElement, LocalField, element_from_json, element_to_json, fe_mul, fe_sub
from .reports import Check, VerificationReport


# --- unit roots -----------------------------------------------------------------

@dataclass(frozen=True)
class UnitRoot:
    """exp(2 pi i e / p)."""

    e: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % self.p)

    def __mul__(self, other: "UnitRoot") -> "UnitRoot":
        return UnitRoot(self.e + other.e, self.p)

    def conjugate(self) -> "UnitRoot":
        return UnitRoot(-self.e, self.p)

    def __complex__(self):
        return complex(root_table(self.p)[self.e])

    @property
    def value(self) -> complex:
        return complex(self)


_ROOTS: dict[int, np.ndarray] = {}


def root_table(p: int) -> np.ndarray:
    if p not in _ROOTS:
        tab = np.array([cmath.exp(2j * math.pi * e / p) for e in range(p)], dtype=complex)
        # pin the exactly representable values
        tab[0] = 1.0
        if p % 2 == 0:
            tab[p // 2] = -1.0
        if p % 4 == 0:
            tab[p // 4], tab[3 * p // 4] = 1j, -1j
        _ROOTS[p] = tab
    return _ROOTS[p]


def chi(x: FieldElement) -> UnitRoot:
    """zeta_0 digit of the P^-1 coefficient of x, as a unit root."""
    if x.precision <= -1:
        raise PrecisionError(f"chi needs the coefficient at exponent -1; precision is {x.precision}")
    return UnitRoot(x.K.gf.trace0(x.coeff(-1)), x.K.gf.p)


def chi_pair(xi: FieldElement, x: FieldElement) -> UnitRoot:
    return chi(fe_mul(xi, x))


# --- vectorized character tables ------------------------------------------------

def _trace_mul_table(gf) -> np.ndarray:
    q = gf.q
    return np.array([[gf.mul(a, b) % gf.p for b in range(q)] for a in range(q)], dtype=np.int64)


_TM_CACHE: dict = {}


def trace_mul_table(gf) -> np.ndarray:
    if gf not in _TM_CACHE:
        _TM_CACHE[gf] = _trace_mul_table(gf)
    return _TM_CACHE[gf]


def _eff_val(x: FieldElement):
    if x.is_zero:
        return x.precision
    return x.vmin


def char_exponents(A: list[FieldElement], B: list[FieldElement]) -> np.ndarray:
    """Matrix of chi(a*b) exponents, shape (len(A), len(B)).

    exponent(a, b) = sum_{i+k=-1} pi_0(a_i b_k) mod p.  Raises PrecisionError
    if a needed coefficient lies beyond the precision of either factor.
    """
    if not A or not B:
        return np.zeros((len(A), len(B)), dtype=np.int64)
    gf = A[0].K.gf
    p = gf.p
    va = np.array([_eff_val(a) for a in A], dtype=float)
    vb = np.array([_eff_val(b) for b in B], dtype=float)
    pa = np.array([a.precision for a in A], dtype=float)
    pb = np.array([b.precision for b in B], dtype=float)
    # a needs coefficients up to -1 - v(b); b up to -1 - v(a)
    bad = (pa[:, None] <= -1 - vb[None, :]) | (pb[None, :] <= -1 - va[:, None])
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise PrecisionError(
            f"character of a product needs exponent -1 but factors have precision "
            f"{A[i].precision} (v={va[i]}) and {B[j].precision} (v={vb[j]})")
    nz_a = [a for a in A if a.coeffs]
    nz_b = [b for b in B if b.coeffs]
    if not nz_a or not nz_b:
        return np.zeros((len(A), len(B)), dtype=np.int64)
    lo_a = min(a.vmin for a in nz_a)
    lo_b = min(b.vmin for b in nz_b)
    hi_a = -1 - lo_b
    if hi_a < lo_a:
        return np.zeros((len(A), len(B)), dtype=np.int64)
    L = hi_a - lo_a + 1
    Ad = np.zeros((len(A), L), dtype=np.int64)
    Bd = np.zeros((len(B), L), dtype=np.int64)
    for r, a in enumerate(A):
        for i in range(L):
            e = lo_a + i
            if e < a.precision:
                Ad[r, i] = a.coeff(e) if a.vmin <= e <= a.top else 0
    for r, b in enumerate(B):
        for i in range(L):
            e = -1 - (lo_a + i)
            if e < b.precision:
                Bd[r, i] = b.coeff(e) if b.coeffs and b.vmin <= e <= b.top else 0
    tm = trace_mul_table(gf)
    out = np.zeros((len(A), len(B)), dtype=np.int64)
    for i in range(L):
        out += tm[Ad[:, i][:, None], Bd[:, i][None, :]]
    return out % p


def char_values(A, B) -> np.ndarray:
    gf = A[0].K.gf if A else None
    if gf is None or not B:
        return np.ones((len(A), len(B)), dtype=complex)
    return root_table(gf.p)[char_exponents(A, B)]


# --- sequences ------------------------------------------------------------------

class Sequence:
    """Finitely supported complex function on Lambda, keyed by LambdaIndex."""

    __slots__ = ("taps",)

    def __init__(self, taps=None):
        items = taps.items() if isinstance(taps, dict) else (taps or [])
        clean: dict[LambdaIndex, complex] = {}
        for k, v in items:
            k = LambdaIndex(int(k[0]), int(k[1]))
            v = complex(v)
            if v != 0:
                clean[k] = clean.get(k, 0) + v
        self.taps = {k: clean[k] for k in sorted(clean) if clean[k] != 0}

    @classmethod
    def delta(cls, idx=(0, 0), value=1.0) -> "Sequence":
        return cls({LambdaIndex(*idx): value})

    def __getitem__(self, idx) -> complex:
        return self.taps.get(LambdaIndex(*idx), 0j)

    def __iter__(self):
        return iter(self.taps.items())

    def __len__(self):
        return len(self.taps)

    def __repr__(self):
        return f"Sequence({self.taps})"

    @property
    def support(self) -> list[LambdaIndex]:
        return list(self.taps)

    def norm2(self) -> float:
        if not self.taps:
            return 0.0
        v = np.array(list(self.taps.values()))
        return float((v.real * v.real + v.imag * v.imag).sum())

    def scaled(self, c: complex) -> "Sequence":
        return Sequence({k: c * v for k, v in self.taps.items()})

    def __add__(self, other: "Sequence") -> "Sequence":
        out = dict(self.taps)
        for k, v in other.taps.items():
            out[k] = out.get(k, 0) + v
        return Sequence(out)

    def __sub__(self, other: "Sequence") -> "Sequence":
        return self + other.scaled(-1)

    def inner(self, other: "Sequence") -> complex:
        """<self, other> = sum self * conj(other), in sorted index order."""
        keys = [k for k in self.taps if k in other.taps]
        if not keys:
            return 0j
        a = np.array([self.taps[k] for k in keys])
        b = np.array([other.taps[k] for k in keys])
        return complex((a * b.conj()).sum())

    def max_abs_diff(self, other: "Sequence") -> float:
        keys = set(self.taps) | set(other.taps)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def radius(self, q: int) -> int:
        """Largest digit count of any supported n."""
        return max((num_digits(k.n, q) for k in self.taps), default=0)

    def branch(self, eps: int) -> "Sequence":
        return Sequence({LambdaIndex(0, k.n): v for k, v in self.taps.items() if k.eps == eps})

    def to_json(self) -> list:
        return [{"eps": k.eps, "n": k.n, "re": float(v.real), "im": float(v.imag)} for k, v in self.taps.items()]

    @classmethod
    def from_json(cls, taps) -> "Sequence":
        if isinstance(taps, dict):
            taps = taps.get("taps", [])
        out = {}
        for t in taps:
            k = LambdaIndex(int(t.get("eps", 0)), int(t["n"]))
            out[k] = out.get(k, 0) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        return cls(out)


def spectral_resolution(z: Sequence, lattice: LambdaLattice) -> int:
    """Smallest m such that z-hat is constant on every coset of B^m."""
    m = 0
    for k in z.taps:
        m = max(m, -lattice.embed(k).valuation if k.eps or k.n else 0)
    return int(m)


def fourier_at_points(z: Sequence, lattice: LambdaLattice, xis: list[FieldElement],
                      branch_only: bool = False) -> np.ndarray:
    """z-hat at each xi: sum_lambda z(lambda) conj(chi(lambda xi)).

    With ``branch_only`` the eps=1 taps are embedded without theta, giving the
    transform of the re-indexed branch (used for polyphase components).
    """
    if not z.taps:
        return np.zeros(len(xis), dtype=complex)
    keys = list(z.taps)
    if branch_only:
        lams = [u_of(lattice.K, k.n) for k in keys]
    else:
        lams = [lattice.embed(k) for k in keys]
    vals = np.array([z.taps[k] for k in keys], dtype=complex)
    chars = char_values(lams, list(xis))
    return (vals[:, None] * chars.conj()).sum(axis=0)


def fourier_sequence(z: Sequence, lattice: LambdaLattice, xi: FieldElement) -> complex:
    return complex(fourier_at_points(z, lattice, [xi])[0])


# --- regions, cells, stepped functions ------------------------------------------

@dataclass
class OmegaDomain:
    """Finite union of disjoint balls ``base + B^level``."""

    K: LocalField
    cosets: list[tuple[FieldElement, int]]
    name: str = "custom"
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        for i, (b1, k1) in enumerate(self.cosets):
            for b2, k2 in self.cosets[i + 1:]:
                d = fe_sub(b1, b2)
                if d.valuation >= min(k1, k2):
                    self.warnings.append(
                        f"DEGENERATE_OMEGA: cosets {b1!r}+B^{k1} and {b2!r}+B^{k2} overlap")

    @property
    def measure(self) -> Fraction:
        return sum((Fraction(self.K.q) ** (-k) for _, k in self.cosets), Fraction(0))

    @property
    def min_level(self) -> int:
        return min(k for _, k in self.cosets)

    def cells(self, m: int) -> list[FieldElement]:
        """Canonical representatives of the B^m cosets covering the region."""
        q = self.K.q
        out = []
        for base, k in self.cosets:
            if m < k:
                raise ResolutionError(f"resolution {m} is coarser than region level {k}")
            b = base.truncate(k)
            span = m - k
            for code in range(q**span):
                digits = [(code // q**j) % q for j in range(span)]
                # lexicographic with the lowest exponent most significant
                digits.reverse()
                off = self.K.element([(k + j, a) for j, a in enumerate(digits) if a])
                out.append(b + off)
        return out

    def contains(self, x: FieldElement) -> bool:
        return any(fe_sub(x, b).valuation >= k for b, k in self.cosets)

    def to_json(self):
        return {"name": self.name, "cosets": [{"base": element_to_json(b), "level": k} for b, k in self.cosets]}


def omega_domain(lattice: LambdaLattice, preset: str = "dual") -> OmegaDomain:
    """Frequency domain for l2(Lambda).

    ``dual``: the ring of integers when Lambda collapses to Z; otherwise the
    ring of integers plus one translate chosen so that chi(theta * a) is a
    primitive p-th root of unity.  ``shifted``: P*O u (P*u(N) + P*O).
    """
    K = lattice.K
    if preset == "shifted":
        return OmegaDomain(K, [(K.zero, 1), (lattice.omega, 1)], "shifted")
    if preset != "dual":
        raise ConfigurationError(f"unknown omega preset {preset!r}")
    if lattice.degenerate:
        return OmegaDomain(K, [(K.zero, 0)], "dual")
    d = lattice.theta_integral_part
    lead_inv = K.gf.inv(d.coeffs[0])
    a = K.prime_power(-d.vmin - 1, lead_inv)
    return OmegaDomain(K, [(K.zero, 0), (a, 0)], "dual")


def integrate_character(y: FieldElement, region: OmegaDomain) -> complex:
    """Exact integral of chi(y xi) over the region (closed form per ball)."""
    total = 0j
    q = region.K.q
    for base, k in region.cosets:
        # chi(y .) is trivial on B^k iff v(y) >= -k
        if y.valuation >= -k:
            total += complex(chi_pair(y, base)) * float(Fraction(q) ** (-k))
    return total


def integrate_character_exponents(y: FieldElement, region: OmegaDomain) -> list[tuple[int, Fraction]]:
    """Same integral as a list of (unit-root exponent, measure) terms."""
    out = []
    for base, k in region.cosets:
        if y.valuation >= -k:
            out.append((chi_pair(y, base).e, Fraction(region.K.q) ** (-k)))
    return out


@dataclass
class SteppedFunction:
    """Function constant on every coset of B^m inside ``region``."""

    m: int
    reps: list[FieldElement]
    values: np.ndarray
    region: OmegaDomain | None = None

    @property
    def cell_measure(self) -> float:
        return float(Fraction(self.reps[0].K.q) ** (-self.m)) if self.reps else 0.0

    def value_at(self, xi: FieldElement) -> complex:
        key = xi.truncate(self.m).key()
        for r, v in zip(self.reps, self.values):
            if r.key() == key:
                return complex(v)
        raise KeyError(f"{xi!r} is outside the stepped function's cells")

    def max_abs_diff(self, other: "SteppedFunction") -> float:
        if [r.key() for r in self.reps] != [r.key() for r in other.reps]:
            raise ConfigurationError("stepped functions live on different cells")
        if not len(self.values):
            return 0.0
        return float(np.abs(self.values - other.values).max())

    def to_json(self):
        return {
            "m": self.m,
            "cells": [{"rep": element_to_json(r), "re": float(v.real), "im": float(v.imag)}
                      for r, v in zip(self.reps, self.values)],
        }

    @classmethod
    def from_json(cls, K: LocalField, d, region=None) -> "SteppedFunction":
        reps = [element_from_json(K, c["rep"]) for c in d["cells"]]
        vals = np.array([complex(c.get("re", 0.0), c.get("im", 0.0)) for c in d["cells"]], dtype=complex)
        return cls(int(d["m"]), reps, vals, region)


def sample(z: Sequence, lattice: LambdaLattice, region: OmegaDomain, m: int) -> SteppedFunction:
    """z-hat as a stepped function on the region; refuses coarse grids."""
    need = spectral_resolution(z, lattice)
    if m < need:
        raise ResolutionError(f"resolution {m} too coarse: z-hat varies on B^{need}")
    reps = region.cells(m)
    return SteppedFunction(m, reps, fourier_at_points(z, lattice, reps), region)


def inverse_on_omega(f: SteppedFunction, lattice: LambdaLattice, lam: LambdaIndex) -> complex:
    """sum over cells of f(cell) chi(lambda * rep) * q^-m."""
    return complex(inverse_on_omega_many(f, lattice, [lam])[0])


def inverse_on_omega_many(f: SteppedFunction, lattice: LambdaLattice, lams: list[LambdaIndex]) -> np.ndarray:
    elems = [lattice.embed(l) for l in lams]
    for l, e in zip(lams, elems):
        if not e.is_zero and -e.valuation > f.m:
            raise ResolutionError(
                f"resolution {f.m} too coarse for chi_lambda at {tuple(l)} (needs {-e.valuation})")
    if not f.reps:
        return np.zeros(len(lams), dtype=complex)
    chars = char_values(elems, f.reps)
    return (f.values[None, :] * chars).sum(axis=1) * f.cell_measure


# --- diagnostics -----------------------------------------------------------------

def coset_character_sum(K: LocalField, y: FieldElement, m: int) -> list[int]:
    """Histogram of chi(y x) exponents over the cells of O / B^m.

    The complex sum vanishes iff all p counts are equal.
    """
    reps = OmegaDomain(K, [(K.zero, 0)]).cells(m)
    ex = char_exponents([y], reps)[0]
    return [int((ex == e).sum()) for e in range(K.gf.p)]


def character_gram(lattice: LambdaLattice, region: OmegaDomain, window: int):
    """G(lambda, sigma) = integral over region of chi_lambda conj(chi_sigma)."""
    idx = lattice.indices(window)
    elems = [lattice.embed(i) for i in idx]
    n = len(idx)
    G = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(a, n):
            val = integrate_character(fe_sub(elems[a], elems[b]), region)
            G[a, b] = val
            G[b, a] = val.conjugate()
    return idx, G


def check_character_basis(lattice: LambdaLattice, window: int = 2, preset: str = "dual",
                          tolerance: float = 1e-10) -> VerificationReport:
    region = omega_domain(lattice, preset)
    idx, G = character_gram(lattice, region, window)
    n = len(idx)
    c = float(np.real(np.diag(G)).mean()) if n else 0.0
    off = G - c * np.eye(n)
    off_max = float(np.abs(off).max()) if n else 0.0
    rep = VerificationReport("basis-check", params=lattice.params.to_json())
    rep.meta.update(lattice.describe())
    rep.meta["omega"] = region.to_json()
    rep.meta["omega_measure"] = str(region.measure)
    rep.meta["window"] = window
    rep.meta["indices"] = n
    rep.warnings.extend(region.warnings)
    if lattice.degenerate:
        rep.warnings.append("DEGENERATE: theta lies in Z; index set collapsed to eps=0")
    rep.add(Check("character_orthogonality", off_max, tolerance, constant=c,
                  details={"measure": str(region.measure)}))
    return rep
