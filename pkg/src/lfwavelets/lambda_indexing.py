"""The coset map u(n), the index set Lambda and exact translation arithmetic.

Elements of Z = {u(n)} are polynomials in t = P^-1 with zero constant term.
Every translation used by the transforms (delta^l * lambda, l >= 1) lands in
Z, so index arithmetic is done exactly in GF(q)[t] and never touches a
truncated series.  Only the branch offset theta = u(r)/nu itself can be an
infinite series; it is carried as a FieldElement with tracked precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .errors import ConfigurationError
from .galois_field import FieldParams
from .local_field import EXACT, FieldElement, LocalField, fe_inv, fe_mul, fe_sub, format_element

SCALAR = "ScalarModP"
COSET = "CosetRep"
_POLICY_ALIASES = {
    "scalarmodp": SCALAR, "scalar": SCALAR,
    "cosetrep": COSET, "coset": COSET,
}


class DegenerateLambdaWarning(UserWarning):
    pass


class LambdaIndex(NamedTuple):
    eps: int
    n: int

    def to_json(self):
        return {"eps": self.eps, "n": self.n}


def num_digits(n: int, q: int) -> int:
    """Number of base-q digits of n (0 for n = 0); equals -v(u(n))."""
    d = 0
    while n:
        n //= q
        d += 1
    return d


# --- polynomials in t over GF(q); list index = power of t -----------------------

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(gf, a, b):
    n = max(len(a), len(b))
    return _ptrim(gf.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n))


def pneg(gf, a):
    return [gf.neg(x) for x in a]


def psub(gf, a, b):
    return padd(gf, a, pneg(gf, b))


def pmul(gf, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = gf.add(out[i + j], gf.mul(x, y))
    return _ptrim(out)


def pdivmod(gf, a, b):
    a = _ptrim(a)
    b = _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = gf.inv(b[-1])
    quot = [0] * max(0, len(a) - len(b) + 1)
    rem = list(a)
    while len(rem) >= len(b):
        f = gf.mul(rem[-1], inv_lead)
        shift = len(rem) - len(b)
        quot[shift] = f
        for i, bi in enumerate(b):
            rem[shift + i] = gf.sub(rem[shift + i], gf.mul(f, bi))
        rem = _ptrim(rem)
    return _ptrim(quot), rem


def u_poly(n: int, q: int) -> list[int]:
    """u(n) as a t-polynomial: base-q digit b_k sits at t^(k+1)."""
    out = [0]
    while n:
        out.append(n % q)
        n //= q
    return _ptrim(out)


def poly_to_n(poly, q: int):
    """Inverse of :func:`u_poly`; ``None`` if the constant term is nonzero."""
    if poly and poly[0]:
        return None
    return sum(c * q**k for k, c in enumerate(poly[1:]))


def poly_to_element(K: LocalField, poly) -> FieldElement:
    return K.element([(-k, c) for k, c in enumerate(poly) if c])


def element_to_poly(x: FieldElement):
    """t-polynomial of an element supported on exponents <= 0, else ``None``."""
    if x.is_zero:
        return [] if x.precision > 0 else None
    if x.top > 0 or x.precision <= 0:
        return None
    out = [0] * (1 - x.vmin)
    for e, a in x.terms():
        out[-e] = a
    return out


# --- u(n) on field elements -----------------------------------------------------

def u_of(K: LocalField, n: int) -> FieldElement:
    if n < 0:
        raise ConfigurationError("u(n) needs n >= 0")
    return poly_to_element(K, u_poly(n, K.q))


def u_inverse(x: FieldElement):
    """n with u(n) = x, or ``None`` (x is not in Z, or not provably so)."""
    poly = element_to_poly(x)
    if poly is None:
        return None
    return poly_to_n(poly, x.K.q)


# --- parameters -----------------------------------------------------------------

def normalize_policy(policy: str | None, p: int, N: int) -> str:
    if policy is None:
        return SCALAR if math.gcd(N, p) == 1 else COSET
    key = str(policy).replace("_", "").replace("-", "").lower()
    if key not in _POLICY_ALIASES:
        raise ConfigurationError(f"unknown nu_policy {policy!r}")
    return _POLICY_ALIASES[key]


@dataclass(frozen=True)
class NumraParams:
    field: FieldParams
    N: int = 1
    r: int = 1
    nu_policy: str | None = None

    def __post_init__(self):
        q = self.field.q
        if not isinstance(self.N, int) or self.N < 1:
            raise ConfigurationError(f"N={self.N!r} must be an integer >= 1")
        if not isinstance(self.r, int) or not 1 <= self.r <= q * self.N - 1 or self.r % 2 == 0:
            raise ConfigurationError(f"r={self.r!r} must be odd with 1 <= r <= qN-1 = {q * self.N - 1}")
        if math.gcd(self.r, self.N) != 1:
            raise ConfigurationError(f"gcd(r, N) = gcd({self.r}, {self.N}) != 1")
        policy = normalize_policy(self.nu_policy, self.field.p, self.N)
        object.__setattr__(self, "nu_policy", policy)
        if policy == SCALAR and self.N % self.field.p == 0:
            raise ConfigurationError(
                f"ScalarModP needs gcd(N, p) = 1; N={self.N} is 0 in GF({self.field.p})")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def arity(self) -> int:
        return self.field.q * self.N

    def to_json(self) -> dict:
        d = self.field.to_json()
        d.update({"N": self.N, "r": self.r, "nu_policy": self.nu_policy})
        return d

    @classmethod
    def from_json(cls, d: dict) -> "NumraParams":
        return cls(FieldParams.from_json(d), int(d.get("N", 1)), int(d.get("r", 1)), d.get("nu_policy"))


# --- the lattice ----------------------------------------------------------------

class LambdaLattice:
    """Lambda = Z u (theta + Z) together with the dilation delta = P^-1 * nu.

    ``delta * Lambda`` is contained in Z for both policies, which is what makes
    every translate T_{delta^l lambda} preserve the two branches.
    """

    def __init__(self, params: NumraParams, K: LocalField | None = None):
        self.params = params
        self.K = K or LocalField(params.field)
        self.gf = params.field
        self.q = params.q
        gf, q = self.gf, self.q
        if params.nu_policy == SCALAR:
            self.nu_poly = [params.N % params.field.p]
        elif params.N == 1:
            self.nu_poly = [1]
        else:
            self.nu_poly = u_poly(params.N, q)
        self.delta_poly = pmul(gf, [0, 1], self.nu_poly)
        # delta * theta = P^-1 u(r) under both policies, exactly
        self.delta_theta_poly = pmul(gf, [0, 1], u_poly(params.r, q))
        self._delta_pow = {0: [1]}
        ur, nu_poly = u_poly(params.r, q), self.nu_poly
        quot, rem = pdivmod(gf, ur, nu_poly)
        self.degenerate = not rem and (not quot or quot[0] == 0)
        if self.degenerate:
            warnings.warn(
                f"DEGENERATE: theta = u({params.r})/nu lies in Z for {params.to_json()}; "
                "Lambda collapses to Z", DegenerateLambdaWarning, stacklevel=2)

    # -- dilation -------------------------------------------------------------

    @property
    def arity(self) -> int:
        return self.params.arity

    @property
    def delta_degree(self) -> int:
        """deg_t(delta); the index of delta*Z in Z is q**delta_degree."""
        return len(self.delta_poly) - 1

    def delta_pow_poly(self, level: int):
        if level not in self._delta_pow:
            self._delta_pow[level] = pmul(self.gf, self.delta_pow_poly(level - 1), self.delta_poly)
        return self._delta_pow[level]

    @cached_property
    def nu(self) -> FieldElement:
        return poly_to_element(self.K, self.nu_poly)

    @cached_property
    def delta(self) -> FieldElement:
        return poly_to_element(self.K, self.delta_poly)

    def delta_power(self, level: int) -> FieldElement:
        """delta**level for any integer level; negative powers are series."""
        if level >= 0:
            return poly_to_element(self.K, self.delta_pow_poly(level))
        return fe_inv(self.delta_power(-level), self.K.vmax)

    @cached_property
    def theta(self) -> FieldElement:
        ur = u_of(self.K, self.params.r)
        return fe_mul(ur, fe_inv(self.nu, self.K.vmax))

    @cached_property
    def theta_integral_part(self) -> FieldElement:
        """The part of theta with exponents >= 0 (zero iff degenerate)."""
        th = self.theta
        return FieldElement(self.K, 0, tuple(th.coeff(e) for e in range(0, int(min(th.precision, self.K.vmax)))),
                            th.precision)

    @cached_property
    def omega(self) -> FieldElement:
        """Offset P*u(N) used for the second sample coset of the frequency domain."""
        return fe_mul(self.K.prime_power(1), u_of(self.K, self.params.N))

    @property
    def branches(self) -> tuple[int, ...]:
        return (0,) if self.degenerate else (0, 1)

    # -- embedding ------------------------------------------------------------

    def embed(self, idx: LambdaIndex) -> FieldElement:
        eps, n = idx
        un = u_of(self.K, n)
        if eps == 0:
            return un
        if eps != 1:
            raise ConfigurationError(f"eps must be 0 or 1, got {eps}")
        return self.theta + un

    def canonical(self, idx: LambdaIndex) -> LambdaIndex:
        """Representative label; in the collapsed case eps=1 maps into eps=0."""
        idx = LambdaIndex(*idx)
        if idx.eps == 0 or not self.degenerate:
            return idx
        quot, _ = pdivmod(self.gf, u_poly(self.params.r, self.q), self.nu_poly)
        return LambdaIndex(0, poly_to_n(padd(self.gf, quot, u_poly(idx.n, self.q)), self.q))

    def reindex(self, x: FieldElement):
        """LambdaIndex of a field element, or ``None`` if x is not in Lambda."""
        n = u_inverse(x)
        if n is not None:
            return LambdaIndex(0, n)
        if not self.degenerate:
            n = u_inverse(fe_sub(x, self.theta))
            if n is not None:
                return LambdaIndex(1, n)
        return None

    def indices(self, window: int) -> list[LambdaIndex]:
        """All indices with n < q**window, sorted by (eps, n)."""
        return [LambdaIndex(e, n) for e in self.branches for n in range(self.q**window)]

    # -- exact translation arithmetic -----------------------------------------

    def scaled_poly(self, lam: LambdaIndex, level: int):
        """delta**level * embed(lam) as a t-polynomial (level >= 1)."""
        if level < 1:
            raise ValueError("scaled_poly needs level >= 1")
        eps, n = lam
        inner = pmul(self.gf, self.delta_poly, u_poly(n, self.q))
        if eps:
            inner = padd(self.gf, inner, self.delta_theta_poly)
        return pmul(self.gf, self.delta_pow_poly(level - 1), inner)

    def shift_index(self, tau: LambdaIndex, lam: LambdaIndex, level: int):
        """tau + delta**level * lam, re-indexed (same branch as tau)."""
        if level == 0:
            return self.reindex(self.embed(tau) + self.embed(lam))
        poly = padd(self.gf, u_poly(tau.n, self.q), self.scaled_poly(lam, level))
        return LambdaIndex(tau.eps, poly_to_n(poly, self.q))

    def translate_index(self, sigma: LambdaIndex, lam: LambdaIndex, level: int):
        """sigma - delta**level * lam, re-indexed into Lambda."""
        if level == 0:
            return self.reindex(fe_sub(self.embed(sigma), self.embed(lam)))
        poly = psub(self.gf, u_poly(sigma.n, self.q), self.scaled_poly(lam, level))
        return LambdaIndex(sigma.eps, poly_to_n(poly, self.q))

    def solve_shift(self, x: LambdaIndex, tau: LambdaIndex, level: int):
        """The lambda with x = tau + delta**level * lambda, or ``None``."""
        if level == 0:
            return self.reindex(fe_sub(self.embed(x), self.embed(tau)))
        if x.eps != tau.eps:
            return None
        gf, q = self.gf, self.q
        w = psub(gf, u_poly(x.n, q), u_poly(tau.n, q))
        dl = self.delta_pow_poly(level)
        quot, rem = pdivmod(gf, w, dl)
        if not rem and (not quot or quot[0] == 0):
            return LambdaIndex(0, poly_to_n(quot, q))
        if self.degenerate:
            return None
        w1 = psub(gf, w, pmul(gf, self.delta_pow_poly(level - 1), self.delta_theta_poly))
        quot, rem = pdivmod(gf, w1, dl)
        if not rem and (not quot or quot[0] == 0):
            return LambdaIndex(1, poly_to_n(quot, q))
        return None

    def shift_element(self, s: int, level: int = 1) -> FieldElement:
        """eta_s = delta**(-level) * u(s), the frequency shift for coset s."""
        return fe_mul(self.delta_power(-level), u_of(self.K, s))

    def shift_count(self, level: int = 1) -> int:
        """[Z : delta**level Z] = q**(level * deg delta)."""
        return self.q ** (level * self.delta_degree)

    def describe(self) -> dict:
        return {
            "q": self.q,
            "nu_policy": self.params.nu_policy,
            "nu": format_element(self.nu),
            "delta": format_element(self.delta),
            "theta": format_element(self.theta),
            "delta_norm": self.q ** self.delta_degree,
            "arity": self.arity,
            "degenerate": self.degenerate,
            "branches": len(self.branches),
            "shift_count": self.shift_count(1),
        }
