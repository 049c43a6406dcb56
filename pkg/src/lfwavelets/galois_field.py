"""Exact arithmetic in the residue field GF(q), q = p**c.

Elements are stored as integer codes ``a = a_0 + a_1 p + ... + a_{c-1} p^{c-1}``
where ``a_j`` is the coefficient of the basis element zeta_j (zeta_0 = 1).
This is exactly the digit encoding used by the coset map u(n) for n < q, so
``u(n)`` for a single digit is the code ``n`` placed at exponent -1.

Multiplication reduces polynomial products modulo a monic irreducible
``modulus`` (ascending coefficients, length c + 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

# Conway polynomials for the small fields that need a nontrivial modulus.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
    (3, 3): (1, 2, 0, 1),
}

_TABLE_LIMIT = 1024
_TABLES: dict = {}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# --- polynomials over Z_p, ascending coefficient lists ----------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - f * mi) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Irreducibility of a monic polynomial over Z_p.

    Degree <= 3: no roots in Z_p.  Otherwise Rabin's test, i.e.
    x^(p^c) = x mod f and gcd(x^(p^(c/l)) - x, f) = 1 for every prime l | c.
    """
    m = _trim(list(modulus))
    c = len(m) - 1
    if c < 1:
        return False
    if c == 1:
        return True
    if c <= 3:
        for x in range(p):
            if sum(coef * pow(x, i, p) for i, coef in enumerate(m)) % p == 0:
                return False
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**c, m, p), x, p):
        return False
    for ell in range(2, c + 1):
        if c % ell == 0 and is_prime(ell):
            h = _psub(_ppowmod(x, p ** (c // ell), m, p), x, p)
            if len(_pgcd(m, h, p)) != 1:
                return False
    return True


def find_modulus(p: int, c: int) -> tuple[int, ...]:
    """Default modulus: Conway polynomial when tabulated, else the smallest
    monic irreducible polynomial in lexicographic order of its coefficients."""
    if c == 1:
        return (0, 1)
    if (p, c) in DEFAULT_MODULI:
        return DEFAULT_MODULI[(p, c)]
    for code in range(p**c):
        low = [(code // p**i) % p for i in range(c)]
        cand = tuple(low + [1])
        if low[0] and is_irreducible(cand, p):
            return cand
    raise ConfigurationError(f"no irreducible polynomial of degree {c} over GF({p})")


@dataclass(frozen=True, eq=True)
class FieldParams:
    """GF(p^c) with a fixed modulus; construction validates everything."""

    p: int
    c: int
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ConfigurationError(f"p={self.p!r} is not prime")
        if not isinstance(self.c, int) or not 1 <= self.c <= 8:
            raise ConfigurationError(f"c={self.c!r} must be an integer in [1, 8]")
        modulus = tuple(int(x) for x in self.modulus) or find_modulus(self.p, self.c)
        object.__setattr__(self, "modulus", modulus)
        if len(modulus) != self.c + 1 or modulus[-1] != 1:
            raise ConfigurationError(f"modulus {list(modulus)} is not monic of degree {self.c}")
        if any(not 0 <= a < self.p for a in modulus):
            raise ConfigurationError(f"modulus coefficients must lie in [0, {self.p})")
        if not is_irreducible(modulus, self.p):
            raise ConfigurationError(f"modulus {list(modulus)} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p**self.c

    def to_json(self) -> dict:
        return {"p": self.p, "c": self.c, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldParams":
        return cls(int(d["p"]), int(d.get("c", 1)), tuple(d.get("modulus", ())))

    # -- code-level arithmetic (hot path, no wrapping) -----------------------

    def digits(self, a: int) -> list[int]:
        return [(a // self.p**j) % self.p for j in range(self.c)]

    def from_digits(self, ds) -> int:
        return sum((d % self.p) * self.p**j for j, d in enumerate(ds))

    @property
    def _tables(self):
        key = (self.p, self.c, self.modulus)
        if key not in _TABLES:
            _TABLES[key] = self._build_tables()
        return _TABLES[key]

    def _build_tables(self):
        q, p = self.q, self.p
        if q > _TABLE_LIMIT:
            return None
        D = np.array([self.digits(a) for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(self.c, dtype=np.int64)
        add = ((D[:, None, :] + D[None, :, :]) % p) @ weights
        neg = ((-D) % p) @ weights
        # log / antilog tables from a primitive element
        for g in range(2 if q > 2 else 1, q):
            exp = [1]
            while len(exp) < q - 1:
                exp.append(self._mul_slow(exp[-1], g))
            if len(set(exp)) == q - 1:
                break
        log = [0] * q
        for k, a in enumerate(exp):
            log[a] = k
        exp_arr = np.array(exp * 2, dtype=np.int64)
        log_arr = np.array(log, dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        mul[1:, 1:] = exp_arr[log_arr[1:, None] + log_arr[None, 1:]]
        inv = [0] + [exp[(-log[a]) % (q - 1)] for a in range(1, q)]
        return add.tolist(), mul.tolist(), neg.tolist(), inv

    @property
    def add_table(self):
        return self._tables[0]

    @property
    def mul_table(self):
        return self._tables[1]

    def _add_slow(self, a: int, b: int) -> int:
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def _neg_slow(self, a: int) -> int:
        return self.from_digits(-x for x in self.digits(a))

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _pmul(_trim(self.digits(a)), _trim(self.digits(b)), self.p)
        return self.from_digits(_pmod(prod, list(self.modulus), self.p))

    def add(self, a: int, b: int) -> int:
        t = self._tables
        return t[0][a][b] if t else self._add_slow(a, b)

    def neg(self, a: int) -> int:
        t = self._tables
        return t[2][a] if t else self._neg_slow(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        t = self._tables
        return t[1][a][b] if t else self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(q)")
        t = self._tables
        if t:
            return t[3][a]
        return self._pow_slow(a, self.q - 2)

    def _pow_slow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return result

    def trace0(self, a: int) -> int:
        """zeta_0 coordinate of ``a``; the additive character reads this digit."""
        return a % self.p

    def element(self, coeffs) -> "GFElement":
        if isinstance(coeffs, int):
            coeffs = self.digits(coeffs)
        coeffs = list(coeffs)
        if len(coeffs) != self.c or any(not 0 <= x < self.p for x in coeffs):
            raise ConfigurationError(f"{coeffs} is not a canonical GF({self.q}) coefficient vector")
        return GFElement(self, self.from_digits(coeffs))

    @property
    def zero(self) -> "GFElement":
        return GFElement(self, 0)

    @property
    def one(self) -> "GFElement":
        return GFElement(self, 1)

    def elements(self):
        return [GFElement(self, a) for a in range(self.q)]


@dataclass(frozen=True)
class GFElement:
    field: FieldParams
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.digits(self.code))

    def _check(self, other: "GFElement") -> None:
        if not isinstance(other, GFElement) or other.field != self.field:
            raise ConfigurationError("GF elements belong to different fields")

    def __add__(self, other):
        return gf_add(self, other)

    def __sub__(self, other):
        self._check(other)
        return GFElement(self.field, self.field.sub(self.code, other.code))

    def __neg__(self):
        return GFElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        return gf_mul(self, other)

    def __pow__(self, e: int):
        result = self.field.one
        for _ in range(e):
            result = result * self
        return result

    def __bool__(self):
        return self.code != 0

    def inverse(self):
        return gf_inv(self)

    def __repr__(self):
        return f"GF{self.field.q}{list(self.coeffs)}"


def gf_add(a: GFElement, b: GFElement) -> GFElement:
    a._check(b)
    return GFElement(a.field, a.field.add(a.code, b.code))


def gf_mul(a: GFElement, b: GFElement) -> GFElement:
    a._check(b)
    return GFElement(a.field, a.field.mul(a.code, b.code))


def gf_inv(a: GFElement) -> GFElement:
    return GFElement(a.field, a.field.inv(a.code))
