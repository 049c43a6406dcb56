"""Truncated formal Laurent series over GF(q).

An element is ``sum_{l >= vmin} c_l P^l`` with ``c_l`` stored as GF(q) codes.
Every element carries a ``precision``: coefficients at exponents >= precision
are unknown. Exact elements (finite sums such as u(n)) have precision
``EXACT``. Arithmetic propagates the tightest valid precision, so products
involving truncated inverses report honestly how far they can be trusted.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ConfigurationError, PrecisionError, WindowError
from .galois_field import FieldParams, GFElement

EXACT = math.inf


class LocalField:
    """K = GF(q)((P)) restricted to an exponent window [vmin, vmax].

    ``vmin`` is a hard floor: producing a nonzero coefficient below it raises
    :class:`WindowError`.  ``vmax`` is the default precision of series
    expansions (inverses).
    """

    def __init__(self, params: FieldParams, vmin: int = -32, vmax: int = 32):
        if vmin >= 0 or vmax <= 0:
            raise ConfigurationError("exponent window must straddle 0")
        self.params = params
        self.gf = params
        self.q = params.q
        self.vmin = vmin
        self.vmax = vmax

    def __eq__(self, other):
        return (isinstance(other, LocalField) and self.params == other.params
                and self.vmin == other.vmin and self.vmax == other.vmax)

    def __hash__(self):
        return hash((self.params, self.vmin, self.vmax))

    def __repr__(self):
        return f"LocalField(GF({self.q}), window=[{self.vmin}, {self.vmax}])"

    # constructors -----------------------------------------------------------

    def element(self, terms=None, precision=EXACT) -> "FieldElement":
        """Build from a mapping or iterable of ``(exponent, code)`` pairs.

        ``code`` may be an int code, a GFElement or a coefficient list.
        """
        if terms is None:
            return FieldElement(self, 0, (), precision)
        items = terms.items() if isinstance(terms, dict) else terms
        dense: dict[int, int] = {}
        for e, a in items:
            if isinstance(a, GFElement):
                a = a.code
            elif not isinstance(a, int):
                a = self.gf.from_digits(a)
            if not 0 <= a < self.q:
                raise ConfigurationError(f"coefficient code {a} out of range for GF({self.q})")
            dense[int(e)] = self.gf.add(dense.get(int(e), 0), a)
        if not dense:
            return FieldElement(self, 0, (), precision)
        lo, hi = min(dense), max(dense)
        return FieldElement(self, lo, tuple(dense.get(e, 0) for e in range(lo, hi + 1)), precision)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0, ())

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 0, (1,))

    def scalar(self, a: int) -> "FieldElement":
        return FieldElement(self, 0, (a,))

    def prime_power(self, k: int, a: int = 1) -> "FieldElement":
        """``a * P**k``."""
        return FieldElement(self, k, (a,))

    def random(self, rng, lo: int, hi: int) -> "FieldElement":
        return FieldElement(self, lo, tuple(int(x) for x in rng.integers(0, self.q, hi - lo + 1)))


class FieldElement:
    __slots__ = ("K", "vmin", "coeffs", "precision")

    def __init__(self, K: LocalField, vmin: int, coeffs: tuple, precision=EXACT):
        # canonicalize: drop unknown tail, strip zeros at both ends
        if precision != EXACT:
            keep = max(0, min(len(coeffs), int(precision) - vmin))
            coeffs = coeffs[:keep]
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        end = len(coeffs)
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        coeffs = tuple(coeffs[start:end])
        vmin = vmin + start if coeffs else 0
        if coeffs and vmin < K.vmin:
            raise WindowError(f"exponent {vmin} below window floor {K.vmin}")
        self.K = K
        self.vmin = vmin
        self.coeffs = coeffs
        self.precision = precision

    # inspection -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return self.precision == EXACT

    @property
    def valuation(self):
        """v(x); ``math.inf`` for zero."""
        return math.inf if not self.coeffs else self.vmin

    @property
    def top(self) -> int:
        """Largest exponent with a stored nonzero coefficient."""
        return self.vmin + len(self.coeffs) - 1

    def coeff(self, e: int) -> int:
        if e >= self.precision:
            raise PrecisionError(f"coefficient at exponent {e} is beyond precision {self.precision}")
        i = e - self.vmin
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def terms(self):
        return [(self.vmin + i, a) for i, a in enumerate(self.coeffs) if a]

    def truncate(self, m: int) -> "FieldElement":
        """Representative of the coset ``x + B^m`` (exponents < m kept)."""
        if self.precision < m:
            raise PrecisionError(f"cannot reduce mod B^{m}: precision is {self.precision}")
        return FieldElement(self.K, self.vmin, self.coeffs[: max(0, m - self.vmin)])

    def negative_part(self) -> "FieldElement":
        """Terms with exponent < 0 (the Z-component of x)."""
        return self.truncate(0)

    def with_precision(self, precision) -> "FieldElement":
        return FieldElement(self.K, self.vmin, self.coeffs, min(precision, self.precision))

    def key(self):
        return (self.vmin, self.coeffs, self.precision)

    def __eq__(self, other):
        return isinstance(other, FieldElement) and self.K == other.K and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def equal_to_precision(self, other: "FieldElement") -> bool:
        d = fe_sub(self, other)
        return d.is_zero

    def __repr__(self):
        return format_element(self)

    # arithmetic --------------------------------------------------------------

    def __add__(self, other):
        return fe_add(self, other)

    def __sub__(self, other):
        return fe_sub(self, other)

    def __neg__(self):
        return fe_neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return fe_scale(self, other)
        return fe_mul(self, other)

    __rmul__ = __mul__


def _check(x: FieldElement, y: FieldElement) -> None:
    if x.K.params != y.K.params:
        raise ConfigurationError("field elements belong to different fields")


def fe_add(x: FieldElement, y: FieldElement) -> FieldElement:
    _check(x, y)
    prec = min(x.precision, y.precision)
    if not y.coeffs:
        return FieldElement(x.K, x.vmin, x.coeffs, prec)
    if not x.coeffs:
        return FieldElement(x.K, y.vmin, y.coeffs, prec)
    lo = min(x.vmin, y.vmin)
    hi = max(x.top, y.top)
    out = [0] * (hi - lo + 1)
    ox = x.vmin - lo
    out[ox: ox + len(x.coeffs)] = x.coeffs
    add = x.K.gf.add_table
    oy = y.vmin - lo
    if add is not None:
        for i, b in enumerate(y.coeffs):
            if b:
                out[oy + i] = add[out[oy + i]][b]
    else:
        for i, b in enumerate(y.coeffs):
            if b:
                out[oy + i] = x.K.gf.add(out[oy + i], b)
    return FieldElement(x.K, lo, tuple(out), prec)


def fe_neg(x: FieldElement) -> FieldElement:
    gf = x.K.gf
    return FieldElement(x.K, x.vmin, tuple(gf.neg(a) for a in x.coeffs), x.precision)


def fe_sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return fe_add(x, fe_neg(y))


def fe_scale(x: FieldElement, a: int) -> FieldElement:
    """Multiply by the GF(q) scalar with code ``a``."""
    gf = x.K.gf
    return FieldElement(x.K, x.vmin, tuple(gf.mul(a, b) for b in x.coeffs), x.precision)


def fe_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    _check(x, y)
    if not x.coeffs or not y.coeffs:
        # 0 * (unknown tail) is only known up to the partner's precision shift
        prec = EXACT
        if not x.coeffs and x.precision != EXACT and y.coeffs:
            prec = x.precision + y.vmin
        if not y.coeffs and y.precision != EXACT and x.coeffs:
            prec = min(prec, y.precision + x.vmin)
        if not x.coeffs and not y.coeffs:
            prec = min(x.precision, y.precision)
        return FieldElement(x.K, 0, (), prec)
    prec = min(x.vmin + y.precision, y.vmin + x.precision)
    n = len(x.coeffs) + len(y.coeffs) - 1
    if prec != EXACT:
        n = min(n, max(0, int(prec) - x.vmin - y.vmin))
    out = [0] * n
    gf = x.K.gf
    mul, add = gf.mul_table, gf.add_table
    ny = len(y.coeffs)
    for i, a in enumerate(x.coeffs):
        if not a or i >= n:
            continue
        jmax = min(ny, n - i)
        if mul is not None:
            row = mul[a]
            for j in range(jmax):
                b = y.coeffs[j]
                if b:
                    out[i + j] = add[out[i + j]][row[b]]
        else:
            for j in range(jmax):
                b = y.coeffs[j]
                if b:
                    out[i + j] = gf.add(out[i + j], gf.mul(a, b))
    return FieldElement(x.K, x.vmin + y.vmin, tuple(out), prec)


def fe_inv(x: FieldElement, out_precision: int | None = None) -> FieldElement:
    """Series inverse, accurate for exponents < ``out_precision``.

    Monomials invert exactly.  Otherwise long division of the unit part;
    precision is also capped by what ``x`` itself is known to.
    """
    if x.is_zero:
        raise ZeroDivisionError("inverse of 0 in K")
    K = x.K
    gf = K.gf
    v = x.vmin
    lead_inv = gf.inv(x.coeffs[0])
    if len(x.coeffs) == 1 and x.is_exact:
        return FieldElement(K, -v, (lead_inv,))
    if out_precision is None:
        out_precision = K.vmax
    # unit part u = x / P^v, known for relative exponents < x.precision - v
    unit_prec = x.precision - v
    nterms = out_precision + v  # exponents -v .. out_precision-1
    if unit_prec != EXACT:
        nterms = min(nterms, int(unit_prec))
    if nterms <= 0:
        raise PrecisionError(f"inverse precision {out_precision} unreachable for valuation {v}")
    u = x.coeffs
    inv = [0] * nterms
    # b_k = -lead^{-1} * sum_{i=1..k} u_i b_{k-i}, b_0 = lead^{-1}
    inv[0] = lead_inv
    neg_lead_inv = gf.neg(lead_inv)
    for k in range(1, nterms):
        acc = 0
        for i in range(1, min(k, len(u) - 1) + 1):
            if u[i] and inv[k - i]:
                acc = gf.add(acc, gf.mul(u[i], inv[k - i]))
        inv[k] = gf.mul(neg_lead_inv, acc)
    return FieldElement(K, -v, tuple(inv), -v + nterms)


def fe_norm(x: FieldElement) -> Fraction:
    """|x| = q^(-v(x)) as an exact rational; |0| = 0."""
    if x.is_zero:
        return Fraction(0)
    return Fraction(x.K.q) ** (-x.vmin)


def format_element(x: FieldElement) -> str:
    """Sparse ``[(exp,[zeta coeffs]), ...]`` text form used in reports."""
    gf = x.K.gf
    body = ",".join(f"({e},{gf.digits(a)})" for e, a in x.terms()).replace(" ", "")
    tail = "" if x.is_exact else f"+O(P^{x.precision})"
    return f"[{body}]{tail}"


def element_to_json(x: FieldElement):
    out = {"terms": [[e, x.K.gf.digits(a)] for e, a in x.terms()]}
    if not x.is_exact:
        out["precision"] = int(x.precision)
    return out


def element_from_json(K: LocalField, d) -> FieldElement:
    if isinstance(d, dict):
        terms, prec = d.get("terms", []), d.get("precision", EXACT)
    else:
        terms, prec = d, EXACT
    return K.element([(int(e), list(c) if isinstance(c, list) else int(c)) for e, c in terms], prec)
