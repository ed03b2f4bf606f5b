"""Exact scalars: rationals and cyclotomic numbers.

A :class:`Scalar` of order n is an element of Q(zeta_n), stored as a
polynomial in zeta_n reduced modulo the n-th cyclotomic polynomial, with
integer coordinates over a single positive denominator in lowest terms.
The representation is canonical: two Scalars of the same order are equal
iff their coordinate data are identical.  Arithmetic between different
orders lifts both operands into Q(zeta_lcm) first, using the embedding
zeta_m = zeta_n^(n/m).

Rational numbers are fractions.Fraction throughout; there is nothing a
hand-rolled rational would add.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, NamedTuple

from .kernel import vadd, vaddmul, viszero, vmul, vneg, vnormalize, vscale, vsub

Rational = Fraction


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("order must be a positive integer")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divexact(num: list[int], div: Iterable[int]) -> list[int]:
    """Exact division of integer polynomials in ascending coefficients."""
    num = list(num)
    div = list(div)
    dd = len(div) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(out) - 1, -1, -1):
        lead = num[k + dd]
        q, r = divmod(lead, div[dd])
        if r:
            raise ArithmeticError("polynomial division is not exact")
        out[k] = q
        if q:
            for i, c in enumerate(div):
                num[k + i] -= q * c
    if any(num):
        raise ArithmeticError("polynomial division is not exact")
    return out


class CyclotomicPolynomial(NamedTuple):
    """Minimal polynomial of a primitive n-th root of unity over Q.

    Coefficients are ascending and the polynomial is monic.
    """

    order: int
    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self) -> str:
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                base = "x" if k == 1 else f"x^{k}"
                body = base if mag == 1 else f"{mag}*{base}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> CyclotomicPolynomial:
    """Compute Phi_n by dividing x^n - 1 by all lower Phi_d, d | n."""
    if n < 1:
        raise ValueError("order must be a positive integer")
    poly = [0] * (n + 1)
    poly[0] = -1
    poly[n] = 1
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_polynomial(d).coefficients)
    return CyclotomicPolynomial(n, tuple(poly))


@lru_cache(maxsize=None)
def _reduction_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """Rows x^(d+i) mod Phi_n for i = 0..d-2, each written in degree < d."""
    phi = cyclotomic_polynomial(n)
    d = phi.degree
    base = [-c for c in phi.coefficients[:d]]
    rows = []
    cur = list(base)
    for _ in range(d - 1):
        rows.append(tuple(cur))
        top = cur[d - 1]
        cur = [0] + cur[: d - 1]
        if top:
            for t in range(d):
                cur[t] += top * base[t]
    return tuple(rows)


@lru_cache(maxsize=None)
def _zeta_powers(n: int) -> tuple[tuple[int, ...], ...]:
    """zeta_n^e for e = 0..n-1 as integer coordinate vectors."""
    phi = cyclotomic_polynomial(n)
    d = phi.degree
    base = [-c for c in phi.coefficients[:d]]
    out = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(n):
        out.append(tuple(cur))
        top = cur[d - 1]
        cur = [0] + cur[: d - 1]
        if top:
            for t in range(d):
                cur[t] += top * base[t]
    return tuple(out)


_SCALAR_TERM_RE = re.compile(
    r"^(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?(?P<zeta>z(?:\^(?P<pow>\d+))?)?$"
)


class Scalar:
    """Canonical element of Q(zeta_order)."""

    __slots__ = ("order", "nums", "den")

    def __init__(self, order: int, coefficients: Iterable = ()):
        d = cyclotomic_polynomial(order).degree
        fracs = [Fraction(c) for c in coefficients]
        if len(fracs) > d:
            raise ValueError(
                f"order {order} admits at most {d} basis coefficients"
            )
        fracs += [Fraction(0)] * (d - len(fracs))
        den = 1
        for f in fracs:
            den = lcm(den, f.denominator)
        nums = [int(f * den) for f in fracs]
        self.order = order
        self.nums, self.den = vnormalize(nums, den)

    @classmethod
    def _make(cls, order: int, nums: tuple[int, ...], den: int) -> "Scalar":
        s = object.__new__(cls)
        s.order = order
        s.nums = nums
        s.den = den
        return s

    @classmethod
    def zero(cls, order: int = 1) -> "Scalar":
        d = cyclotomic_polynomial(order).degree
        return cls._make(order, (0,) * d, 1)

    @classmethod
    def one(cls, order: int = 1) -> "Scalar":
        d = cyclotomic_polynomial(order).degree
        return cls._make(order, (1,) + (0,) * (d - 1), 1)

    @classmethod
    def from_rational(cls, value, order: int = 1) -> "Scalar":
        f = Fraction(value)
        d = cyclotomic_polynomial(order).degree
        return cls._make(
            order, (f.numerator,) + (0,) * (d - 1), f.denominator
        )

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "Scalar":
        return cls._make(order, _zeta_powers(order)[power % order], 1)

    # -- predicates and coercions ------------------------------------

    def is_zero(self) -> bool:
        return viszero(self.nums)

    def __bool__(self) -> bool:
        return not viszero(self.nums)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    # -- order lifting -------------------------------------------------

    def lift(self, order: int) -> "Scalar":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(
                f"cannot lift order {self.order} into order {order}"
            )
        ratio = order // self.order
        pows = _zeta_powers(order)
        d = cyclotomic_polynomial(order).degree
        acc = [0] * d
        for k, c in enumerate(self.nums):
            if c:
                vec = pows[(k * ratio) % order]
                for t in range(d):
                    if vec[t]:
                        acc[t] += c * vec[t]
        nums, den = vnormalize(acc, self.den)
        return Scalar._make(order, nums, den)

    def _pair(self, other: "Scalar"):
        n, m = self.order, other.order
        if n == m:
            return self, other, n
        k = lcm(n, m)
        return self.lift(k), other.lift(k), k

    @staticmethod
    def _coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar.from_rational(value)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, n = self._pair(other)
        nums, den = vadd(a.nums, a.den, b.nums, b.den)
        return Scalar._make(n, nums, den)

    __radd__ = __add__

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, n = self._pair(other)
        nums, den = vsub(a.nums, a.den, b.nums, b.den)
        return Scalar._make(n, nums, den)

    def __rsub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__sub__(self)

    def __neg__(self):
        nums, den = vneg(self.nums, self.den)
        return Scalar._make(self.order, nums, den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            nums, den = vscale(self.nums, self.den, f.numerator, f.denominator)
            return Scalar._make(self.order, nums, den)
        if not isinstance(other, Scalar):
            return NotImplemented
        a, b, n = self._pair(other)
        nums, den = vmul(a.nums, a.den, b.nums, b.den, _reduction_rows(n))
        return Scalar._make(n, nums, den)

    __rmul__ = __mul__

    def addmul(self, coeff: "Scalar", other: "Scalar") -> "Scalar":
        """self + coeff*other in a single normalization pass."""
        n = self.order
        if coeff.order == n and other.order == n:
            a, c, b = self, coeff, other
        else:
            n = lcm(self.order, lcm(coeff.order, other.order))
            a, c, b = self.lift(n), coeff.lift(n), other.lift(n)
        nums, den = vaddmul(
            a.nums, a.den, c.nums, c.den, b.nums, b.den, _reduction_rows(n)
        )
        return Scalar._make(n, nums, den)

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Scalar.one(self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("scalar is zero")
        if self.is_rational():
            return Scalar.from_rational(1 / self.as_fraction(), self.order)
        u = [Fraction(x, self.den) for x in self.nums]
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order).coefficients]
        g, s = _fpoly_ext_gcd(u, phi)
        # Phi_n is irreducible over Q, so the gcd is a nonzero constant
        if len(g) != 1:
            raise ArithmeticError("cyclotomic polynomial split unexpectedly")
        inv = [c / g[0] for c in s]
        return Scalar(self.order, inv)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, _ = self._pair(other)
        return a.nums == b.nums and a.den == b.den

    __hash__ = None  # equal values may live at different orders

    # -- text ------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coefficients):
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                base = "z" if k == 1 else f"z^{k}"
                body = base if mag == 1 else f"{mag}*{base}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Scalar({self.order}, '{self}')"

    @classmethod
    def parse(cls, text: str, order: int = 1) -> "Scalar":
        """Parse canonical scalar text like ``3/2 + z - 1/4*z^2``.

        ``z`` denotes zeta_order; exponents at or above the field degree
        are folded through the power relations.
        """
        s = text.strip()
        if not s:
            raise ValueError("empty scalar text")
        total = cls.zero(order)
        for sign, term in _split_signed_terms(s):
            m = _SCALAR_TERM_RE.match(term.strip())
            if not m or (m.group("coef") is None and m.group("zeta") is None):
                raise ValueError(f"bad scalar term {term!r} in {text!r}")
            coef = Fraction(m.group("coef") or 1) * sign
            power = 0
            if m.group("zeta"):
                power = int(m.group("pow") or 1)
            total = total.addmul(
                cls.from_rational(coef, order), cls.zeta(order, power)
            )
        return total


def _split_signed_terms(s: str) -> list[tuple[int, str]]:
    # scalar text has no parentheses, so +/- always separate terms
    out = []
    sign = 1
    cur: list[str] = []
    pending = False
    for ch in s:
        if ch in "+-":
            if any(c.strip() for c in cur):
                out.append((sign, "".join(cur)))
                sign = -1 if ch == "-" else 1
                cur = []
            else:
                sign *= -1 if ch == "-" else 1
            pending = True
        else:
            if ch.strip():
                pending = False
            cur.append(ch)
    if any(c.strip() for c in cur):
        out.append((sign, "".join(cur)))
    elif pending or not out:
        raise ValueError(f"dangling operator in scalar text {s!r}")
    return out


# -- fraction polynomial helpers for inversion ---------------------------


def _fpoly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def _fpoly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv_lead = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv_lead
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
    return q, _fpoly_trim(a)


def _fpoly_sub_scaled(a, q, b):
    """a - q*b for fraction polynomials."""
    out = list(a) + [Fraction(0)] * max(len(q) + len(b) - 1 - len(a), 0)
    for i, qc in enumerate(q):
        if qc:
            for j, bc in enumerate(b):
                out[i + j] -= qc * bc
    return _fpoly_trim(out)


def _fpoly_ext_gcd(a: list[Fraction], b: list[Fraction]):
    """Return (g, s) with s*a == g modulo b."""
    r0, r1 = _fpoly_trim(list(a)), _fpoly_trim(list(b))
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = _fpoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _fpoly_sub_scaled(s0, q, s1)
    return r0, s0


# -- spec-level operation names ------------------------------------------


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_invert(a: Scalar) -> Scalar:
    return a.inverse()


def scalar_is_zero(a: Scalar) -> bool:
    return a.is_zero()


def parse_scalar(text: str, order: int = 1) -> Scalar:
    return Scalar.parse(text, order)
