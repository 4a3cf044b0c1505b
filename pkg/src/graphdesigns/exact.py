"""Exact scalars: rationals, cyclotomic integers and the field Q(sqrt 5).

Rationals are :class:`fractions.Fraction` throughout.  Cyclotomic integers
are kept in the power basis ``1, w, ..., w^(phi(q)-1)`` reduced modulo the
q-th cyclotomic polynomial, so two equal elements always carry identical
coefficient tuples and "is this character sum zero" is a tuple comparison.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

__all__ = [
    "BigRational",
    "CyclotomicInt",
    "QuadSurd",
    "cyclotomic_polynomial",
    "cyclo_from_power_sums",
    "divisors",
    "euler_phi",
    "golden_ratio",
    "poly_divmod",
    "quad_add",
    "quad_mul",
    "reduction_matrix",
]

BigRational = Fraction


def divisors(m: int) -> list[int]:
    small, large = [], []
    for d in range(1, isqrt(m) + 1):
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
    return small + large[::-1]


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a, b) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(_trim(out))


def poly_divmod(num, den) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Divide integer polynomials (low degree first) by a monic divisor."""
    den = _trim(list(den))
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    dd = len(den) - 1
    if len(rem) - 1 < dd:
        return (0,), tuple(_trim(rem))
    quo = [0] * (len(rem) - dd)
    for k in range(len(rem) - 1, dd - 1, -1):
        c = rem[k]
        if c:
            quo[k - dd] = c
            for j, dj in enumerate(den):
                rem[k - dd + j] -= c * dj
    return tuple(_trim(quo)), tuple(_trim(rem[:dd] or [0]))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(q: int) -> tuple[int, ...]:
    """Coefficients of Phi_q, lowest degree first.

    >>> cyclotomic_polynomial(4)
    (1, 0, 1)
    """
    if q < 1:
        raise ValueError(f"cyclotomic index must be positive, got {q}")
    poly = (-1,) + (0,) * (q - 1) + (1,)
    for d in divisors(q)[:-1]:
        poly, rem = poly_divmod(poly, cyclotomic_polynomial(d))
        assert rem == (0,), (q, d)
    return poly


@lru_cache(maxsize=None)
def reduction_matrix(q: int) -> tuple[tuple[int, ...], ...]:
    """Row j holds the power-basis coefficients of w^j for j < q."""
    phi = cyclotomic_polynomial(q)
    deg = len(phi) - 1
    rows = []
    for j in range(q):
        mono = (0,) * j + (1,)
        _, rem = poly_divmod(mono, phi)
        rows.append(tuple(rem) + (0,) * (deg - len(rem)))
    return tuple(rows)


@dataclass(frozen=True)
class CyclotomicInt:
    """An element of Z[w] with w a primitive q-th root of unity."""

    q: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(cyclotomic_polynomial(self.q)) - 1:
            raise ValueError("coefficient vector length must equal phi(q)")

    @classmethod
    def from_poly(cls, q: int, poly) -> "CyclotomicInt":
        phi = cyclotomic_polynomial(q)
        deg = len(phi) - 1
        _, rem = poly_divmod(tuple(poly) or (0,), phi)
        return cls(q, tuple(rem) + (0,) * (deg - len(rem)))

    @classmethod
    def zero(cls, q: int) -> "CyclotomicInt":
        return cls(q, (0,) * (len(cyclotomic_polynomial(q)) - 1))

    @classmethod
    def root(cls, q: int, power: int = 1) -> "CyclotomicInt":
        counts = [0] * q
        counts[power % q] = 1
        return cyclo_from_power_sums(q, counts)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other):
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        if other.q != self.q:
            raise ValueError("cyclotomic moduli differ")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CyclotomicInt(self.q, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CyclotomicInt(self.q, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(self.q, tuple(other * a for a in self.coeffs))
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CyclotomicInt.from_poly(self.q, poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __complex__(self) -> complex:
        w = cmath.exp(2j * cmath.pi / self.q)
        return sum(c * w**k for k, c in enumerate(self.coeffs))

    def __str__(self):
        terms = [f"{c}*w^{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def cyclo_from_power_sums(q: int, counts) -> CyclotomicInt:
    """Canonical form of sum_j counts[j] * w^j."""
    counts = list(counts)
    if len(counts) != q:
        raise ValueError(f"expected {q} counts, got {len(counts)}")
    red = reduction_matrix(q)
    out = [0] * len(red[0])
    for c, row in zip(counts, red):
        if c:
            for k, r in enumerate(row):
                out[k] += c * r
    return CyclotomicInt(q, tuple(out))


@dataclass(frozen=True)
class QuadSurd:
    """a + b*sqrt(5) with rational a, b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def lift(x) -> "QuadSurd":
        return x if isinstance(x, QuadSurd) else QuadSurd(Fraction(x), Fraction(0))

    def __add__(self, other):
        other = QuadSurd.lift(other)
        return QuadSurd(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-QuadSurd.lift(other))

    def __rsub__(self, other):
        return QuadSurd.lift(other) - self

    def __mul__(self, other):
        other = QuadSurd.lift(other)
        return QuadSurd(self.a * other.a + 5 * self.b * other.b,
                        self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def __truediv__(self, other):
        other = QuadSurd.lift(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 5)")
        p = self * other.conjugate()
        return QuadSurd(p.a / n, p.b / n)

    def __eq__(self, other):
        try:
            other = QuadSurd.lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 5 ** 0.5

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt5"


SQRT5 = QuadSurd(0, 1)


def quad_add(x: QuadSurd, y: QuadSurd) -> QuadSurd:
    return x + y


def quad_mul(x: QuadSurd, y: QuadSurd) -> QuadSurd:
    return x * y


def golden_ratio() -> tuple[QuadSurd, QuadSurd]:
    """The two roots of x^2 - x - 1, larger first."""
    half = Fraction(1, 2)
    return QuadSurd(half, half), QuadSurd(half, -half)
