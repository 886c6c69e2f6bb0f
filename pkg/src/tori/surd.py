"""Exact quadratic irrationals (p + q*sqrt(d)) / r over the integers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegenerateError, FieldMismatch, InvalidInput

Rational = int | Fraction

_SMALL_PRIMES_LIMIT = 1000


@lru_cache(maxsize=4096)
def square_part(n: int) -> tuple[int, int]:
    """Split ``n`` as ``s**2 * core`` with ``core`` squarefree (sign kept in core)."""
    if n == 0:
        raise InvalidInput("square_part of zero")
    sign = -1 if n < 0 else 1
    m = abs(n)
    s = 1
    core = 1
    p = 2
    while p <= _SMALL_PRIMES_LIMIT and p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            core *= p
        p += 1 if p == 2 else 2
    if m > 1:
        r = math.isqrt(m)
        if r * r == m:
            s *= r
        elif m < _SMALL_PRIMES_LIMIT**2:
            # no factor <= limit, so m is prime
            core *= m
        else:
            from sympy import factorint

            for prime, e in factorint(m).items():
                s *= prime ** (e // 2)
                if e % 2:
                    core *= prime
    return s, sign * core


def is_squarefree(n: int) -> bool:
    return n != 0 and square_part(n)[0] == 1


def _as_fraction(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class QuadraticIrrational:
    """The number ``(p + q*sqrt(d)) / r``.

    Construction normalizes: square factors of ``d`` move into ``q``,
    ``r > 0`` and ``gcd(p, q, r) == 1``. Negative ``d`` gives an imaginary
    quadratic number. Rational inputs (``q == 0`` or ``d`` a square) raise
    :class:`DegenerateError`.
    """

    p: int
    q: int
    r: int
    d: int

    def __post_init__(self):
        p, q, r, d = (int(v) for v in (self.p, self.q, self.r, self.d))
        if r == 0:
            raise DegenerateError("zero denominator")
        if d == 0:
            raise DegenerateError("d must be nonzero")
        s, core = square_part(d)
        q *= s
        if core == 1 or q == 0:
            raise DegenerateError(f"({self.p} + {self.q}*sqrt({self.d}))/{self.r} is rational")
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)
        object.__setattr__(self, "r", r // g)
        object.__setattr__(self, "d", core)

    @classmethod
    def sqrt(cls, n: int) -> QuadraticIrrational:
        return cls(0, 1, 1, n)

    @classmethod
    def from_coords(cls, a: Rational, b: Rational, d: int) -> QuadraticIrrational:
        """Build ``a + b*sqrt(d)`` from rational coordinates."""
        a, b = _as_fraction(a), _as_fraction(b)
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls(int(a * den), int(b * den), den, d)

    @property
    def coords(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.p, self.r), Fraction(self.q, self.r)

    @property
    def is_real(self) -> bool:
        return self.d > 0

    @property
    def value(self) -> float | complex:
        if self.d > 0:
            return (self.p + self.q * math.sqrt(self.d)) / self.r
        return complex(self.p / self.r, self.q * math.sqrt(-self.d) / self.r)

    def __float__(self) -> float:
        if self.d < 0:
            raise TypeError("imaginary quadratic number has no real value")
        return float(self.value)

    def __complex__(self) -> complex:
        return complex(self.value)

    def __str__(self) -> str:
        rad = f"sqrt({self.d})"
        num = f"{self.p} + {self.q}*{rad}" if self.p else f"{self.q}*{rad}"
        return num if self.r == 1 else f"({num})/{self.r}"

    def conjugate(self) -> QuadraticIrrational:
        return QuadraticIrrational(self.p, -self.q, self.r, self.d)

    def norm(self) -> Fraction:
        a, b = self.coords
        return a * a - self.d * b * b

    def trace(self) -> Fraction:
        return 2 * self.coords[0]

    def minimal_polynomial(self) -> tuple[int, int, int]:
        """Primitive integer ``(A, B, C)`` with ``A > 0`` and ``A x^2 + B x + C = 0``."""
        p, q, r, d = self.p, self.q, self.r, self.d
        A, B, C = r * r, -2 * p * r, p * p - q * q * d
        g = math.gcd(math.gcd(A, B), C)
        return A // g, B // g, C // g

    def floor(self) -> int:
        """Exact floor; real numbers only."""
        if self.d < 0:
            raise InvalidInput("floor of an imaginary quadratic number")
        root = math.isqrt(self.q * self.q * self.d)
        # q*sqrt(d) is irrational, so floor(p + q sqrt d) = p + root or p - root - 1
        n = self.p + root if self.q > 0 else self.p - root - 1
        return n // self.r

    def _check_field(self, other: QuadraticIrrational) -> None:
        if other.d != self.d:
            raise FieldMismatch(f"sqrt({self.d}) and sqrt({other.d}) generate different fields")

    def _coerce(self, other) -> tuple[Fraction, Fraction] | None:
        if isinstance(other, QuadraticIrrational):
            self._check_field(other)
            return other.coords
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def _make(self, a: Fraction, b: Fraction):
        if b == 0:
            return a
        return QuadraticIrrational.from_coords(a, b, self.d)

    def __neg__(self) -> QuadraticIrrational:
        return QuadraticIrrational(-self.p, -self.q, self.r, self.d)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coords
        return self._make(a + o[0], b + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coords
        return self._make(a - o[0], b - o[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coords
        c, e = o
        return self._make(a * c + b * e * self.d, a * e + b * c)

    __rmul__ = __mul__

    def inverse(self) -> QuadraticIrrational:
        a, b = self.coords
        n = self.norm()
        return QuadraticIrrational.from_coords(a / n, -b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            a, b = self.coords
            return self._make(a / other, b / other)
        if isinstance(other, QuadraticIrrational):
            self._check_field(other)
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def is_close(self, z: complex, tol: float = 1e-12) -> bool:
        return abs(complex(self.value) - z) <= tol * max(1.0, abs(z))


def principal_root(A: int, B: int, C: int) -> QuadraticIrrational:
    """Root ``(-B + sqrt(B^2 - 4AC)) / 2A``; upper half plane when the discriminant is negative."""
    if A == 0:
        raise DegenerateError("leading coefficient is zero")
    return QuadraticIrrational(-B, 1 if A > 0 else -1, 2 * A, B * B - 4 * A * C)
