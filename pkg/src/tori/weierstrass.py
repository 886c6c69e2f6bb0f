"""Eisenstein series, the Weierstrass function and the cubic of a lattice.

Lattice sums are taken row by row: for ``w = w1 (m + n tau)`` the inner
sum over all ``m`` is summed in closed form from derivatives of
``pi cot(pi z)``, and the rows are truncated at ``|n| <= box``. Row
contributions decay like ``exp(-2 pi |n| Im tau)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ConvergenceFailure, InvalidInput
from .lattice import Lattice

CERTIFICATE_RTOL = 1e-8
MIN_BOX = 8
POLE_DISTANCE = 1e-6


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    # B_1 = -1/2 convention
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    return b[n]


@lru_cache(maxsize=None)
def zeta_even(s: int) -> float:
    """``zeta(s)`` for even ``s >= 2``."""
    if s < 2 or s % 2:
        raise InvalidInput("zeta_even needs an even argument >= 2")
    k = s // 2
    return float((-1) ** (k + 1) * _bernoulli(s) * (2 * math.pi) ** s / (2 * math.factorial(s)))


@lru_cache(maxsize=None)
def _cot_derivative_poly(j: int) -> np.ndarray:
    """Coefficients of ``Q_j`` with ``d^j/dz^j cot(z) = Q_j(cot z)``; lowest degree first."""
    q = np.array([0.0, 1.0])
    for _ in range(j):
        dq = np.polynomial.polynomial.polyder(q)
        q = -np.polynomial.polynomial.polymul([1.0, 0.0, 1.0], dq)
    return q


def _cot(w: complex) -> complex:
    if abs(w.imag) < 1.0:
        return cmath.cos(w) / cmath.sin(w)
    if w.imag < 0:
        return -_cot(-w)
    e = cmath.exp(2j * w)
    return 1j * (e + 1) / (e - 1)


def row_sum(z: complex, s: int) -> complex:
    """``sum_{m in Z} (z + m)^-s`` for ``s >= 2`` and non-integer ``z``."""
    if s < 2:
        raise InvalidInput("row sums need exponent >= 2")
    c = _cot(math.pi * z)
    q = _cot_derivative_poly(s - 1)
    val = np.polynomial.polynomial.polyval(c, q)
    return complex((-1) ** (s - 1) * math.pi**s / math.factorial(s - 1) * val)


def _normalized(lattice: Lattice) -> tuple[complex, complex]:
    return lattice.w1, lattice.w2 / lattice.w1


def _eisenstein_rows(tau: complex, s: int, box: int) -> complex:
    total = 2 * zeta_even(s)
    for n in range(1, box + 1):
        # even s: rows n and -n agree
        total += 2 * row_sum(n * tau, s)
    return total


def eisenstein(lattice: Lattice, k: int, box: int = 32) -> complex:
    """``G_k(L) = sum_{w != 0} w^(-2k)``, certified by doubling ``box``.

    ``k = 2`` gives the weight-4 sum and ``k = 3`` the weight-6 sum of the
    cubic ``y^2 = x^3 - 15 G x - 35 G'``.
    """
    if k < 2:
        raise InvalidInput("k must be >= 2")
    if box < MIN_BOX:
        raise InvalidInput(f"box must be >= {MIN_BOX}")
    w1, tau = _normalized(lattice)
    s = 2 * k
    coarse = _eisenstein_rows(tau, s, box)
    fine = _eisenstein_rows(tau, s, 2 * box)
    scale = max(abs(fine), 2 * zeta_even(s))
    if abs(fine - coarse) > CERTIFICATE_RTOL * scale:
        raise ConvergenceFailure(
            f"G_{k} changed by {abs(fine - coarse):.3g} between box {box} and {2 * box}; raise box"
        )
    return fine / w1**s


@dataclass(frozen=True)
class CubicCurve:
    """``y^2 = x^3 + a x + b``."""

    a: complex
    b: complex

    @property
    def discriminant(self) -> complex:
        return 4 * self.a**3 + 27 * self.b**2

    @property
    def degenerate(self) -> bool:
        scale = max(abs(self.a) ** 3, abs(self.b) ** 2, 1e-300)
        return abs(self.discriminant) < 1e-12 * scale

    def residual(self, x: complex, y: complex) -> complex:
        return y * y - (x**3 + self.a * x + self.b)


def cubic_of_lattice(lattice: Lattice, box: int = 32) -> CubicCurve:
    return CubicCurve(-15 * eisenstein(lattice, 2, box), -35 * eisenstein(lattice, 3, box))


def distance_to_lattice(z: complex, lattice: Lattice) -> float:
    m, n = lattice.coordinates(z)
    best = math.inf
    for dm in (0, 1):
        for dn in (0, 1):
            p = lattice.point(math.floor(m) + dm, math.floor(n) + dn)
            best = min(best, abs(z - p))
    return best


def wp(z: complex, lattice: Lattice, box: int = 32) -> tuple[complex, complex]:
    """``(wp(z), wp'(z) / 2)`` for ``z`` away from the lattice."""
    z = complex(z)
    if box < 1:
        raise InvalidInput("box must be >= 1")
    if distance_to_lattice(z, lattice) < POLE_DISTANCE:
        raise InvalidInput(f"z = {z} is at a pole (lattice point)")
    w1, tau = _normalized(lattice)
    u = z / w1
    p = row_sum(u, 2) - 2 * zeta_even(2)
    dp = row_sum(u, 3)
    for n in range(1, box + 1):
        for sgn in (1, -1):
            v = sgn * n * tau
            p += row_sum(u + v, 2) - row_sum(v, 2)
            dp += row_sum(u + v, 3)
    return p / w1**2, -dp / w1**3
