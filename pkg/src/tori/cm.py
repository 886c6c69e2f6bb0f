"""Endomorphism rings of lattices Z + tau Z with tau given exactly."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import FieldMismatch, InvalidInput
from .surd import QuadraticIrrational, square_part

Exact = int | Fraction | QuadraticIrrational


@dataclass(frozen=True)
class ExactModulus:
    """An imaginary quadratic modulus, or the generic marker (``tau is None``)."""

    tau: QuadraticIrrational | None = None
    approx: complex | None = None

    def __post_init__(self):
        if self.tau is None:
            return
        if self.tau.d > 0:
            raise InvalidInput("real quadratic number is not a torus modulus")
        if self.tau.q <= 0:
            raise InvalidInput("modulus must lie in the upper half plane")

    @classmethod
    def generic(cls, approx: complex | None = None) -> ExactModulus:
        return cls(None, approx)

    @property
    def is_generic(self) -> bool:
        return self.tau is None

    @property
    def value(self) -> complex:
        if self.tau is None:
            if self.approx is None:
                raise InvalidInput("generic modulus without a numeric value")
            return complex(self.approx)
        return complex(self.tau.value)


def fundamental_discriminant(D: int) -> int:
    _, core = square_part(D)
    return core if core % 4 == 1 else 4 * core


@dataclass(frozen=True)
class QuadraticOrder:
    """The order ``Z[A tau]`` of discriminant ``D = B^2 - 4AC``."""

    discriminant: int
    conductor: int
    generator: QuadraticIrrational
    poly: tuple[int, int, int]

    @property
    def fundamental_discriminant(self) -> int:
        return self.discriminant // (self.conductor * self.conductor)

    @property
    def d(self) -> int:
        return self.generator.d

    @classmethod
    def from_discriminant(cls, D: int) -> QuadraticOrder:
        """Order of discriminant ``D`` with generator ``(D + sqrt(D)) / 2``."""
        if D >= 0 or D % 4 not in (0, 1):
            raise InvalidInput(f"{D} is not a negative discriminant")
        gen = QuadraticIrrational(D, 1, 2, D)
        # gen^2 - D gen + (D^2 - D)/4 = 0
        f = math.isqrt(D // fundamental_discriminant(D))
        return cls(D, f, gen, (1, -D, (D * D - D) // 4))

    def element(self, x: int, y: int) -> Exact:
        """``x + y * (D + sqrt(D)) / 2``."""
        if y == 0:
            return x
        return x + y * QuadraticIrrational(self.discriminant, 1, 2, self.discriminant)

    def units(self) -> list[Exact]:
        D = self.discriminant
        if D == -4:
            i = QuadraticIrrational.sqrt(-1)
            return [1, -1, i, -i]
        if D == -3:
            z = QuadraticIrrational(1, 1, 2, -3)
            return [1, -1, z, -z, z * z, -(z * z)]
        return [1, -1]


def endomorphism_ring(tau: ExactModulus) -> QuadraticOrder | None:
    """``End(C / (Z + tau Z))``; None stands for the trivial ring Z."""
    if tau.is_generic:
        return None
    A, B, C = tau.tau.minimal_polynomial()
    D = B * B - 4 * A * C
    f = math.isqrt(D // fundamental_discriminant(D))
    gen = A * tau.tau
    order = QuadraticOrder(D, f, gen, (A, B, C))
    if not is_endomorphism(gen, tau):
        raise AssertionError(f"generator {gen} does not preserve the lattice")
    return order


def _coords(x: Exact, d: int) -> tuple[Fraction, Fraction]:
    if isinstance(x, QuadraticIrrational):
        if x.d != d:
            raise FieldMismatch(f"element of Q(sqrt({x.d})) against modulus in Q(sqrt({d}))")
        return x.coords
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0)
    raise TypeError(f"expected an exact number, got {type(x).__name__}")


def _in_lattice(z: tuple[Fraction, Fraction], t: tuple[Fraction, Fraction]) -> bool:
    # z = x + y tau  =>  y = z1 / t1, x = z0 - y t0
    y = z[1] / t[1]
    x = z[0] - y * t[0]
    return x.denominator == 1 and y.denominator == 1


def is_endomorphism(alpha: Exact, tau: ExactModulus) -> bool:
    """Whether ``alpha * L`` lies in ``L = Z + tau Z`` (exact)."""
    if tau.is_generic:
        a = _coords(alpha, 0) if not isinstance(alpha, QuadraticIrrational) else None
        if a is None:
            raise FieldMismatch("a generic modulus admits only rational multipliers")
        return a[0].denominator == 1
    d = tau.tau.d
    a0, a1 = _coords(alpha, d)
    t0, t1 = tau.tau.coords
    at = (a0 * t0 + a1 * t1 * d, a0 * t1 + a1 * t0)
    return _in_lattice((a0, a1), (t0, t1)) and _in_lattice(at, (t0, t1))


def is_endomorphism_approx(alpha: complex, tau: complex, tol: float = 1e-8) -> bool:
    """Floating relaxation: ``alpha`` and ``alpha * tau`` are near points of ``Z + tau Z``."""
    basis = np.array([[1.0, tau.real], [0.0, tau.imag]])
    for z in (alpha, alpha * tau):
        xy = np.linalg.solve(basis, [z.real, z.imag])
        if np.max(np.abs(xy - np.round(xy))) > tol:
            return False
    return True


def _canonical_key(z: complex) -> tuple[float, float]:
    return (round(abs(z.real), 12), -round(z.real, 12))


def multiplier_candidates(order: QuadraticOrder, norm_bound: int) -> list[QuadraticIrrational]:
    """Non-rational elements of ``order`` with ``|alpha|^2 <= norm_bound``, up to units and conjugation.

    Units are left out. Elements associated to rational integers (such as
    ``2i``) are left out too. The representative has positive imaginary part and
    the smallest ``|Re|``, preferring ``Re >= 0``.
    """
    if norm_bound < 1:
        return []
    D = order.discriminant
    units = order.units()
    # N(x + y w) >= y^2 |D| / 4 bounds y; then x lies in a bounded window
    ymax = math.isqrt(4 * norm_bound // -D) + 1
    seen: set[QuadraticIrrational] = set()
    out = []
    root = math.isqrt(norm_bound) + 1
    for y in range(1, ymax + 1):
        # N = (x + yD/2)^2 + y^2 |D| / 4
        for x in range(math.floor(-y * D / 2) - root, math.ceil(-y * D / 2) + root + 1):
            alpha = order.element(x, y)
            if alpha in seen:
                continue
            n = alpha.norm()
            if n > norm_bound or n <= 1:
                continue
            orbit = [u * beta for u in units for beta in (alpha, alpha.conjugate())]
            seen.update(b for b in orbit if isinstance(b, QuadraticIrrational))
            if any(not isinstance(b, QuadraticIrrational) for b in orbit):
                continue  # associate of a rational integer
            upper = [b for b in orbit if b.q > 0]
            out.append(min(upper, key=lambda b: _canonical_key(complex(b.value))))
    return sorted(out, key=lambda b: (b.norm(), _canonical_key(complex(b.value))))
