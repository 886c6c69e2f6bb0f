"""Lattices in the plane, complex moduli and SL(2,Z) reduction."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .contfrac import UnimodularMatrix
from .errors import DegenerateError, InvalidInput

DEFAULT_TOL = 1e-9
# slack for the fundamental-domain boundary tests
_EDGE = 1e-12
_MAX_STEPS = 10_000

T = UnimodularMatrix(1, 1, 0, 1)
S = UnimodularMatrix(0, -1, 1, 0)


@dataclass(frozen=True)
class Lattice:
    """``w1 Z + w2 Z``."""

    w1: complex
    w2: complex

    def __post_init__(self):
        w1, w2 = complex(self.w1), complex(self.w2)
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)
        if w1 == 0 or w2 == 0:
            raise DegenerateError("basis vectors must be nonzero")
        if abs((w2 / w1).imag) < 1e-14:
            raise DegenerateError("basis vectors are collinear")

    @classmethod
    def from_modulus(cls, tau) -> Lattice:
        return cls(1, complex(getattr(tau, "tau", tau)))

    def point(self, m: int, n: int) -> complex:
        return m * self.w1 + n * self.w2

    def scaled(self, alpha: complex) -> Lattice:
        return Lattice(alpha * self.w1, alpha * self.w2)

    @property
    def covolume(self) -> float:
        return abs((self.w1.conjugate() * self.w2).imag)

    def coordinates(self, z: complex) -> tuple[float, float]:
        """Real ``(m, n)`` with ``z = m w1 + n w2``."""
        det = (self.w1.conjugate() * self.w2).imag
        m = (z.conjugate() * self.w2).imag / det
        n = (self.w1.conjugate() * z).imag / det
        return m, n

    def contains(self, z: complex, tol: float = 1e-9) -> bool:
        m, n = self.coordinates(z)
        return abs(m - round(m)) < tol and abs(n - round(n)) < tol


@dataclass(frozen=True)
class Modulus:
    """Complex modulus with positive imaginary part."""

    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        tau = complex(tau.real + 0.0, tau.imag)  # no -0.0
        if not (tau.imag > 0 and math.isfinite(tau.real) and math.isfinite(tau.imag)):
            raise InvalidInput(f"modulus {tau} is not in the upper half plane")
        object.__setattr__(self, "tau", tau)

    def __complex__(self) -> complex:
        return self.tau


def modulus(lattice: Lattice) -> Modulus:
    """``w2 / w1``, swapping the basis when that lands in the lower half plane."""
    tau = lattice.w2 / lattice.w1
    if tau.imag < 0:
        tau = lattice.w1 / lattice.w2
    return Modulus(tau)


def in_fundamental_domain(tau: complex, edge: float = _EDGE) -> bool:
    x, r = tau.real, abs(tau)
    if not (-0.5 - edge <= x < 0.5 - edge):
        return False
    if r < 1 - edge:
        return False
    if abs(r - 1) <= edge and x > edge:
        return False
    return True


@dataclass(frozen=True)
class Reduction:
    modulus: Modulus
    matrix: UnimodularMatrix


def reduce(tau: Modulus | complex) -> Reduction:
    """Move ``tau`` into the fundamental domain.

    The domain is ``-1/2 <= Re < 1/2, |tau| >= 1`` and, on the unit circle,
    ``Re <= 0``. The returned matrix ``M`` satisfies ``reduced = M . tau``.
    """
    z = complex(getattr(tau, "tau", tau))
    Modulus(z)
    m = UnimodularMatrix.identity()
    for _ in range(_MAX_STEPS):
        k = math.floor(z.real + 0.5 + _EDGE)
        if k:
            z = z - k
            m = UnimodularMatrix(1, -k, 0, 1) @ m
        r = abs(z)
        if r < 1 - _EDGE or (abs(r - 1) <= _EDGE and z.real > _EDGE):
            z = -1 / z
            m = S @ m
            continue
        break
    else:
        raise DegenerateError(f"reduction of {tau} did not terminate")
    return Reduction(Modulus(z), m)


@dataclass(frozen=True)
class IsomorphismWitness:
    """``tau2 = M . tau1`` (branch ``"sl2"``) or ``tau2 = M . conj(tau1)`` with det -1 (``"mirror"``)."""

    matrix: UnimodularMatrix
    branch: str


def _close(a: complex, b: complex, tol: float) -> bool:
    if abs(a - b) <= tol * max(1.0, abs(a)):
        return True
    # Re = -1/2 and Re = +1/2 are the same boundary line up to T
    return abs(abs(a.real - b.real) - 1) <= tol and abs(a.imag - b.imag) <= tol * max(1.0, abs(a))


def isomorphic(tau1: Modulus | complex, tau2: Modulus | complex, tol: float = DEFAULT_TOL) -> IsomorphismWitness | None:
    """Witness that the two moduli lie in one orbit of the modular group, or None.

    The SL(2,Z) orbit is tried first; then the orbit of ``-conj(tau1)``,
    which accounts for the determinant -1 matrices.
    """
    t1 = complex(getattr(tau1, "tau", tau1))
    t2 = complex(getattr(tau2, "tau", tau2))
    r2 = reduce(t2)
    back = r2.matrix.inverse()
    r1 = reduce(t1)
    if _close(r1.modulus.tau, r2.modulus.tau, tol):
        m = back @ _align(r1.modulus.tau, r2.modulus.tau) @ r1.matrix
        return IsomorphismWitness(m, "sl2")
    mirror = reduce(-t1.conjugate())
    if _close(mirror.modulus.tau, r2.modulus.tau, tol):
        reflect = UnimodularMatrix(-1, 0, 0, 1)
        m = back @ _align(mirror.modulus.tau, r2.modulus.tau) @ mirror.matrix @ reflect
        return IsomorphismWitness(m, "mirror")
    return None


def _align(a: complex, b: complex) -> UnimodularMatrix:
    """Translation taking reduced ``a`` onto reduced ``b`` across the Re = +-1/2 seam."""
    k = round(b.real - a.real)
    return UnimodularMatrix(1, k, 0, 1)


def apply_automorphism(lattice: Lattice, m: UnimodularMatrix) -> Lattice:
    """New basis ``(a w1 + b w2, c w1 + d w2)``; same point set."""
    if m.det not in (1, -1):
        raise InvalidInput("matrix is not unimodular")
    return Lattice(m.a * lattice.w1 + m.b * lattice.w2, m.c * lattice.w1 + m.d * lattice.w2)
