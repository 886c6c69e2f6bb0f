"""Noncommutative tori T_theta, represented by theta and its continued fraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .contfrac import (
    MAX_REAL_QUOTIENTS,
    ContinuedFraction,
    UnimodularMatrix,
    an_matrices,
    expand_real,
    expand_surd,
    mobius_apply,
    periodic_value,
    prefix_matrix,
    tail_equivalent,
)
from .errors import DegenerateError, InvalidInput
from .surd import QuadraticIrrational

# f_k(omega) in the sequence f_k(omega) * ln tr A_k
FFamily = Callable[[int, float], float]


def default_family(k: int, omega: float) -> float:
    return omega


def geometric_family(rho: float) -> FFamily:
    """``f_k(omega) = omega * rho**k``; monotone in omega for ``rho > 0``."""
    if not rho > 0:
        raise InvalidInput("geometric family needs rho > 0")

    def f(k: int, omega: float) -> float:
        return omega * rho**k

    return f


def parse_family(spec: str) -> FFamily:
    """``"default"`` or ``"geometric:RHO"``."""
    if spec == "default":
        return default_family
    name, _, arg = spec.partition(":")
    if name == "geometric" and arg:
        try:
            rho = float(arg)
        except ValueError:
            raise InvalidInput(f"bad rho in {spec!r}") from None
        return geometric_family(rho)
    raise InvalidInput(f"unknown f family {spec!r}")


@dataclass(frozen=True)
class NcTorus:
    """``theta`` is exact (a real quadratic irrational) or a float; ``cf`` is its expansion."""

    theta: QuadraticIrrational | float
    cf: ContinuedFraction

    @classmethod
    def from_surd(cls, theta: QuadraticIrrational) -> NcTorus:
        return cls(theta, expand_surd(theta))

    @classmethod
    def from_real(cls, theta: float, depth: int = MAX_REAL_QUOTIENTS) -> NcTorus:
        cf = expand_real(theta, depth)
        if len(cf) < min(depth, MAX_REAL_QUOTIENTS):
            raise DegenerateError(f"theta = {theta!r} looks rational: expansion stopped after {len(cf)} quotients")
        return cls(float(theta), cf)

    @classmethod
    def from_cf(cls, cf: ContinuedFraction) -> NcTorus:
        if cf.is_periodic:
            return cls(periodic_value(cf), cf)
        return cls(cf.value(), cf)

    @property
    def exact(self) -> bool:
        return isinstance(self.theta, QuadraticIrrational)

    @property
    def value(self) -> float:
        return float(self.theta)


@dataclass(frozen=True)
class StateScale:
    omega: float

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise InvalidInput(f"state scale must be positive, got {self.omega}")


@dataclass(frozen=True)
class MoritaWitness:
    """``theta2 = (a theta1 + b) / (c theta1 + d)`` with tails ``a_{m+shift} = b_m``."""

    shift: int
    matrix: UnimodularMatrix
    exact: bool

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "heuristic"


def _bridge(cf1: ContinuedFraction, cf2: ContinuedFraction, shift: int, start: int) -> UnimodularMatrix:
    # theta1 = A x_{start+shift}, theta2 = B y_start and the complete quotients agree
    a = prefix_matrix(cf1.quotients(start + shift))
    b = prefix_matrix(cf2.quotients(start))
    return b @ a.inverse()


def morita_equivalent(t1: NcTorus, t2: NcTorus, depth: int = 40, max_shift: int = 10) -> MoritaWitness | None:
    """Shift and GL(2,Z) matrix relating the two parameters, or None."""
    match = tail_equivalent(t1.cf, t2.cf, depth=depth, max_shift=max_shift)
    if match is None:
        return None
    k = match.shift
    if match.exact:
        start = max(1 + len(t2.cf.preperiod), 1 + len(t1.cf.preperiod) - k)
        m = _bridge(t1.cf, t2.cf, k, start)
        if t1.exact and t2.exact and mobius_apply(m, t1.theta) != t2.theta:
            raise AssertionError("bridge matrix does not map theta1 to theta2")
        return MoritaWitness(k, m, True)
    n1, n2 = min(t1.cf.available, depth), min(t2.cf.available, depth)
    # bridge at the latest common index so the noisy prefixes are absorbed
    start = int(max(0, -k, min(n2, n1 - k) - 1))
    return MoritaWitness(k, _bridge(t1.cf, t2.cf, k, start), False)


def dimension_group_step(t: NcTorus, n: int) -> UnimodularMatrix:
    """``phi_n = [[a_0,1],[1,0]] ... [[a_n,1],[1,0]]``."""
    return an_matrices(t.cf, n)[-1]


def v_map(t: NcTorus, s: StateScale, n: int, family: FFamily = default_family) -> list[float]:
    """``f_k(omega) * ln tr A_k`` for ``k = 0 .. n``."""
    return [family(k, s.omega) * math.log(m.trace) for k, m in enumerate(an_matrices(t.cf, n))]


def scale_action(s: StateScale, m: UnimodularMatrix, t: NcTorus) -> StateScale:
    """``omega * |c theta + d|``."""
    factor = abs(m.c * t.value + m.d)
    if factor == 0:
        raise DegenerateError("c*theta + d vanishes")
    return StateScale(s.omega * factor)
