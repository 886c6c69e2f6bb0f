"""Regular continued fractions, convergents and the matrix products A_n.

Indexing follows two conventions that live side by side:

* ``ContinuedFraction.quotient(i)`` is ``a_i`` with ``a_0`` the integer part.
* Convergents and length recurrences use ``mu_nu = a_{nu-1}`` so that
  ``p_{-1}/q_{-1} = 0/1``, ``p_0/q_0 = 1/0`` and ``p_1/q_1 = a_0/1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateError, InvalidInput
from .surd import QuadraticIrrational

DEFAULT_EPS = 1e-10
# floor/reciprocal on a double loses about a digit per quotient
MAX_REAL_QUOTIENTS = 15
ROUNDING_BAND = 0.25


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer matrix ``[[a, b], [c, d]]`` with determinant +1 or -1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                object.__setattr__(self, name, _to_int(v))
        if self.det not in (1, -1):
            raise InvalidInput(f"matrix {self.rows} has determinant {self.det}, expected +-1")

    @classmethod
    def identity(cls) -> UnimodularMatrix:
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> UnimodularMatrix:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other: UnimodularMatrix) -> UnimodularMatrix:
        if not isinstance(other, UnimodularMatrix):
            return NotImplemented
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> UnimodularMatrix:
        s = self.det
        return UnimodularMatrix(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def act(self, z):
        """Fractional-linear action ``(a z + b) / (c z + d)`` on a float or complex."""
        den = self.c * z + self.d
        if den == 0:
            raise DegenerateError("c*z + d vanishes")
        return (self.a * z + self.b) / den

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def _to_int(v) -> int:
    if isinstance(v, float) and v.is_integer():
        return int(v)
    if hasattr(v, "__index__"):
        return int(v)
    raise InvalidInput(f"matrix entries must be integers, got {v!r}")


def quotient_matrix(a: int) -> UnimodularMatrix:
    return UnimodularMatrix(a, 1, 1, 0)


@dataclass(frozen=True)
class ContinuedFraction:
    """``[a0; preperiod..., (period)...]``.

    An empty ``period`` means the expansion is finite: ``preperiod`` then
    holds every quotient after ``a0``.
    """

    a0: int
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a0", int(self.a0))
        object.__setattr__(self, "preperiod", tuple(int(v) for v in self.preperiod))
        object.__setattr__(self, "period", tuple(int(v) for v in self.period))
        if any(v < 1 for v in self.preperiod + self.period):
            raise InvalidInput("partial quotients after a0 must be positive")

    @classmethod
    def finite(cls, quotients: Sequence[int]) -> ContinuedFraction:
        if not quotients:
            raise InvalidInput("empty quotient list")
        return cls(quotients[0], tuple(quotients[1:]))

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def __len__(self) -> int:
        if self.period:
            raise TypeError("periodic continued fraction has no length")
        return 1 + len(self.preperiod)

    @property
    def available(self) -> float:
        return math.inf if self.period else 1 + len(self.preperiod)

    def quotient(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if i == 0:
            return self.a0
        j = i - 1
        if j < len(self.preperiod):
            return self.preperiod[j]
        if not self.period:
            raise IndexError(f"finite continued fraction has no quotient {i}")
        return self.period[(j - len(self.preperiod)) % len(self.period)]

    def quotients(self, n: int) -> list[int]:
        """First ``n`` quotients ``a_0 .. a_{n-1}`` (fewer if finite)."""
        n = int(min(n, self.available))
        return [self.quotient(i) for i in range(n)]

    def value(self) -> float:
        if self.period:
            return float(periodic_value(self))
        return float(finite_value(self.quotients(len(self))))

    def __str__(self) -> str:
        head = ", ".join(map(str, self.preperiod))
        per = ", ".join(map(str, self.period))
        parts = [p for p in (head, f"({per})" if per else "") if p]
        return f"[{self.a0}; {', '.join(parts)}]" if parts else f"[{self.a0}]"


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int


def finite_value(quotients: Sequence[int]) -> Fraction:
    x = Fraction(quotients[-1])
    for a in reversed(quotients[:-1]):
        x = a + 1 / x
    return x


def expand_real(x: float, n: int, eps: float = DEFAULT_EPS) -> ContinuedFraction:
    """Floor/reciprocal expansion of a float into at most ``n`` quotients.

    Stops once the fractional part drops below ``eps``; ``n`` is capped at
    :data:`MAX_REAL_QUOTIENTS`.
    """
    if not math.isfinite(x):
        raise InvalidInput(f"cannot expand non-finite value {x!r}")
    if n < 1 or eps <= 0:
        raise InvalidInput("need n >= 1 and eps > 0")
    n = min(n, MAX_REAL_QUOTIENTS)
    out = []
    for _ in range(n):
        a = math.floor(x)
        out.append(a)
        frac = x - a
        if frac < eps:
            break
        x = 1.0 / frac
    return ContinuedFraction.finite(out)


def _surd_state(x: QuadraticIrrational) -> tuple[int, int, int]:
    """Rewrite ``x`` as ``(P + sqrt(D)) / Q`` with ``Q | D - P^2``."""
    P, Q, D0 = x.p, x.r, x.q * x.q * x.d
    if x.q < 0:
        P, Q = -P, -Q
    return P * abs(Q), Q * abs(Q), D0 * Q * Q


def _floor_state(P: int, Q: int, s: int) -> int:
    # s = isqrt(D); sqrt(D) is irrational
    if Q > 0:
        return (P + s) // Q
    return -((P + s) // -Q) - 1


def expand_surd(x: QuadraticIrrational) -> ContinuedFraction:
    """Exact eventually periodic expansion of a real quadratic irrational."""
    if x.d < 0:
        raise InvalidInput("only real quadratic irrationals have a continued fraction")
    P, Q, D = _surd_state(x)
    s = math.isqrt(D)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(quotients)
        a = _floor_state(P, Q, s)
        quotients.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    start = seen[(P, Q)]
    if start == 0:
        # purely periodic from a0 on: keep a0 separate, rotate the period
        return ContinuedFraction(quotients[0], (), tuple(quotients[1:]) + (quotients[0],))
    return ContinuedFraction(quotients[0], tuple(quotients[1:start]), tuple(quotients[start:]))


def prefix_matrix(quotients: Sequence[int]) -> UnimodularMatrix:
    m = UnimodularMatrix.identity()
    for a in quotients:
        m = m @ quotient_matrix(a)
    return m


def periodic_value(cf: ContinuedFraction) -> QuadraticIrrational:
    """Exact value of a periodic continued fraction as the fixed point of its period matrix."""
    if not cf.period:
        raise InvalidInput("continued fraction is not periodic")
    P = prefix_matrix(cf.period)
    # y = (P.a y + P.b) / (P.c y + P.d)  =>  c y^2 + (d - a) y - b = 0, take the root > 1
    disc = (P.d - P.a) ** 2 + 4 * P.c * P.b
    y = QuadraticIrrational(P.a - P.d, 1, 2 * P.c, disc)
    head = prefix_matrix([cf.a0, *cf.preperiod])
    return mobius_apply(head, y)


def convergents(cf: ContinuedFraction, n: int) -> list[Convergent]:
    """Convergents ``nu = -1 .. n`` seeded with ``0/1`` and ``1/0``; ``mu_nu = a_{nu-1}``."""
    if n > cf.available:
        raise InvalidInput(f"continued fraction has only {cf.available} quotients")
    out = [Convergent(0, 1, -1), Convergent(1, 0, 0)]
    for nu in range(1, n + 1):
        mu = cf.quotient(nu - 1)
        a, b = out[-1], out[-2]
        out.append(Convergent(mu * a.p + b.p, mu * a.q + b.q, nu))
    return out


def an_matrices(cf: ContinuedFraction, n: int) -> list[UnimodularMatrix]:
    """``A_0 .. A_n`` with ``A_k = prod_{i<=k} [[a_i, 1], [1, 0]]``."""
    if n < 0:
        raise InvalidInput("n must be >= 0")
    if cf.a0 <= 0:
        raise InvalidInput(
            f"a0 = {cf.a0}: the matrices need positive quotients; translate theta by an integer first"
        )
    if n + 1 > cf.available:
        raise InvalidInput(f"continued fraction has only {cf.available} quotients")
    out = []
    m = UnimodularMatrix.identity()
    for i in range(n + 1):
        m = m @ quotient_matrix(cf.quotient(i))
        out.append(m)
    return out


@dataclass(frozen=True)
class KleinWitness:
    holds: bool
    index: int
    mu: int
    segment: tuple[int, int]  # (p_nu - p_{nu-2}, q_nu - q_{nu-2})
    base: tuple[int, int]  # (p_{nu-1}, q_{nu-1})


def klein_check(cf: ContinuedFraction, nu: int) -> KleinWitness:
    """Integer check that the segment between convergent points nu-2 and nu is mu_nu times the one from 0 to nu-1."""
    if nu < 1:
        raise InvalidInput("nu must be >= 1")
    conv = convergents(cf, nu)
    # conv[k] has index k - 1
    far, mid, near = conv[nu + 1], conv[nu], conv[nu - 1]
    mu = cf.quotient(nu - 1)
    seg = (far.p - near.p, far.q - near.q)
    base = (mid.p, mid.q)
    return KleinWitness(seg == (mu * base[0], mu * base[1]), nu, mu, seg, base)


def length_recurrence_residual(lengths: Sequence[float], quotients: Sequence[int], nu: int) -> float:
    """``l_nu - (l_{nu-2} + mu_nu l_{nu-1})``; position 0 of both sequences is index 1."""
    if nu < 3:
        raise InvalidInput("nu must be >= 3")
    i = nu - 1
    if i >= len(lengths) or i >= len(quotients):
        raise IndexError(f"index {nu} outside the supplied sequences")
    return lengths[i] - (lengths[i - 2] + quotients[i] * lengths[i - 1])


@dataclass(frozen=True)
class QuotientEstimate:
    """Partial quotients ``mu_3, mu_4, ...`` recovered from a length sequence."""

    quotients: tuple[int, ...]
    raw: tuple[float, ...]

    @property
    def residuals(self) -> tuple[float, ...]:
        return tuple(r - round(r) for r in self.raw)

    @property
    def flagged(self) -> tuple[int, ...]:
        """Positions whose raw estimate sits farther than the rounding band from an integer."""
        return tuple(i for i, r in enumerate(self.raw) if abs(r - round(r)) > ROUNDING_BAND)


def _check_increasing(lengths: Sequence[float]) -> None:
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise InvalidInput("lengths must be strictly increasing")


def estimate_quotient(l_prev2: float, l_prev: float, l_cur: float) -> tuple[int, float]:
    raw = (l_cur - l_prev2) / l_prev
    return max(1, round(raw)), raw


def quotients_from_lengths(lengths: Sequence[float]) -> QuotientEstimate:
    """Invert ``l_nu ~ l_{nu-2} + mu_nu l_{nu-1}`` for ``nu >= 3``."""
    if len(lengths) < 3:
        raise InvalidInput("need at least three lengths")
    _check_increasing(lengths)
    mus, raws = [], []
    for i in range(2, len(lengths)):
        mu, raw = estimate_quotient(lengths[i - 2], lengths[i - 1], lengths[i])
        mus.append(mu)
        raws.append(raw)
    return QuotientEstimate(tuple(mus), tuple(raws))


def window_ratio(lengths: Sequence[float], nu: int, window: int) -> float:
    """``l_{nu+N} / l_nu`` with position 0 holding index 1."""
    if nu < 1 or window < 0:
        raise InvalidInput("need nu >= 1 and N >= 0")
    hi = nu + window - 1
    if hi >= len(lengths):
        raise IndexError(f"index {nu + window} outside the supplied lengths")
    lo = lengths[nu - 1]
    if lo == 0 or lengths[hi] == 0:
        raise InvalidInput("zero length")
    return lengths[hi] / lo


def canonical_period(period: Sequence[int]) -> tuple[int, ...]:
    """Shortest period, rotated to its lexicographically least form."""
    period = _minimal_period(tuple(period))
    return min(period[i:] + period[:i] for i in range(len(period)))


@dataclass(frozen=True)
class TailMatch:
    shift: int
    exact: bool

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "heuristic"


def _minimal_period(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for k in range(1, n + 1):
        if n % k == 0 and period == period[:k] * (n // k):
            return period[:k]
    return period


def _exact_tail_shift(cf1: ContinuedFraction, cf2: ContinuedFraction) -> int | None:
    p1, p2 = _minimal_period(cf1.period), _minimal_period(cf2.period)
    if len(p1) != len(p2):
        return None
    n = len(p1)
    for r in range(n):
        if p1[r:] + p1[:r] == p2:
            s1 = 1 + len(cf1.preperiod)
            s2 = 1 + len(cf2.preperiod)
            k = s1 + r - s2
            # any k in the residue class mod n works; report the smallest |k|
            k = (k + n // 2) % n - n // 2 if n > 1 else 0
            return k
    return None


def _heuristic_tail_shift(a: Sequence[int], b: Sequence[int], max_shift: int, min_overlap: int) -> int | None:
    order = sorted(range(-max_shift, max_shift + 1), key=lambda k: (abs(k), k < 0))
    for k in order:
        ms = [m for m in range(len(b)) if 0 <= m + k < len(a)]
        if len(ms) < min_overlap:
            continue
        tail = ms[len(ms) // 2 :]
        if all(a[m + k] == b[m] for m in tail):
            return k
    return None


def tail_equivalent(
    cf1: ContinuedFraction,
    cf2: ContinuedFraction,
    depth: int = 40,
    max_shift: int = 10,
    min_overlap: int = 4,
) -> TailMatch | None:
    """Shift ``k`` with ``a_{m+k} = b_m`` for all large ``m``, or None.

    Two periodic expansions are compared exactly. Otherwise the last half
    of the overlap of the first ``depth`` quotients is compared at shifts
    ``|k| <= max_shift`` and the verdict is flagged heuristic.
    """
    if cf1.is_periodic and cf2.is_periodic:
        k = _exact_tail_shift(cf1, cf2)
        return None if k is None else TailMatch(k, True)
    a, b = cf1.quotients(depth), cf2.quotients(depth)
    k = _heuristic_tail_shift(a, b, max_shift, min(min_overlap, len(a), len(b)))
    return None if k is None else TailMatch(k, False)


def mobius_apply(m: UnimodularMatrix, x: QuadraticIrrational) -> QuadraticIrrational:
    """Exact ``(a x + b) / (c x + d)``."""
    den = m.c * x + m.d
    if not isinstance(den, QuadraticIrrational) and den == 0:
        raise DegenerateError("c*x + d vanishes")
    return (m.a * x + m.b) / den
