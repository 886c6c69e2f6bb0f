"""From a complex torus to a pair (theta, omega) through its length spectrum.

The forward map takes the systole-normalized spectrum. The curvature
step reads partial quotients off successive distinct lengths with the
three-term recurrence ``l_nu = l_{nu-2} + mu_nu l_{nu-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .cm import ExactModulus, endomorphism_ring
from .contfrac import (
    ROUNDING_BAND,
    ContinuedFraction,
    UnimodularMatrix,
    canonical_period,
    convergents,
    estimate_quotient,
)
from .errors import InvalidInput
from .lattice import Lattice, Modulus
from .nctorus import MoritaWitness, NcTorus, StateScale, morita_equivalent, scale_action
from .spectrum import LengthSpectrum, enumerate_spectrum, scale

# length of the convergent vectors (0,1) and (1,0) that seed the recurrence
SEED_LENGTH = 1.0
OMEGA_TOL = 1e-6


def _tau(tau) -> complex:
    return Modulus(complex(getattr(tau, "tau", tau))).tau


def lattice_systole(lattice: Lattice) -> float:
    # min(|w1|, |w2|) bounds the systole from above
    bound = min(abs(lattice.w1), abs(lattice.w2)) * (1 + 1e-12)
    return enumerate_spectrum(lattice, bound).entries[0].length


def w_map(tau, cutoff: float, mode: str = "full") -> LengthSpectrum:
    """Spectrum of ``Z + tau Z`` rescaled so the systole is 1; ``unit`` keeps the raw systole."""
    lattice = Lattice.from_modulus(_tau(tau))
    l0 = lattice_systole(lattice)
    raw = enumerate_spectrum(lattice, cutoff * l0, mode)
    sp = scale(raw, 1 / l0)
    return LengthSpectrum(sp.entries, float(cutoff), mode, l0)


def detect_period(stream: Sequence[int], min_repeats: int = 2) -> tuple[int, tuple[int, ...]] | None:
    """Smallest block repeating through the last half of ``stream``.

    Returns ``(preperiod_length, period)`` with the preperiod pushed as far
    back as the stream allows, or None.
    """
    s = list(stream)
    n = len(s)
    if n < 2:
        return None
    half = n // 2
    for p in range(1, (n - half) // min_repeats + 1):
        if all(s[i] == s[i + p] for i in range(half, n - p)):
            start = half
            while start > 0 and s[start - 1] == s[start - 1 + p]:
                start -= 1
            return start, tuple(s[start : start + p])
    return None


@dataclass(frozen=True)
class CurvatureResult:
    theta_cf: ContinuedFraction
    theta_value: float
    omega: float
    raw: tuple[float, ...]
    periodic_hint: tuple[int, tuple[int, ...]] | None = None
    lengths_used: int = 0

    @property
    def quotients(self) -> list[int]:
        return self.theta_cf.quotients(len(self.theta_cf))

    @property
    def residuals(self) -> tuple[float, ...]:
        return tuple(r - q for r, q in zip(self.raw, self.quotients))

    @property
    def flagged(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.raw) if abs(r - round(r)) > ROUNDING_BAND)


def curvature_extract(sp: LengthSpectrum, max_quotients: int) -> CurvatureResult:
    """Partial quotients ``mu_1, mu_2, ...`` read off the distinct lengths of ``sp``.

    ``mu_1`` and ``mu_2`` come from seeding the recurrence with two lengths
    equal to :data:`SEED_LENGTH`; they are the least reliable.
    """
    if max_quotients < 1:
        raise InvalidInput("max_quotients must be >= 1")
    lengths = sp.lengths
    if len(lengths) < 4:
        raise InvalidInput(f"need at least 4 distinct lengths, got {len(lengths)}")
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise InvalidInput("spectrum lengths are not increasing")
    seq = [SEED_LENGTH, SEED_LENGTH, *lengths[: max_quotients]]
    mus, raws = [], []
    for i in range(2, len(seq)):
        mu, raw = estimate_quotient(seq[i - 2], seq[i - 1], seq[i])
        mus.append(mu)
        raws.append(raw)
    cf = ContinuedFraction.finite(mus)
    omega = sp.unit if sp.unit is not None else lengths[0]
    return CurvatureResult(cf, cf.value(), float(omega), tuple(raws), detect_period(mus), len(seq) - 2)


def torus_to_nctorus(tau, cutoff: float, max_quotients: int) -> tuple[NcTorus, StateScale, CurvatureResult]:
    sp = w_map(tau, cutoff, "full")
    res = curvature_extract(sp, max_quotients)
    return NcTorus(res.theta_value, res.theta_cf), StateScale(res.omega), res


def lattice_scale_action(s: StateScale, m: UnimodularMatrix, tau) -> StateScale:
    """``omega / |c tau + d|``: how the raw systole moves when ``tau -> M tau``.

    ``Z + M tau Z = (c tau + d)^-1 (Z + tau Z)``, so lengths shrink by
    ``|c tau + d|``. The orbit of this action is discrete.
    """
    t = _tau(tau)
    return StateScale(s.omega / abs(m.c * t + m.d))


@dataclass(frozen=True)
class EquivarianceReport:
    tau: complex
    tau_image: complex
    matrix: UnimodularMatrix
    quotients: tuple[int, ...]
    quotients_image: tuple[int, ...]
    tail: MoritaWitness | None
    omega: float
    omega_image: float
    omega_predicted: float
    omega_theta_action: float | None
    heuristic: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def tails_equivalent(self) -> bool:
        return self.tail is not None

    @property
    def omega_on_orbit(self) -> bool:
        return abs(self.omega_image - self.omega_predicted) <= OMEGA_TOL * max(1.0, self.omega_image)

    @property
    def verdict(self) -> bool:
        return self.tails_equivalent and self.omega_on_orbit


def equivariance_check(tau, m: UnimodularMatrix, cutoff: float, depth: int) -> EquivarianceReport:
    """Run the pipeline on ``tau`` and ``M tau`` and compare the outputs."""
    if m.det != 1:
        raise InvalidInput("equivariance is checked for SL(2,Z) matrices")
    t = _tau(tau)
    image = m.act(t)
    nc1, om1, r1 = torus_to_nctorus(t, cutoff, depth)
    nc2, om2, r2 = torus_to_nctorus(image, cutoff, depth)
    tail = morita_equivalent(nc1, nc2, depth=depth)
    predicted = lattice_scale_action(om1, m, t).omega
    theta_action = scale_action(om1, tail.matrix, nc1).omega if tail is not None else None
    return EquivarianceReport(
        t,
        image,
        m,
        tuple(r1.quotients),
        tuple(r2.quotients),
        tail,
        om1.omega,
        om2.omega,
        predicted,
        theta_action,
        notes=("omega compared under omega -> omega / |c tau + d|",),
    )


@dataclass(frozen=True)
class CMReport:
    discriminant: int
    quotients: tuple[int, ...]
    periodic_hint: tuple[int, tuple[int, ...]] | None
    canonical_period: tuple[int, ...] | None
    flagged: tuple[int, ...]
    omega: float

    @property
    def periodic(self) -> bool:
        return self.periodic_hint is not None


def cm_curvature_check(tau: ExactModulus, cutoff: float, max_quotients: int) -> CMReport:
    """Evidence on whether the extracted quotient stream of a CM torus is eventually periodic."""
    order = endomorphism_ring(tau)
    if order is None:
        raise InvalidInput("modulus has no complex multiplication")
    _, omega, res = torus_to_nctorus(tau.value, cutoff, max_quotients)
    hint = res.periodic_hint
    return CMReport(
        order.discriminant,
        tuple(res.quotients),
        hint,
        canonical_period(hint[1]) if hint else None,
        res.flagged,
        omega.omega,
    )


def recurrence_lengths(quotients: Sequence[int], seeds: tuple[float, float]) -> list[float]:
    """``l_nu = l_{nu-2} + mu_nu l_{nu-1}`` from ``(l_{-1}, l_0)``; returns ``l_1, l_2, ...``."""
    prev2, prev = seeds
    out = []
    for mu in quotients:
        prev2, prev = prev, prev2 + mu * prev
        out.append(prev)
    return out


def convergent_norms(cf: ContinuedFraction, n: int) -> list[float]:
    """Euclidean norms ``|(p_nu, q_nu)|`` for ``nu = 1 .. n``."""
    return [math.hypot(c.p, c.q) for c in convergents(cf, n)[2:]]
