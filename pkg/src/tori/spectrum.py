"""Length spectra of flat tori.

A closed geodesic of ``C/L`` through the origin corresponds to a lattice
vector ``w = m w1 + n w2`` taken up to sign; its length is ``|w|``.
"""

from __future__ import annotations

import bisect
import math
import os
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInput, ResourceLimit
from .lattice import Lattice

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ENTRIES = 10**6
MODES = ("primitive", "full")


def max_entries_limit() -> int:
    raw = os.environ.get("TORI_MAX_ENTRIES")
    if raw is None:
        return DEFAULT_MAX_ENTRIES
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"TORI_MAX_ENTRIES={raw!r} is not an integer") from None
    if value < 1:
        raise InvalidInput("TORI_MAX_ENTRIES must be positive")
    return value


def _near(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a))


@dataclass(frozen=True)
class SpectrumEntry:
    length: float
    multiplicity: int
    classes: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class LengthSpectrum:
    """Sorted lengths with multiplicities and homotopy classes, complete up to ``cutoff``.

    ``unit`` records the raw systole when the spectrum was normalized to
    start at 1; it is None otherwise.
    """

    entries: tuple[SpectrumEntry, ...]
    cutoff: float
    mode: str = "full"
    unit: float | None = field(default=None, compare=True)

    @classmethod
    def from_lengths(
        cls,
        lengths: Iterable[float],
        cutoff: float | None = None,
        mode: str = "full",
        tol: float = DEFAULT_TOL,
    ) -> LengthSpectrum:
        """Spectrum from a plain list of lengths (repeats become multiplicity)."""
        ls = sorted(float(v) for v in lengths)
        if any(v <= 0 for v in ls):
            raise InvalidInput("lengths must be positive")
        if cutoff is None:
            cutoff = ls[-1] if ls else 1.0
        entries = [SpectrumEntry(length, mult) for length, mult, _ in _cluster(ls, [()] * len(ls), tol)]
        return cls(tuple(entries), float(cutoff), mode)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def lengths(self) -> list[float]:
        return [e.length for e in self.entries]

    @property
    def count(self) -> int:
        """Number of geodesics, counted with multiplicity."""
        return sum(e.multiplicity for e in self.entries)

    def geodesics(self) -> list[float]:
        return [e.length for e in self.entries for _ in range(e.multiplicity)]


def _cluster(lengths: Sequence[float], classes: Sequence, tol: float):
    """Group sorted lengths closer than ``tol`` (relative above 1)."""
    out = []
    for length, cls in zip(lengths, classes):
        if out and _near(out[-1][3], length, tol):
            out[-1][1] += 1
            if cls:
                out[-1][2].append(cls)
            out[-1][3] = length
        else:
            out.append([length, 1, [cls] if cls else [], length])
    return [(first, mult, sorted(cs)) for first, mult, cs, _ in out]


def _search_bounds(lattice: Lattice, cutoff: float) -> float:
    """Bound on ``|n|`` from the dual basis: ``|n| <= cutoff * |row_2(B^-1)|``."""
    w1, w2 = lattice.w1, lattice.w2
    det = w1.real * w2.imag - w2.real * w1.imag
    row2 = math.hypot(w1.imag, w1.real) / abs(det)
    return cutoff * row2 + 1


def lattice_vectors(lattice: Lattice, cutoff: float, mode: str = "full", max_entries: int | None = None):
    """Arrays ``(m, n, length)`` of vectors with ``0 < |w| <= cutoff``, one per sign pair."""
    if not cutoff > 0:
        raise InvalidInput("cutoff must be positive")
    if mode not in MODES:
        raise InvalidInput(f"mode must be one of {MODES}")
    limit = max_entries_limit() if max_entries is None else max_entries
    estimate = math.pi * cutoff * cutoff / (2 * lattice.covolume)
    if estimate > 2 * limit + 100:
        raise ResourceLimit(f"about {estimate:.3g} geodesics below {cutoff}, limit is {limit}")
    w1, w2 = lattice.w1, lattice.w2
    a = abs(w1) ** 2
    nmax = int(math.floor(_search_bounds(lattice, cutoff)))
    ms, ns = [], []
    c2 = cutoff * cutoff
    for n in range(0, nmax + 1):
        # |m w1 + n w2|^2 <= c^2 is a quadratic in m
        b = n * (w1.conjugate() * w2).real
        c = n * n * abs(w2) ** 2 - c2
        disc = b * b - a * c
        if disc < 0:
            continue
        root = math.sqrt(disc)
        lo = math.floor((-b - root) / a) - 1
        hi = math.ceil((-b + root) / a) + 1
        if n == 0:
            lo = 1
        m = np.arange(lo, hi + 1, dtype=np.int64)
        ms.append(m)
        ns.append(np.full(m.shape, n, dtype=np.int64))
    if not ms:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0)
    m = np.concatenate(ms)
    n = np.concatenate(ns)
    length = np.abs(m * w1 + n * w2)
    keep = length <= cutoff
    if mode == "primitive":
        keep &= np.gcd(m, n) == 1
    m, n, length = m[keep], n[keep], length[keep]
    if len(length) > limit:
        raise ResourceLimit(f"{len(length)} geodesics below {cutoff}, limit is {limit}")
    order = np.lexsort((n, m, length))
    return m[order], n[order], length[order]


def enumerate_spectrum(
    lattice: Lattice,
    cutoff: float,
    mode: str = "full",
    tol: float = DEFAULT_TOL,
    max_entries: int | None = None,
) -> LengthSpectrum:
    """All geodesics of ``C/L`` up to ``cutoff``, grouped by length."""
    m, n, length = lattice_vectors(lattice, cutoff, mode, max_entries)
    classes = list(zip(m.tolist(), n.tolist()))
    entries = tuple(SpectrumEntry(l, mult, tuple(cs)) for l, mult, cs in _cluster(length.tolist(), classes, tol))
    return LengthSpectrum(entries, float(cutoff), mode)


def scale(sp: LengthSpectrum, a: float) -> LengthSpectrum:
    if not a > 0:
        raise InvalidInput("scale factor must be positive")
    entries = tuple(replace(e, length=e.length * a) for e in sp.entries)
    unit = None if sp.unit is None else sp.unit
    return LengthSpectrum(entries, sp.cutoff * a, sp.mode, unit)


def tail(sp: LengthSpectrum, m: int) -> LengthSpectrum:
    """Drop the first ``m - 1`` geodesics, counted with multiplicity."""
    if m < 1:
        raise InvalidInput("m must be >= 1")
    drop = m - 1
    if drop >= sp.count:
        raise InvalidInput(f"cannot delete {drop} of {sp.count} geodesics")
    out = []
    for e in sp.entries:
        if drop >= e.multiplicity:
            drop -= e.multiplicity
            continue
        if drop:
            e = SpectrumEntry(e.length, e.multiplicity - drop, e.classes[drop:])
            drop = 0
        out.append(e)
    return LengthSpectrum(tuple(out), sp.cutoff, sp.mode, sp.unit)


def systole(sp: LengthSpectrum) -> float:
    if not sp.entries:
        raise InvalidInput("empty spectrum has no systole")
    return sp.entries[0].length


def _comparable(sp: LengthSpectrum, tol: float) -> list[tuple[float, int]]:
    # vectors within tol of the cutoff may fall on either side of it
    edge = sp.cutoff - tol * max(1.0, sp.cutoff)
    return [(e.length, e.multiplicity) for e in sp.entries if e.length <= edge]


def equal(sp1: LengthSpectrum, sp2: LengthSpectrum, tol: float = DEFAULT_TOL) -> bool:
    """Same lengths and multiplicities; entries within ``tol`` of the cutoff are ignored."""
    if sp1.mode != sp2.mode:
        raise InvalidInput(f"cannot compare {sp1.mode} and {sp2.mode} spectra")
    if not _near(sp1.cutoff, sp2.cutoff, tol):
        raise InvalidInput(f"cutoffs differ: {sp1.cutoff} vs {sp2.cutoff}")
    a, b = _comparable(sp1, tol), _comparable(sp2, tol)
    if len(a) != len(b):
        return False
    return all(ma == mb and _near(la, lb, tol) for (la, ma), (lb, mb) in zip(a, b))


@dataclass(frozen=True)
class MultiplicativityReport:
    submultiset: bool
    strict_blocks: bool
    block_size: int | None
    failures: tuple[float, ...] = ()


def _find(lengths: list[float], x: float, tol: float) -> int | None:
    i = bisect.bisect_left(lengths, x - tol * max(1.0, x))
    if i < len(lengths) and _near(lengths[i], x, tol):
        return i
    return None


def alpha_multiplicative(sp: LengthSpectrum, rho: float, tol: float = DEFAULT_TOL) -> MultiplicativityReport:
    """Test self-similarity of ``sp`` under scaling by ``rho > 1``.

    ``submultiset``: scaling by ``rho`` maps the spectrum into itself with
    multiplicities. ``strict_blocks``: the spectrum is literally
    ``B, rho B, rho^2 B, ...`` for the block ``B`` of lengths below
    ``rho * systole``; ``block_size`` is ``|B|`` counted with multiplicity.
    """
    if not rho > 1:
        raise InvalidInput("rho must exceed 1")
    lengths = sp.lengths
    edge = sp.cutoff - tol * max(1.0, sp.cutoff)
    failures = []
    for e in sp.entries:
        target = rho * e.length
        if target > edge:
            break
        j = _find(lengths, target, tol)
        if j is None or sp.entries[j].multiplicity < e.multiplicity:
            failures.append(e.length)
    sub = not failures

    if not sp.entries:
        return MultiplicativityReport(sub, False, None, tuple(failures))
    l1 = sp.entries[0].length
    block = [(e.length, e.multiplicity) for e in sp.entries if e.length < rho * l1 - tol]
    size = sum(mult for _, mult in block)
    strict = True
    k = 1
    while strict and rho**k * l1 <= edge:
        lo, hi = rho**k * l1, rho ** (k + 1) * l1
        expected = [(rho**k * l, mult) for l, mult in block if rho**k * l <= edge]
        actual = [
            (e.length, e.multiplicity)
            for e in sp.entries
            if lo - tol * lo <= e.length < hi - tol * hi and e.length <= edge
        ]
        strict = len(expected) == len(actual) and all(
            ma == mb and _near(la, lb, tol) for (la, ma), (lb, mb) in zip(expected, actual)
        )
        k += 1
    return MultiplicativityReport(sub, strict, size if strict else None, tuple(failures))
