"""JSON-ready dictionaries for result types, and their inverses."""

from __future__ import annotations

import json
import math
from typing import Any

from .contfrac import ContinuedFraction, Convergent, UnimodularMatrix
from .errors import InvalidInput
from .spectrum import LengthSpectrum, SpectrumEntry
from .surd import QuadraticIrrational

SCHEMA = 1


def dumps(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, allow_nan=False)


def format_real(x: float) -> str:
    x = float(x) + 0.0
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_complex(z: complex) -> str:
    """``"RE+IMi"`` with shortest round-tripping floats."""
    z = complex(z)
    im = format_real(z.imag)
    sign = "" if im.startswith("-") else "+"
    return f"{format_real(z.real)}{sign}{im}i"


def parse_complex(text: str) -> complex:
    """Inverse of :func:`format_complex`; also accepts ``"1.5"`` or ``"2i"``."""
    t = text.strip().replace(" ", "")
    if not t:
        raise InvalidInput("empty complex number")
    t = t.replace("I", "i")
    if t.endswith("i"):
        t = t[:-1] + "j"
        if t == "j" or t[-2] in "+-":
            t = t[:-1] + "1j"
    try:
        z = complex(t)
    except ValueError:
        raise InvalidInput(f"cannot parse complex number {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInput(f"non-finite complex number {text!r}")
    return z


def matrix_to_json(m: UnimodularMatrix) -> list[list[int]]:
    return m.rows


def matrix_from_json(rows) -> UnimodularMatrix:
    return UnimodularMatrix.from_rows(rows)


def surd_to_json(x: QuadraticIrrational) -> dict[str, int]:
    return {"p": x.p, "q": x.q, "r": x.r, "d": x.d}


def surd_from_json(obj) -> QuadraticIrrational:
    return QuadraticIrrational(obj["p"], obj["q"], obj["r"], obj["d"])


def cf_to_json(cf: ContinuedFraction) -> dict[str, Any]:
    return {"a0": cf.a0, "preperiod": list(cf.preperiod), "period": list(cf.period)}


def cf_from_json(obj) -> ContinuedFraction:
    return ContinuedFraction(obj["a0"], tuple(obj["preperiod"]), tuple(obj["period"]))


def convergent_to_json(c: Convergent) -> dict[str, int]:
    return {"nu": c.index, "p": c.p, "q": c.q}


def convergent_from_json(obj) -> Convergent:
    return Convergent(obj["p"], obj["q"], obj["nu"])


def spectrum_to_json(sp: LengthSpectrum) -> dict[str, Any]:
    out = {
        "cutoff": sp.cutoff,
        "mode": sp.mode,
        "entries": [
            {"length": e.length, "multiplicity": e.multiplicity, "classes": [list(c) for c in e.classes]}
            for e in sp.entries
        ],
    }
    if sp.unit is not None:
        out["unit"] = sp.unit
    return out


def spectrum_from_json(obj) -> LengthSpectrum:
    entries = tuple(
        SpectrumEntry(float(e["length"]), int(e["multiplicity"]), tuple(tuple(c) for c in e["classes"]))
        for e in obj["entries"]
    )
    return LengthSpectrum(entries, float(obj["cutoff"]), obj["mode"], obj.get("unit"))
