"""Command-line front end.

Every subcommand builds a JSON payload and a small table. ``--output json``
(the default) prints the payload, ``--output text`` prints the table
tab-delimited, and ``--output svg`` prints a figure where one exists.
``--figure PATH`` writes that figure to a file next to the JSON output.

Exit status: 0 on success, 1 on a domain error (JSON ``{"error", "message"}``
on stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from . import figures
from .cm import ExactModulus, endomorphism_ring, multiplier_candidates
from .contfrac import (
    MAX_REAL_QUOTIENTS,
    convergents,
    expand_real,
    expand_surd,
    klein_check,
)
from .correspondence import curvature_extract, w_map
from .errors import InvalidInput, ToriError
from .lattice import Lattice, Modulus, isomorphic, reduce
from .nctorus import NcTorus, StateScale, dimension_group_step, morita_equivalent, parse_family, v_map
from .serialize import (
    convergent_to_json,
    cf_to_json,
    dumps,
    format_complex,
    format_real,
    matrix_to_json,
    parse_complex,
    spectrum_to_json,
    surd_to_json,
)
from .spectrum import MODES, enumerate_spectrum
from .surd import QuadraticIrrational
from .weierstrass import cubic_of_lattice, distance_to_lattice, eisenstein, wp

Row = Sequence[Any]


@dataclass
class Result:
    payload: dict
    table: list[Row]
    figure: Callable[[], str] | None = None


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- flag types


def _tau_arg(text: str) -> complex:
    try:
        return Modulus(parse_complex(text)).tau
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0 or x == float("inf"):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text}")
    return x


def _finite_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if x != x or abs(x) == float("inf"):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return x


def _count(lo: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if n < lo:
            raise argparse.ArgumentTypeError(f"expected an integer >= {lo}, got {n}")
        return n

    return parse


def _family_arg(text: str) -> str:
    try:
        parse_family(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _surd(values: Sequence[int] | None, flag: str) -> QuadraticIrrational | None:
    if values is None:
        return None
    try:
        return QuadraticIrrational(*values)
    except InvalidInput as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _theta(args, suffix: str = "") -> NcTorus:
    s = _surd(getattr(args, f"surd{suffix}"), f"--surd{suffix}")
    x = getattr(args, f"real{suffix}")
    if (s is None) == (x is None):
        raise UsageError(f"give exactly one of --surd{suffix} and --real{suffix}")
    if s is not None:
        if not s.is_real:
            raise UsageError(f"--surd{suffix} must be a real quadratic irrational (d > 0)")
        return NcTorus.from_surd(s)
    return NcTorus.from_real(x, MAX_REAL_QUOTIENTS)


def _theta_json(t: NcTorus) -> dict:
    out = {"theta": format_real(t.value), "cf": cf_to_json(t.cf), "exact": t.exact}
    if t.exact:
        out["surd"] = surd_to_json(t.theta)
    return out


def _depth(t: NcTorus, depth: int) -> int:
    # finite expansions carry only so many quotients
    return int(min(depth, t.cf.available - 1))


# ---------------------------------------------------------------- subcommands


def cmd_spectrum(args) -> Result:
    lattice = Lattice.from_modulus(args.tau)
    sp = enumerate_spectrum(lattice, args.cutoff, args.mode)
    table = [("length", "multiplicity")] + [(format_real(e.length), e.multiplicity) for e in sp.entries]
    payload = {"tau": format_complex(args.tau), "spectrum": spectrum_to_json(sp)}
    return Result(payload, table, lambda: figures.lattice_figure(lattice, sp))


def cmd_reduce(args) -> Result:
    r = reduce(args.tau)
    payload = {"tau": format_complex(r.modulus.tau), "matrix": matrix_to_json(r.matrix)}
    return Result(payload, [("tau", "matrix"), (payload["tau"], json.dumps(payload["matrix"]))])


def cmd_iso(args) -> Result:
    w = isomorphic(args.tau1, args.tau2)
    payload: dict[str, Any] = {"isomorphic": w is not None}
    if w is not None:
        payload.update(matrix=matrix_to_json(w.matrix), branch=w.branch)
    row = (str(w is not None).lower(), w.branch if w else "", json.dumps(payload.get("matrix")))
    return Result(payload, [("isomorphic", "branch", "matrix"), row])


def cmd_cf(args) -> Result:
    s = _surd(args.surd, "--surd")
    if (s is None) == (args.real is None):
        raise UsageError("give exactly one of --surd and --real")
    if s is not None:
        cf = expand_surd(s)
    else:
        cf = expand_real(args.real, min(args.depth, MAX_REAL_QUOTIENTS))
    payload = cf_to_json(cf)
    table = [("a0", "preperiod", "period"), (cf.a0, " ".join(map(str, cf.preperiod)), " ".join(map(str, cf.period)))]
    return Result(payload, table)


def cmd_convergents(args) -> Result:
    t = _theta(args)
    convs = convergents(t.cf, _depth(t, args.depth))
    payload = {"convergents": [convergent_to_json(c) for c in convs]}
    table = [("nu", "p", "q")] + [(c.index, c.p, c.q) for c in convs]
    return Result(payload, table, lambda: figures.klein_figure(convs))


def cmd_klein(args) -> Result:
    t = _theta(args)
    n = _depth(t, args.depth)
    rows = [klein_check(t.cf, nu) for nu in range(1, n + 1)]
    payload = {
        "all_hold": all(w.holds for w in rows),
        "rows": [
            {"nu": w.index, "mu": w.mu, "segment": list(w.segment), "base": list(w.base), "holds": w.holds}
            for w in rows
        ],
    }
    table = [("nu", "mu", "segment", "base", "holds")] + [
        (w.index, w.mu, f"{w.segment[0]},{w.segment[1]}", f"{w.base[0]},{w.base[1]}", str(w.holds).lower())
        for w in rows
    ]
    convs = convergents(t.cf, n)
    return Result(payload, table, lambda: figures.klein_figure(convs, n))


def cmd_morita(args) -> Result:
    t1, t2 = _theta(args, "1"), _theta(args, "2")
    w = morita_equivalent(t1, t2, depth=args.depth, max_shift=args.max_shift)
    payload: dict[str, Any] = {"equivalent": w is not None}
    if w is not None:
        payload.update(shift=w.shift, exact=w.exact, matrix=matrix_to_json(w.matrix))
    row = (
        str(w is not None).lower(),
        "" if w is None else w.shift,
        "" if w is None else str(w.exact).lower(),
        json.dumps(payload.get("matrix")),
    )
    return Result(payload, [("equivalent", "shift", "exact", "matrix"), row])


def cmd_dimgroup(args) -> Result:
    t = _theta(args)
    n = _depth(t, args.depth)
    if t.cf.a0 <= 0:
        raise InvalidInput("dimension group steps need a0 >= 1")
    steps = [dimension_group_step(t, k) for k in range(n + 1)]
    payload = {
        **_theta_json(t),
        "steps": [{"n": k, "matrix": matrix_to_json(m), "trace": m.trace} for k, m in enumerate(steps)],
    }
    table = [("n", "matrix", "trace")] + [(k, json.dumps(matrix_to_json(m)), m.trace) for k, m in enumerate(steps)]
    return Result(payload, table)


def cmd_vmap(args) -> Result:
    t = _theta(args)
    n = _depth(t, args.depth)
    values = v_map(t, StateScale(args.omega), n, parse_family(args.f_family))
    payload = {"omega": args.omega, "family": args.f_family, "values": values}
    table = [("k", "value")] + [(k, format_real(v)) for k, v in enumerate(values)]
    return Result(payload, table)


def cmd_curvature(args) -> Result:
    sp = w_map(args.tau, args.cutoff, "full")
    res = curvature_extract(sp, args.depth)
    hint = res.periodic_hint
    payload = {
        "tau": format_complex(args.tau),
        "quotients": res.quotients,
        "raw": list(res.raw),
        "flagged": list(res.flagged),
        "theta": res.theta_value,
        "omega": res.omega,
        "periodic_hint": None if hint is None else {"preperiod": hint[0], "period": list(hint[1])},
        "lengths_used": res.lengths_used,
    }
    table = [("nu", "mu", "raw", "flagged")] + [
        (i + 1, q, format_real(r), str(i in res.flagged).lower())
        for i, (q, r) in enumerate(zip(res.quotients, res.raw))
    ]
    lengths = sp.lengths[: res.lengths_used]
    return Result(payload, table, lambda: figures.curvature_figure(lengths, res.quotients, res.raw))


def cmd_cm(args) -> Result:
    s = _surd(args.surd, "--surd")
    if (s is None) == (args.tau is None):
        raise UsageError("give exactly one of --surd and --tau")
    if s is not None:
        try:
            tau = ExactModulus(s)
        except InvalidInput as exc:
            raise UsageError(f"--surd: {exc}") from None
    else:
        tau = ExactModulus.generic(args.tau)
    order = endomorphism_ring(tau)
    if order is None:
        payload = {"cm": False, "ring": "Z"}
        return Result(payload, [("cm", "ring"), ("false", "Z")])
    cands = multiplier_candidates(order, args.norm_bound)
    payload = {
        "cm": True,
        "discriminant": order.discriminant,
        "conductor": order.conductor,
        "fundamental_discriminant": order.fundamental_discriminant,
        "poly": list(order.poly),
        "generator": surd_to_json(order.generator),
        "candidates": [{**surd_to_json(c), "norm": int(c.norm())} for c in cands],
    }
    table = [("discriminant", "conductor", "generator"), (order.discriminant, order.conductor, str(order.generator))]
    return Result(payload, table)


def cmd_weierstrass(args) -> Result:
    lattice = Lattice.from_modulus(args.tau)
    g4, g6 = eisenstein(lattice, 2, args.box), eisenstein(lattice, 3, args.box)
    curve = cubic_of_lattice(lattice, args.box)
    points = [args.z if args.z is not None else (1 + args.tau) / 3]
    rng = random.Random(args.seed)
    for _ in range(args.samples):
        z = complex(rng.random(), 0) + rng.random() * args.tau
        if distance_to_lattice(z, lattice) > 1e-3:
            points.append(z)
    evals = []
    for z in points:
        p, dp = wp(z, lattice, args.box)
        evals.append({"z": format_complex(z), "wp": format_complex(p), "residual": abs(curve.residual(p, dp))})
    payload = {
        "tau": format_complex(args.tau),
        "box": args.box,
        "g4": format_complex(g4),
        "g6": format_complex(g6),
        "a": format_complex(curve.a),
        "b": format_complex(curve.b),
        "discriminant": format_complex(curve.discriminant),
        "points": evals,
        "max_residual": max(e["residual"] for e in evals),
    }
    table = [("z", "wp", "residual")] + [(e["z"], e["wp"], format_real(e["residual"])) for e in evals]
    return Result(payload, table)


def cmd_plot(args) -> Result:
    if args.kind == "lattice":
        if args.tau is None:
            raise UsageError("plot lattice needs --tau")
        lattice = Lattice.from_modulus(args.tau)
        sp = enumerate_spectrum(lattice, args.cutoff, args.mode)
        svg = figures.lattice_figure(lattice, sp)
        payload = {"kind": "lattice", "geodesics": sum(len(e.classes) for e in sp.entries)}
    else:
        t = _theta(args)
        n = _depth(t, args.depth)
        svg = figures.klein_figure(convergents(t.cf, n), n)
        payload = {"kind": "klein", "nu": n}
    return Result(payload, [tuple(payload), tuple(payload.values())], lambda: svg)


# ---------------------------------------------------------------- parser


def _add_tau(p, required=True, flag="--tau"):
    p.add_argument(flag, type=_tau_arg, required=required, metavar="RE+IMi", help="modulus in the upper half plane")


def _add_theta(p, suffix=""):
    p.add_argument(
        f"--surd{suffix}", nargs=4, type=int, metavar=("P", "Q", "R", "D"), help="exact (P + Q sqrt(D)) / R"
    )
    p.add_argument(f"--real{suffix}", type=_finite_float, metavar="X", help="floating-point real number")


def _add_depth(p, default):
    p.add_argument("--depth", type=_count(1), default=default, metavar="N", help=f"number of steps (default {default})")


def _add_figure(p):
    p.add_argument("--figure", metavar="PATH", help="also write the SVG figure to PATH")


COMMANDS: dict[str, tuple[Callable[[Any], Result], str]] = {}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text", "svg"), help="output format (default json; svg for plot)")
    common.add_argument("--out", metavar="PATH", help="write the output to PATH instead of stdout")

    parser = argparse.ArgumentParser(prog="tori", description="Complex tori, length spectra and noncommutative tori.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        COMMANDS[name] = (fn, help_)
        return sub.add_parser(name, parents=[common], help=help_, description=help_)

    p = add("spectrum", cmd_spectrum, "length spectrum of Z + tau Z up to a cutoff")
    _add_tau(p)
    p.add_argument("--cutoff", type=_positive_float, default=5.0, help="length cutoff (default 5)")
    p.add_argument("--mode", choices=MODES, default="full", help="primitive or full spectrum")
    _add_figure(p)

    p = add("reduce", cmd_reduce, "move tau into the fundamental domain")
    _add_tau(p)

    p = add("iso", cmd_iso, "whether two moduli give isomorphic tori")
    _add_tau(p, flag="--tau1")
    _add_tau(p, flag="--tau2")

    p = add("cf", cmd_cf, "continued fraction of a surd (exact) or a real (truncated)")
    _add_theta(p)
    _add_depth(p, 10)

    p = add("convergents", cmd_convergents, "convergents p/q for nu = -1 .. depth")
    _add_theta(p)
    _add_depth(p, 10)
    _add_figure(p)

    p = add("klein", cmd_klein, "integer check of the convergent segment identity")
    _add_theta(p)
    _add_depth(p, 10)
    _add_figure(p)

    p = add("morita", cmd_morita, "whether two parameters are related by GL(2,Z)")
    _add_theta(p, "1")
    _add_theta(p, "2")
    _add_depth(p, 40)
    p.add_argument("--max-shift", type=_count(0), default=10, help="largest tail shift tried (default 10)")

    p = add("dimgroup", cmd_dimgroup, "dimension group matrices and their traces")
    _add_theta(p)
    _add_depth(p, 8)

    p = add("vmap", cmd_vmap, "the sequence f_k(omega) ln tr A_k")
    _add_theta(p)
    _add_depth(p, 8)
    p.add_argument("--omega", type=_positive_float, default=1.0, help="state scale (default 1)")
    p.add_argument(
        "--f-family", type=_family_arg, default="default", metavar="default|geometric:RHO", help="weight family"
    )

    p = add("curvature", cmd_curvature, "partial quotients read off the length spectrum")
    _add_tau(p)
    p.add_argument("--cutoff", type=_positive_float, default=10.0, help="cutoff in systole units (default 10)")
    _add_depth(p, 12)
    _add_figure(p)

    p = add("cm", cmd_cm, "endomorphism ring of Z + tau Z")
    p.add_argument("--surd", nargs=4, type=int, metavar=("P", "Q", "R", "D"), help="exact modulus (P + Q sqrt(D)) / R, D < 0")
    _add_tau(p, required=False)
    p.add_argument("--norm-bound", type=_count(0), default=5, help="bound on |alpha|^2 for candidates (default 5)")

    p = add("weierstrass", cmd_weierstrass, "Eisenstein sums, the cubic and an on-curve check")
    _add_tau(p)
    p.add_argument("--box", type=_count(8), default=32, help="row truncation (default 32)")
    p.add_argument("--z", type=_complex_arg, metavar="RE+IMi", help="evaluation point (default (1 + tau) / 3)")
    p.add_argument("--samples", type=_count(0), default=0, help="extra random evaluation points")
    p.add_argument("--seed", type=int, default=0, help="seed for the random points")

    p = add("plot", cmd_plot, "SVG figure: lattice geodesics or Klein convergents")
    p.add_argument("kind", choices=("lattice", "klein"))
    _add_tau(p, required=False)
    p.add_argument("--cutoff", type=_positive_float, default=2.3, help="length cutoff (default 2.3)")
    p.add_argument("--mode", choices=MODES, default="primitive", help="primitive or full spectrum")
    _add_theta(p)
    _add_depth(p, 3)
    return parser


def _render_table(rows: list[Row]) -> str:
    return "".join("\t".join(str(v) for v in row) + "\n" for row in rows)


def _error(code: str, message: str, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps({"error": code, "message": message}, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {code}: {message}", file=sys.stderr)


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn, _ = COMMANDS[args.command]
    fmt = args.output or ("svg" if args.command == "plot" else "json")
    try:
        result = fn(args)
        if fmt == "svg" and result.figure is None:
            raise UsageError(f"{args.command} has no SVG output")
        if getattr(args, "figure", None):
            _write(result.figure(), args.figure)
            result.payload["figure"] = args.figure
        if fmt == "json":
            text = dumps(result.payload) + "\n"
        elif fmt == "text":
            text = _render_table(result.table)
        else:
            text = result.figure()
        _write(text, args.out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _error("usage", str(exc), fmt)
        return 2
    except ToriError as exc:
        _error(exc.code, str(exc), fmt)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
