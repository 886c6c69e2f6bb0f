"""SVG figures rendered with matplotlib.

Output is byte-deterministic: fixed hash salt, no date metadata, text kept
as text. Artists carry ``gid`` attributes (``lattice-points``,
``geodesic-M-N``, ``segment-I``, ...) so documents can be inspected.
"""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

from matplotlib import rc_context  # noqa: E402
from matplotlib.backends.backend_svg import FigureCanvasSVG  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from .contfrac import Convergent  # noqa: E402
from .lattice import Lattice  # noqa: E402
from .spectrum import LengthSpectrum  # noqa: E402

MAX_SEGMENTS = 2000

_RC = {
    "svg.hashsalt": "tori",
    "svg.fonttype": "none",
    "path.simplify": False,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.0,
}


def _render(fig: Figure) -> str:
    buf = io.StringIO()
    with rc_context(_RC):
        FigureCanvasSVG(fig).print_svg(buf, metadata={"Date": None})
    return buf.getvalue()


def _new_figure(width: float = 5.0, height: float = 5.0):
    with rc_context(_RC):
        fig = Figure(figsize=(width, height))
        ax = fig.add_subplot(1, 1, 1)
    return fig, ax


def _warn(ax, shown: int, total: int) -> None:
    t = ax.text(
        0.02, 0.98, f"truncated: {shown} of {total} segments shown",
        transform=ax.transAxes, va="top", fontsize=8, color="tab:red",
    )
    t.set_gid("truncation-warning")


def lattice_figure(lattice: Lattice, sp: LengthSpectrum, max_segments: int = MAX_SEGMENTS) -> str:
    """Lattice points within the cutoff and one segment from 0 per geodesic class."""
    return _render(build_lattice(lattice, sp, max_segments))


def build_lattice(lattice: Lattice, sp: LengthSpectrum, max_segments: int = MAX_SEGMENTS) -> Figure:
    fig, ax = _new_figure()
    r = sp.cutoff
    classes = [c for e in sp.entries for c in e.classes]
    cmap = matplotlib.colormaps["viridis"]
    shown = classes[:max_segments]
    n_lengths = max(1, len(sp.entries) - 1)
    colour = {c: cmap(i / n_lengths) for i, e in enumerate(sp.entries) for c in e.classes}
    for m, n in shown:
        w = lattice.point(m, n)
        (line,) = ax.plot([0, w.real], [0, w.imag], color=colour[(m, n)], lw=0.9)
        line.set_gid(f"geodesic-{m}-{n}")
    if len(classes) > len(shown):
        _warn(ax, len(shown), len(classes))
    pts = [lattice.point(m, n) for m, n in classes]
    pts += [-p for p in pts]
    if pts:
        sc = ax.scatter([p.real for p in pts], [p.imag for p in pts], s=6, color="black", zorder=3)
        sc.set_gid("lattice-points")
    origin = ax.scatter([0], [0], s=24, marker="x", color="tab:red", zorder=4)
    origin.set_gid("origin")
    ax.set_xlim(-1.05 * r, 1.05 * r)
    ax.set_ylim(-1.05 * r, 1.05 * r)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"geodesics up to length {r:g} ({sp.mode})")
    return fig


def klein_figure(convs: Sequence[Convergent], nu: int | None = None) -> str:
    """Convergent points ``(p, q)`` with the segments ``I`` and ``J`` at index ``nu``."""
    return _render(build_klein(convs, nu))


def build_klein(convs: Sequence[Convergent], nu: int | None = None) -> Figure:
    fig, ax = _new_figure()
    pts = [(c.p, c.q) for c in convs]
    if pts:
        sc = ax.scatter([p for p, _ in pts], [q for _, q in pts], s=10, color="black", zorder=3)
        sc.set_gid("convergents")
        for c in convs:
            ax.annotate(str(c.index), (c.p, c.q), textcoords="offset points", xytext=(3, 3), fontsize=7)
    by_index = {c.index: c for c in convs}
    if nu is None:
        nu = max(by_index) if by_index else 0
    if nu >= 1 and {nu, nu - 1, nu - 2} <= set(by_index):
        far, mid, near = by_index[nu], by_index[nu - 1], by_index[nu - 2]
        (seg_i,) = ax.plot([near.p, far.p], [near.q, far.q], color="tab:blue", lw=1.5, label="I")
        seg_i.set_gid(f"segment-I-{nu}")
        (seg_j,) = ax.plot([0, mid.p], [0, mid.q], color="tab:orange", lw=1.5, label="J")
        seg_j.set_gid(f"segment-J-{nu}")
        ax.legend(loc="lower right")
    ax.set_xlabel("p")
    ax.set_ylabel("q")
    ax.set_title(f"convergents, nu = {nu}")
    return fig


def curvature_figure(lengths: Sequence[float], quotients: Sequence[int], raw: Sequence[float]) -> str:
    """Distinct spectrum lengths and the quotients read off them."""
    with rc_context(_RC):
        fig = Figure(figsize=(6.0, 4.0))
        top = fig.add_subplot(2, 1, 1)
        bottom = fig.add_subplot(2, 1, 2)
    (ln,) = top.semilogy(range(1, len(lengths) + 1), lengths, marker="o", ms=3)
    ln.set_gid("lengths")
    top.set_ylabel("length")
    idx = list(range(1, len(quotients) + 1))
    (q,) = bottom.plot(idx, quotients, drawstyle="steps-mid", color="black")
    q.set_gid("quotients")
    sc = bottom.scatter(idx, raw, s=8, color="tab:red")
    sc.set_gid("raw-estimates")
    bottom.set_xlabel("index")
    bottom.set_ylabel("quotient")
    return _render(fig)
