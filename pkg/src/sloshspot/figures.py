"""Two-panel SVG figures: free-surface traces above, nodal and level lines below.

The markup is written by hand so that the bytes depend only on the data:
no timestamps, no generated ids, fixed number formatting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import (
    CaseTag,
    HighSpot,
    LevelCurve,
    SloshingDomain,
    build_domain,
    case_mode,
    find_high_spots,
    u_nodal_lines,
)
from .kernel import Potential, QuadratureConfig
from .output import trace_grid

WIDTH = 640
PANEL_H = 300
PAD = 40
MARGIN = 0.05


@dataclass(frozen=True)
class FigureSpec:
    fig_id: str
    cases: tuple[CaseTag, ...]
    extras_style: str | None = None   # "solid", "dotted" or None to omit
    boundary_spots: bool = False      # arrows also at the endpoints of F


FIGURES = {
    "fig1": FigureSpec("fig1", (CaseTag.W32, CaseTag.W32_PRIME), boundary_spots=True),
    "fig2": FigureSpec("fig2", (CaseTag.W52, CaseTag.W52_COMPANION)),
    "fig3": FigureSpec("fig3", (CaseTag.W72,), extras_style="solid"),
    "fig4": FigureSpec("fig4", (CaseTag.W3,), extras_style="dotted"),
    "fig5": FigureSpec("fig5", (CaseTag.W2,), extras_style="solid"),
}


@dataclass
class FigureData:
    spec: FigureSpec
    domains: list[SloshingDomain]
    spots: list[HighSpot]
    nodal: list[LevelCurve]
    trace: np.ndarray                      # columns x, u(x,0), v(x,0)
    x_range: tuple[float, float] = (0.0, 1.0)
    y_range: tuple[float, float] = (-1.0, 0.0)
    t_range: tuple[float, float] = (-1.0, 1.0)
    extras: list[LevelCurve] = field(default_factory=list)


def _padded(lo: float, hi: float) -> tuple[float, float]:
    span = hi - lo or 1.0
    return lo - MARGIN * span, hi + MARGIN * span


def figure_data(fig_id: str, cfg: QuadratureConfig | None = None) -> FigureData:
    spec = FIGURES[fig_id]
    domains = [build_domain(case_mode(t), t, cfg) for t in spec.cases]
    return _assemble(spec, domains, cfg)


def domain_figure(domain: SloshingDomain, cfg: QuadratureConfig | None = None) -> FigureData:
    """Single-domain figure (used for per-case SVG output)."""
    return _assemble(FigureSpec(domain.case_tag.value, (domain.case_tag,)), [domain], cfg)


def _assemble(spec: FigureSpec, domains: list[SloshingDomain], cfg) -> FigureData:
    spots: dict[float, HighSpot] = {}
    nodal: list[LevelCurve] = []
    for d in domains:
        for s in find_high_spots(d, cfg):
            if s.interior or spec.boundary_spots:
                spots.setdefault(round(s.x, 9), s)
        nodal.extend(u_nodal_lines(d, cfg))
    extras = [c for d in domains for c in d.extras] if spec.extras_style else []

    curves = [c.vertices for d in domains for c in d.bottom] + [c.vertices for c in nodal + extras]
    pts = np.vstack(curves + [np.array([[d.x_left, 0.0], [d.x_right, 0.0]]) for d in domains])
    x_range = _padded(float(pts[:, 0].min()), float(pts[:, 0].max()))
    y_range = _padded(float(pts[:, 1].min()), 0.0)

    a = max(x_range[0], -math.pi + 0.02)
    b = min(x_range[1], math.pi - 0.02)
    xs = trace_grid(round(a, 3), round(b, 3))
    pot = Potential(domains[0].mode, cfg)
    f = pot.field(xs, np.zeros_like(xs))
    trace = np.column_stack([xs, f.real, f.imag])
    t_range = _padded(float(trace[:, 1:].min()), float(trace[:, 1:].max()))
    return FigureData(spec, domains, sorted(spots.values(), key=lambda s: s.x), nodal, trace,
                      x_range, y_range, t_range, extras)


class _Frame:
    """Maps data coordinates of one panel to pixels."""

    def __init__(self, x_range, y_range, top: float):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.top = top

    def px(self, x: float) -> float:
        return PAD + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * PAD)

    def py(self, y: float) -> float:
        return self.top + PAD / 2 + (self.y1 - y) / (self.y1 - self.y0) * (PANEL_H - PAD)


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _polyline(frame: _Frame, pts, style: str, css: str) -> str:
    coords = " ".join(f"{_fmt(frame.px(x))},{_fmt(frame.py(y))}" for x, y in pts)
    dash = {"solid": "", "dashed": ' stroke-dasharray="6 4"', "dotted": ' stroke-dasharray="1.5 3"'}[style]
    return f'<polyline class="{css}" points="{coords}" fill="none" stroke="black" stroke-width="1.2"{dash}/>'


def render_svg(data: FigureData) -> str:
    height = 2 * PANEL_H
    top = _Frame(data.x_range, data.t_range, 0.0)
    bot = _Frame(data.x_range, data.y_range, float(PANEL_H))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {height}" '
        f'width="{WIDTH}" height="{height}">',
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"7\" "
        "markerHeight=\"7\" orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>",
        f'<text x="8" y="16" font-size="13">(a)</text>',
        f'<text x="8" y="{PANEL_H + 16}" font-size="13">(b)</text>',
    ]
    # axes: y = 0 in both panels, x = 0 where visible
    for fr in (top, bot):
        out.append(f'<line class="axis" x1="{_fmt(fr.px(fr.x0))}" y1="{_fmt(fr.py(0.0))}" '
                   f'x2="{_fmt(fr.px(fr.x1))}" y2="{_fmt(fr.py(0.0))}" stroke="gray" stroke-width="0.6"/>')
        if fr.x0 < 0.0 < fr.x1:
            out.append(f'<line class="axis" x1="{_fmt(fr.px(0.0))}" y1="{_fmt(fr.py(fr.y0))}" '
                       f'x2="{_fmt(fr.px(0.0))}" y2="{_fmt(fr.py(fr.y1))}" stroke="gray" stroke-width="0.6"/>')

    xs = data.trace[:, 0]
    out.append(_polyline(top, zip(xs, data.trace[:, 1]), "dashed", "trace-u"))
    out.append(_polyline(top, zip(xs, data.trace[:, 2]), "solid", "trace-v"))

    for d in data.domains:
        out.append(f'<line class="free-surface" x1="{_fmt(bot.px(d.x_left))}" y1="{_fmt(bot.py(0.0))}" '
                   f'x2="{_fmt(bot.px(d.x_right))}" y2="{_fmt(bot.py(0.0))}" stroke="black" stroke-width="2.4"/>')
        for c in d.bottom:
            out.append(_polyline(bot, c.vertices, "solid", "level-v"))
    for c in data.extras:
        out.append(_polyline(bot, c.vertices, data.spec.extras_style, "level-v-extra"))
    for c in data.nodal:
        out.append(_polyline(bot, c.vertices, "dashed", "nodal-u"))

    for s in data.spots:
        out.append(f'<line class="high-spot" x1="{_fmt(top.px(s.x))}" y1="{_fmt(top.py(s.trace_value))}" '
                   f'x2="{_fmt(bot.px(s.x))}" y2="{_fmt(bot.py(0.0))}" stroke="black" stroke-width="0.8" '
                   'marker-end="url(#arrow)"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def figure_ids() -> Sequence[str]:
    return tuple(FIGURES)
