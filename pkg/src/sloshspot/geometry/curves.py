"""Predictor-corrector continuation of level curves of u or v."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from ..errors import BudgetExceeded, NoSignChange, StallAtStagnation
from ..kernel import Point2, Potential
from ..kernel.potential import as_potential

H_MIN = 1e-4
H_MAX = 4.9e-2  # corrected points may sit slightly further than the predictor step
SURFACE_EPS = 1e-6
SADDLE_OFFSET = 1e-4
RESIDUAL_TOL = 1e-8


class EndKind(enum.Enum):
    ON_FREE_SURFACE = "on_free_surface"
    ON_Y_AXIS = "on_y_axis"
    AT_STAGNATION = "at_stagnation"
    ON_BOTTOM = "on_bottom"
    INTERIOR = "interior"


@dataclass(frozen=True)
class LevelCurve:
    """Oriented polyline approximating ``{field = level}``."""

    level: float
    vertices: np.ndarray  # shape (n, 2)
    max_residual: float
    endpoints_kind: tuple[EndKind, EndKind]
    field: str = "v"

    def __post_init__(self) -> None:
        verts = np.asarray(self.vertices, dtype=float)
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)

    @property
    def start(self) -> Point2:
        return Point2(*self.vertices[0])

    @property
    def end(self) -> Point2:
        return Point2(*self.vertices[-1])

    def reversed(self) -> "LevelCurve":
        return LevelCurve(self.level, self.vertices[::-1].copy(), self.max_residual,
                          self.endpoints_kind[::-1], self.field)

    def mirrored(self, level: float) -> "LevelCurve":
        verts = self.vertices * np.array([-1.0, 1.0])
        return LevelCurve(level, verts, self.max_residual, self.endpoints_kind, self.field)

    def spacing(self) -> np.ndarray:
        return np.hypot(*np.diff(self.vertices, axis=0).T)

    def arc_length(self) -> float:
        return float(self.spacing().sum())


# ---------------------------------------------------------------- field access

def value_and_gradient(pot: Potential, fld: str, x: float, y: float) -> tuple[float, float, float]:
    """``(f, f_x, f_y)`` for ``f`` = u or v, from one complex evaluation."""
    f, d = pot.jet(x, y)
    if fld == "u":
        return f.real, d.real, -d.imag
    return f.imag, d.imag, d.real


def field_value(pot: Potential, fld: str, x: float, y: float) -> float:
    return pot.u(x, y) if fld == "u" else pot.v(x, y)


def trace_value(pot: Potential, fld: str, x: float) -> float:
    return pot.trace_u(x) if fld == "u" else pot.trace_v(x)


def hessian(pot: Potential, fld: str, x: float, y: float) -> np.ndarray:
    return pot.hessian_u(x, y) if fld == "u" else pot.hessian_v(x, y)


def correct(pot: Potential, fld: str, level: float, x: float, y: float,
            max_iter: int = 12) -> tuple[float, float, int, float]:
    """Newton projection onto the level set along the gradient.

    Returns ``(x, y, iterations, residual)``.
    """
    it = 0
    f, gx, gy = value_and_gradient(pot, fld, x, y)
    r = f - level
    while it < max_iter and abs(r) > 1e-13 * max(1.0, abs(level)):
        g2 = gx * gx + gy * gy
        if g2 == 0.0:
            break
        x -= r * gx / g2
        y -= r * gy / g2
        if y > 0.0:
            y = 0.0
        it += 1
        f, gx, gy = value_and_gradient(pot, fld, x, y)
        r = f - level
    return x, y, it, abs(r)


def null_directions(h: np.ndarray) -> list[np.ndarray]:
    """The four unit directions along which the harmonic quadratic form vanishes."""
    a, b = h[0, 0], h[0, 1]
    # a (dx^2 - dy^2) + 2 b dx dy = Re[(a - i b) w^2] = 0
    phi = math.atan2(-b, a)
    base = (math.pi / 2 - phi) / 2
    return [np.array([math.cos(base + n * math.pi / 2), math.sin(base + n * math.pi / 2)])
            for n in range(4)]


def _dist_to_segment(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    t = float(np.clip(np.dot(p - a, ab) / max(np.dot(ab, ab), 1e-300), 0.0, 1.0))
    return float(np.hypot(*(a + t * ab - p)))


def _surface_endpoint(pot: Potential, fld: str, level: float, p: np.ndarray,
                      t: np.ndarray, h: float) -> float:
    """Root of the trace near where the ray ``p + s t`` meets ``y = 0``."""
    x_est = p[0] + t[0] * (-p[1] / t[1]) if t[1] > 0 else p[0]

    def g(x):
        return trace_value(pot, fld, x) - level

    lim = math.pi - 1e-6
    for w in (0.25 * h, h, 4 * h, 16 * h):
        a, b = max(x_est - w, -lim), min(x_est + w, lim)
        ga, gb = g(a), g(b)
        if ga == 0.0:
            return a
        if gb == 0.0:
            return b
        if ga * gb < 0:
            return brentq(g, a, b, xtol=1e-14, rtol=1e-15)
    raise NoSignChange(f"no surface crossing of level {level} near x={x_est:.6f}")


def _axis_endpoint(pot: Potential, fld: str, level: float, p: np.ndarray,
                   q: np.ndarray) -> float:
    """Root in y of ``f(0, y) = level`` near the segment p-q that crosses x = 0."""
    s = p[0] / (p[0] - q[0])
    y_est = p[1] + s * (q[1] - p[1])

    def g(y):
        return field_value(pot, fld, 0.0, y) - level

    span = max(abs(q[1] - p[1]), 1e-4)
    if abs(g(y_est)) <= 1e-13 and abs(g(y_est - span)) <= 1e-13:
        # the axis itself lies on this level (odd field, zero level); the other branch is the
        # zero set of f/x, which meets the axis where the x-derivative vanishes
        def gx(y):
            return value_and_gradient(pot, fld, 0.0, y)[1]

        for w in (span, 4 * span, 16 * span):
            a, b = y_est - w, min(y_est + w, -1e-12)
            if gx(a) * gx(b) < 0:
                return brentq(gx, a, b, xtol=1e-14, rtol=1e-15)
        return float(y_est)
    for w in (span, 4 * span, 16 * span):
        a, b = y_est - w, min(y_est + w, 0.0)
        if g(a) * g(b) < 0:
            return brentq(g, a, b, xtol=1e-14, rtol=1e-15)
    raise NoSignChange("level curve crossed the y-axis without a bracketed root")


def trace_level_curve(
    pot: Potential,
    start: Sequence[float],
    level: float,
    direction: Sequence[float],
    *,
    fld: str = "v",
    stops: Sequence[Sequence[float]] = (),
    stop_on_axis: bool | None = None,
    max_length: float = 40.0,
    y_floor: float = -25.0,
    h0: float = 1e-2,
    start_kind: EndKind = EndKind.INTERIOR,
    prefix: Sequence[Sequence[float]] = (),
    exit_test=None,
    partial_ok: bool = False,
) -> LevelCurve:
    """Continue the level curve through ``start`` along ``direction``.

    Terminates on ``y = 0`` (endpoint projected onto the trace), on crossing
    the y-axis when ``stop_on_axis`` (default: SUM family), at any point in
    ``stops`` (stagnation points of matching level), or raises once
    ``max_length`` of arc is spent.  ``exit_test(p, q)`` may return
    ``(endpoint, kind)`` to end the curve where the step p -> q leaves a region.
    With ``partial_ok`` an exhausted length or depth budget ends the curve at
    an ``INTERIOR`` endpoint instead of raising.
    """
    pot = as_potential(pot)
    if stop_on_axis is None:
        stop_on_axis = pot.mode.sign == 1
    p = np.array(start, dtype=float)
    f0 = field_value(pot, fld, *p)
    if abs(f0 - level) >= RESIDUAL_TOL:
        raise ValueError(f"start point is off the level set (residual {abs(f0 - level):.2e})")
    stop_pts = [np.array(s, dtype=float) for s in stops]
    verts = [np.array(v, dtype=float) for v in prefix] + [p.copy()]
    t_prev = np.array(direction, dtype=float)
    t_prev /= np.hypot(*t_prev)
    h = h0
    length = 0.0
    end_kind = None
    axis_side = math.copysign(1.0, p[0]) if p[0] != 0.0 else math.copysign(1.0, t_prev[0])

    while end_kind is None:
        _, gx, gy = value_and_gradient(pot, fld, *p)
        gn = math.hypot(gx, gy)
        if gn < 1e-10:
            raise StallAtStagnation(f"gradient vanishes at ({p[0]:.6f}, {p[1]:.6f})")
        t = np.array([-gy, gx]) / gn
        if np.dot(t, t_prev) < 0:
            t = -t
        while True:
            q = p + h * t
            if q[1] >= -SURFACE_EPS:
                break
            qx, qy, iters, res = correct(pot, fld, level, q[0], q[1])
            q = np.array([qx, qy])
            step = np.hypot(*(q - p))
            ok = res < 1e-10 and iters <= 4 and step < 1.5 * h
            if ok:
                _, gx2, gy2 = value_and_gradient(pot, fld, *q)
                t2 = np.array([-gy2, gx2]) / max(math.hypot(gx2, gy2), 1e-300)
                ok = abs(float(np.dot(t2, t))) > 0.995
            if ok or h <= H_MIN:
                if not ok and res >= 1e-10:
                    raise StallAtStagnation(
                        f"corrector failed near ({p[0]:.6f}, {p[1]:.6f}); residual {res:.2e}")
                break
            h = max(h / 2, H_MIN)

        if q[1] >= -SURFACE_EPS:
            xs = _surface_endpoint(pot, fld, level, p, t, h)
            q = np.array([xs, 0.0])
            end_kind = EndKind.ON_FREE_SURFACE
        elif stop_on_axis and math.copysign(1.0, q[0]) != axis_side and length > 0:
            hit = _stop_hit(stop_pts, p, q, h)
            if hit is not None:
                q, end_kind = hit, EndKind.AT_STAGNATION
            else:
                q = np.array([0.0, _axis_endpoint(pot, fld, level, p, q)])
                end_kind = EndKind.ON_Y_AXIS
        elif length > 1e-2 and (hit := _stop_hit(stop_pts, p, q, h)) is not None:
            q, end_kind = hit, EndKind.AT_STAGNATION
        elif exit_test is not None and (ex := exit_test(p, q)) is not None:
            q, end_kind = np.asarray(ex[0], dtype=float), ex[1]

        seg = float(np.hypot(*(q - p)))
        if end_kind is not None and seg < H_MIN and len(verts) > 1 + len(prefix):
            verts.pop()
            p = verts[-1]
            seg = float(np.hypot(*(q - p)))
        if seg > H_MAX:
            mid = 0.5 * (p + q)
            mx, my, _, _ = correct(pot, fld, level, mid[0], min(mid[1], -SURFACE_EPS))
            verts.append(np.array([mx, my]))
        verts.append(q)
        length += seg
        t_prev = t
        p = q
        if end_kind is None:
            if iters <= 2:
                h = min(2 * h, H_MAX)
            if length > max_length or p[1] < y_floor:
                if partial_ok:
                    end_kind = EndKind.INTERIOR
                    break
                raise BudgetExceeded(f"arc-length budget exhausted at ({p[0]:.4f}, {p[1]:.4f})")
            if math.hypot(abs(p[0]) - math.pi, p[1]) < 5e-3:
                raise BudgetExceeded("level curve ran into a singular point (+-pi, 0)")

    verts_arr = np.array(verts)
    resid = max(abs(field_value(pot, fld, *v) - level) for v in verts_arr)
    return LevelCurve(level, verts_arr, float(resid), (start_kind, end_kind), fld)


def _stop_hit(stop_pts, p, q, h):
    for s in stop_pts:
        if _dist_to_segment(s, p, q) < 0.25 * h or np.hypot(*(q - s)) < 0.5 * h:
            return s.copy()
    return None


def branches_from_saddle(pot: Potential, location: Sequence[float], level: float, *,
                         fld: str = "v", stops: Sequence[Sequence[float]] = (),
                         directions: Sequence[int] = (0, 1, 2, 3),
                         **kw) -> list[LevelCurve]:
    """Trace the level-set branches leaving a saddle along its asymptotic directions."""
    pot = as_potential(pot)
    s = np.array(location, dtype=float)
    dirs = null_directions(hessian(pot, fld, *s))
    out = []
    for n in directions:
        d = dirs[n]
        x, y, _, res = correct(pot, fld, level, *(s + SADDLE_OFFSET * d))
        out.append(trace_level_curve(
            pot, (x, y), level, d, fld=fld, stops=stops, start_kind=EndKind.AT_STAGNATION,
            prefix=[s], **kw))
    return out


def axis_segment(pot: Potential, y_start: float, y_end: float, level: float,
                 kinds: tuple[EndKind, EndKind], max_spacing: float = 0.04) -> LevelCurve:
    """Straight piece of the y-axis (a nodal line of v for the SUM family)."""
    n = max(2, int(math.ceil(abs(y_end - y_start) / max_spacing)) + 1)
    ys = np.linspace(y_start, y_end, n)
    verts = np.column_stack([np.zeros(n), ys])
    resid = max(abs(pot.v(0.0, float(y)) - level) for y in ys)
    return LevelCurve(level, verts, float(resid), kinds, "v")
