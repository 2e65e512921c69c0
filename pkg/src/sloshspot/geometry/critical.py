"""Stagnation points of v and roots/extrema of the free-surface traces."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from ..errors import NoConvergence, NoInteriorMinimum, NoSignChange, NotASaddle
from ..kernel import Family, Point2, Potential
from ..kernel.potential import as_potential

GRAD_TOL = 1e-9
ROOT_XTOL = 1e-12
CERTIFY_HALF_WIDTH = 5e-9


@dataclass(frozen=True)
class StagnationPoint:
    location: Point2
    level: float
    hessian_det: float


def seed_scan(pot: Potential, window: tuple[float, float, float, float],
              grid_n: int = 200) -> list[Point2]:
    """Coarse-grid local minima of ``|grad v|`` inside ``window = (x0, x1, y0, y1)``.

    ``|grad v| = |F'|`` with ``F'`` analytic, so by the minimum-modulus
    principle every interior local minimum on a fine enough grid sits next to
    a zero of ``F'``.  Minima on the window border are discarded.
    """
    pot = as_potential(pot)
    x0, x1, y0, y1 = window
    if y1 > 0:
        raise ValueError("window must lie in the closed lower half-plane")
    xs = np.linspace(x0, x1, grid_n)
    ys = np.linspace(y0, y1, grid_n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    with np.errstate(all="ignore"):
        g = np.abs(pot.field_derivatives(X, Y, order=1)[1])
    g = np.where(np.isfinite(g), g, np.inf)
    c = g[1:-1, 1:-1]
    is_min = np.ones_like(c, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            nb = g[1 + di:grid_n - 1 + di, 1 + dj:grid_n - 1 + dj]
            is_min &= c <= nb
    ii, jj = np.nonzero(is_min)
    seeds = sorted(Point2(float(xs[i + 1]), float(ys[j + 1])) for i, j in zip(ii, jj))
    return seeds


def find_stagnation_point(pot: Potential, guess: Sequence[float], max_iter: int = 50) -> StagnationPoint:
    """Newton iteration on ``grad v = 0`` with the analytic Hessian."""
    pot = as_potential(pot)
    x, y = map(float, guess)
    if y >= 0:
        raise ValueError("guess must lie in the open lower half-plane")
    for _ in range(max_iter):
        gx, gy = pot.grad_v(x, y)
        if math.hypot(gx, gy) < GRAD_TOL:
            break
        h = pot.hessian_v(x, y)
        dx, dy = np.linalg.solve(h, [-gx, -gy])
        x, y = x + dx, y + dy
        if y >= 0:
            raise NoConvergence("Newton iterate left the lower half-plane")
    else:
        raise NoConvergence(f"no stagnation point after {max_iter} Newton steps from {tuple(guess)}")
    # one more step polishes below the acceptance threshold
    h = pot.hessian_v(x, y)
    gx, gy = pot.grad_v(x, y)
    if math.hypot(gx, gy) > 0:
        dx, dy = np.linalg.solve(h, [-gx, -gy])
        x, y = x + dx, y + dy
        h = pot.hessian_v(x, y)
    det = float(np.linalg.det(h))
    if det >= 0:
        raise NotASaddle(f"Hessian determinant {det:.3e} >= 0 at ({x:.6f}, {y:.6f})")
    return StagnationPoint(Point2(x, y), pot.v(x, y), det)


def stagnation_points(pot: Potential, window, grid_n: int = 120) -> list[StagnationPoint]:
    """All saddles reached by Newton from the seeds of ``seed_scan``, deduplicated."""
    pot = as_potential(pot)
    found: list[StagnationPoint] = []
    for seed in seed_scan(pot, window, grid_n):
        try:
            sp = find_stagnation_point(pot, seed)
        except (NoConvergence, NotASaddle):
            continue
        if not any(math.dist(sp.location, f.location) < 1e-6 for f in found):
            found.append(sp)
    return sorted(found, key=lambda s: (s.location.x, s.location.y))


def sign_changes(f: Callable[[float], float], a: float, b: float, n: int) -> list[tuple[float, float]]:
    """Brackets of sign changes of ``f`` on a uniform ``n``-point grid over [a, b]."""
    xs = np.linspace(a, b, n)
    fs = np.array([f(float(x)) for x in xs])
    out = []
    for i in range(n - 1):
        if fs[i] == 0.0:
            out.append((float(xs[i]), float(xs[i])))
        elif fs[i] * fs[i + 1] < 0:
            out.append((float(xs[i]), float(xs[i + 1])))
    return out


def refine_root(f: Callable[[float], float], a: float, b: float) -> float:
    if a == b:
        return a
    return brentq(f, a, b, xtol=ROOT_XTOL, rtol=1e-15, maxiter=200)


def certify_root(f: Callable[[float], float], x: float, half_width: float = CERTIFY_HALF_WIDTH) -> bool:
    """True when ``f`` changes sign across ``[x - w, x + w]`` (or vanishes at x)."""
    fa, fb = f(x - half_width), f(x + half_width)
    return f(x) == 0.0 or fa * fb <= 0.0


def find_surface_zero(pot: Potential, level: float, bracket: tuple[float, float]) -> float:
    """Root of ``v(x, 0) = level`` inside ``bracket`` (brentq: bisection + secant/IQI)."""
    pot = as_potential(pot)
    a, b = bracket

    def f(x):
        return pot.trace_v(x) - level

    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise NoSignChange(f"v(x,0) - {level} does not change sign on [{a}, {b}]")
    return refine_root(f, a, b)


def surface_zeros(pot: Potential, level: float, a: float, b: float, n: int = 800) -> list[float]:
    """All roots of ``v(x, 0) = level`` detected by a dense scan of [a, b]."""
    pot = as_potential(pot)
    def f(x):
        return pot.trace_v(x) - level

    return [refine_root(f, lo, hi) for lo, hi in sign_changes(f, a, b, n)]


def find_trace_min(pot: Potential, x_right: float | None = None, n: int = 800) -> float:
    """``argmin_{x>0} v(x, 0)`` on ``(0, x0)`` for the SUM family."""
    pot = as_potential(pot)
    if pot.mode.family is not Family.SUM:
        raise NoInteriorMinimum("trace minimum search is defined for the SUM family")
    if x_right is None:
        zeros = surface_zeros(pot, 0.0, 1e-3, math.pi - 1e-3)
        if not zeros:
            raise NoInteriorMinimum("v(x, 0) has no positive zero")
        x_right = zeros[0]
    mins = [refine_root(pot.trace_dv, lo, hi)
            for lo, hi in sign_changes(pot.trace_dv, 1e-6, x_right - 1e-9, n)
            if pot.trace_dv(lo) < 0 or (lo == hi and pot.trace_d2v(lo) > 0)]
    mins = [x for x in mins if pot.trace_v(x) < 0]
    if not mins:
        raise NoInteriorMinimum("no interior minimum of v(x, 0) on (0, x0)")
    return min(mins, key=pot.trace_v)
