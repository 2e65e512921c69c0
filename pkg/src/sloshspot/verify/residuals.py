"""Residual checks of the governing equations and of the nodal structure."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage
from scipy.integrate import quad
from shapely import contains_xy

from ..geometry.critical import refine_root, sign_changes
from ..geometry.domains import SloshingDomain
from ..geometry.highspots import u_nodal_lines
from ..kernel import Potential, QuadratureConfig
from ..kernel.potential import as_potential

LAPLACE_STEP = 1e-3
LAPLACE_RTOL = 1e-4
CR_STEP = 1e-4
CR_RTOL = 1e-6
SURFACE_STEPS = (1e-3, 5e-4, 2.5e-4, 1.25e-4)
SURFACE_RTOL = 1e-4
BOTTOM_TOL = 1e-8
ORTHO_RTOL = 1e-6
SINGULAR_MARGIN = 0.05


@dataclass(frozen=True)
class ResidualReport:
    check_name: str
    max_residual: float
    sample_count: int
    tolerance: float
    details: tuple[str, ...] = field(default=(), compare=False)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def as_dict(self) -> dict:
        return {"check": self.check_name, "max_residual": self.max_residual,
                "samples": self.sample_count, "tolerance": self.tolerance,
                "pass": self.passed, "details": list(self.details)}


def interior_grid(window=(0.1, 2.0, -2.0, -0.1), n: int = 30) -> list[tuple[float, float]]:
    x0, x1, y0, y1 = window
    return [(float(x), float(y)) for x in np.linspace(x0, x1, n) for y in np.linspace(y0, y1, n)]


def residual_laplace(mode, points: Sequence[tuple[float, float]] | None = None,
                     cfg: QuadratureConfig | None = None, h: float = LAPLACE_STEP) -> ResidualReport:
    """Five-point Laplacian of u and v, each relative to the field's largest magnitude.

    ``mode`` may also be a ``Potential`` (or a subclass, for negative controls).
    """
    pot = as_potential(mode, cfg)
    pts = interior_grid() if points is None else list(points)
    worst = 0.0
    for fn in (pot.u, pot.v):
        lap, mag = 0.0, 0.0
        for x, y in pts:
            c = fn(x, y)
            s = fn(x + h, y) + fn(x - h, y) + fn(x, y + h) + fn(x, y - h) - 4.0 * c
            lap = max(lap, abs(s) / (h * h))
            mag = max(mag, abs(c))
        worst = max(worst, lap / mag if mag > 0 else lap)
    return ResidualReport("laplace", worst, 2 * len(pts), LAPLACE_RTOL)


def residual_cauchy_riemann(mode, points: Sequence[tuple[float, float]] | None = None,
                            cfg: QuadratureConfig | None = None, h: float = CR_STEP) -> ResidualReport:
    """Central-difference check of ``u_x = v_y`` and ``u_y = -v_x``."""
    pot = as_potential(mode, cfg)
    pts = interior_grid() if points is None else list(points)
    res, mag = 0.0, 0.0
    for x, y in pts:
        ux = (pot.u(x + h, y) - pot.u(x - h, y)) / (2 * h)
        uy = (pot.u(x, y + h) - pot.u(x, y - h)) / (2 * h)
        vx = (pot.v(x + h, y) - pot.v(x - h, y)) / (2 * h)
        vy = (pot.v(x, y + h) - pot.v(x, y - h)) / (2 * h)
        res = max(res, abs(ux - vy), abs(uy + vx))
        mag = max(mag, math.hypot(ux, uy))
    return ResidualReport("cauchy-riemann", res / (1.0 + mag), len(pts), CR_RTOL)


def one_sided_uy(pot: Potential, x: float, steps: Sequence[float] = SURFACE_STEPS) -> float:
    """``u_y(x, 0)`` from backward differences, Richardson-extrapolated (halving steps)."""
    u0 = pot.u(x, 0.0)
    table = [(u0 - pot.u(x, -h)) / h for h in steps]
    for j in range(1, len(steps)):
        f = 2.0**j
        table = [(f * table[i + 1] - table[i]) / (f - 1.0) for i in range(len(table) - 1)]
    return table[0]


def residual_free_surface(mode, xs: Sequence[float], cfg: QuadratureConfig | None = None) -> ResidualReport:
    """``|u_y - nu u| / (1 + |u|)`` on ``y = 0``."""
    pot = as_potential(mode, cfg)
    nu = pot.mode.nu
    worst = 0.0
    for x in xs:
        if math.pi - abs(x) <= SINGULAR_MARGIN:
            warnings.warn(f"x={x} is within {SINGULAR_MARGIN} of a singular point; "
                          "finite differences lose accuracy there", RuntimeWarning, stacklevel=2)
        u = pot.u(x, 0.0)
        worst = max(worst, abs(one_sided_uy(pot, x) - nu * u) / (1.0 + abs(u)))
    return ResidualReport("free surface", worst, len(xs), SURFACE_RTOL)


def residual_bottom(domain: SloshingDomain, pot: Potential | None = None) -> ResidualReport:
    pot = pot or Potential(domain.mode)
    res, n = 0.0, 0
    for c in domain.bottom:
        for x, y in c.vertices:
            res = max(res, abs(pot.v(float(x), float(y)) - domain.level))
            n += 1
    return ResidualReport("bottom", res, n, BOTTOM_TOL)


def check_orthogonality(domain: SloshingDomain, pot: Potential | None = None) -> ResidualReport:
    """``|integral of u(x, 0) over F|`` against ``1e-6 * |F| * max|u|``."""
    pot = pot or Potential(domain.mode)
    xl, xr = domain.free_surface

    def f(x):
        return pot.u(x, 0.0)

    val, _ = quad(f, xl, xr, epsabs=1e-13, epsrel=1e-12, limit=200)
    umax = max(abs(f(float(x))) for x in np.linspace(xl, xr, 201))
    return ResidualReport("orthogonality", abs(val), 201, ORTHO_RTOL * (xr - xl) * umax)


def _interior_mask(domain: SloshingDomain, n: int, inset: float):
    poly = domain.polygon()
    x0, y0, x1, y1 = poly.bounds
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    inner = poly.buffer(-inset)
    return X, Y, contains_xy(inner, X, Y)


def nodal_structure_check(domain: SloshingDomain, grid_n: int = 160,
                          cfg: QuadratureConfig | None = None) -> ResidualReport:
    """Counts violations of the expected nodal picture (tolerance zero).

    * exactly one u = 0 curve starts on F and u has two nodal components;
    * ``v - level`` keeps one sign inside the domain;
    * ``v(x, 0)`` has one interior extremum on F and does not cross the level.
    """
    pot = Potential(domain.mode, cfg)
    notes: list[str] = []

    lines = u_nodal_lines(domain, cfg)
    if len(lines) != 1:
        notes.append(f"{len(lines)} u-nodal curves start on F")

    X, Y, mask = _interior_mask(domain, grid_n, inset=2e-3)
    f = pot.field(X[mask], Y[mask])
    u = np.zeros(X.shape)
    u[mask] = f.real
    comps = sum(ndimage.label(mask & (s * u > 0))[1] for s in (1.0, -1.0))
    if comps != 2:
        notes.append(f"u has {comps} nodal components on the grid")

    dv = f.imag - domain.level
    if not (np.all(dv > 0) or np.all(dv < 0)):
        notes.append(f"v - level changes sign at {int(min((dv > 0).sum(), (dv < 0).sum()))} grid points")

    xl, xr = domain.free_surface
    a, b = xl + 1e-7, xr - 1e-7
    ext = [refine_root(pot.trace_dv, lo, hi) for lo, hi in sign_changes(pot.trace_dv, a, b, 800)]
    if len(ext) != 1:
        notes.append(f"v(x, 0) has {len(ext)} interior extrema on F")
    tv = np.array([pot.trace_v(float(x)) for x in np.linspace(a, b, 400)]) - domain.level
    if not (np.all(tv > 0) or np.all(tv < 0)):
        notes.append("v(x, 0) crosses the level inside F")

    return ResidualReport("nodal structure", float(len(notes)), int(mask.sum()), 0.0, tuple(notes))
