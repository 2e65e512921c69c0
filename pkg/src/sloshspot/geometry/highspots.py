"""High spots on the free surface and the nodal line of the potential."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from shapely.geometry import Point
from shapely.prepared import prep

from ..errors import NoSignChange, NoSurfaceZero
from ..kernel import Potential, QuadratureConfig
from .critical import certify_root, refine_root, sign_changes
from .curves import EndKind, LevelCurve, _axis_endpoint, trace_level_curve
from .domains import SloshingDomain

MERGE_TOL = 1e-7
INTERIOR_MARGIN = 1e-9
DEGENERATE_CURVATURE = 1e-9
SCAN_POINTS = 2000


class SpotKind(enum.Enum):
    MAX = "max"
    MIN = "min"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class HighSpot:
    x: float
    kind: SpotKind
    interior: bool
    trace_value: float
    curvature: float  # u_xx(x, 0)
    certified: bool = True


def _classify(d2: float) -> SpotKind:
    if abs(d2) < DEGENERATE_CURVATURE:
        return SpotKind.DEGENERATE
    return SpotKind.MAX if d2 < 0 else SpotKind.MIN


def find_high_spots(domain: SloshingDomain, cfg: QuadratureConfig | None = None) -> list[HighSpot]:
    """Critical points of ``u(x, 0)`` inside F plus the one-sided extrema at its ends."""
    pot = Potential(domain.mode, cfg)
    xl, xr = domain.free_surface
    roots: list[float] = []
    for lo, hi in sign_changes(pot.trace_du, xl, xr, SCAN_POINTS):
        x = refine_root(pot.trace_du, lo, hi)
        if roots and x - roots[-1] < MERGE_TOL:
            continue
        roots.append(x)

    spots = []
    for x in roots:
        if x - xl <= MERGE_TOL or xr - x <= MERGE_TOL:
            continue  # handled as an endpoint below
        d2 = pot.trace_d2u(x)
        spots.append(HighSpot(x, _classify(d2), True, pot.trace_u(x), d2,
                              certify_root(pot.trace_du, x)))

    for x, side in ((xl, -1.0), (xr, 1.0)):
        d1 = pot.trace_du(x)
        d2 = pot.trace_d2u(x)
        if abs(d1) <= DEGENERATE_CURVATURE:
            kind = _classify(d2)
        else:
            # a trace rising towards the endpoint has a one-sided maximum there
            kind = SpotKind.MAX if side * d1 > 0 else SpotKind.MIN
        spots.append(HighSpot(x, kind, False, pot.trace_u(x), d2))
    return sorted(spots, key=lambda s: s.x)


def interior_high_spots(domain: SloshingDomain, cfg: QuadratureConfig | None = None) -> list[HighSpot]:
    return [s for s in find_high_spots(domain, cfg) if s.interior]


# ---------------------------------------------------------------- nodal line of u

def surface_zeros_u(domain: SloshingDomain, cfg: QuadratureConfig | None = None) -> list[float]:
    pot = Potential(domain.mode, cfg)
    xl, xr = domain.free_surface
    a, b = xl + INTERIOR_MARGIN, xr - INTERIOR_MARGIN
    return [refine_root(pot.trace_u, lo, hi) for lo, hi in sign_changes(pot.trace_u, a, b, 800)]


def _bottom_intersection(pot: Potential, level: float, p: np.ndarray) -> np.ndarray:
    """Newton on ``(u, v - level) = 0``; the Jacobian is a rotation-scaling of F'."""
    x, y = p
    for _ in range(30):
        f, d = pot.jet(x, min(y, 0.0))
        r = complex(f.real, f.imag - level)
        # J = [[u_x, u_y], [v_x, v_y]] = [[a, -b], [b, a]] for F' = a + i b
        a, b = d.real, d.imag
        det = a * a + b * b
        dx = (a * r.real + b * r.imag) / det
        dy = (a * r.imag - b * r.real) / det
        x, y = x - dx, y - dy
        if math.hypot(dx, dy) < 1e-14:
            break
    return np.array([x, min(y, 0.0)])


def _domain_exit(pot: Potential, domain: SloshingDomain):
    region = prep(domain.polygon().buffer(1e-9))
    axis_on_boundary = any(c.vertices[:, 0].max() == 0.0 == c.vertices[:, 0].min() for c in domain.bottom)

    def test(p, q):
        if region.contains(Point(q[0], q[1])):
            return None
        if axis_on_boundary and q[0] * p[0] <= 0:
            return np.array([0.0, _axis_endpoint(pot, "u", 0.0, p, q)]), EndKind.ON_Y_AXIS
        return _bottom_intersection(pot, domain.level, 0.5 * (p + q)), EndKind.ON_BOTTOM

    return test


def u_nodal_lines(domain: SloshingDomain, cfg: QuadratureConfig | None = None) -> list[LevelCurve]:
    """Every u = 0 curve entering the domain from its free surface."""
    pot = Potential(domain.mode, cfg)
    stops = [c for c in domain.corners if c.y < 0]
    out = []
    for x in surface_zeros_u(domain, cfg):
        out.append(trace_level_curve(
            pot, (x, 0.0), 0.0, (0.0, -1.0), fld="u", stops=stops, stop_on_axis=False,
            start_kind=EndKind.ON_FREE_SURFACE, exit_test=_domain_exit(pot, domain)))
    return out


def trace_u_nodal_line(domain: SloshingDomain, cfg: QuadratureConfig | None = None) -> LevelCurve:
    """The nodal line of u that starts on F (the first one if there are several)."""
    lines = u_nodal_lines(domain, cfg)
    if not lines:
        raise NoSurfaceZero(f"u(x, 0) does not change sign on F of {domain.case_tag.value}")
    return lines[0]
