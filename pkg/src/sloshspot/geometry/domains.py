"""Assembly of the sloshing domains bounded by level lines of v."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from shapely.geometry import LinearRing, Point, Polygon

from ..errors import AssemblyFailure, DegenerateGradient, LevelOutOfRange
from ..kernel import Family, Mode, Point2, Potential, QuadratureConfig, make_mode
from .critical import (
    StagnationPoint,
    find_stagnation_point,
    find_trace_min,
    stagnation_points,
    surface_zeros,
)
from .curves import EndKind, LevelCurve, axis_segment, branches_from_saddle, trace_level_curve

CLOSURE_TOL = 1e-6
SCAN_WINDOW = (-3.1, 3.1, -6.0, -0.02)


class CaseTag(enum.Enum):
    W32 = "w32"
    W32_PRIME = "w32_prime"
    W52 = "w52"
    W52_COMPANION = "w52_companion"
    W72 = "w72"
    W3 = "w3"
    W2 = "w2"
    SMOOTH_VARIANT = "smooth_variant"

    @classmethod
    def parse(cls, value: "CaseTag | str") -> "CaseTag":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


# case -> (nu, family)
CASE_MODES: dict[CaseTag, tuple[float, Family]] = {
    CaseTag.W32: (1.5, Family.SUM),
    CaseTag.W32_PRIME: (1.5, Family.SUM),
    CaseTag.W52: (2.5, Family.SUM),
    CaseTag.W52_COMPANION: (2.5, Family.SUM),
    CaseTag.W72: (3.5, Family.SUM),
    CaseTag.W3: (3.0, Family.DIFF),
    CaseTag.W2: (2.0, Family.DIFF),
    CaseTag.SMOOTH_VARIANT: (1.5, Family.SUM),
}

REFERENCE_CASES = (CaseTag.W32, CaseTag.W52, CaseTag.W72, CaseTag.W3, CaseTag.W2)


def case_mode(tag: CaseTag | str) -> Mode:
    nu, fam = CASE_MODES[CaseTag.parse(tag)]
    return make_mode(nu, fam)


@dataclass(frozen=True)
class SloshingDomain:
    """Fluid cross-section bounded by ``F = (x_left, x_right) x {0}`` and a bottom.

    ``bottom`` is ordered so that walking ``F`` left to right and then every
    bottom curve in turn traverses the boundary once; the first curve starts
    at ``(x_right, 0)`` and the last one ends at ``(x_left, 0)``.
    """

    mode: Mode
    free_surface: tuple[float, float]
    bottom: tuple[LevelCurve, ...]
    corners: tuple[Point2, ...]
    case_tag: CaseTag
    level: float
    mirrored: bool = False
    # extra level-set pieces that are drawn but are not boundary (dotted in figures)
    extras: tuple[LevelCurve, ...] = field(default=(), compare=False)

    @property
    def x_left(self) -> float:
        return self.free_surface[0]

    @property
    def x_right(self) -> float:
        return self.free_surface[1]

    def boundary_loop(self) -> np.ndarray:
        """Closed polyline (first vertex repeated last), free surface first."""
        pieces = [np.array([[self.x_left, 0.0], [self.x_right, 0.0]])]
        pieces += [c.vertices[1:] for c in self.bottom]
        loop = np.vstack(pieces)
        loop[-1] = loop[0]
        return loop

    def polygon(self) -> Polygon:
        return Polygon(self.boundary_loop())

    def bottom_vertices(self) -> np.ndarray:
        return np.vstack([c.vertices for c in self.bottom])

    def contains(self, x: float, y: float) -> bool:
        return self.polygon().contains(Point(x, y))

    def closure_gap(self) -> float:
        """Largest mismatch between consecutive boundary pieces."""
        ends = [np.array([self.x_right, 0.0])]
        gap = 0.0
        for c in self.bottom:
            gap = max(gap, float(np.hypot(*(c.vertices[0] - ends[-1]))))
            ends.append(c.vertices[-1])
        gap = max(gap, float(np.hypot(*(ends[-1] - np.array([self.x_left, 0.0])))))
        return gap

    def is_simple(self) -> bool:
        return LinearRing(self.boundary_loop()[:-1]).is_simple


def validate_domain(d: SloshingDomain) -> SloshingDomain:
    gap = d.closure_gap()
    if gap > CLOSURE_TOL:
        raise AssemblyFailure(f"{d.case_tag.value}: boundary does not close (gap {gap:.2e})")
    if not d.is_simple():
        raise AssemblyFailure(f"{d.case_tag.value}: boundary self-intersects")
    if not d.x_left < d.x_right:
        raise AssemblyFailure(f"{d.case_tag.value}: empty free surface")
    if not (-math.pi < d.x_left and d.x_right < math.pi):
        raise AssemblyFailure(f"{d.case_tag.value}: free surface reaches a singular point")
    return d


def _axis_saddle(pot: Potential, sp: StagnationPoint) -> StagnationPoint:
    # by symmetry F' is purely imaginary (SUM) or real (DIFF) on the axis,
    # so the saddle sits exactly on it; polish y by Newton on F'(iy) = 0
    y = sp.location.y
    for _ in range(30):
        d1 = pot.complex_derivative(0.0, y, 1)
        d2 = pot.complex_derivative(0.0, y, 2)
        step = (d1 / (1j * d2)).real
        y -= step
        if abs(step) < 1e-15 * max(1.0, abs(y)):
            break
    h = pot.hessian_v(0.0, y)
    return StagnationPoint(Point2(0.0, y), pot.v(0.0, y), float(np.linalg.det(h)))


def find_saddles(pot: Potential) -> list[StagnationPoint]:
    """Saddles of v in the scan window; those within 1e-8 of the axis are snapped onto it."""
    out = []
    for sp in stagnation_points(pot, SCAN_WINDOW):
        if abs(sp.location.x) < 1e-8:
            sp = _axis_saddle(pot, sp)
        if not any(math.dist(sp.location, o.location) < 1e-8 for o in out):
            out.append(sp)
    return out


def _surface_branches(pot: Potential, sp: StagnationPoint, stops=()) -> list[LevelCurve]:
    """Branches from a saddle that reach the free surface at x > 0."""
    out = []
    for n in range(4):
        try:
            c = branches_from_saddle(pot, sp.location, sp.level, stops=stops, directions=[n])[0]
        except Exception:  # branches running along the axis or into the far field
            continue
        if c.endpoints_kind[1] is EndKind.ON_FREE_SURFACE and c.end.x > 0:
            out.append(c)
    return out


def _all_branches(pot: Potential, sp: StagnationPoint, stops=()) -> list[LevelCurve]:
    out = []
    for n in range(4):
        try:
            out.append(branches_from_saddle(pot, sp.location, sp.level, stops=stops, directions=[n])[0])
        except Exception:
            continue
    return out


def _axis_branch(pot: Potential, sp: StagnationPoint) -> LevelCurve:
    """The v = 0 branch leaving an axis saddle into x > 0 and ending on y = 0."""
    cands = [c for c in _surface_branches(pot, sp) if c.vertices[1, 0] > 0]
    if len(cands) != 1:
        raise AssemblyFailure(f"expected one branch into x > 0 from {sp.location}, got {len(cands)}")
    return cands[0]


def _build_w32(pot: Potential) -> SloshingDomain:
    axis = [s for s in find_saddles(pot) if s.location.x == 0.0]
    if len(axis) != 1:
        raise AssemblyFailure(f"W32 expects one axis saddle, found {len(axis)}")
    s = axis[0]
    arc = _axis_branch(pot, s)
    x0 = arc.end.x
    seg = axis_segment(pot, s.location.y, 0.0, 0.0, (EndKind.AT_STAGNATION, EndKind.ON_FREE_SURFACE))
    return SloshingDomain(pot.mode, (0.0, x0), (arc.reversed(), seg),
                          (s.location, Point2(0.0, 0.0)), CaseTag.W32, 0.0)


def _build_w52(pot: Potential, companion: bool) -> SloshingDomain:
    axis = sorted((s for s in find_saddles(pot) if s.location.x == 0.0), key=lambda s: -s.location.y)
    if len(axis) != 2:
        raise AssemblyFailure(f"W52 expects two axis saddles, found {len(axis)}")
    upper, lower = axis
    a = _axis_branch(pot, upper)
    b = _axis_branch(pot, lower)
    if not a.end.x < b.end.x:
        raise AssemblyFailure("W52 arcs are not nested as expected")
    if companion:
        seg = axis_segment(pot, upper.location.y, 0.0, 0.0,
                           (EndKind.AT_STAGNATION, EndKind.ON_FREE_SURFACE))
        return SloshingDomain(pot.mode, (0.0, a.end.x), (a.reversed(), seg),
                              (upper.location, Point2(0.0, 0.0)), CaseTag.W52_COMPANION, 0.0)
    seg = axis_segment(pot, lower.location.y, upper.location.y, 0.0,
                       (EndKind.AT_STAGNATION, EndKind.AT_STAGNATION))
    return SloshingDomain(pot.mode, (a.end.x, b.end.x), (b.reversed(), seg, a),
                          (lower.location, upper.location), CaseTag.W52, 0.0)


def _build_saddle_level(pot: Potential, tag: CaseTag) -> SloshingDomain:
    # the domain is bounded by the two saddle branches that reach y = 0
    # furthest to the right; other branches are kept as non-boundary extras
    saddles = [s for s in find_saddles(pot) if s.location.x >= 0.0 and abs(s.level) > 1e-8]
    if len(saddles) != 1:
        raise AssemblyFailure(f"{tag.value}: expected one nonzero-level saddle, found {len(saddles)}")
    s = saddles[0]
    mirror_stop = [(-s.location.x, s.location.y)] if s.location.x > 0 else []
    branches = _all_branches(pot, s, stops=mirror_stop)
    surf = sorted((c for c in branches
                   if c.endpoints_kind[1] is EndKind.ON_FREE_SURFACE and c.end.x > 0),
                  key=lambda c: c.end.x)
    if len(surf) < 2:
        raise AssemblyFailure(f"{tag.value}: fewer than two saddle branches reach y = 0")
    left, right = surf[-2], surf[-1]
    extras = tuple(c for c in branches if c is not left and c is not right)
    return SloshingDomain(pot.mode, (left.end.x, right.end.x), (right.reversed(), left),
                          (s.location,), tag, s.level, extras=extras)


def build_domain(mode: Mode, case_tag: CaseTag | str, cfg: QuadratureConfig | None = None) -> SloshingDomain:
    """Assemble one of the fluid domains for its mode."""
    tag = CaseTag.parse(case_tag)
    nu, fam = CASE_MODES[tag]
    if tag is CaseTag.SMOOTH_VARIANT:
        raise ValueError("use smooth_variant(mode, c) for the smooth-bottom domain")
    if mode.family is not fam or abs(mode.nu - nu) > 1e-12:
        raise ValueError(f"case {tag.value} needs nu={nu} ({fam.value}), got {mode}")
    pot = Potential(mode, cfg)
    if tag is CaseTag.W32:
        d = _build_w32(pot)
    elif tag is CaseTag.W32_PRIME:
        d = mirror_domain(_build_w32(pot))
    elif tag in (CaseTag.W52, CaseTag.W52_COMPANION):
        d = _build_w52(pot, tag is CaseTag.W52_COMPANION)
    else:
        d = _build_saddle_level(pot, tag)
    return validate_domain(d)


def mirror_domain(d: SloshingDomain) -> SloshingDomain:
    """Reflection ``x -> -x``.  The stream level flips sign for the odd (SUM) v."""
    level = -d.level if d.mode.family is Family.SUM else d.level
    level = level + 0.0  # no negative zero
    bottom = tuple(c.reversed().mirrored(-c.level + 0.0 if d.mode.family is Family.SUM else c.level)
                   for c in reversed(d.bottom))
    extras = tuple(c.mirrored(-c.level + 0.0 if d.mode.family is Family.SUM else c.level)
                   for c in d.extras)
    corners = tuple(Point2(-p.x + 0.0, p.y) for p in d.corners)
    tag = d.case_tag
    if tag is CaseTag.W32:
        tag = CaseTag.W32_PRIME
    elif tag is CaseTag.W32_PRIME:
        tag = CaseTag.W32
    return replace(d, free_surface=(-d.x_right + 0.0, -d.x_left + 0.0), bottom=bottom,
                   corners=corners, case_tag=tag, level=level, mirrored=not d.mirrored,
                   extras=extras)


def smooth_variant(mode: Mode, c: float, cfg: QuadratureConfig | None = None) -> SloshingDomain:
    """Domain under the level line ``v = -c`` inside W32 (smooth bottom, no corners)."""
    if mode.family is not Family.SUM or abs(mode.nu - 1.5) > 1e-12:
        raise ValueError("the smooth-bottom variant is built for nu = 3/2 (SUM)")
    pot = Potential(mode, cfg)
    x0 = surface_zeros(pot, 0.0, 1e-3, math.pi - 1e-3)[0]
    xn = find_trace_min(pot, x0)
    vmin = pot.trace_v(xn)
    if not 0.0 < c < -vmin:
        raise LevelOutOfRange(f"c must lie in (0, {-vmin:.6f}), got {c}")
    level = -c
    left = surface_zeros(pot, level, 1e-9, xn)
    right = surface_zeros(pot, level, xn, x0)
    if len(left) != 1 or len(right) != 1:
        raise AssemblyFailure("level line v = -c does not meet y = 0 exactly twice")
    xa, xb = left[0], right[0]
    curve = trace_level_curve(pot, (xb, 0.0), level, (0.0, -1.0), stop_on_axis=True,
                              start_kind=EndKind.ON_FREE_SURFACE)
    if curve.endpoints_kind[1] is not EndKind.ON_FREE_SURFACE or abs(curve.end.x - xa) > CLOSURE_TOL:
        raise AssemblyFailure(f"level line from x={xb:.6f} did not return to x={xa:.6f}")
    d = SloshingDomain(mode, (xa, xb), (curve,), (), CaseTag.SMOOTH_VARIANT, level)
    return validate_domain(d)


# ---------------------------------------------------------------- bulbousness

@dataclass(frozen=True)
class SideVerdict:
    side: str
    bulbous: bool
    slope: float | None  # y'(x_end) of the bottom as a graph y(x); None on the y-axis
    local_exit: bool | None
    global_exit: bool

    @property
    def john_compliant(self) -> bool:
        return not self.bulbous


def check_bulbous(d: SloshingDomain, cfg: QuadratureConfig | None = None) -> dict[str, SideVerdict]:
    """Per-side John's-condition test.

    Locally, the bottom leaving ``(x_end, 0)`` is the graph of ``y(x)`` with
    ``y' = -v_x/v_y``; the right side leaves the strip iff ``y' < 0`` and the
    left side iff ``y' > 0``.  Globally, any bottom vertex beyond the vertical
    line through the endpoint counts as an exit.
    """
    pot = Potential(d.mode, cfg)
    verts = d.bottom_vertices()
    out = {}
    for side, x_end in (("left", d.x_left), ("right", d.x_right)):
        if side == "right":
            global_exit = bool(verts[:, 0].max() > x_end + 1e-9)
        else:
            global_exit = bool(verts[:, 0].min() < x_end - 1e-9)
        on_axis = x_end == 0.0
        slope = local = None
        if not on_axis:
            vx, vy = pot.trace_dv(x_end), pot.trace_du(x_end)
            if abs(vy) < 1e-12:
                raise DegenerateGradient(f"v_y vanishes at the {side} endpoint x={x_end}")
            slope = -vx / vy
            local = slope < 0 if side == "right" else slope > 0
        bulbous = global_exit or bool(local)
        out[side] = SideVerdict(side, bulbous, slope, local, global_exit)
    return out
