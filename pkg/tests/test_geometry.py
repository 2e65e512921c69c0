import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import LineString

from sloshspot.errors import (
    BudgetExceeded,
    LevelOutOfRange,
    NoConvergence,
    NoInteriorMinimum,
    NoSignChange,
    NoSurfaceZero,
    NotASaddle,
)
from sloshspot.geometry import (
    CaseTag,
    EndKind,
    SpotKind,
    branches_from_saddle,
    build_domain,
    case_mode,
    check_bulbous,
    find_high_spots,
    find_stagnation_point,
    find_surface_zero,
    find_trace_min,
    mirror_domain,
    seed_scan,
    smooth_variant,
    stagnation_points,
    trace_level_curve,
    trace_u_nodal_line,
    u_nodal_lines,
)
from sloshspot.geometry.critical import certify_root
from sloshspot.geometry.curves import H_MAX, H_MIN
from sloshspot.geometry.highspots import HighSpot, _classify
from sloshspot.kernel import Potential, make_mode

PI = math.pi
X0 = 2.132704154399596
ALL_TAGS = list(CaseTag)


def _curves(d):
    return list(d.bottom) + list(d.extras)


# ---------------------------------------------------------------- stagnation points

@pytest.mark.parametrize("nu,fam,guess,level", [
    (3.5, "sum", (1.17, -1.78), -0.023145),
    (3.0, "diff", (1.04, -1.95), -0.150899),
    (2.0, "diff", (0.01, -2.66), -0.185125),
])
def test_saddle_levels(nu, fam, guess, level):
    sp = find_stagnation_point(make_mode(nu, fam), guess)
    assert sp.level == pytest.approx(level, abs=5e-7)
    assert sp.hessian_det < 0
    g = Potential(make_mode(nu, fam)).grad_v(*sp.location)
    assert math.hypot(*g) < 1e-9


def test_saddle_of_three_halves_on_axis(p32):
    sp = find_stagnation_point(p32, (0.02, -4.6))
    assert sp.location.x == pytest.approx(0.0, abs=1e-9)
    assert sp.location.y == pytest.approx(-4.646097, abs=1e-6)
    assert sp.level == pytest.approx(0.0, abs=1e-12)


def test_stagnation_point_guess_must_be_below_surface(p32):
    with pytest.raises(ValueError):
        find_stagnation_point(p32, (1.0, 0.0))


def test_newton_failure_is_reported(p32):
    # far from any saddle and with too few iterations
    with pytest.raises((NoConvergence, NotASaddle)):
        find_stagnation_point(p32, (1.0, -0.5), max_iter=2)


def test_seed_scan_finds_axis_saddle(m32):
    seeds = seed_scan(m32, (-3.2, 3.2, -6.0, 0.0), 200)
    assert seeds == sorted(seeds)
    assert any(abs(s.x) < 0.05 and abs(s.y + 4.646) < 0.05 for s in seeds)


def test_seed_scan_two_saddles_for_five_halves():
    seeds = seed_scan(make_mode(2.5, "sum"), (-3.2, 3.2, -4.0, 0.0), 200)
    ys = sorted({round(s.y, 1) for s in seeds})
    assert len(ys) == 2
    sps = stagnation_points(make_mode(2.5, "sum"), (-3.1, 3.1, -4.0, -0.02))
    assert [round(s.location.y, 6) for s in sps] == [-3.383433, -2.779771]


def test_seed_scan_empty_without_critical_point(m32):
    assert seed_scan(m32, (0.5, 1.5, -1.0, -0.5), 50) == []


def test_seed_scan_rejects_window_above_surface(m32):
    with pytest.raises(ValueError):
        seed_scan(m32, (0.0, 1.0, -1.0, 0.5), 10)


# ---------------------------------------------------------------- surface zeros and trace minimum

def test_surface_zero_three_halves(m32):
    assert find_surface_zero(m32, 0.0, (0.1, 3.1)) == pytest.approx(2.132704, abs=2e-6)
    assert find_surface_zero(m32, 0.0, (-3.1, -0.1)) == pytest.approx(-X0, abs=1e-10)


def test_surface_zeros_two():
    m = make_mode(2.0, "diff")
    assert find_surface_zero(m, -0.185125, (0.5, 1.5)) == pytest.approx(0.774530, abs=2e-5)
    assert find_surface_zero(m, -0.185125, (1.5, 3.0)) == pytest.approx(2.387143, abs=2e-5)


def test_surface_zero_without_sign_change(m32):
    with pytest.raises(NoSignChange):
        find_surface_zero(m32, 0.0, (0.1, 1.0))


def test_surface_zero_is_certified(m32):
    x = find_surface_zero(m32, 0.0, (0.1, 3.1))
    assert certify_root(Potential(m32).trace_v, x)


def test_trace_min(p32):
    xn = find_trace_min(p32)
    assert 0 < xn < X0
    assert abs(p32.trace_dv(xn)) < 1e-9
    assert p32.trace_u(xn - 1e-6) * p32.trace_u(xn + 1e-6) < 0
    assert xn == pytest.approx(1.0574586, abs=1e-7)


def test_trace_min_needs_sum_family():
    with pytest.raises(NoInteriorMinimum):
        find_trace_min(make_mode(2.0, "diff"))


# ---------------------------------------------------------------- level curves

def test_level_curve_from_endpoint_reaches_axis(m32):
    c = trace_level_curve(m32, (X0, 0.0), 0.0, (0.0, -1.0), start_kind=EndKind.ON_FREE_SURFACE)
    assert c.endpoints_kind == (EndKind.ON_FREE_SURFACE, EndKind.ON_Y_AXIS)
    assert c.end.x == 0.0
    assert c.end.y == pytest.approx(-4.646097, abs=1e-5)
    assert c.max_residual <= 1e-8


def test_level_curve_stops_at_known_saddle(m32):
    sp = (0.0, -4.6460970)
    c = trace_level_curve(m32, (X0, 0.0), 0.0, (0.0, -1.0), stops=[sp])
    assert c.endpoints_kind[1] is EndKind.AT_STAGNATION


def test_level_curve_along_axis_is_straight(m32):
    c = trace_level_curve(m32, (0.0, -1.0), 0.0, (0.0, -1.0), max_length=2.0, partial_ok=True)
    assert np.all(c.vertices[:, 0] == 0.0)
    assert np.all(np.diff(c.vertices[:, 1]) < 0)


def test_level_curve_budget(m32):
    with pytest.raises(BudgetExceeded):
        trace_level_curve(m32, (0.0, -1.0), 0.0, (0.0, -1.0), max_length=2.0)


def test_level_curve_start_must_be_on_level(m32):
    with pytest.raises(ValueError):
        trace_level_curve(m32, (1.0, -1.0), 0.0, (0.0, -1.0))


def test_saddle_branches_seven_halves():
    m = make_mode(3.5, "sum")
    sp = find_stagnation_point(m, (1.17, -1.78))
    branches = branches_from_saddle(m, sp.location, sp.level)
    ends = sorted(round(b.end.x, 4) for b in branches if b.endpoints_kind[1] is EndKind.ON_FREE_SURFACE)
    assert 1.7899 in ends and 2.7116 in ends
    for b in branches:
        assert b.max_residual <= 1e-8


@pytest.mark.parametrize("tag", ALL_TAGS)
def test_curve_invariants(domains, tag):
    d = domains[tag]
    pot = Potential(d.mode)
    for c in _curves(d) + u_nodal_lines(d):
        s = c.spacing()
        assert s.min() >= H_MIN * (1 - 1e-9)
        assert s.max() <= 5e-2
        assert c.max_residual <= 1e-8
        fn = pot.v if c.field == "v" else pot.u
        worst = max(abs(fn(*v) - c.level) for v in c.vertices)
        assert worst <= c.max_residual + 1e-15
        assert LineString(c.vertices).is_simple


def test_curve_reversal_and_mirror(domains):
    c = domains[CaseTag.W32].bottom[0]
    assert np.array_equal(c.reversed().reversed().vertices, c.vertices)
    assert c.reversed().endpoints_kind == c.endpoints_kind[::-1]
    m = c.mirrored(-c.level)
    assert np.array_equal(m.vertices[:, 0], -c.vertices[:, 0])
    with pytest.raises(ValueError):
        c.vertices[0, 0] = 1.0


# ---------------------------------------------------------------- domains

@pytest.mark.parametrize("tag", ALL_TAGS)
def test_domain_closes_and_is_simple(domains, tag):
    d = domains[tag]
    assert d.closure_gap() < 1e-6
    assert d.is_simple()
    assert -PI < d.x_left < d.x_right < PI
    pot = Potential(d.mode)
    for x, y in d.bottom_vertices():
        assert abs(pot.v(x, y) - d.level) <= 1e-8


def test_w32_structure(domains):
    d = domains[CaseTag.W32]
    assert d.free_surface[0] == 0.0
    assert d.x_right == pytest.approx(2.132704, abs=2e-6)
    assert len(d.bottom) == 2
    assert np.all(d.bottom[1].vertices[:, 0] == 0.0)
    assert d.corners[0].y == pytest.approx(-4.646097, abs=1e-6)


def test_w52_left_emanation(domains):
    d = domains[CaseTag.W52]
    assert d.x_left == pytest.approx(1.249757, abs=2e-5)
    assert d.x_right == pytest.approx(2.539769, abs=2e-5)


def test_w72_right_endpoint_is_spot_plus_gap(domains):
    assert domains[CaseTag.W72].x_right == pytest.approx(2.685549 + 0.026076, abs=5e-5)


def test_w3_excludes_dotted_branches(domains):
    d = domains[CaseTag.W3]
    assert len(d.bottom) == 2
    assert len(d.extras) == 2
    # one extra runs to the mirror saddle, the other reaches the surface left of F
    kinds = sorted(c.endpoints_kind[1].value for c in d.extras)
    assert kinds == ["at_stagnation", "on_free_surface"]


def test_build_domain_rejects_wrong_mode():
    with pytest.raises(ValueError):
        build_domain(make_mode(2.5, "sum"), CaseTag.W32)
    with pytest.raises(ValueError):
        build_domain(make_mode(1.5, "sum"), CaseTag.SMOOTH_VARIANT)


def test_mirror(domains, spots):
    d = domains[CaseTag.W32]
    m = mirror_domain(d)
    assert m.free_surface == (-d.x_right, 0.0)
    assert m.case_tag is CaseTag.W32_PRIME
    mm = mirror_domain(m)
    for a, b in zip(mm.bottom, d.bottom):
        assert np.array_equal(a.vertices, b.vertices)
    assert mm.free_surface == d.free_surface


def test_mirror_w52_spots(domains):
    m = mirror_domain(domains[CaseTag.W52])
    xs = sorted(s.x for s in find_high_spots(m) if s.interior)
    assert xs[0] == pytest.approx(-2.503159, abs=2e-5)
    assert xs[1] == pytest.approx(-1.257429, abs=2e-5)


def test_mirror_w72_keeps_level(domains):
    d = domains[CaseTag.W72]
    m = mirror_domain(d)
    assert m.level == -d.level
    assert m.closure_gap() < 1e-6 and m.is_simple()


# ---------------------------------------------------------------- smooth variant

def test_smooth_variant_has_no_corners(domains, spots):
    d = domains[CaseTag.SMOOTH_VARIANT]
    assert d.corners == ()
    assert d.level == -0.2
    inner = [s for s in spots[CaseTag.SMOOTH_VARIANT] if s.interior]
    assert len(inner) == 1 and inner[0].kind is SpotKind.MIN
    assert inner[0].x == pytest.approx(2.077836, abs=2e-5)


def test_smooth_variant_half_depth(p32, m32):
    vmin = p32.trace_v(find_trace_min(p32))
    d = smooth_variant(m32, 0.5 * -vmin)
    assert d.closure_gap() < 1e-6
    assert 0 < d.x_left < d.x_right < X0


def test_smooth_variant_shrinking_level(m32):
    prev = None
    for c in (1e-2, 1e-3, 1e-4):
        d = smooth_variant(m32, c)
        gap = abs(d.x_left) + abs(d.x_right - X0)
        if prev is not None:
            assert gap < prev
        prev = gap
    assert prev < 1e-3


@pytest.mark.parametrize("c", [0.0, -0.1, 10.0])
def test_smooth_variant_level_range(m32, c):
    with pytest.raises(LevelOutOfRange):
        smooth_variant(m32, c)


# ---------------------------------------------------------------- high spots

@pytest.mark.parametrize("tag", ALL_TAGS)
def test_high_spot_invariants(domains, spots, tag):
    d = domains[tag]
    pot = Potential(d.mode)
    sp = spots[tag]
    assert [s.x for s in sp] == sorted(s.x for s in sp)
    for s in sp:
        assert s.interior == (d.x_left + 1e-9 < s.x < d.x_right - 1e-9)
        if s.interior:
            assert abs(pot.trace_du(s.x)) < 1e-9
            assert s.certified
            assert (s.kind is SpotKind.MAX) == (pot.trace_d2u(s.x) < 0)
        assert s.trace_value == pot.trace_u(s.x)


def test_w32_spots(spots):
    sp = spots[CaseTag.W32]
    assert sp[0].x == 0.0 and sp[0].kind is SpotKind.MAX and not sp[0].interior
    inner = [s for s in sp if s.interior]
    assert len(inner) == 1 and inner[0].kind is SpotKind.MIN
    assert inner[0].x == pytest.approx(2.077836, abs=2e-5)


def test_w52_spots(spots):
    inner = [s for s in spots[CaseTag.W52] if s.interior]
    assert [s.kind for s in inner] == [SpotKind.MAX, SpotKind.MIN]
    assert inner[0].x == pytest.approx(1.257429, abs=2e-5)
    assert inner[1].x == pytest.approx(2.503159, abs=2e-5)


def test_w3_spots(spots):
    inner = [s.x for s in spots[CaseTag.W3] if s.interior]
    assert inner == pytest.approx([1.5715649, 2.6095109], abs=2e-5)


def test_companion_has_boundary_spots_only(spots):
    assert not any(s.interior for s in spots[CaseTag.W52_COMPANION])


def test_degenerate_curvature_is_flagged():
    assert _classify(1e-12) is SpotKind.DEGENERATE
    assert _classify(-1.0) is SpotKind.MAX
    assert isinstance(HighSpot(0.0, SpotKind.DEGENERATE, True, 0.0, 0.0), HighSpot)


# ---------------------------------------------------------------- nodal lines of u

def test_w32_nodal_line(domains, p32):
    c = trace_u_nodal_line(domains[CaseTag.W32])
    assert c.start.x == pytest.approx(find_trace_min(p32), abs=1e-9)
    assert c.endpoints_kind == (EndKind.ON_FREE_SURFACE, EndKind.ON_Y_AXIS)
    assert c.end.x == 0.0


def test_w2_nodal_line_ends_at_saddle(domains):
    d = domains[CaseTag.W2]
    c = trace_u_nodal_line(d)
    assert c.endpoints_kind[1] is EndKind.AT_STAGNATION
    assert c.end == pytest.approx(tuple(d.corners[0]), abs=1e-12)


@pytest.mark.parametrize("tag", [CaseTag.W32, CaseTag.W52, CaseTag.W72, CaseTag.W3, CaseTag.W2])
def test_single_nodal_line(domains, tag):
    lines = u_nodal_lines(domains[tag])
    assert len(lines) == 1
    assert lines[0].endpoints_kind[1] in (EndKind.ON_BOTTOM, EndKind.ON_Y_AXIS, EndKind.AT_STAGNATION)
    assert lines[0].max_residual <= 1e-8


def test_nodal_line_ends_on_bottom_level(domains):
    d = domains[CaseTag.W72]
    c = trace_u_nodal_line(d)
    assert c.endpoints_kind[1] is EndKind.ON_BOTTOM
    pot = Potential(d.mode)
    assert abs(pot.v(*c.end) - d.level) < 1e-10


def test_no_surface_zero(domains):
    from dataclasses import replace

    d = domains[CaseTag.W32]
    narrow = replace(d, free_surface=(1.5, 2.0))
    with pytest.raises(NoSurfaceZero):
        trace_u_nodal_line(narrow)


# ---------------------------------------------------------------- bulbousness

def test_bulbous_verdicts(domains):
    expect = {
        CaseTag.W32: (False, True),
        CaseTag.W32_PRIME: (True, False),
        CaseTag.W52: (True, True),
        CaseTag.W52_COMPANION: (False, False),
        CaseTag.W72: (True, True),
        CaseTag.W3: (True, True),
        CaseTag.W2: (True, True),
    }
    for tag, (left, right) in expect.items():
        v = check_bulbous(domains[tag])
        assert (v["left"].bulbous, v["right"].bulbous) == (left, right), tag


def test_w32_slope_formula(domains, p32):
    v = check_bulbous(domains[CaseTag.W32])["right"]
    x0 = domains[CaseTag.W32].x_right
    formula = 3 * (PI**2 - x0**2) / (4 * x0) * p32.trace_u(x0)
    assert v.slope < 0
    assert v.slope == pytest.approx(formula, abs=1e-7)


# ---------------------------------------------------------------- properties

@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.55))
def test_smooth_variant_closes_for_admissible_levels(c):
    d = smooth_variant(make_mode(1.5, "sum"), c)
    assert d.closure_gap() < 1e-6 and d.is_simple()
    assert all(abs(Potential(d.mode).v(*v) + c) <= 1e-8 for v in d.bottom[0].vertices[::10])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([t for t in CaseTag if t is not CaseTag.SMOOTH_VARIANT]),
       st.floats(0.0, 1.0))
def test_points_inside_have_level_sign(domains, tag, frac):
    # points just below F inside the domain lie on one side of the level
    d = domains[tag]
    x = d.x_left + (0.05 + 0.9 * frac) * (d.x_right - d.x_left)
    y = -1e-3
    if d.contains(x, y):
        pot = Potential(d.mode)
        mid = 0.5 * (d.x_left + d.x_right)
        ref = pot.v(mid, -1e-3) - d.level if d.contains(mid, -1e-3) else None
        if ref is not None:
            assert (pot.v(x, y) - d.level) * ref > 0


def test_build_is_deterministic():
    a = build_domain(case_mode("w72"), "w72")
    b = build_domain(case_mode("w72"), "w72")
    for ca, cb in zip(a.bottom, b.bottom):
        assert np.array_equal(ca.vertices, cb.vertices)
