"""Level curves, stagnation points, domain assembly and high spots."""
from .critical import (
    StagnationPoint,
    find_stagnation_point,
    find_surface_zero,
    find_trace_min,
    seed_scan,
    stagnation_points,
    surface_zeros,
)
from .curves import EndKind, LevelCurve, branches_from_saddle, trace_level_curve
from .domains import (
    REFERENCE_CASES,
    CaseTag,
    SideVerdict,
    SloshingDomain,
    build_domain,
    case_mode,
    check_bulbous,
    mirror_domain,
    smooth_variant,
)
from .highspots import HighSpot, SpotKind, find_high_spots, trace_u_nodal_line, u_nodal_lines
