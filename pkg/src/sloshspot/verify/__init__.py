"""Residual checks and comparison with published values."""
from .report import (
    FeatureSummary,
    ReferenceComparison,
    SlopeIdentities,
    feature_report,
    feature_summary,
    format_features,
    format_table,
    reference_report,
    report_to_json,
    slope_identities,
)
from .residuals import (
    ResidualReport,
    check_orthogonality,
    interior_grid,
    nodal_structure_check,
    residual_bottom,
    residual_cauchy_riemann,
    residual_free_surface,
    residual_laplace,
)
