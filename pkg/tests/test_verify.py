import json
import math
import warnings

import numpy as np
import pytest

from sloshspot.geometry import CaseTag
from sloshspot.kernel import Potential, make_mode
from sloshspot.verify import (
    ReferenceComparison,
    ResidualReport,
    check_orthogonality,
    feature_report,
    format_features,
    format_table,
    interior_grid,
    nodal_structure_check,
    reference_report,
    report_to_json,
    residual_bottom,
    residual_cauchy_riemann,
    residual_free_surface,
    residual_laplace,
    slope_identities,
)
from sloshspot.verify.report import multiple_spots_somewhere

MODES = [(1.5, "sum"), (2.5, "sum"), (3.5, "sum"), (3.0, "diff"), (2.0, "diff")]
REFERENCE_TAGS = [CaseTag.W32, CaseTag.W52, CaseTag.W72, CaseTag.W3, CaseTag.W2]


# ---------------------------------------------------------------- residuals

@pytest.mark.parametrize("nu,fam", MODES)
def test_pde_residuals_pass(nu, fam):
    m = make_mode(nu, fam)
    pts = interior_grid(n=8)
    lap = residual_laplace(m, pts)
    cr = residual_cauchy_riemann(m, pts)
    assert lap.passed, lap
    assert cr.passed, cr
    assert lap.sample_count == 2 * len(pts)


@pytest.mark.parametrize("nu,fam", MODES)
def test_free_surface_residual_pass(nu, fam):
    r = residual_free_surface(make_mode(nu, fam), np.linspace(-2.5, 2.5, 21))
    assert r.passed, r


@pytest.mark.parametrize("tag", REFERENCE_TAGS + [CaseTag.SMOOTH_VARIANT])
def test_domain_checks_pass(domains, tag):
    d = domains[tag]
    assert residual_bottom(d).passed
    assert check_orthogonality(d).passed


@pytest.mark.parametrize("tag", REFERENCE_TAGS + [CaseTag.W32_PRIME, CaseTag.W52_COMPANION])
def test_nodal_structure(domains, tag):
    r = nodal_structure_check(domains[tag], grid_n=100)
    assert r.passed, r.details


def test_negative_controls(domains, perturbed, m32):
    bad = perturbed(m32)
    pts = interior_grid(n=6)
    assert not residual_laplace(bad, pts).passed
    assert not residual_cauchy_riemann(bad, pts).passed
    assert not residual_free_surface(bad, [0.5, 1.0, 2.0]).passed
    d = domains[CaseTag.W32]
    assert not residual_bottom(d, bad).passed
    assert not check_orthogonality(d, bad).passed


def test_tiny_perturbation_is_still_caught_by_bottom_check(domains, perturbed, m32):
    assert not residual_bottom(domains[CaseTag.W32], perturbed(m32, eps=1e-6)).passed


def test_residual_near_singular_point_warns_and_grows(m32):
    far = residual_free_surface(m32, [2.0]).max_residual
    with pytest.warns(RuntimeWarning):
        near = residual_free_surface(m32, [math.pi - 0.01]).max_residual
    assert near > far


def test_no_warning_away_from_singularity(m32):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        residual_free_surface(m32, [0.0, 1.0, 3.0])


def test_report_record():
    r = ResidualReport("x", 1e-9, 3, 1e-8, ("a",))
    assert r.passed
    d = r.as_dict()
    assert d["pass"] is True and d["details"] == ["a"]
    assert not ResidualReport("x", math.nan, 1, 1.0).passed


# ---------------------------------------------------------------- published numbers

@pytest.fixture(scope="module")
def rows():
    return reference_report()


def test_every_published_number_matches(rows):
    assert len(rows) == 21
    failing = [r for r in rows if not r.passed]
    assert not failing, format_table(failing)


def test_rows_for_single_case():
    r = reference_report(["w72"])
    assert len(r) == 4
    assert all(x.passed for x in r)


def test_tight_tolerance_fails(rows):
    tight = reference_report(["w32"], tolerance=1e-9)
    assert any(not r.passed for r in tight)


def test_unknown_case_rejected():
    with pytest.raises(ValueError):
        reference_report(["w9"])


def test_upper_bound_row(rows):
    ub = [r for r in rows if r.upper_bound]
    assert len(ub) == 1
    assert ub[0].computed_value < 0.03
    assert ub[0].computed_value == pytest.approx(0.054868 / 2.132704, abs=1e-5)


def test_nan_row_fails():
    r = ReferenceComparison("q", 1.0, math.nan, math.nan, 1e-5, "c")
    assert not r.passed


def test_json_and_table(rows):
    data = json.loads(report_to_json(rows))
    assert data["schema_version"] == 1
    assert len(data["rows"]) == 21
    assert all(row["passed"] for row in data["rows"])
    table = format_table(rows)
    assert table.count("PASS") == 21


# ---------------------------------------------------------------- qualitative features

def test_features_hold():
    feats = feature_report()
    assert all(f.holds for f in feats), format_features(feats)
    many, single = multiple_spots_somewhere(feats)
    assert many and single
    by = {f.case: f for f in feats}
    assert by["w32"].interior_spots == 1
    assert by["w52"].interior_spots == 2
    assert by["w2"].interior_spots == 2


def test_slope_identities():
    s = slope_identities()
    assert s.v_y_error < 1e-6
    assert s.slope_error < 1e-6
    assert s.v_y == pytest.approx(0.80159107571, abs=1e-9)
    assert s.slope_gradient < 0


def test_slope_agrees_with_closed_form_derivative(p32):
    s = slope_identities()
    f = p32.complex_derivative(s.x0, 0.0)
    assert abs(p32.trace_v(s.x0)) < 1e-12
    assert f.imag == pytest.approx(0.0, abs=1e-12)
