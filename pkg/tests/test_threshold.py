"""Threshold location on rays, region classification, and curve tracing."""

from __future__ import annotations

import numpy as np
import pytest

from mtphase import (
    CurveLeftDomain,
    NoSignChange,
    ParameterPlane,
    ParameterRay,
    Region,
    classify_region,
    det_principal_mode,
    find_threshold,
    principal_eigenvalue,
    stability_exchange_report,
    trace_threshold_curve,
)


def test_canonical_critical_diffusivity(canonical_threshold):
    # positive root of d^3 + 5 d^2 + 5 d - 1 = 0
    d = canonical_threshold.ray_coord
    assert d == pytest.approx(0.1700864866260337, abs=1e-12)
    assert d**3 + 5 * d**2 + 5 * d - 1 == pytest.approx(0.0, abs=1e-12)


def test_threshold_point_sits_on_critical_surface(canonical_threshold):
    tp = canonical_threshold
    assert abs(tp.detE1) <= 1e-10
    assert abs(tp.sigma11) <= 1e-8
    assert tp.crossing_derivative != 0.0
    assert not tp.near_tangential


def test_determinant_changes_sign_across_threshold(canonical_ray, canonical_threshold):
    d_star = canonical_threshold.ray_coord
    below = det_principal_mode(canonical_ray.at(0.9 * d_star))
    above = det_principal_mode(canonical_ray.at(1.1 * d_star))
    assert below * above < 0.0


def test_no_sign_change_raised_on_stable_bracket(canonical_params):
    ray = ParameterRay(
        base=canonical_params,
        direction={"d1": 1.0, "d2": 1.0, "d3": 1.0},
        bracket=(0.3, 0.9),
    )
    with pytest.raises(NoSignChange):
        find_threshold(ray)


def test_classify_region_three_sides(canonical_ray, canonical_threshold):
    d_star = canonical_threshold.ray_coord
    assert classify_region(canonical_ray.at(0.7 * d_star)).region is Region.UNSTABLE
    assert classify_region(canonical_ray.at(1.5 * d_star)).region is Region.STABLE
    assert classify_region(canonical_threshold.lambda0).region is Region.CRITICAL


def test_ray_at_sets_fields_linearly(canonical_params):
    ray = ParameterRay(
        base=canonical_params,
        direction={"d1": 2.0, "d3": 0.5},
        bracket=(0.1, 1.0),
    )
    p = ray.at(0.3)
    assert p.d1 == pytest.approx(0.6)
    assert p.d2 == canonical_params.d2
    assert p.d3 == pytest.approx(0.15)
    q = ParameterRay(base=canonical_params, direction="k7", bracket=(1.0, 3.0)).at(2.4)
    assert q.k7 == pytest.approx(2.4)


def test_stability_exchange_report_canonical(canonical_threshold):
    report = canonical_threshold.stability_report
    assert report is not None
    assert report.passed is True
    assert not report.skipped
    assert report.sigma11_in_band and report.sigma11_simple
    assert report.re_sigma12 < 0.0 and report.re_sigma13 < 0.0
    assert report.higher_modes_stable and report.max_re_higher < 0.0
    assert report.M_max == 50


def test_stability_exchange_report_from_params(canonical_threshold):
    # Accepts a bare parameter point as well as a located threshold.
    report = stability_exchange_report(canonical_threshold.lambda0)
    assert report.passed is True


def _canonical_plane(base):
    return ParameterPlane(
        base=base,
        axis1={"d1": 1.0, "d2": 1.0, "d3": 1.0},
        range1=(0.05, 0.4),
        axis2="k7",
        range2=(1.2, 3.0),
    )


def test_trace_threshold_curve_vertices_are_critical(canonical_params):
    plane = _canonical_plane(canonical_params)
    points = trace_threshold_curve(plane, n_points=40)
    assert len(points) >= 10
    for tp in points:
        s, t = tp.plane_coords
        assert 0.05 - 1e-9 <= s <= 0.4 + 1e-9
        assert 1.2 - 1e-9 <= t <= 3.0 + 1e-9
        assert abs(principal_eigenvalue(plane.at(s, t)).real) <= 1e-7
    # The canonical point (d = d*, k7 = 2) lies on the curve.
    coords = np.array([tp.plane_coords for tp in points])
    gap = np.hypot(coords[:, 0] - 0.1700864866260337, coords[:, 1] - 2.0).min()
    assert gap <= 0.08


def test_trace_threshold_curve_outside_window(canonical_params):
    plane = ParameterPlane(
        base=canonical_params,
        axis1={"d1": 1.0, "d2": 1.0, "d3": 1.0},
        range1=(0.6, 0.9),  # deep in the stable region for k7 in [1.2, 1.6]
        axis2="k7",
        range2=(1.2, 1.6),
    )
    with pytest.raises(CurveLeftDomain):
        trace_threshold_curve(plane, n_points=20)
