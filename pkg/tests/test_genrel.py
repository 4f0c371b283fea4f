import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from axrel.field import ER
from axrel.kinematics import effects
from axrel.model import SmoothNumeric
from axrel.genrel import (
    ChartSuiteConfig, DegenerateMetric, FloatBox, LeftDomain, MetricChart,
    NoMeeting, NotTimelike, check_axdiff, check_axev_minus, check_axph_minus,
    check_axself_minus, check_axsymt_minus, check_chart_theory, flat_chart,
    geodesic, geodesic_csv, normal_frame, parse_chart_file, rindler_chart,
    rindler_to_minkowski, static_observer_chart,
)

ETA = np.diag([1.0, 1.0, 1.0, -1.0])


def _frame_error(chart, p):
    m = normal_frame(chart, p)
    g = chart.metric_at(p)
    return float(np.max(np.abs(m.T @ g @ m - ETA)))


def test_normal_frame_flat_identity_up_to_signs():
    assert _frame_error(flat_chart(), (0, 0, 0, 0)) == 0.0


def test_normal_frame_diagonal_rescale():
    # diag(1,1,1,-x^2) at x=2: time axis scaled by 1/2 (diagonal oracle)
    chart = MetricChart(lambda p: np.diag([1.0, 1.0, 1.0, -p[0] * p[0]]),
                        FloatBox((0.01, -10, -10, -10), (10, 10, 10, 10)), order=9)
    m = normal_frame(chart, (2, 0, 0, 0))
    assert abs(m[3, 3] - 0.5) < 1e-12
    assert _frame_error(chart, (2, 0, 0, 0)) < 1e-12


def test_normal_frame_degenerate():
    with pytest.raises(DegenerateMetric):
        normal_frame(MetricChart(lambda p: np.diag([1.0, 1.0, 0.0, -1.0]),
                                 FloatBox(), 3), (0, 0, 0, 0))


def test_normal_frame_wrong_signature():
    with pytest.raises(DegenerateMetric):
        normal_frame(MetricChart(lambda p: np.diag([1.0, 1.0, -1.0, -1.0]),
                                 FloatBox(), 3), (0, 0, 0, 0))


def test_normal_frame_error_bound_on_test_charts():
    charts = [flat_chart(), rindler_chart(),
              MetricChart(lambda p: np.array(
                  [[1.0, 0.1, 0, 0], [0.1, 1.2, 0, 0],
                   [0, 0, 0.9, 0.05], [0, 0, 0.05, -1.3]]), FloatBox(), 3)]
    for chart in charts:
        for p in chart.domain.sample_points(2):
            assert _frame_error(chart, p) <= 1e-9


def test_axph_minus_flat_exact():
    v = check_axph_minus(flat_chart(), (0, 0, 0, 0))
    assert v.is_holds
    assert v.evidence["max_speed_error"] <= 1e-12


def test_axph_minus_rindler_null_speed():
    # at x=1 the chart-coordinate null condition is |dx/dt| = x = 1
    v = check_axph_minus(rindler_chart(), (1.0, 0, 0, 0), tol=1e-9)
    assert v.is_holds
    v = check_axph_minus(rindler_chart(), (3.0, 1.0, 0, 2.0), tol=1e-9)
    assert v.is_holds


def test_axph_minus_degenerate_signature():
    with pytest.raises(DegenerateMetric):
        check_axph_minus(MetricChart(lambda p: np.diag([1.0, 1.0, -1.0, -1.0]),
                                     FloatBox(), 3), (0, 0, 0, 0))


def test_axsymt_minus_identical_tangents():
    still = SmoothNumeric(lambda t: (0.0, 0.0, 0.0), 9, -5, 5,
                          velocity=lambda t: (0.0, 0.0, 0.0))
    v = check_axsymt_minus(flat_chart(), still, still, 0.0)
    assert v.is_holds
    assert abs(v.evidence["rate_1_sees_2"] - 1.0) < 1e-12


def test_axsymt_minus_flat_three_fifths():
    # reduces to SR time dilation symmetry: both rates are 4/5
    still = SmoothNumeric(lambda t: (0.0, 0.0, 0.0), 9, -5, 5,
                          velocity=lambda t: (0.0, 0.0, 0.0))
    mover = SmoothNumeric(lambda t: (0.6 * t, 0.0, 0.0), 9, -5, 5,
                          velocity=lambda t: (0.6, 0.0, 0.0))
    v = check_axsymt_minus(flat_chart(), still, mover, 0.0)
    assert v.is_holds
    sr = float(effects(Fr(3, 5)).time_dilation)
    assert abs(v.evidence["rate_1_sees_2"] - sr) < 1e-9
    assert abs(v.evidence["rate_2_sees_1"] - sr) < 1e-9


def test_axsymt_minus_asymmetric_test_double():
    still = SmoothNumeric(lambda t: (0.0, 0.0, 0.0), 9, -5, 5,
                          velocity=lambda t: (0.0, 0.0, 0.0))
    mover = SmoothNumeric(lambda t: (0.5 * t, 0.0, 0.0), 9, -5, 5,
                          velocity=lambda t: (0.5, 0.0, 0.0))
    fake = lambda g, ui, uj: float(ui[3])
    v = check_axsymt_minus(flat_chart(), still, mover, 0.0, rate_fn=fake)
    assert v.is_fails


def test_axsymt_minus_requires_meeting():
    a = SmoothNumeric(lambda t: (0.0, 0.0, 0.0), 9, -5, 5, velocity=lambda t: (0.0,) * 3)
    b = SmoothNumeric(lambda t: (1.0, 0.0, 0.0), 9, -5, 5, velocity=lambda t: (0.0,) * 3)
    with pytest.raises(NoMeeting):
        check_axsymt_minus(flat_chart(), a, b, 0.0)


def test_axsymt_minus_requires_timelike():
    a = SmoothNumeric(lambda t: (0.0, 0.0, 0.0), 9, -5, 5, velocity=lambda t: (0.0,) * 3)
    fast = SmoothNumeric(lambda t: (1.5 * t, 0.0, 0.0), 9, -5, 5,
                         velocity=lambda t: (1.5, 0.0, 0.0))
    with pytest.raises(NotTimelike):
        check_axsymt_minus(flat_chart(), a, fast, 0.0)


def test_axself_minus_standard_chart():
    line = SmoothNumeric(lambda t: (0.0, 0.0, 0.0), 9, -2, 2,
                         velocity=lambda t: (0.0,) * 3)
    v = check_axself_minus(static_observer_chart((0, 0, 0)), line,
                           [-1.0, 0.0, 1.0])
    assert v.is_holds


def test_axself_minus_displaced_observer_fails():
    line = SmoothNumeric(lambda t: (1.0, 0.0, 0.0), 9, -2, 2,
                         velocity=lambda t: (0.0,) * 3)
    v = check_axself_minus(static_observer_chart((0, 0, 0)), line, [0.0])
    assert v.is_fails


def test_axev_minus_open_domains_hold():
    box = FloatBox((-1, -1, -1, -1), (1, 1, 1, 1))
    line = SmoothNumeric(lambda t: (0.0, 0.0, 0.0), 9, -0.9, 0.9,
                         velocity=lambda t: (0.0,) * 3)
    v = check_axev_minus({"a": box}, {"a": line})
    assert v.is_holds


def test_axev_minus_closed_face_fails():
    box = FloatBox((-1, -1, -1, -1), (1, 1, 1, 1), closed_faces=((3, "hi"),))
    line = SmoothNumeric(lambda t: (0.0, 0.0, 0.0), 9, -0.9, 0.9,
                         velocity=lambda t: (0.0,) * 3)
    v = check_axev_minus({"a": box}, {"a": line})
    assert v.is_fails


def test_axdiff_analytic_order_three():
    v = check_axdiff(lambda p: (p[0] + p[3] ** 3, p[1], p[2], p[3]),
                     3, [(0.3, 0, 0, 0.2)], declared_order=9)
    assert v.is_holds


def test_axdiff_kink_fails_at_first_order():
    v = check_axdiff(lambda p: (abs(p[0]), p[1], p[2], p[3]),
                     1, [(0.0, 0, 0, 0.0)], declared_order=9)
    assert v.is_fails


def test_axdiff_exceeding_declared_order_unknown():
    v = check_axdiff(lambda p: p, 5, [(0, 0, 0, 0)], declared_order=3)
    assert v.outcome == "Unknown"


def test_geodesic_flat_straight_line():
    res = geodesic(flat_chart(), (0, 0, 0, 0), (0.3, 0, 0, 1), span=1.0)
    assert res.conservation_drift <= 1e-12
    assert not res.truncated
    dev = np.max(np.abs(res.points[:, 0] - 0.3 * res.points[:, 3]))
    assert dev <= 1e-12


def test_geodesic_rejects_spacelike_start():
    with pytest.raises(NotTimelike):
        geodesic(flat_chart(), (0, 0, 0, 0), (1, 0, 0, 0.5), span=1.0)


def test_geodesic_rejects_outside_domain():
    with pytest.raises(LeftDomain):
        geodesic(rindler_chart(), (0.05, 0, 0, 0), (0, 0, 0, 1), span=1.0)


def test_geodesic_rindler_maps_to_straight_line():
    res = geodesic(rindler_chart(), (2.0, 0, 0, 0), (0.2, 0, 0, 0.55),
                   span=1.0, step=0.005)
    assert res.conservation_drift <= 1e-6
    mink = np.array([rindler_to_minkowski(p) for p in res.points])
    lam = res.lambdas
    dev = 0.0
    for c in range(4):
        a, b = mink[0, c], mink[-1, c]
        chord = a + (b - a) * (lam - lam[0]) / (lam[-1] - lam[0])
        dev = max(dev, float(np.max(np.abs(mink[:, c] - chord))))
    assert dev <= 1e-6


def test_geodesic_truncates_at_domain_boundary():
    res = geodesic(rindler_chart(), (1.0, 0, 0, 0), (0, 0, 0, 1.0),
                   span=1.5, step=0.005)
    assert res.truncated


def test_geodesic_csv_header():
    res = geodesic(flat_chart(), (0, 0, 0, 0), (0, 0, 0, 1), span=0.2, step=0.05)
    lines = geodesic_csv(res).splitlines()
    assert lines[0] == "lambda,x1,x2,x3,x4,u1,u2,u3,u4"


def test_geodesic_drift_flag():
    good = geodesic(flat_chart(), (0, 0, 0, 0), (0, 0, 0, 1), span=0.2, step=0.05)
    assert not good.drift_flagged
    tight = geodesic(rindler_chart(), (2.0, 0, 0, 0), (0.2, 0, 0, 0.55),
                     span=1.0, step=0.005, drift_tolerance=1e-30)
    assert tight.drift_flagged  # no integrator meets 1e-30; the flag must say so


FLAT_CHART_TEXT = """
chart flat
order 9
g 1 1 = 1
g 2 2 = 1
g 3 3 = 1
g 4 4 = 0 - 1
worldline origin 0 0 0
worldline off 1 0 0
meet origin origin 0 0 0 0
"""

RINDLER_CHART_TEXT = """
chart rindler
order 9
domain 1 1/10 10
g 1 1 = 1
g 2 2 = 1
g 3 3 = 1
g 4 4 = 0 - x1^2
worldline rear 1 0 0
worldline nose 3/2 0 0
meet rear rear 1 0 0 0
"""


def test_chart_file_flat_suite():
    config = parse_chart_file(FLAT_CHART_TEXT)
    results = check_chart_theory(config, n=3)
    for name in ("AxField", "AxSelf-", "AxPh-", "AxEv-", "AxSymt-", "AxDiff_3"):
        assert results[name].is_holds, name
    assert all(v.is_holds for k, v in results.items() if k.startswith("IND."))


def test_chart_file_rindler_suite():
    config = parse_chart_file(RINDLER_CHART_TEXT)
    results = check_chart_theory(config, n=3)
    for name in ("AxSelf-", "AxPh-", "AxEv-", "AxSymt-", "AxDiff_3"):
        assert results[name].is_holds, name


def test_coordinate_covariance_smoke():
    # a fixed smooth re-parameterization of the flat chart leaves the
    # verdicts unchanged: x1 -> x1 + x1^3/10 stretches space smoothly
    def g(p):
        # pull back the flat metric through phi(x) = x + x^3/10:
        # g_11 = (phi'(x1))^2
        d = 1.0 + 0.3 * p[0] * p[0]
        return np.diag([d * d, 1.0, 1.0, -1.0])

    chart = MetricChart(g, FloatBox((-2, -2, -2, -2), (2, 2, 2, 2)), order=9)
    for p in chart.domain.sample_points(2):
        assert check_axph_minus(chart, p).is_holds
    res = geodesic(chart, (0, 0, 0, 0), (0.1, 0, 0, 1), span=0.5, step=0.005)
    assert res.conservation_drift <= 1e-6
