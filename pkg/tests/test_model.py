from fractions import Fraction as Fr

import pytest

from axrel.field import ER, sqrt
from axrel.kinematics import SuperluminalVelocity, coord4, mu, worldview_transform
from axrel.model import (
    Body, ChartDomain, InertialLine, NotAnObserver, ObserverSpec, PhotonLine,
    PiecewiseInertial, cloud, galilean_structure, parse_model, serialize_model,
    standard_minkowski, unsafe_inertial_line,
)


def test_rest_observer_identity_chart(minkowski):
    rest = minkowski.bodies["rest"]
    for t in (0, 7, Fr(-3, 2)):
        assert minkowski.holds_W(rest, rest, coord4(0, 0, 0, t))
    assert not minkowski.holds_W(rest, rest, coord4(1, 0, 0, 7))


def test_superluminal_observer_rejected():
    with pytest.raises(SuperluminalVelocity):
        standard_minkowski([ObserverSpec("fast", velocity=(1, 0, 0))])


def test_boosted_chart_is_the_boost(two_observer):
    # second chart is the 3/5 boost: gamma = 5/4, cross-checked through
    # mu preservation and the image of (3/5,0,0,1)
    rest, boosted = two_observer.bodies["rest"], two_observer.bodies["boosted"]
    image = two_observer.event_correspondence(rest, boosted, coord4(Fr(3, 5), 0, 0, 1))
    assert tuple(c.literal() for c in image) == ("0", "0", "0", "4/5")
    w = worldview_transform(two_observer, rest, boosted)
    assert w.is_lorentz()


def test_photon_membership(minkowski):
    rest = minkowski.bodies["rest"]
    flash = Body("flash", False, True,
                 PhotonLine(coord4(0, 0, 0, 0), (ER(1), ER(0), ER(0))))
    s = minkowski.with_extra_bodies([flash])
    assert s.holds_W(rest, s.bodies["flash"], coord4(2, 0, 0, 2))
    assert not s.holds_W(rest, s.bodies["flash"], coord4(2, 0, 0, 3))


def test_event_at_crossing(two_observer):
    a = Body("a", True, False, InertialLine(coord4(0, 0, 0, 0), (ER(Fr(1, 2)), ER(0), ER(0))))
    b = Body("b", True, False, InertialLine(coord4(2, 0, 0, 0), (ER(Fr(-1, 2)), ER(0), ER(0))))
    s = two_observer.with_extra_bodies([a, b])
    rest = s.bodies["rest"]
    # crossing point solved by hand: t = 2, x = 1
    content = s.event_at(rest, coord4(1, 0, 0, 2))
    assert {"a", "b"} <= content.named
    assert content.family_descriptors  # intensional families are on


def test_event_at_empty(minkowski):
    rest = minkowski.bodies["rest"]
    content = minkowski.event_at(rest, coord4(50, 60, 70, 0))
    assert content.named == frozenset()


def test_event_at_requires_observer(minkowski):
    stray = Body("stray", True, False, InertialLine(coord4(0, 0, 0, 0), (ER(0),) * 3))
    s = minkowski.with_extra_bodies([stray])
    with pytest.raises(NotAnObserver):
        s.event_at(s.bodies["stray"], coord4(0, 0, 0, 0))


def test_event_correspondence_identity(minkowski):
    rest = minkowski.bodies["rest"]
    x = coord4(Fr(1, 3), 2, -1, Fr(7, 2))
    assert minkowski.event_correspondence(rest, rest, x) == x


def test_event_correspondence_translation_only():
    s = standard_minkowski([
        ObserverSpec("rest"),
        ObserverSpec("shifted", translation=(1, 2, 3, 4)),
    ])
    x = coord4(0, 0, 0, 0)
    image = s.event_correspondence(s.bodies["rest"], s.bodies["shifted"], x)
    assert tuple(float(c) for c in image) == (1.0, 2.0, 3.0, 4.0)


def test_correspondence_preserves_mu(minkowski):
    rest, skew = minkowski.bodies["rest"], minkowski.bodies["skew"]
    x = coord4(1, 2, 3, Fr(1, 2))
    y = coord4(-1, 0, 2, 5)
    xi = minkowski.event_correspondence(rest, skew, x)
    yi = minkowski.event_correspondence(rest, skew, y)
    assert mu(x, y) == mu(xi, yi)


def test_own_worldline_through_spatial_origin(minkowski):
    for oid in minkowski.charts:
        o = minkowski.bodies[oid]
        assert minkowski.holds_W(o, o, coord4(0, 0, 0, 0))
        assert minkowski.holds_W(o, o, coord4(0, 0, 0, 9))


def test_piecewise_continuity_and_speed():
    with pytest.raises(SuperluminalVelocity):
        PiecewiseInertial((coord4(0, 0, 0, 0), coord4(2, 0, 0, 1)))
    with pytest.raises(ValueError):
        PiecewiseInertial((coord4(0, 0, 0, 1), coord4(0, 0, 0, 0)))


def test_unsafe_inertial_line_is_quarantined():
    line = unsafe_inertial_line((0, 0, 0, 0), (2, 0, 0))
    assert line.contains(coord4(2, 0, 0, 1))
    with pytest.raises(SuperluminalVelocity):
        InertialLine(coord4(0, 0, 0, 0), (ER(2), ER(0), ER(0)))


def test_cloud_builds_parallel_lines():
    base = InertialLine(coord4(0, 0, 0, 0), (ER(Fr(1, 3)), ER(0), ER(0)))
    lines = cloud(base, [(0, 0, 0), (1, 0, 0), (0, 2, 0)])
    assert len(lines) == 3
    assert all(l.velocity == base.velocity for l in lines)
    assert lines[1].contains(coord4(1, 0, 0, 0))


def test_chart_domain_membership():
    dom = ChartDomain(((None, None), (None, None), (None, None), (None, ER(10))))
    assert dom.contains(coord4(0, 0, 0, 9))
    assert not dom.contains(coord4(0, 0, 0, 10))  # open by default
    closed = ChartDomain(dom.bounds, closed=True)
    assert closed.contains(coord4(0, 0, 0, 10))


def test_model_file_round_trip(minkowski):
    flash = Body("flash", False, True,
                 PhotonLine(coord4(0, 0, 0, 0), (ER(Fr(3, 5)), ER(Fr(4, 5)), ER(0))))
    drift = Body("drift", False, False, PiecewiseInertial(
        (coord4(0, 0, 0, 0), coord4(3, 0, 0, 5), coord4(0, 0, 0, 10))))
    s = minkowski.with_extra_bodies([flash, drift])
    text = serialize_model(s)
    s2 = parse_model(text)
    assert serialize_model(s2) == text
    rest = s2.bodies["rest"]
    assert s2.holds_W(rest, s2.bodies["flash"], coord4(Fr(3, 5), Fr(4, 5), 0, 1))
    # the rotated+translated observer survives the round trip exactly
    x = coord4(1, 1, 0, 2)
    assert s.event_correspondence(rest, s.bodies["skew"], x) == \
        s2.event_correspondence(rest, s2.bodies["skew"], x)


def test_galilean_structure_charts_not_lorentz(galilean):
    train = galilean.bodies["train"]
    assert not galilean.chart_of(train).is_lorentz()
    assert galilean.holds_W(train, train, coord4(0, 0, 0, 3))
