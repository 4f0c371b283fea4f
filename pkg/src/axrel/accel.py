"""Accelerated observers: proper time, co-moving observers, the Twin
Paradox, and gravitational time dilation on the uniformly accelerated ship.

Proper time is exact (tower field) for piecewise-inertial worldlines and
interval-valued quadrature for numeric ones.  The uniformly accelerated
ship uses the exact Rindler parameterization: the worldline of the clock
at Rindler coordinate x is the hyperbola X(T) = sqrt(x^2 + T^2), its
proper acceleration is 1/x, and clock rates at fixed ship position are
proportional to x.  With the rear of the ship pinned at x = 1/g the
nose sits at 1/g + h and the horizon condition is vacuous for every
h > 0, so the nose/rear rate ratio is (1/g + h)/(1/g), computed (not
pasted) as 1 + g*h.

Checks here are the model-side (semantic) verifications of the twin
paradox and gravitational time dilation; there is no proof-theoretic
derivation anywhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .field import ApproxReal, ER, ExactReal, sqrt
from .kinematics import AffineMap, Coord4, PoincareMap, boost, coord4, mu
from .model import (
    Body, DifferentiableChart, InertialLine, PhotonLine, PiecewiseInertial,
    SmoothNumeric, Structure, parse_model, _parse_body,
)
from .semantics import Verdict

__all__ = [
    "proper_time", "comoving_inertial", "check_axcmv", "twin_paradox",
    "rechart_scenario", "galaxy_trip", "gtd_clock_ratio", "ShipConfig",
    "AcceleratedScenario", "parse_scenario", "serialize_scenario",
    "load_scenario", "hyperbolic_worldline", "rindler_observer_chart",
    "worldline_csv", "tangent_deviation_ladder", "DEFAULT_LADDER",
    "SuperluminalSegment", "NotDifferentiable", "NoReunion", "InvalidConfig",
]


class SuperluminalSegment(ValueError):
    pass


class NotDifferentiable(ValueError):
    pass


class NoReunion(ValueError):
    pass


class InvalidConfig(ValueError):
    pass


# ---------------------------------------------------------------------------
# Proper time.


def proper_time(w, t0, t1):
    """Proper time along w between coordinate times t0 and t1.

    Exact (ExactReal) for inertial and piecewise-inertial worldlines;
    ApproxReal with reported width for numeric worldlines.
    """
    if isinstance(w, PhotonLine):
        raise SuperluminalSegment("photon worldlines accumulate no proper time")
    if isinstance(w, InertialLine):
        t0, t1 = ER(t0), ER(t1)
        v2 = sum((c * c for c in w.velocity), ER(0))
        return (t1 - t0) * sqrt(1 - v2)
    if isinstance(w, PiecewiseInertial):
        return _piecewise_proper_time(w, ER(t0), ER(t1))
    if isinstance(w, SmoothNumeric):
        return _numeric_proper_time(w, float(t0), float(t1))
    raise TypeError(w)


def _piecewise_proper_time(w: PiecewiseInertial, t0: ExactReal, t1: ExactReal) -> ExactReal:
    if (t0 - w.t_min).sign() < 0 or (t1 - w.t_max).sign() > 0 or (t1 - t0).sign() < 0:
        raise ValueError("interval outside worldline domain")
    total = ER(0)
    for a, b in zip(w.knots, w.knots[1:]):
        lo = a[3] if (t0 - a[3]).sign() <= 0 else t0
        hi = b[3] if (t1 - b[3]).sign() >= 0 else t1
        if (hi - lo).sign() <= 0:
            continue
        dt = b[3] - a[3]
        v2 = sum((((b[i] - a[i]) / dt) ** 2 for i in range(3)), ER(0))
        total = total + (hi - lo) * sqrt(1 - v2)
    return total


def _numeric_velocity(w: SmoothNumeric, t: float, h: float = 1e-6):
    if w.velocity is not None:
        return w.velocity(t)
    lo = max(w.t_min, t - h)
    hi = min(w.t_max, t + h)
    p0, p1 = w.position(lo), w.position(hi)
    return tuple((b - a) / (hi - lo) for a, b in zip(p0, p1))


def _numeric_proper_time(w: SmoothNumeric, t0: float, t1: float,
                         tol: float = 1e-10) -> ApproxReal:
    def integrand(t: float) -> float:
        v = _numeric_velocity(w, t)
        speed2 = sum(c * c for c in v)
        if speed2 >= 1.0:
            raise SuperluminalSegment("speed >= 1 at t=%g" % t)
        return math.sqrt(1.0 - speed2)

    value, err = _adaptive_simpson(integrand, t0, t1, tol)
    return ApproxReal.from_float(value, max(err * 4, 1e-15 * max(1.0, abs(value))))


def _adaptive_simpson(f: Callable, a: float, b: float, tol: float):
    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, tol, depth):
        xm = 0.5 * (x0 + x2)
        lm, rm = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        flm, frm = f(lm), f(rm)
        left = simpson(x0, xm, f0, flm, f1)
        right = simpson(xm, x2, f1, frm, f2)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = recurse(x0, xm, f0, flm, f1, left, tol / 2.0, depth - 1)
        rv, re = recurse(xm, x2, f1, frm, f2, right, tol / 2.0, depth - 1)
        return lv + rv, le + re

    f0, f1, f2 = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, f0, f1, f2)
    return recurse(a, b, f0, f1, f2, whole, tol, 28)


# ---------------------------------------------------------------------------
# Co-moving inertial observers.


def comoving_inertial(w, t):
    """(velocity 3-vector, event Coord4) of the inertial observer tangent
    to w at coordinate time t; exact for exact worldlines, floats for
    numeric ones.  Raises NotDifferentiable at piecewise breakpoints.
    """
    if isinstance(w, InertialLine):
        return w.velocity, w.point_at(ER(t))
    if isinstance(w, PiecewiseInertial):
        t = ER(t)
        if (t - w.t_min).sign() < 0 or (t - w.t_max).sign() > 0:
            raise ValueError("time outside worldline domain")
        for knot in w.knots[1:-1]:
            if (t - knot[3]).is_zero():
                raise NotDifferentiable("breakpoint at t=%s" % t)
        velocities = w.segment_velocities()
        for i, (a, b) in enumerate(zip(w.knots, w.knots[1:])):
            if (t - b[3]).sign() <= 0:
                return velocities[i], w.point_at(t)
        raise AssertionError
    if isinstance(w, SmoothNumeric):
        tf = float(t)
        v = _richardson_velocity(w, tf)
        return v, w.point_at(tf)
    raise TypeError(w)


def _richardson_velocity(w: SmoothNumeric, t: float):
    if w.velocity is not None:
        return tuple(w.velocity(t))
    h = min(1e-4, (w.t_max - w.t_min) / 16.0)
    if not (w.t_min <= t - 2 * h and t + 2 * h <= w.t_max):
        h = min(t - w.t_min, w.t_max - t) / 2.0
        if h <= 0:
            raise NotDifferentiable("cannot differentiate at the domain edge")
    coarse = _central(w, t, 2 * h)
    fine = _central(w, t, h)
    return tuple((4 * f - c) / 3.0 for f, c in zip(fine, coarse))


def _central(w: SmoothNumeric, t: float, h: float):
    p0, p1 = w.position(t - h), w.position(t + h)
    return tuple((b - a) / (2 * h) for a, b in zip(p0, p1))


def tangent_deviation_ladder(w, t, deltas: Sequence[float]):
    """|w(t+delta) - tangent(t+delta)| for each delta; the o(delta) data
    behind the co-moving checks."""
    velocity, event = comoving_inertial(w, t)
    vf = tuple(float(c) for c in velocity)
    ef = tuple(float(c) for c in event)
    out = []
    for d in deltas:
        p = w.point_at(float(t) + d) if not isinstance(w, SmoothNumeric) else w.point_at(float(t) + d)
        tangent = tuple(ef[i] + vf[i] * d for i in range(3))
        out.append(max(abs(float(p[i]) - tangent[i]) for i in range(3)))
    return out


DEFAULT_LADDER = tuple(1.0 / 2 ** k for k in range(3, 13))


def check_axcmv(s: Structure, o: Body, t, ladder: Sequence[float] = DEFAULT_LADDER,
                residual_coefficient: float = 1.0) -> Verdict:
    """First-order agreement of o's chart with its tangent inertial chart
    at o's time t: residual(delta) <= coefficient * delta^1.5 on the ladder.

    Inertial (affine) charts hold exactly; numeric charts are sampled on
    the ladder.  Raises NotDifferentiable at a worldline kink.
    """
    chart = s.chart_of(o)
    if chart is None:
        raise ValueError("%s is not an observer" % o.id)
    if isinstance(chart, AffineMap):
        return Verdict.holds(evidence={"note": "inertial observer is its own co-moving observer"})
    tf = float(t)
    ref_line = lambda u: chart.inverse((0.0, 0.0, 0.0, u))
    h = ladder[-1] / 4.0
    left = tuple((b - a) / h for a, b in zip(ref_line(tf - h), ref_line(tf)))
    right = tuple((b - a) / h for a, b in zip(ref_line(tf), ref_line(tf + h)))
    kink = max(abs(l - r) for l, r in zip(left, right))
    if kink > 1e-3:
        raise NotDifferentiable("worldline kink at t=%g (jump %.3g)" % (tf, kink))
    e_ref = ref_line(tf)
    # Velocity in the reference chart: d(space)/d(ref time), both derived
    # along the observer's worldline parameterized by its own chart time.
    dspace = _richardson_velocity(
        SmoothNumeric(lambda u: ref_line(u)[:3], chart.order, tf - 1.0, tf + 1.0), tf)
    dtime = _richardson_velocity(
        SmoothNumeric(lambda u: (ref_line(u)[3], 0.0, 0.0), chart.order,
                      tf - 1.0, tf + 1.0), tf)[0]
    v = tuple(c / dtime for c in dspace)
    speed2 = sum(c * c for c in v)
    if speed2 >= 1.0:
        raise SuperluminalSegment("observer at or above light speed")
    tangent = _float_boost(v)
    directions = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
                  (0.6, 0.0, 0.0, 0.8), (0.0, 0.6, 0.8, 0.0)]
    worst = []
    for delta in ladder:
        residual = 0.0
        for d in directions:
            x = tuple(e_ref[i] + delta * d[i] for i in range(4))
            chart_img = chart.forward(x)
            rel = tuple(x[i] - e_ref[i] for i in range(4))
            tang_img = _apply4(tangent, rel)
            base = chart.forward(e_ref)
            expected = tuple(base[i] + tang_img[i] for i in range(4))
            residual = max(residual, max(abs(a - b) for a, b in zip(chart_img, expected)))
        worst.append(residual)
        if residual > residual_coefficient * delta ** 1.5:
            return Verdict.fails(
                evidence={"delta": delta, "residual": residual},
                method="sampled", tolerance=residual_coefficient)
    return Verdict.holds(method="sampled",
                         evidence={"residuals": tuple(worst), "ladder": tuple(ladder)},
                         tolerance=residual_coefficient)


def _float_boost(v):
    v2 = sum(c * c for c in v)
    if v2 == 0.0:
        return [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]
    g = 1.0 / math.sqrt(1.0 - v2)
    m = [[0.0] * 4 for _ in range(4)]
    for i in range(3):
        for j in range(3):
            m[i][j] = (1.0 if i == j else 0.0) + (g - 1.0) * v[i] * v[j] / v2
        m[i][3] = -g * v[i]
        m[3][i] = -g * v[i]
    m[3][3] = g
    return m


def _apply4(m, x):
    return tuple(sum(m[i][j] * x[j] for j in range(4)) for i in range(4))


# ---------------------------------------------------------------------------
# Twin paradox.


@dataclass(frozen=True)
class AcceleratedScenario:
    """A home observer, a traveler, and their two meeting events
    (reference-chart coordinates)."""

    name: str
    home: Body
    traveler: Body
    departure: Coord4
    reunion: Coord4
    extra_bodies: tuple = ()

    def __post_init__(self):
        if not isinstance(self.home.worldline, InertialLine):
            raise InvalidConfig("home twin must be inertial")


def twin_paradox(sc: AcceleratedScenario):
    """(tau_home, tau_traveler) between the meeting events; exact for
    piecewise-inertial travelers."""
    for event in (sc.departure, sc.reunion):
        label = "(%s)" % ", ".join(str(c) for c in event)
        if not sc.home.worldline.contains(event):
            raise NoReunion("home twin misses the meeting event %s" % label)
        w = sc.traveler.worldline
        if isinstance(w, (InertialLine, PiecewiseInertial, PhotonLine)):
            if not w.contains(event):
                raise NoReunion("traveler misses the meeting event %s" % label)
        else:
            if not w.contains(tuple(float(c) for c in event)):
                raise NoReunion("traveler misses the meeting event (numeric)")
    t0, t1 = sc.departure[3], sc.reunion[3]
    tau_home = proper_time(sc.home.worldline, t0, t1)
    tau_traveler = proper_time(sc.traveler.worldline, t0, t1)
    return tau_home, tau_traveler


def rechart_scenario(sc: AcceleratedScenario, w: PoincareMap) -> AcceleratedScenario:
    """The same scenario expressed in different inertial coordinates; the
    twin_paradox outputs must be identical (exact worldlines only)."""

    def map_line(line):
        if isinstance(line, InertialLine):
            p0 = w.apply(line.point_at(ER(0)))
            p1 = w.apply(line.point_at(ER(1)))
            dt = p1[3] - p0[3]
            return InertialLine(p0, tuple((p1[i] - p0[i]) / dt for i in range(3)))
        if isinstance(line, PiecewiseInertial):
            return PiecewiseInertial(tuple(w.apply(k) for k in line.knots))
        raise InvalidConfig("cannot re-chart a numeric worldline exactly")

    home = Body(sc.home.id, sc.home.is_inertial, sc.home.is_photon, map_line(sc.home.worldline))
    trav = Body(sc.traveler.id, sc.traveler.is_inertial, sc.traveler.is_photon,
                map_line(sc.traveler.worldline))
    return AcceleratedScenario(sc.name, home, trav,
                               w.apply(sc.departure), w.apply(sc.reunion), sc.extra_bodies)


def galaxy_trip(distance, subjective_years_each_way=1):
    """The long-trip numbers: travel `distance` light-years out and back,
    ageing `subjective_years_each_way` per leg.

    Solves L*sqrt(1-v^2)/v = T for v (so each leg takes T years of proper
    time), returning (v, scenario) with exact values; traveler ages 2*T.
    """
    L, T = ER(distance), ER(subjective_years_each_way)
    # v = L / sqrt(L^2 + T^2): then gamma = sqrt(L^2+T^2)/T, leg time L/v.
    v = L / sqrt(L * L + T * T)
    leg = L / v
    knots = (coord4(0, 0, 0, 0),
             (L, ER(0), ER(0), leg),
             (ER(0), ER(0), ER(0), 2 * leg))
    traveler = Body("traveler", False, False, PiecewiseInertial(knots))
    home = Body("home", True, False, InertialLine(coord4(0, 0, 0, 0), (ER(0), ER(0), ER(0))))
    sc = AcceleratedScenario("galaxy-%s" % distance, home, traveler,
                             coord4(0, 0, 0, 0), (ER(0), ER(0), ER(0), 2 * leg))
    return v, sc


# ---------------------------------------------------------------------------
# Gravitational time dilation on the Rindler ship.


@dataclass(frozen=True)
class ShipConfig:
    """Uniformly accelerated ship: rear proper acceleration g (1/s, c=1)
    and proper length h (light-seconds).  The rear rides the hyperbola at
    Rindler coordinate 1/g; any h > 0 keeps the nose inside the wedge, so
    no additional horizon bound applies in this parameterization.
    """

    g: ExactReal
    h: ExactReal

    def __post_init__(self):
        object.__setattr__(self, "g", ER(self.g))
        object.__setattr__(self, "h", ER(self.h))
        if self.g.sign() < 0:
            raise InvalidConfig("proper acceleration must be nonnegative")
        if self.h.sign() <= 0:
            raise InvalidConfig("proper length must be positive")


def gtd_clock_ratio(cfg: ShipConfig) -> ExactReal:
    """Nose-clock rate divided by rear-clock rate; exact.

    Computed from the Rindler geometry (rates are proportional to the
    Rindler spatial coordinate), not pasted: equals 1 + g*h, and equals 1
    exactly when g = 0.
    """
    if cfg.g.is_zero():
        return ER(1)
    rear = 1 / cfg.g
    nose = rear + cfg.h
    return nose / rear


def hyperbolic_worldline(g, span: float = 4.0) -> SmoothNumeric:
    """The uniformly accelerated worldline X(t) = sqrt(1/g^2 + t^2) along
    x1, as a numeric worldline with analytic velocity."""
    gf = float(ER(g))
    if gf <= 0:
        raise InvalidConfig("need positive proper acceleration")
    x0 = 1.0 / gf

    def pos(t: float):
        return (math.sqrt(x0 * x0 + t * t), 0.0, 0.0)

    def vel(t: float):
        return (t / math.sqrt(x0 * x0 + t * t), 0.0, 0.0)

    return SmoothNumeric(pos, order=9, t_min=-span, t_max=span, velocity=vel)


def rindler_observer_chart(g) -> DifferentiableChart:
    """Chart adapted to the uniformly accelerated observer with proper
    acceleration g: reference (X, T) <-> Rindler (x - 1/g on the ship, t).

    forward: (X,y,z,T) -> (sqrt(X^2-T^2) - 1/g, y, z, artanh(T/X)/g)
    The observer rides the time axis of its own chart (AxSelf-).
    """
    gf = float(ER(g))
    if gf <= 0:
        raise InvalidConfig("need positive proper acceleration")
    x0 = 1.0 / gf

    def forward(p):
        X, y, z, T = p
        r2 = X * X - T * T
        if r2 <= 0 or X <= 0:
            raise ValueError("event outside the Rindler wedge")
        return (math.sqrt(r2) - x0, y, z, math.atanh(T / X) / gf)

    def inverse(q):
        x, y, z, t = q
        r = x + x0
        return (r * math.cosh(gf * t), y, z, r * math.sinh(gf * t))

    return DifferentiableChart(forward, inverse, order=9)


# ---------------------------------------------------------------------------
# Scenario files and CSV export.


def parse_scenario(text: str) -> AcceleratedScenario:
    """Scenario file: `scenario NAME`, `body ...` lines (model syntax),
    `home NAME`, `traveler NAME`, and two `meet X1 X2 X3 X4` lines."""
    name = "scenario"
    bodies = {}
    home_id: Optional[str] = None
    trav_id: Optional[str] = None
    meets = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "scenario":
            name = words[1]
        elif words[0] == "body":
            b = _parse_body(words[1:], line)
            bodies[b.id] = b
        elif words[0] == "home":
            home_id = words[1]
        elif words[0] == "traveler":
            trav_id = words[1]
        elif words[0] == "meet":
            meets.append(coord4(*[ER(w) for w in words[1:5]]))
        else:
            raise ValueError("unknown scenario line %r" % line)
    if home_id is None or trav_id is None or len(meets) != 2:
        raise ValueError("scenario needs home, traveler and two meet lines")
    extra = tuple(b for bid, b in bodies.items() if bid not in (home_id, trav_id))
    return AcceleratedScenario(name, bodies[home_id], bodies[trav_id],
                               meets[0], meets[1], extra)


def serialize_scenario(sc: AcceleratedScenario) -> str:
    from .model import _serialize_body

    lines = ["scenario %s" % sc.name]
    for b in (sc.home, sc.traveler) + tuple(sc.extra_bodies):
        lines.append(_serialize_body(b))
    lines.append("home %s" % sc.home.id)
    lines.append("traveler %s" % sc.traveler.id)
    for event in (sc.departure, sc.reunion):
        lines.append("meet %s" % " ".join(c.literal().replace(" ", "") for c in event))
    return "\n".join(lines) + "\n"


def load_scenario(path) -> AcceleratedScenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def worldline_csv(w, t0, t1, steps: int = 100) -> str:
    """CSV rows (t, x1, x2, x3, v1, v2, v3, tau) along the worldline."""
    rows = ["t,x1,x2,x3,v1,v2,v3,tau"]
    t0f, t1f = float(t0), float(t1)
    exact = isinstance(w, (InertialLine, PiecewiseInertial))
    for i in range(steps + 1):
        tf = t0f + (t1f - t0f) * i / steps
        if exact:
            t = ER(Fraction(tf).limit_denominator(10 ** 9))
            p = w.point_at(t)
            try:
                v, _ = comoving_inertial(w, t)
            except NotDifferentiable:
                v = (ER(0), ER(0), ER(0))
            tau = proper_time(w, ER(w.t_min) if isinstance(w, PiecewiseInertial) else ER(t0), t)
            row = [t, p[0], p[1], p[2], v[0], v[1], v[2], tau]
            rows.append(",".join(x.decimal_str() for x in row))
        else:
            p = w.point_at(tf)
            v = _richardson_velocity(w, tf)
            tau = _numeric_proper_time(w, t0f, tf) if tf > t0f else ApproxReal.from_float(0.0, 0.0)
            vals = [tf, p[0], p[1], p[2], v[0], v[1], v[2], float(tau)]
            rows.append(",".join("%.12g" % x for x in vals))
    return "\n".join(rows) + "\n"
