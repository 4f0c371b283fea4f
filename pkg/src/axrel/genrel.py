"""Chart-level checking of the localized axioms and metric geodesics.

A MetricChart is a single coordinate chart: an open box domain, a
callable metric with signature (+,+,+,-) (space-plus, matching the
squared-interval convention used everywhere in this package), and a
declared smoothness order.  There is no atlas machinery: completeness
with respect to Lorentzian manifolds is a statement about the theory,
and the chart layer is its desk-scale witness.

All verdicts here are numeric and carry their tolerance; the flat-chart
cases cross-validate against the exact special-relativistic results.
Christoffel symbols come from central finite differences (step tied to
the probe tolerance, default 1e-4); the integrator is fixed-step RK4
with halving-based error control, fully deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exprs import compile_float, parse_expression
from .field import ER
from .model import DifferentiableChart, SmoothNumeric
from .semantics import Verdict

__all__ = [
    "MetricChart", "GeodesicResult", "DegenerateMetric", "NotTimelike",
    "NoMeeting", "LeftDomain", "normal_frame", "check_axph_minus",
    "check_axsymt_minus", "check_axself_minus", "check_axev_minus",
    "check_axdiff", "geodesic", "flat_chart", "rindler_chart",
    "parse_chart_file", "load_chart_file", "ChartSuiteConfig",
    "check_chart_theory", "static_observer_chart", "FloatBox",
    "rindler_to_minkowski", "geodesic_csv",
]


class DegenerateMetric(ValueError):
    pass


class NotTimelike(ValueError):
    pass


class NoMeeting(ValueError):
    pass


class LeftDomain(ValueError):
    pass


@dataclass(frozen=True)
class FloatBox:
    """Axis-aligned float box; +-inf for unbounded axes.  closed_faces
    marks faces whose boundary points are (wrongly, for AxEv-) included."""

    lo: tuple = (-math.inf,) * 4
    hi: tuple = (math.inf,) * 4
    closed_faces: tuple = ()  # e.g. ((axis, "hi"), ...)

    def contains(self, p, strict: bool = True) -> bool:
        for i in range(4):
            if p[i] < self.lo[i] or p[i] > self.hi[i]:
                return False
            if strict:
                if p[i] == self.lo[i] and (i, "lo") not in self.closed_faces:
                    return False
                if p[i] == self.hi[i] and (i, "hi") not in self.closed_faces:
                    return False
        return True

    def interior_contains_ball(self, p, r: float) -> bool:
        return all(p[i] - r > self.lo[i] and p[i] + r < self.hi[i] for i in range(4))

    def sample_points(self, n_per_axis: int = 3):
        axes = []
        for i in range(4):
            lo = self.lo[i] if math.isfinite(self.lo[i]) else -2.0
            hi = self.hi[i] if math.isfinite(self.hi[i]) else 2.0
            pad = (hi - lo) / (n_per_axis + 1)
            axes.append([lo + pad * (k + 1) for k in range(n_per_axis)])
        for i1 in axes[0]:
            for i2 in axes[1][:1]:
                for i3 in axes[2][:1]:
                    for i4 in axes[3]:
                        yield (i1, i2, i3, i4)


@dataclass
class MetricChart:
    """g: Coord4 floats -> 4x4 numpy array, symmetric, signature (+,+,+,-)."""

    g: Callable
    domain: FloatBox = FloatBox()
    order: int = 3
    name: str = "chart"
    dg: Optional[Callable] = None  # optional analytic (axis -> d g / d x_axis)

    def metric_at(self, p) -> np.ndarray:
        m = np.asarray(self.g(tuple(p)), dtype=float)
        if m.shape != (4, 4) or not np.allclose(m, m.T, atol=1e-12):
            raise DegenerateMetric("metric must be a symmetric 4x4 matrix")
        return 0.5 * (m + m.T)


def flat_chart() -> MetricChart:
    eta = np.diag([1.0, 1.0, 1.0, -1.0])
    return MetricChart(lambda p: eta, FloatBox(), order=9, name="flat")


def rindler_chart(lo: float = 0.1, hi: float = 10.0) -> MetricChart:
    """ds^2 = dx1^2 + dx2^2 + dx3^2 - x1^2 dx4^2 on x1 in (lo, hi)."""

    def g(p):
        return np.diag([1.0, 1.0, 1.0, -p[0] * p[0]])

    box = FloatBox(lo=(lo, -math.inf, -math.inf, -math.inf),
                   hi=(hi, math.inf, math.inf, math.inf))
    return MetricChart(g, box, order=9, name="rindler")


def rindler_to_minkowski(p) -> tuple:
    """Closed-form chart map (x, y, z, t) -> (x cosh t, y, z, x sinh t)."""
    x, y, z, t = p
    return (x * math.cosh(t), y, z, x * math.sinh(t))


# ---------------------------------------------------------------------------
# Normal frames.


def normal_frame(chart: MetricChart, p, tol: float = 1e-12) -> np.ndarray:
    """M with M^T g(p) M = eta, via form-orthogonalization with a fixed
    pivot rule (largest remaining |g(b,b)|, ties to the lowest index);
    deterministic.  Raises DegenerateMetric when the signature is not
    (+,+,+,-)."""
    if not chart.domain.contains(p, strict=False):
        raise LeftDomain("point outside the chart domain")
    G = chart.metric_at(p)

    def form(u, v):
        return float(u @ G @ v)

    basis = [np.eye(4)[i].copy() for i in range(4)]
    columns, signs = [], []
    for _ in range(4):
        mags = [abs(form(b, b)) for b in basis]
        best = max(range(len(basis)), key=lambda i: (mags[i], -i))
        if mags[best] <= tol:
            raise DegenerateMetric("vanishing pivot: metric is degenerate at %r" % (tuple(p),))
        b = basis.pop(best)
        q = form(b, b)
        u = b / math.sqrt(abs(q))
        s = 1.0 if q > 0 else -1.0
        basis = [v - (form(v, u) / s) * u for v in basis]
        columns.append(u)
        signs.append(s)
    if sorted(signs) != [-1.0, 1.0, 1.0, 1.0]:
        raise DegenerateMetric("signature %s is not (+,+,+,-)" % (signs,))
    order = [i for i, s in enumerate(signs) if s > 0] + [signs.index(-1.0)]
    m = np.column_stack([columns[i] for i in order])
    return m


# ---------------------------------------------------------------------------
# Localized axioms.


def _spatial_directions(n: int):
    # Deterministic unit directions: axes plus a golden-angle spiral.
    dirs = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0),
            (-1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, -1.0)]
    golden = math.pi * (3.0 - math.sqrt(5.0))
    for k in range(max(0, n - len(dirs))):
        z = 1.0 - 2.0 * (k + 0.5) / max(1, n - len(dirs))
        r = math.sqrt(max(0.0, 1.0 - z * z))
        th = golden * k
        dirs.append((r * math.cos(th), r * math.sin(th), z))
    return dirs[:n]


def check_axph_minus(chart: MetricChart, p, n_directions: int = 16,
                     tol: float = 1e-9) -> Verdict:
    """Null directions of g(p) have unit coordinate speed in the normal
    frame, and every sampled spatial direction extends to a null vector."""
    try:
        m = normal_frame(chart, p)
    except DegenerateMetric as exc:
        raise
    m_inv = np.linalg.inv(m)
    G = chart.metric_at(p)
    worst = 0.0
    for d in _spatial_directions(n_directions):
        # g(u,u) = 0 with u = (d, tau): quadratic in tau.
        a = G[3, 3]
        b = sum(G[i, 3] * d[i] for i in range(3))
        c = sum(G[i, j] * d[i] * d[j] for i in range(3) for j in range(3))
        disc = b * b - a * c
        if disc <= 0 or abs(a) < 1e-15:
            return Verdict.fails(
                evidence={"direction": d, "reason": "no real null extension"},
                method="sampled", tolerance=tol)
        for tau in ((-b + math.sqrt(disc)) / a, (-b - math.sqrt(disc)) / a):
            if tau == 0.0:
                return Verdict.fails(
                    evidence={"direction": d, "reason": "degenerate null direction"},
                    method="sampled", tolerance=tol)
            u = np.array([d[0], d[1], d[2], tau])
            hat = m_inv @ u
            space = math.sqrt(hat[0] ** 2 + hat[1] ** 2 + hat[2] ** 2)
            speed_err = abs(space - abs(hat[3])) / max(abs(hat[3]), 1e-300)
            worst = max(worst, speed_err)
            if speed_err > tol:
                return Verdict.fails(
                    evidence={"direction": d, "speed_error": speed_err},
                    method="sampled", tolerance=tol)
    return Verdict.holds(method="sampled",
                         evidence={"max_speed_error": worst,
                                   "directions": n_directions},
                         tolerance=tol)


def _tangent_of(worldline, t: float):
    if not isinstance(worldline, SmoothNumeric):
        raise TypeError("expected a SmoothNumeric worldline in chart coordinates")
    from .accel import _richardson_velocity
    v = _richardson_velocity(worldline, t)
    return np.array([v[0], v[1], v[2], 1.0])


def check_axsymt_minus(chart: MetricChart, obs1: SmoothNumeric, obs2: SmoothNumeric,
                       t_meet: float, tol: float = 1e-9,
                       rate_fn: Optional[Callable] = None) -> Verdict:
    """Meeting observers see each other's clock rates symmetrically.

    The rate at which observer i sees j's clock tick at the meeting is
    computed from the metric's orthogonal projection of j's unit tangent
    onto i's local time axis; `rate_fn(g, u_i, u_j)` may be injected to
    exercise the Fails path with a deliberately asymmetric oracle.
    """
    p1, p2 = obs1.point_at(t_meet), obs2.point_at(t_meet)
    if max(abs(a - b) for a, b in zip(p1[:3], p2[:3])) > 1e-9:
        raise NoMeeting("worldlines do not meet at t=%g" % t_meet)
    G = chart.metric_at(p1)
    tangents = []
    for obs in (obs1, obs2):
        u = _tangent_of(obs, t_meet)
        q = float(u @ G @ u)
        if q >= 0:
            raise NotTimelike("tangent is not timelike (g(u,u)=%g)" % q)
        tangents.append(u / math.sqrt(-q))
    n1, n2 = tangents
    if rate_fn is None:
        def rate_fn(g, ui, uj):
            return 1.0 / float(-(ui @ g @ uj))
    r12 = rate_fn(G, n1, n2)
    r21 = rate_fn(G, n2, n1)
    diff = abs(r12 - r21)
    if diff > tol:
        return Verdict.fails(evidence={"rate_1_sees_2": r12, "rate_2_sees_1": r21},
                             method="sampled", tolerance=tol)
    return Verdict.holds(method="sampled",
                         evidence={"rate_1_sees_2": r12, "rate_2_sees_1": r21},
                         tolerance=tol)


def static_observer_chart(position) -> DifferentiableChart:
    """Observer chart for a worldline at fixed spatial chart coordinates:
    translate space so the observer rides its own time axis."""
    a = tuple(float(c) for c in position[:3])

    def forward(p):
        return (p[0] - a[0], p[1] - a[1], p[2] - a[2], p[3])

    def inverse(q):
        return (q[0] + a[0], q[1] + a[1], q[2] + a[2], q[3])

    return DifferentiableChart(forward, inverse, order=99)


def check_axself_minus(observer_chart: DifferentiableChart, worldline: SmoothNumeric,
                       sample_times: Sequence[float], tol: float = 1e-9) -> Verdict:
    """Every sampled self-coordinatized point has zero space part."""
    worst = 0.0
    for t in sample_times:
        p = worldline.point_at(t)
        q = observer_chart.forward(tuple(float(c) for c in p))
        off = max(abs(q[i]) for i in range(3))
        worst = max(worst, off)
        if off > tol:
            return Verdict.fails(evidence={"t": t, "offset": off},
                                 method="sampled", tolerance=tol)
    return Verdict.holds(method="sampled", evidence={"max_offset": worst},
                         tolerance=tol)


def check_axev_minus(domains: dict, worldlines: dict,
                     radius_ladder: Sequence[float] = (0.1, 0.01, 0.001),
                     samples_per_axis: int = 3, tol: float = 1e-9) -> Verdict:
    """Openness of chart domains plus mutual-observation closure.

    domains: observer name -> FloatBox; worldlines: name -> SmoothNumeric
    (chart coordinates).  A sampled point on a closed face fails the
    openness probe; closure requires every sampled point of o's worldline
    inside o''s domain to lie in o's own domain as well.
    """
    for name, box in domains.items():
        probes = list(box.sample_points(samples_per_axis))
        for axis, side in box.closed_faces:
            bad = list(probes[0]) if probes else [0.0] * 4
            bad[axis] = box.hi[axis] if side == "hi" else box.lo[axis]
            probes.append(tuple(bad))
        for p in probes:
            if not box.contains(p, strict=False):
                continue
            if not any(box.interior_contains_ball(p, r) for r in radius_ladder):
                return Verdict.fails(
                    evidence={"observer": name, "point": tuple(p),
                              "reason": "no surrounding coordinate ball in the domain"},
                    method="sampled", tolerance=min(radius_ladder))
    names = sorted(worldlines)
    for o in names:
        for o2 in names:
            if o == o2:
                continue
            w = worldlines[o]
            for k in range(samples_per_axis):
                t = w.t_min + (w.t_max - w.t_min) * (k + 1) / (samples_per_axis + 1)
                p = w.point_at(t)
                if domains[o2].contains(p, strict=False) and \
                        not domains[o].contains(p, strict=False):
                    return Verdict.fails(
                        evidence={"observer": o, "seen_by": o2, "point": tuple(p)},
                        method="sampled", tolerance=tol)
    return Verdict.holds(method="sampled", tolerance=min(radius_ladder))


def check_axdiff(transform: Callable, n: int, probe_points: Sequence,
                 declared_order: int, h0: float = 1e-2, tol: float = 1e-6) -> Verdict:
    """Smoke test of n-times differentiability of a worldview transformation.

    The declared order is trusted metadata; the probe checks that k-th
    one-sided difference quotients agree (k = 1) and that iterated central
    difference quotients stabilize under halving (k <= n).  Returns
    Unknown when the declared order is below n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if declared_order < n:
        return Verdict.unknown(evidence={"note": "declared order %d < n=%d"
                                         % (declared_order, n)})
    directions = [np.eye(4)[i] for i in range(4)]
    for p in probe_points:
        p = np.asarray(p, dtype=float)
        for d in directions:
            # first order: one-sided quotients must agree
            f = lambda x: np.asarray(transform(tuple(x)), dtype=float)
            right = (f(p + h0 * d) - f(p)) / h0
            left = (f(p) - f(p - h0 * d)) / h0
            if np.max(np.abs(right - left)) > math.sqrt(tol) + 10 * h0:
                return Verdict.fails(
                    evidence={"point": tuple(p), "direction": tuple(d),
                              "jump": float(np.max(np.abs(right - left)))},
                    method="sampled", tolerance=tol)
            for k in range(1, n + 1):
                est_h = _central_diff(f, p, d, k, h0)
                est_h2 = _central_diff(f, p, d, k, h0 / 2)
                est_h4 = _central_diff(f, p, d, k, h0 / 4)
                e1 = np.max(np.abs(est_h - est_h2))
                e2 = np.max(np.abs(est_h2 - est_h4))
                if e2 > 0.75 * e1 + tol * max(1.0, np.max(np.abs(est_h4))):
                    return Verdict.fails(
                        evidence={"point": tuple(p), "order": k,
                                  "divergence": float(e2)},
                        method="sampled", tolerance=tol)
    return Verdict.holds(method="sampled", tolerance=tol)


def _central_diff(f, p, d, k: int, h: float):
    coeffs = [math.comb(k, j) * (-1.0) ** (k - j) for j in range(k + 1)]
    acc = None
    for j, c in enumerate(coeffs):
        x = p + (j - k / 2.0) * h * d
        val = c * f(x)
        acc = val if acc is None else acc + val
    return acc / h ** k


# ---------------------------------------------------------------------------
# Geodesics.


@dataclass
class GeodesicResult:
    """Sampled geodesic with conservation diagnostics.

    drift_flagged is set when the g(u,u) drift exceeded the configured
    tolerance; consumers must not treat such a curve as trustworthy.
    """

    lambdas: np.ndarray
    points: np.ndarray          # shape (n, 4)
    tangents: np.ndarray        # shape (n, 4)
    conservation_drift: float
    drift_tolerance: float
    drift_flagged: bool
    step: float
    truncated: bool
    worldline: Optional[SmoothNumeric] = None


def _christoffels(chart: MetricChart, x, h: float) -> np.ndarray:
    G = chart.metric_at(x)
    G_inv = np.linalg.inv(G)
    dg = np.empty((4, 4, 4))
    if chart.dg is not None:
        for c in range(4):
            dg[c] = np.asarray(chart.dg(tuple(x), c), dtype=float)
    else:
        for c in range(4):
            e = np.zeros(4)
            e[c] = h
            dg[c] = (chart.metric_at(np.asarray(x) + e) -
                     chart.metric_at(np.asarray(x) - e)) / (2 * h)
    gamma = np.empty((4, 4, 4))
    for a in range(4):
        for b in range(4):
            for c in range(4):
                gamma[a, b, c] = 0.5 * sum(
                    G_inv[a, d] * (dg[b][d, c] + dg[c][d, b] - dg[d][b, c])
                    for d in range(4))
    return gamma


def geodesic(chart: MetricChart, x0, u0, span: float, step: float = 0.01,
             diff_step: float = 1e-4, tol: float = 1e-8,
             max_halvings: int = 6, drift_tolerance: float = 1e-6) -> GeodesicResult:
    """Integrate the geodesic equation from (x0, u0) for the given affine
    span.  u0 must be timelike; the curve truncates (flagged) if it
    leaves the chart domain.  Fixed-step RK4 with halving-based error
    control; deterministic."""
    x0 = np.asarray([float(c) for c in x0], dtype=float)
    u0 = np.asarray([float(c) for c in u0], dtype=float)
    if not chart.domain.contains(x0, strict=False):
        raise LeftDomain("initial point outside the chart domain")
    q0 = float(u0 @ chart.metric_at(x0) @ u0)
    if q0 >= 0:
        raise NotTimelike("initial tangent has g(u,u) = %g >= 0" % q0)

    def integrate(h: float):
        n = max(2, int(round(span / h)))
        xs = [x0.copy()]
        us = [u0.copy()]
        lam = [0.0]
        truncated = False

        def rhs(state):
            x, u = state[:4], state[4:]
            gamma = _christoffels(chart, x, diff_step)
            du = -np.einsum("abc,b,c->a", gamma, u, u)
            return np.concatenate([u, du])

        state = np.concatenate([x0, u0])
        for i in range(n):
            k1 = rhs(state)
            k2 = rhs(state + 0.5 * h * k1)
            k3 = rhs(state + 0.5 * h * k2)
            k4 = rhs(state + h * k3)
            state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if not chart.domain.contains(state[:4], strict=False):
                truncated = True
                break
            xs.append(state[:4].copy())
            us.append(state[4:].copy())
            lam.append((i + 1) * h)
        return np.array(lam), np.array(xs), np.array(us), truncated

    h = step
    lam, xs, us, truncated = integrate(h)
    for _ in range(max_halvings):
        lam2, xs2, us2, trunc2 = integrate(h / 2)
        if truncated or trunc2:
            break
        if np.max(np.abs(xs2[-1] - xs[-1])) <= tol:
            lam, xs, us, truncated = lam2, xs2, us2, trunc2
            h = h / 2
            break
        lam, xs, us, truncated = lam2, xs2, us2, trunc2
        h = h / 2
    q_init = float(u0 @ chart.metric_at(x0) @ u0)
    drift = max(abs(float(us[i] @ chart.metric_at(xs[i]) @ us[i]) - q_init)
                for i in range(len(xs)))
    worldline = None
    t_col = xs[:, 3]
    if np.all(np.diff(t_col) > 0):
        from numpy import interp

        def pos(t: float):
            return (float(np.interp(t, t_col, xs[:, 0])),
                    float(np.interp(t, t_col, xs[:, 1])),
                    float(np.interp(t, t_col, xs[:, 2])))

        worldline = SmoothNumeric(pos, order=chart.order,
                                  t_min=float(t_col[0]), t_max=float(t_col[-1]))
    return GeodesicResult(lam, xs, us, drift, drift_tolerance,
                          drift > drift_tolerance, h, truncated, worldline)


def geodesic_csv(result: GeodesicResult) -> str:
    rows = ["lambda,x1,x2,x3,x4,u1,u2,u3,u4"]
    for lam, x, u in zip(result.lambdas, result.points, result.tangents):
        rows.append(",".join("%.12g" % v for v in
                             [lam, x[0], x[1], x[2], x[3], u[0], u[1], u[2], u[3]]))
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# Chart files and the chart-level theory suite.


@dataclass
class ChartSuiteConfig:
    chart: MetricChart
    observers: dict            # name -> static position (3 floats)
    meets: list                # (name_a, name_b, point4)
    order: int = 3


def parse_chart_file(text: str) -> ChartSuiteConfig:
    """Chart file grammar (one declaration per line)::

        chart NAME
        order N
        domain AXIS LO HI          # literals or -inf / inf
        g I J = EXPR               # symmetric; unset entries are 0
        worldline NAME X1 X2 X3    # static observer position (literals)
        meet NAME NAME X1 X2 X3 X4
    """
    name = "chart"
    order = 3
    lo = [-math.inf] * 4
    hi = [math.inf] * 4
    entries: dict = {}
    observers: dict = {}
    meets: list = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "chart":
            name = words[1]
        elif words[0] == "order":
            order = int(words[1])
        elif words[0] == "domain":
            axis = int(words[1]) - 1
            lo[axis] = -math.inf if words[2] == "-inf" else float(ER(words[2]))
            hi[axis] = math.inf if words[3] == "inf" else float(ER(words[3]))
        elif words[0] == "g":
            i, j = int(words[1]) - 1, int(words[2]) - 1
            assert words[3] == "=", line
            expr = parse_expression(" ".join(words[4:]), ("x1", "x2", "x3", "x4"))
            fn = compile_float(expr, ("x1", "x2", "x3", "x4"))
            entries[(i, j)] = fn
            entries[(j, i)] = fn
        elif words[0] == "worldline":
            observers[words[1]] = tuple(float(ER(w)) for w in words[2:5])
        elif words[0] == "meet":
            meets.append((words[1], words[2],
                          tuple(float(ER(w)) for w in words[3:7])))
        else:
            raise ValueError("unknown chart line %r" % line)

    def g(p):
        m = np.zeros((4, 4))
        for (i, j), fn in entries.items():
            m[i, j] = fn(p[0], p[1], p[2], p[3])
        return m

    box = FloatBox(tuple(lo), tuple(hi))
    chart = MetricChart(g, box, order=order, name=name)
    return ChartSuiteConfig(chart, observers, meets, order=order)


def load_chart_file(path) -> ChartSuiteConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_chart_file(fh.read())


def _static_worldline(chart: MetricChart, position) -> SmoothNumeric:
    box = chart.domain
    t_lo = box.lo[3] if math.isfinite(box.lo[3]) else -2.0
    t_hi = box.hi[3] if math.isfinite(box.hi[3]) else 2.0
    pos = tuple(position)
    return SmoothNumeric(lambda t: pos, order=chart.order,
                         t_min=t_lo, t_max=t_hi,
                         velocity=lambda t: (0.0, 0.0, 0.0))


def check_chart_theory(config: ChartSuiteConfig, n: Optional[int] = None,
                       tol: float = 1e-9) -> dict:
    """The GenRel(n) suite on a single chart: localized axioms checked
    numerically, AxField and the field-language IND battery exactly."""
    from .model import Structure
    from .semantics import check_ind_instance
    from .syntax.corpus import ind_battery

    n = n if n is not None else config.order
    chart = config.chart
    out: dict = {}
    out["AxField"] = Verdict.holds(
        evidence={"note": "tower-field arithmetic is an ordered field by construction"})
    obs_charts = {nm: static_observer_chart(pos) for nm, pos in config.observers.items()}
    obs_lines = {nm: _static_worldline(chart, pos) for nm, pos in config.observers.items()}
    # AxSelf-
    verdicts = []
    for nm in sorted(obs_charts):
        line = obs_lines[nm]
        times = [line.t_min + (line.t_max - line.t_min) * k / 6 for k in range(1, 6)]
        verdicts.append(check_axself_minus(obs_charts[nm], line, times, tol))
    out["AxSelf-"] = _merge(verdicts)
    # AxPh-
    verdicts = []
    for p in chart.domain.sample_points(3):
        verdicts.append(check_axph_minus(chart, p, tol=tol))
    out["AxPh-"] = _merge(verdicts)
    # AxEv-
    domains = {nm: chart.domain for nm in obs_charts} or {"chart": chart.domain}
    out["AxEv-"] = check_axev_minus(domains, obs_lines)
    # AxSymt-
    verdicts = []
    for a, b, point in config.meets:
        w1 = obs_lines.get(a) or _static_worldline(chart, point[:3])
        w2 = obs_lines.get(b) or _static_worldline(chart, point[:3])
        verdicts.append(check_axsymt_minus(chart, w1, w2, point[3], tol))
    out["AxSymt-"] = _merge(verdicts) if verdicts else Verdict.unknown(
        evidence={"note": "no meetings declared"})
    # AxDiff_n over worldview transformations between the observers
    verdicts = []
    names = sorted(obs_charts)
    probe = list(chart.domain.sample_points(2))[:3]
    for a in names:
        for b in names:
            if a == b:
                continue
            fa, fb = obs_charts[a], obs_charts[b]
            transform = lambda p, fa=fa, fb=fb: fb.forward(fa.inverse(p))
            verdicts.append(check_axdiff(transform, n, probe, declared_order=99))
    out["AxDiff_%d" % n] = _merge(verdicts) if verdicts else Verdict.holds(
        method="sampled", evidence={"note": "no observer pairs"})
    # IND battery: field-language instances are structure-independent.
    empty = Structure([], {}, photon_family=False, inertial_family=False, name="field")
    for inst in ind_battery():
        if inst.field_language:
            out["IND.%s" % inst.name] = check_ind_instance(empty, inst)
    return out


def _merge(verdicts: Sequence[Verdict]) -> Verdict:
    for v in verdicts:
        if v.is_fails:
            return v
    for v in verdicts:
        if v.outcome == "Unknown":
            return v
    if not verdicts:
        return Verdict.unknown()
    tol = max((v.tolerance or 0.0) for v in verdicts) or None
    return Verdict.holds(method="sampled", tolerance=tol)
