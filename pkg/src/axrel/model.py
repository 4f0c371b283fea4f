"""Concrete structures: bodies, worldlines, observer charts.

A Structure stores every worldline in one distinguished reference chart;
per-observer chart maps (Poincare or general affine maps for inertial
observers, differentiable numeric charts for accelerated ones) translate
reference coordinates into the observer's own.  The worldview relation
W(o, b, x) is derived, never stored pointwise: it holds iff the
preimage of x under o's chart lies on b's worldline.

Existential body quantifiers over "all photons" / "all inertial bodies"
are answered by intensional family flags rather than by materializing
infinitely many bodies; the witness solvers live in `semantics`.

Model description files round-trip losslessly; see ``parse_model`` /
``serialize_model``.  Field literals in files must not contain spaces
(write ``sqrt(1-9/25)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .field import ER, ExactReal, sqrt
from .kinematics import (
    AffineMap, Coord4, PoincareMap, SuperluminalVelocity, boost, coord4,
    plane_rotation, speed_squared,
)
from . import linalg

__all__ = [
    "InertialLine", "PhotonLine", "PiecewiseInertial", "SmoothNumeric",
    "Body", "Structure", "DifferentiableChart", "ChartDomain",
    "standard_minkowski", "galilean_structure", "NotAnObserver",
    "EventContent", "parse_model", "serialize_model", "load_model",
    "cloud", "unsafe_inertial_line",
]


class NotAnObserver(ValueError):
    pass


# ---------------------------------------------------------------------------
# Worldlines (in the reference chart).


@dataclass(frozen=True)
class InertialLine:
    """Straight sub-light worldline through `point` with 3-velocity `velocity`."""

    point: Coord4
    velocity: tuple  # 3-vector of ExactReal, |v| < 1

    def __post_init__(self):
        if speed_squared(self.velocity).compare(1) >= 0 and not getattr(self, "_unchecked", False):
            raise SuperluminalVelocity("inertial line requires |v| < 1")

    def point_at(self, t: ExactReal) -> Coord4:
        dt = ER(t) - self.point[3]
        return tuple(self.point[i] + self.velocity[i] * dt for i in range(3)) + (ER(t),)

    def contains(self, x: Coord4) -> bool:
        dt = x[3] - self.point[3]
        return all(x[i] == self.point[i] + self.velocity[i] * dt for i in range(3))


def unsafe_inertial_line(point, velocity) -> InertialLine:
    """Test-only: an 'inertial' line without the sub-light check.

    Exists solely so the Fails paths of NoFTL-style checks can be
    exercised; never used by production constructors.
    """
    line = object.__new__(InertialLine)
    object.__setattr__(line, "point", tuple(ER(c) for c in point))
    object.__setattr__(line, "velocity", tuple(ER(c) for c in velocity))
    return line


@dataclass(frozen=True)
class PhotonLine:
    """Unit-speed line through `point` along the exact unit vector `direction`."""

    point: Coord4
    direction: tuple  # exact unit 3-vector

    def __post_init__(self):
        if not (speed_squared(self.direction) == 1):
            raise ValueError("photon direction must be an exact unit vector")

    def point_at(self, t: ExactReal) -> Coord4:
        dt = ER(t) - self.point[3]
        return tuple(self.point[i] + self.direction[i] * dt for i in range(3)) + (ER(t),)

    def contains(self, x: Coord4) -> bool:
        dt = x[3] - self.point[3]
        return all(x[i] == self.point[i] + self.direction[i] * dt for i in range(3))


@dataclass(frozen=True)
class PiecewiseInertial:
    """Continuous chain of inertial segments given by (x1,x2,x3,x4) knots.

    Knot times must increase strictly; each segment must be sub-light.
    The domain is the knot time span.
    """

    knots: tuple  # of Coord4, strictly increasing in x4

    def __post_init__(self):
        if len(self.knots) < 2:
            raise ValueError("need at least two knots")
        for a, b in zip(self.knots, self.knots[1:]):
            dt = b[3] - a[3]
            if dt.sign() <= 0:
                raise ValueError("knot times must increase strictly")
            seg2 = sum(((b[i] - a[i]) ** 2 for i in range(3)), ER(0))
            if (seg2 - dt * dt).sign() >= 0:
                raise SuperluminalVelocity("piecewise segment at or above light speed")

    @property
    def t_min(self) -> ExactReal:
        return self.knots[0][3]

    @property
    def t_max(self) -> ExactReal:
        return self.knots[-1][3]

    def segment_velocities(self) -> list:
        out = []
        for a, b in zip(self.knots, self.knots[1:]):
            dt = b[3] - a[3]
            out.append(tuple((b[i] - a[i]) / dt for i in range(3)))
        return out

    def point_at(self, t: ExactReal) -> Coord4:
        t = ER(t)
        if (t - self.t_min).sign() < 0 or (t - self.t_max).sign() > 0:
            raise ValueError("time outside worldline domain")
        for a, b in zip(self.knots, self.knots[1:]):
            if (t - b[3]).sign() <= 0:
                dt = b[3] - a[3]
                lam = (t - a[3]) / dt
                return tuple(a[i] + lam * (b[i] - a[i]) for i in range(3)) + (t,)
        raise AssertionError

    def contains(self, x: Coord4) -> bool:
        t = x[3]
        if (t - self.t_min).sign() < 0 or (t - self.t_max).sign() > 0:
            return False
        p = self.point_at(t)
        return all(p[i] == x[i] for i in range(3))


@dataclass(frozen=True)
class SmoothNumeric:
    """Numeric worldline: float position callable of time, declared order n.

    Membership tests are interval tests at the declared tolerance; exact
    queries are answered three-valued by the evaluation layer.
    """

    position: Callable  # t -> (x1, x2, x3) floats
    order: int
    t_min: float
    t_max: float
    velocity: Optional[Callable] = None  # optional analytic derivative
    tolerance: float = 1e-9

    def point_at(self, t):
        tf = float(t)
        if not (self.t_min <= tf <= self.t_max):
            raise ValueError("time outside worldline domain")
        return tuple(self.position(tf)) + (tf,)

    def contains(self, x) -> bool:
        p = self.position(float(x[3]))
        return all(abs(float(x[i]) - p[i]) <= self.tolerance for i in range(3))


Worldline = (InertialLine, PhotonLine, PiecewiseInertial, SmoothNumeric)


def cloud(line: InertialLine, offsets: Sequence) -> list:
    """Parallel copies of an inertial line, for extended-body scenarios."""
    out = []
    for off in offsets:
        point = tuple(line.point[i] + ER(off[i]) for i in range(3)) + (line.point[3],)
        out.append(InertialLine(point, line.velocity))
    return out


# ---------------------------------------------------------------------------
# Bodies and charts.


@dataclass(frozen=True)
class Body:
    id: str
    is_inertial: bool
    is_photon: bool
    worldline: object

    def __post_init__(self):
        if self.is_photon and not isinstance(self.worldline, PhotonLine):
            raise ValueError("photons must ride photon lines")
        if self.is_inertial and not isinstance(self.worldline, InertialLine):
            raise ValueError("inertial bodies must ride inertial lines")


@dataclass(frozen=True)
class ChartDomain:
    """Axis-aligned box; bounds None mean unbounded. closed=True includes
    the finite endpoints (used to build deliberately non-open domains)."""

    bounds: tuple = ((None, None),) * 4  # ((lo, hi), ...) of optional ExactReal
    closed: bool = False

    def is_full(self) -> bool:
        return all(lo is None and hi is None for lo, hi in self.bounds)

    def contains(self, x: Coord4) -> bool:
        for i, (lo, hi) in enumerate(self.bounds):
            if lo is not None:
                c = (x[i] - lo).sign()
                if c < 0 or (c == 0 and not self.closed):
                    return False
            if hi is not None:
                c = (x[i] - hi).sign()
                if c > 0 or (c == 0 and not self.closed):
                    return False
        return True


@dataclass(frozen=True)
class DifferentiableChart:
    """Invertible numeric chart for an accelerated observer.

    `forward` maps reference coordinates to observer coordinates (floats),
    `inverse` the other way; `order` is the declared differentiability.
    """

    forward: Callable
    inverse: Callable
    order: int
    domain: ChartDomain = ChartDomain()


class Structure:
    """A model of the language: bodies, family flags, observer charts."""

    def __init__(self, bodies: Sequence[Body], charts: dict,
                 photon_family: bool = True, inertial_family: bool = True,
                 chart_domains: Optional[dict] = None, name: str = "structure",
                 constants: Sequence = ()):
        self.name = name
        self.bodies = {b.id: b for b in bodies}
        if len(self.bodies) != len(bodies):
            raise ValueError("duplicate body ids")
        self.charts = dict(charts)  # body id -> AffineMap | DifferentiableChart
        self.chart_domains = dict(chart_domains or {})  # body id -> ChartDomain
        self.photon_family = photon_family
        self.inertial_family = inertial_family
        # Scenario constants feed the sampling corner set in `semantics`.
        self.constants = tuple(constants)
        for oid in self.charts:
            if oid not in self.bodies:
                raise ValueError("chart for unknown body %r" % oid)

    # -- observers ---------------------------------------------------------

    def observers(self) -> list:
        return [self.bodies[oid] for oid in self.charts]

    def is_observer(self, body: Body) -> bool:
        return body.id in self.charts

    def chart_of(self, body: Body):
        return self.charts.get(body.id)

    def domain_of(self, body: Body) -> ChartDomain:
        return self.chart_domains.get(body.id, ChartDomain())

    def all_charts_affine(self) -> bool:
        return all(isinstance(c, AffineMap) for c in self.charts.values())

    def all_domains_full(self) -> bool:
        return all(self.domain_of(self.bodies[oid]).is_full() for oid in self.charts)

    # -- the worldview relation ---------------------------------------------

    def holds_W(self, o: Body, b: Body, x: Coord4) -> bool:
        """W(o, b, x): o coordinatizes b at x.  Exact for exact worldlines."""
        chart = self.chart_of(o)
        if chart is None:
            return False  # non-observers coordinatize nothing
        if isinstance(chart, AffineMap):
            x = tuple(ER(c) for c in x)
            if not self.domain_of(o).contains(x):
                return False
            ref = chart.inverse().apply(x)
            return b.worldline.contains(ref)
        # numeric chart: float path at declared tolerance
        ref = chart.inverse(tuple(float(c) for c in x))
        return b.worldline.contains(tuple(ref))

    def event_at(self, o: Body, x: Coord4) -> "EventContent":
        """Named bodies present at o's coordinates x, plus family descriptors."""
        if not self.is_observer(o):
            raise NotAnObserver(o.id)
        named = {b.id for b in self.bodies.values() if self.holds_W(o, b, x)}
        descriptors = []
        if self.photon_family:
            descriptors.append("photons through this event in every null direction")
        if self.inertial_family:
            descriptors.append("inertial bodies through this event at every sub-light velocity")
        return EventContent(frozenset(named), tuple(descriptors))

    def event_correspondence(self, o: Body, o2: Body, x: Coord4) -> Coord4:
        """The o2-coordinates of the event at o's x (composition of charts)."""
        for obs in (o, o2):
            if not self.is_observer(obs):
                raise NotAnObserver(obs.id)
        c1, c2 = self.chart_of(o), self.chart_of(o2)
        if isinstance(c1, AffineMap) and isinstance(c2, AffineMap):
            x = tuple(ER(c) for c in x)
            return c2.apply(c1.inverse().apply(x))
        xf = tuple(float(c) for c in x)
        fwd = c2.forward if isinstance(c2, DifferentiableChart) else (
            lambda p: tuple(float(v) for v in c2.apply(coord4(*p))))
        inv = c1.inverse if isinstance(c1, DifferentiableChart) else (
            lambda p: tuple(float(v) for v in c1.inverse().apply(coord4(*p))))
        return tuple(fwd(tuple(inv(xf))))

    def reference_point(self, o: Body, x: Coord4) -> Coord4:
        chart = self.chart_of(o)
        if chart is None:
            raise NotAnObserver(o.id)
        if isinstance(chart, AffineMap):
            return chart.inverse().apply(tuple(ER(c) for c in x))
        return chart.inverse(tuple(float(c) for c in x))

    def with_extra_bodies(self, extra: Sequence[Body]) -> "Structure":
        bodies = list(self.bodies.values()) + list(extra)
        return Structure(bodies, self.charts, self.photon_family,
                         self.inertial_family, self.chart_domains, self.name,
                         self.constants)


@dataclass(frozen=True)
class EventContent:
    named: frozenset
    family_descriptors: tuple = ()


# ---------------------------------------------------------------------------
# Standard structures.


@dataclass(frozen=True)
class ObserverSpec:
    """Parameters for one inertial observer chart: chart = translate o
    rotate o boost(velocity); the observer's worldline is the preimage of
    the time axis."""

    name: str
    velocity: tuple = (0, 0, 0)
    rotations: tuple = ()  # ((i, j, cos, sin), ...)
    translation: tuple = (0, 0, 0, 0)
    domain: ChartDomain = ChartDomain()
    galilean: bool = False


def _observer_chart(spec: ObserverSpec) -> AffineMap:
    if spec.galilean:
        v = tuple(ER(c) for c in spec.velocity)
        rows = [[ER(1 if i == j else 0) for j in range(4)] for i in range(4)]
        for i in range(3):
            rows[i][3] = -v[i]
        chart: AffineMap = AffineMap(tuple(tuple(r) for r in rows))
    else:
        chart = boost(spec.velocity)
    for (i, j, c, s) in spec.rotations:
        chart = plane_rotation(i, j, c, s).compose(chart)
    if any(not ER(c).is_zero() for c in spec.translation):
        shift = AffineMap(linalg.identity(4), tuple(ER(c) for c in spec.translation))
        if isinstance(chart, PoincareMap):
            shift = PoincareMap(linalg.identity(4), tuple(ER(c) for c in spec.translation))
        chart = shift.compose(chart)
    return chart


def _observer_body(name: str, chart: AffineMap) -> Body:
    inv = chart.inverse()
    p0 = inv.apply(coord4(0, 0, 0, 0))
    p1 = inv.apply(coord4(0, 0, 0, 1))
    dt = p1[3] - p0[3]
    velocity = tuple((p1[i] - p0[i]) / dt for i in range(3))
    return Body(name, is_inertial=True, is_photon=False,
                worldline=InertialLine(p0, velocity))


def standard_minkowski(observers: Sequence[ObserverSpec],
                       extra_bodies: Sequence[Body] = (),
                       name: str = "minkowski") -> Structure:
    """The Minkowski model over the tower field with the given observers.

    Both intensional families are on; every chart is a Poincare map, so
    all SpecRel axioms hold (certified by the semantics module).
    """
    charts, bodies, domains, consts = {}, [], {}, []
    for spec in observers:
        if spec.galilean:
            raise ValueError("standard_minkowski takes Lorentz observers only")
        chart = _observer_chart(spec)
        charts[spec.name] = chart
        bodies.append(_observer_body(spec.name, chart))
        if not spec.domain.is_full():
            domains[spec.name] = spec.domain
        consts.extend(c for c in spec.velocity)
        consts.extend(c for c in spec.translation)
    bodies.extend(extra_bodies)
    constants = tuple(ER(c) for c in consts)
    return Structure(bodies, charts, photon_family=True, inertial_family=True,
                     chart_domains=domains, name=name, constants=constants)


def galilean_structure(observers: Sequence[ObserverSpec],
                       extra_bodies: Sequence[Body] = (),
                       name: str = "galilean") -> Structure:
    """Newtonian-chart model: observer charts are Galilean maps.

    The negative control for AxPh: Galilean maps do not preserve the
    lightlike equation.
    """
    charts, bodies, domains, consts = {}, [], {}, []
    for spec in observers:
        galspec = ObserverSpec(spec.name, spec.velocity, spec.rotations,
                               spec.translation, spec.domain, galilean=True)
        chart = _observer_chart(galspec)
        charts[spec.name] = chart
        bodies.append(_observer_body(spec.name, chart))
        if not spec.domain.is_full():
            domains[spec.name] = spec.domain
        consts.extend(c for c in spec.velocity)
    bodies.extend(extra_bodies)
    constants = tuple(ER(c) for c in consts)
    return Structure(bodies, charts, photon_family=True, inertial_family=True,
                     chart_domains=domains, name=name, constants=constants)


# ---------------------------------------------------------------------------
# Model description files.


def parse_model(text: str) -> Structure:
    """Parse a model description file.  One declaration per line:

    structure NAME
    families [photons] [inertials] | families none
    observer NAME [velocity V1 V2 V3] [galilean V1 V2 V3]
        [rotate I J COS SIN] [translate C1 C2 C3 C4]
        [domain AXIS LO HI [closed]]          # LO/HI may be `-inf` / `inf`
    body NAME photon through X1 X2 X3 X4 direction D1 D2 D3
    body NAME inertial through X1 X2 X3 X4 velocity V1 V2 V3
    body NAME piecewise knots X1 X2 X3 X4 , Y1 Y2 Y3 Y4 [, ...]

    Field literals must not contain spaces.
    """
    name = "structure"
    photon_family = inertial_family = False
    families_seen = False
    observers: list = []
    bodies: list = []

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "structure":
            name = _one(words[1:], line)
        elif head == "families":
            families_seen = True
            rest = words[1:]
            if rest == ["none"]:
                photon_family = inertial_family = False
            else:
                for w in rest:
                    if w == "photons":
                        photon_family = True
                    elif w == "inertials":
                        inertial_family = True
                    else:
                        raise ValueError("unknown family %r" % w)
        elif head == "observer":
            observers.append(_parse_observer(words[1:], line))
        elif head == "body":
            bodies.append(_parse_body(words[1:], line))
        else:
            raise ValueError("unknown declaration %r" % line)
    if not families_seen:
        photon_family = inertial_family = True

    charts, obs_bodies, domains, consts = {}, [], {}, []
    for spec in observers:
        chart = _observer_chart(spec)
        charts[spec.name] = chart
        obs_bodies.append(_observer_body(spec.name, chart))
        if not spec.domain.is_full():
            domains[spec.name] = spec.domain
        consts.extend(spec.velocity)
        consts.extend(spec.translation)
    constants = tuple(ER(c) for c in consts)
    return Structure(obs_bodies + bodies, charts, photon_family, inertial_family,
                     domains, name, constants)


def _one(rest, line):
    if len(rest) != 1:
        raise ValueError("malformed line %r" % line)
    return rest[0]


def _parse_observer(words, line) -> ObserverSpec:
    name = words[0]
    i = 1
    velocity = (ER(0), ER(0), ER(0))
    rotations: list = []
    trans = (ER(0), ER(0), ER(0), ER(0))
    domain_bounds = [(None, None)] * 4
    closed = False
    galilean = False
    has_domain = False
    while i < len(words):
        key = words[i]
        if key in ("velocity", "galilean"):
            galilean = key == "galilean"
            velocity = tuple(ER(w) for w in words[i + 1:i + 4])
            i += 4
        elif key == "rotate":
            rotations.append((int(words[i + 1]), int(words[i + 2]),
                              ER(words[i + 3]), ER(words[i + 4])))
            i += 5
        elif key == "translate":
            trans = tuple(ER(w) for w in words[i + 1:i + 5])
            i += 5
        elif key == "domain":
            has_domain = True
            axis = int(words[i + 1]) - 1
            lo = None if words[i + 2] == "-inf" else ER(words[i + 2])
            hi = None if words[i + 3] == "inf" else ER(words[i + 3])
            domain_bounds[axis] = (lo, hi)
            i += 4
            if i < len(words) and words[i] == "closed":
                closed = True
                i += 1
        else:
            raise ValueError("unknown observer field %r in %r" % (key, line))
    domain = ChartDomain(tuple(domain_bounds), closed) if has_domain else ChartDomain()
    return ObserverSpec(name, velocity, tuple(rotations), trans, domain, galilean)


def _parse_body(words, line) -> Body:
    name, kind = words[0], words[1]
    if kind == "photon":
        assert words[2] == "through" and words[7] == "direction", line
        point = coord4(*[ER(w) for w in words[3:7]])
        direction = tuple(ER(w) for w in words[8:11])
        return Body(name, False, True, PhotonLine(point, direction))
    if kind == "inertial":
        assert words[2] == "through" and words[7] == "velocity", line
        point = coord4(*[ER(w) for w in words[3:7]])
        velocity = tuple(ER(w) for w in words[8:11])
        return Body(name, True, False, InertialLine(point, velocity))
    if kind == "piecewise":
        assert words[2] == "knots", line
        knots, current = [], []
        for w in words[3:]:
            if w == ",":
                knots.append(coord4(*current))
                current = []
            else:
                current.append(ER(w))
        if current:
            knots.append(coord4(*current))
        return Body(name, False, False, PiecewiseInertial(tuple(knots)))
    raise ValueError("unknown body kind %r in %r" % (kind, line))


def serialize_model(s: Structure) -> str:
    """Canonical text form; parse_model(serialize_model(s)) reproduces s
    for structures made of declarable parts."""
    lines = ["structure %s" % s.name]
    fams = []
    if s.photon_family:
        fams.append("photons")
    if s.inertial_family:
        fams.append("inertials")
    lines.append("families %s" % (" ".join(fams) if fams else "none"))
    for oid in s.charts:
        chart = s.charts[oid]
        if not isinstance(chart, AffineMap):
            raise ValueError("cannot serialize numeric chart %r" % oid)
        spec = _recover_observer_spec(s, oid, chart)
        lines.append(spec)
    for b in s.bodies.values():
        if b.id in s.charts:
            continue
        lines.append(_serialize_body(b))
    return "\n".join(lines) + "\n"


def _recover_observer_spec(s: Structure, oid: str, chart: AffineMap) -> str:
    # Observers serialize as velocity (from the worldline) + the residual
    # linear map (must be a pure rotation or galilean shear) + translation.
    body = s.bodies[oid]
    v = body.worldline.velocity
    parts = ["observer %s" % oid]
    base = _observer_chart(ObserverSpec(oid, v))
    residual = chart.compose(base.inverse())
    lin = residual.linear
    is_gal = not chart.is_lorentz()
    if is_gal:
        parts.append("galilean %s %s %s" % tuple(c.literal().replace(" ", "") for c in v))
    else:
        parts.append("velocity %s %s %s" % tuple(c.literal().replace(" ", "") for c in v))
        rot = _extract_plane_rotations(lin)
        for (i, j, c, sn) in rot:
            parts.append("rotate %d %d %s %s" % (i, j, c.literal().replace(" ", ""),
                                                 sn.literal().replace(" ", "")))
    tr = residual.translation
    if any(not c.is_zero() for c in tr):
        parts.append("translate %s" % " ".join(c.literal().replace(" ", "") for c in tr))
    dom = s.domain_of(body)
    if not dom.is_full():
        for axis, (lo, hi) in enumerate(dom.bounds):
            if lo is None and hi is None:
                continue
            parts.append("domain %d %s %s%s" % (
                axis + 1,
                "-inf" if lo is None else lo.literal().replace(" ", ""),
                "inf" if hi is None else hi.literal().replace(" ", ""),
                " closed" if dom.closed else ""))
    return " ".join(parts)


def _extract_plane_rotations(lin) -> list:
    # Decompose a spatial rotation matrix into at most three plane rotations
    # (Givens); exact because pivots are exact.
    m = [list(row) for row in lin]
    out = []
    work = [row[:3] for row in m[:3]]
    for col in range(2):
        for row in range(col + 1, 3):
            a, b = work[col][col], work[row][col]
            if b.is_zero():
                continue
            r = sqrt(a * a + b * b)
            c, sn = a / r, b / r
            out.append((col + 1, row + 1, c, sn))
            g = [[ER(1 if i == j else 0) for j in range(3)] for i in range(3)]
            g[col][col], g[col][row] = c, sn
            g[row][col], g[row][row] = -sn, c
            work = [[sum((g[i][k] * work[k][j] for k in range(3)), ER(0))
                     for j in range(3)] for i in range(3)]
    # `out` undoes the rotation; the original is the reversed composition.
    rotations = [(i, j, c, sn) for (i, j, c, sn) in reversed(out)]
    return rotations


def _serialize_body(b: Body) -> str:
    w = b.worldline
    lit = lambda v: v.literal().replace(" ", "")
    if isinstance(w, PhotonLine):
        return "body %s photon through %s direction %s" % (
            b.id, " ".join(lit(c) for c in w.point), " ".join(lit(c) for c in w.direction))
    if isinstance(w, InertialLine):
        return "body %s inertial through %s velocity %s" % (
            b.id, " ".join(lit(c) for c in w.point), " ".join(lit(c) for c in w.velocity))
    if isinstance(w, PiecewiseInertial):
        knots = " , ".join(" ".join(lit(c) for c in k) for k in w.knots)
        return "body %s piecewise knots %s" % (b.id, knots)
    raise ValueError("cannot serialize worldline of %r" % b.id)


def load_model(path) -> Structure:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())
