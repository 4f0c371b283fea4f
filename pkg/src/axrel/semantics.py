"""Tarskian evaluation of formulas in structures.

Outcomes are three-valued (Holds / Fails / Unknown) with evidence:

* Fails always carries a counterexample assignment that re-checks by
  direct evaluation, exactly;
* Holds of an existential carries the witness;
* Unknown is an honest first-class answer carrying a budget report.

Quantifier strategy.  Body-sort quantifiers enumerate named bodies,
guard-aware (an IOb-guarded universal ranges over observers only, which
is exhaustive because only charted bodies observe anything); existential
patterns over the intensional families (photon through two points,
inertial body through two timelike points) are solved exactly.  The
event-correspondence pattern  A b . W(o,b,x) <-> W(o',b,y)  is decided
exactly on affine structures.

Quantity-sort quantifiers are sampled per *block* of like quantifiers:
linear equality conjuncts and correspondence conjuncts in hypothesis
position pin variables exactly (Gaussian elimination over the field),
the remaining degrees of freedom take corner values {0, +-1, +-1/2},
scenario constants, and seeded rationals.  Where a pattern solver
applies the decision is exact; otherwise a passed universal is labelled
"sampled".  Enlarging the budget only extends the sample prefix, so a
Fails can never revert to Holds.

Certified verifiers replace sampling entirely for the SpecRel axioms on
affine-chart structures with full domains: each axiom reduces to an
exact matrix identity or an exact subspace computation, and violations
come back as concrete counterexample assignments.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .field import ER, ExactReal
from . import linalg
from .kinematics import AffineMap, ETA, mu
from .model import (
    Body, ChartDomain, InertialLine, PhotonLine, NotAnObserver, SmoothNumeric,
    Structure,
)
from .syntax.ast import (
    Add, And, EqB, EqQ, Exists, Forall, Formula, IBAtom, IObAtom, Iff, Implies,
    Less, Mul, Not, ObAtom, OneC, Or, PhAtom, Sort, Sub, Term, Theory, Var,
    WAtom, ZeroC,
)
from .syntax.corpus import (
    IndInstance, contract_definitions, ind_battery, instantiate_ind,
)
from .intervals import (
    IntervalSet, Poly, UnsupportedDefinableSet, poly_eq_zero, poly_less_zero,
    term_to_poly,
)

__all__ = [
    "Budget", "Verdict", "Assignment", "evaluate", "check_axiom",
    "check_theory", "check_ind_instance", "witness_photon",
    "witness_inertial", "UnknownAxiom", "UnboundVariable",
    "recheck_counterexample", "definable_set",
]

HOLDS, FAILS, UNKNOWN = "Holds", "Fails", "Unknown"


class UnknownAxiom(KeyError):
    pass


class UnboundVariable(NameError):
    pass


@dataclass(frozen=True)
class Budget:
    """Sampling budget; the seed makes every verdict deterministic."""

    samples: int = 48
    solver_iterations: int = 2000
    seed: int = 0


Assignment = dict  # variable name -> Body | ExactReal


@dataclass
class Verdict:
    outcome: str
    method: str = "certified"           # "certified" | "sampled"
    evidence: dict = dc_field(default_factory=dict)
    budget_report: dict = dc_field(default_factory=dict)
    tolerance: Optional[float] = None

    @staticmethod
    def holds(method="certified", evidence=None, budget=None, tolerance=None):
        return Verdict(HOLDS, method, evidence or {}, budget or {}, tolerance)

    @staticmethod
    def fails(evidence=None, method="certified", budget=None, tolerance=None):
        return Verdict(FAILS, method, evidence or {}, budget or {}, tolerance)

    @staticmethod
    def unknown(evidence=None, budget=None, tolerance=None):
        return Verdict(UNKNOWN, "sampled", evidence or {}, budget or {}, tolerance)

    @property
    def is_holds(self):
        return self.outcome == HOLDS

    @property
    def is_fails(self):
        return self.outcome == FAILS

    def to_json_dict(self) -> dict:
        def render(v):
            if isinstance(v, ExactReal):
                return v.literal()
            if isinstance(v, Body):
                return v.id
            if isinstance(v, tuple):
                return [render(x) for x in v]
            return v

        out = {
            "outcome": self.outcome,
            "method": self.method,
            "evidence": {k: render(v) for k, v in sorted(self.evidence.items())},
            "budget": dict(sorted(self.budget_report.items())),
        }
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        return out


class _BudgetExhausted(Exception):
    pass


class _Ctx:
    def __init__(self, structure: Structure, budget: Budget):
        self.s = structure
        self.budget = budget
        self.samples_used = 0
        self.solver_calls = 0

    def bump_solver(self):
        self.solver_calls += 1
        if self.solver_calls > self.budget.solver_iterations:
            raise _BudgetExhausted()

    def rng(self, path: str) -> random.Random:
        # Stable across processes: never trust hash() of strings.
        digest = hashlib.blake2b(path.encode(), digest_size=8).digest()
        return random.Random(int.from_bytes(digest, "big") ^ self.budget.seed)

    def report(self) -> dict:
        return {"samples": self.samples_used, "solver_calls": self.solver_calls,
                "seed": self.budget.seed}


# ---------------------------------------------------------------------------
# Terms.


def eval_term(term: Term, env: Assignment):
    if isinstance(term, Var):
        if term.name not in env:
            raise UnboundVariable(term.name)
        return env[term.name]
    if isinstance(term, ZeroC):
        return ER(0)
    if isinstance(term, OneC):
        return ER(1)
    left, right = eval_term(term.left, env), eval_term(term.right, env)
    if isinstance(term, Add):
        return left + right
    if isinstance(term, Sub):
        return left - right
    if isinstance(term, Mul):
        return left * right
    raise TypeError(term)


# ---------------------------------------------------------------------------
# Core evaluator.  Internal results are (state, sampled, evidence).


def evaluate(s: Structure, f: Formula, assignment: Optional[Assignment] = None,
             budget: Optional[Budget] = None) -> Verdict:
    """Evaluate a formula in a structure under an assignment."""
    ctx = _Ctx(s, budget or Budget())
    f = contract_definitions(f)
    try:
        state, sampled, evidence = _eval(f, dict(assignment or {}), ctx, "r")
    except _BudgetExhausted:
        return Verdict.unknown(evidence={"note": "solver budget exhausted"},
                               budget=ctx.report())
    method = "sampled" if sampled else "certified"
    if state == HOLDS:
        return Verdict.holds(method=method, evidence=evidence, budget=ctx.report())
    if state == FAILS:
        return Verdict.fails(evidence=evidence, method=method, budget=ctx.report())
    return Verdict.unknown(evidence=evidence, budget=ctx.report())


def _eval(f: Formula, env: Assignment, ctx: _Ctx, path: str):
    if isinstance(f, (IBAtom, PhAtom, ObAtom, IObAtom)):
        body = eval_term(f.body, env)
        if isinstance(f, IBAtom):
            truth = body.is_inertial
        elif isinstance(f, PhAtom):
            truth = body.is_photon
        elif isinstance(f, ObAtom):
            truth = ctx.s.is_observer(body)
        else:
            truth = body.is_inertial and ctx.s.is_observer(body)
        return (HOLDS if truth else FAILS), False, {}
    if isinstance(f, WAtom):
        obs = eval_term(f.observer, env)
        body = eval_term(f.body, env)
        coords = tuple(eval_term(c, env) for c in f.coords)
        truth = _holds_w3(ctx.s, obs, body, coords)
        if truth is None:
            return UNKNOWN, True, {}
        return (HOLDS if truth else FAILS), False, {}
    if isinstance(f, EqQ):
        truth = eval_term(f.left, env) == eval_term(f.right, env)
        return (HOLDS if truth else FAILS), False, {}
    if isinstance(f, Less):
        truth = eval_term(f.left, env) < eval_term(f.right, env)
        return (HOLDS if truth else FAILS), False, {}
    if isinstance(f, EqB):
        truth = eval_term(f.left, env).id == eval_term(f.right, env).id
        return (HOLDS if truth else FAILS), False, {}
    if isinstance(f, Not):
        state, sampled, ev = _eval(f.arg, env, ctx, path + "n")
        return _neg(state), sampled, ev
    if isinstance(f, And):
        return _eval_and(f, env, ctx, path)
    if isinstance(f, Or):
        state, sampled, ev = _eval_and(
            And(Not(f.left), Not(f.right)), env, ctx, path)
        return _neg(state), sampled, ev
    if isinstance(f, Implies):
        state, sampled, ev = _eval_and(
            And(f.left, Not(f.right)), env, ctx, path)
        return _neg(state), sampled, ev
    if isinstance(f, Iff):
        s1, p1, e1 = _eval(f.left, env, ctx, path + "l")
        s2, p2, e2 = _eval(f.right, env, ctx, path + "r")
        if UNKNOWN in (s1, s2):
            return UNKNOWN, p1 or p2, {}
        agree = (s1 == s2)
        return (HOLDS if agree else FAILS), p1 or p2, {**e1, **e2}
    if isinstance(f, (Forall, Exists)):
        return _eval_quantifier(f, env, ctx, path)
    raise TypeError(f)


def _neg(state: str) -> str:
    return {HOLDS: FAILS, FAILS: HOLDS, UNKNOWN: UNKNOWN}[state]


def _eval_and(f: And, env: Assignment, ctx: _Ctx, path: str):
    state1, sampled1, ev1 = _eval(f.left, env, ctx, path + "a")
    if state1 == FAILS:
        return FAILS, sampled1, ev1
    state2, sampled2, ev2 = _eval(f.right, env, ctx, path + "b")
    if state2 == FAILS:
        return FAILS, sampled2, ev2
    if UNKNOWN in (state1, state2):
        return UNKNOWN, sampled1 or sampled2, {}
    return HOLDS, sampled1 or sampled2, {**ev1, **ev2}


def _holds_w3(s: Structure, obs: Body, body: Body, coords) -> Optional[bool]:
    """Three-valued W: None when a numeric worldline is too close to call."""
    chart = s.chart_of(obs)
    if chart is None:
        return False
    if isinstance(chart, AffineMap) and not isinstance(body.worldline, SmoothNumeric):
        return s.holds_W(obs, body, coords)
    # numeric path
    try:
        ref = s.reference_point(obs, coords)
    except Exception:
        return False
    w = body.worldline
    if isinstance(w, SmoothNumeric):
        tf = float(ref[3])
        if not (w.t_min <= tf <= w.t_max):
            return False
        p = w.position(tf)
        dist = max(abs(float(ref[i]) - p[i]) for i in range(3))
        if dist <= w.tolerance:
            return True
        if dist >= 10 * w.tolerance:
            return False
        return None
    return w.contains(tuple(ER(Fraction(float(c)).limit_denominator(10**12)) for c in ref))


# ---------------------------------------------------------------------------
# Quantifier machinery.


def _collect_block(f, kind, sort):
    names = []
    node = f
    while isinstance(node, kind) and node.var_sort is sort:
        names.append(node.var)
        node = node.body
    return names, node


def _flatten_and(f: Formula) -> list:
    if isinstance(f, And):
        return _flatten_and(f.left) + _flatten_and(f.right)
    return [f]


def _match_corr(f: Formula):
    """Recognize  A b . W(o, b, xs) <-> W(o2, b, ys); returns
    (o_term, o2_term, xs, ys) or None."""
    if not (isinstance(f, Forall) and f.var_sort is Sort.BODY):
        return None
    body = f.body
    if not isinstance(body, Iff):
        return None
    l, r = body.left, body.right
    if not (isinstance(l, WAtom) and isinstance(r, WAtom)):
        return None
    bvar = f.var
    if not (isinstance(l.body, Var) and l.body.name == bvar
            and isinstance(r.body, Var) and r.body.name == bvar):
        return None

    def mentions(t: Term) -> bool:
        from .syntax.ast import subterms
        return any(isinstance(x, Var) and x.name == bvar for x in subterms(t))

    if mentions(l.observer) or mentions(r.observer):
        return None
    if any(mentions(c) for c in l.coords + r.coords):
        return None
    return (l.observer, r.observer, l.coords, r.coords)


def _event_contents_equal(s: Structure, o: Body, x, o2: Body, y) -> Optional[bool]:
    """Exact decision of  A b . W(o,b,x) <-> W(o2,b,y)  on affine charts."""
    c1, c2 = s.chart_of(o), s.chart_of(o2)
    if c1 is None and c2 is None:
        return True  # both sides empty for non-observers
    if c1 is None or c2 is None:
        other, chart, pt = (o2, c2, y) if c1 is None else (o, c1, x)
        if not isinstance(chart, AffineMap):
            return None
        # one side is always empty: equal iff the other side is empty too
        if s.photon_family or s.inertial_family:
            return not s.domain_of(other).contains(pt)
        content = s.event_at(other, pt).named
        return not content
    if not (isinstance(c1, AffineMap) and isinstance(c2, AffineMap)):
        return None
    in1 = s.domain_of(o).contains(x)
    in2 = s.domain_of(o2).contains(y)
    if not in1 or not in2:
        # A domain-invalid point carries the empty event; with a family on,
        # every domain-valid point is nonempty, so valid never matches invalid.
        if s.photon_family or s.inertial_family:
            return in1 == in2
        named1 = s.event_at(o, x).named if in1 else frozenset()
        named2 = s.event_at(o2, y).named if in2 else frozenset()
        return named1 == named2
    p1 = s.reference_point(o, x)
    p2 = s.reference_point(o2, y)
    if s.photon_family or s.inertial_family:
        # family contents are injective in the reference point
        return all((a - b).is_zero() for a, b in zip(p1, p2))
    return s.event_at(o, x).named == s.event_at(o2, y).named


def _eval_quantifier(f, env, ctx: _Ctx, path: str):
    kind = type(f)
    corr = _match_corr(f)
    if corr is not None:
        o_t, o2_t, xs_t, ys_t = corr
        try:
            o = eval_term(o_t, env)
            o2 = eval_term(o2_t, env)
            xs = tuple(eval_term(c, env) for c in xs_t)
            ys = tuple(eval_term(c, env) for c in ys_t)
        except UnboundVariable:
            o = None
        if o is not None:
            ctx.bump_solver()
            result = _event_contents_equal(ctx.s, o, xs, o2, ys)
            if result is not None:
                return (HOLDS if result else FAILS), False, {}
    names, matrix = _collect_block(f, kind, f.var_sort)
    if f.var_sort is Sort.BODY:
        if kind is Forall:
            return _eval_body_forall(names, matrix, env, ctx, path)
        return _eval_body_exists(names, matrix, env, ctx, path)
    if kind is Forall:
        return _eval_quantity_forall(names, matrix, env, ctx, path)
    return _eval_quantity_exists(names, matrix, env, ctx, path)


# -- body sort ---------------------------------------------------------------


def _is_observer_guard(g: Formula, var: str) -> bool:
    """True for guards that force var to be an observer: Ob/IOb atoms and
    their expansion  E b . E q... . W(var, b, q...) ."""
    if isinstance(g, (IObAtom, ObAtom)) and isinstance(g.body, Var) and g.body.name == var:
        return True
    node = g
    while isinstance(node, Exists):
        node = node.body
    return (isinstance(node, WAtom) and isinstance(node.observer, Var)
            and node.observer.name == var)


def _body_candidates(s: Structure, var: str, guards: list):
    """(candidates, exhaustive): named bodies compatible with the guards on
    var; exhaustive=False when an intensional family could supply more."""
    has_iob = any(_is_observer_guard(g, var) for g in guards)
    has_ph = any(isinstance(g, PhAtom) and isinstance(g.body, Var)
                 and g.body.name == var for g in guards)
    has_ib = any(isinstance(g, IBAtom) and isinstance(g.body, Var)
                 and g.body.name == var for g in guards)
    if has_iob:
        return s.observers(), True
    if has_ph:
        named = [b for b in s.bodies.values() if b.is_photon]
        return named, not s.photon_family
    if has_ib:
        named = [b for b in s.bodies.values() if b.is_inertial]
        return named, not s.inertial_family
    return list(s.bodies.values()), not (s.photon_family or s.inertial_family)


def _body_block_guards(matrix) -> list:
    """Hypothesis conjuncts visible from a body-sort universal block,
    looking through inner quantifier prefixes and implication chains.

    Sound for narrowing a universal: a candidate violating a guard makes
    the corresponding implication vacuously true at every inner level.
    """
    node = matrix
    guards: list = []
    while True:
        if isinstance(node, (Forall, Exists)):
            node = node.body
            continue
        if isinstance(node, Implies):
            guards.extend(_flatten_and(node.left))
            node = node.right
            continue
        return guards


def _eval_body_forall(names, matrix, env, ctx: _Ctx, path: str):
    guards = _body_block_guards(matrix)
    candidate_lists, exhaustive = [], True
    for name in names:
        cands, exh = _body_candidates(ctx.s, name, guards)
        candidate_lists.append(cands)
        exhaustive = exhaustive and exh
    sampled_any = False
    for i, combo in enumerate(itertools.product(*candidate_lists)):
        env2 = {**env, **dict(zip(names, combo))}
        state, sampled, ev = _eval(matrix, env2, ctx, "%s.f%d" % (path, i))
        sampled_any = sampled_any or sampled
        if state == FAILS:
            return FAILS, sampled, {**ev, **{n: b for n, b in zip(names, combo)}}
        if state == UNKNOWN:
            return UNKNOWN, True, {}
    if not exhaustive:
        return UNKNOWN, True, {}
    return HOLDS, sampled_any, {}


def _eval_body_exists(names, matrix, env, ctx: _Ctx, path: str):
    conjuncts = _flatten_and(matrix)
    candidate_lists = []
    families_relevant = False
    for name in names:
        cands, exh = _body_candidates(ctx.s, name, conjuncts)
        candidate_lists.append(cands)
        families_relevant = families_relevant or not exh
    for i, combo in enumerate(itertools.product(*candidate_lists)):
        env2 = {**env, **dict(zip(names, combo))}
        state, sampled, ev = _eval(matrix, env2, ctx, "%s.e%d" % (path, i))
        if state == HOLDS:
            return HOLDS, sampled, {**ev, **{n: b for n, b in zip(names, combo)}}
    if len(names) == 1:
        solved = _family_witness(names[0], conjuncts, env, ctx)
        if solved is not None:
            found, witness, extra = solved
            if found:
                env2 = {**env, names[0]: witness}
                state, sampled, ev = _eval(matrix, env2, ctx, path + ".w")
                if state == HOLDS:
                    return HOLDS, sampled, {**ev, names[0]: witness}
                if state == FAILS and not sampled:
                    return FAILS, False, {}
                return UNKNOWN, True, {}
            return FAILS, False, extra
    if families_relevant:
        return UNKNOWN, True, {}
    return FAILS, False, {}


def _family_witness(var: str, conjuncts: list, env, ctx: _Ctx):
    """Solve  E var . Ph/IB(var) & W(o,var,c1) [& W(o,var,c2)]  exactly.

    Returns None if the pattern does not apply; else (found, body, info).
    """
    s = ctx.s
    is_ph = any(isinstance(g, PhAtom) and isinstance(g.body, Var) and g.body.name == var
                for g in conjuncts)
    is_ib = any(isinstance(g, IBAtom) and isinstance(g.body, Var) and g.body.name == var
                for g in conjuncts)
    if is_ph and not s.photon_family:
        return None
    if is_ib and not s.inertial_family:
        return None
    if not (is_ph or is_ib):
        if s.photon_family:
            is_ph = True  # unconstrained exists: any family body will do
        elif s.inertial_family:
            is_ib = True
        else:
            return None
    watoms, others = [], []
    for g in conjuncts:
        if isinstance(g, WAtom) and isinstance(g.body, Var) and g.body.name == var:
            watoms.append(g)
        elif isinstance(g, (PhAtom, IBAtom)) and isinstance(g.body, Var) and g.body.name == var:
            continue
        else:
            others.append(g)
    if not watoms or len(watoms) > 2:
        return None
    # all other conjuncts must not mention the variable
    from .syntax.ast import subterms
    for g in others:
        for t in _formula_terms_deep(g):
            if any(isinstance(x, Var) and x.name == var for x in subterms(t)):
                return None
    try:
        obs = eval_term(watoms[0].observer, env)
        points = [tuple(eval_term(c, env) for c in w.coords) for w in watoms]
    except UnboundVariable:
        return None
    chart = s.chart_of(obs)
    if chart is None:
        return False, None, {"reason": "observer has no chart"}
    if not isinstance(chart, AffineMap):
        return None
    if len(watoms) == 2 and eval_term(watoms[1].observer, env).id != obs.id:
        return None
    ctx.bump_solver()
    for p in points:
        if not s.domain_of(obs).contains(p):
            return False, None, {"reason": "event outside the observer's chart domain"}
    refs = [s.reference_point(obs, p) for p in points]
    if is_ph:
        body = witness_photon_refs(refs)
    else:
        body = witness_inertial_refs(refs)
    if body is None:
        return False, None, {"reason": "no family body through the given events"}
    return True, body, {}


def _formula_terms_deep(g: Formula):
    from .syntax.ast import _formula_terms
    from .syntax.ast import subformulas
    for sub in subformulas(g):
        yield from _formula_terms(sub)


_synth_counter = itertools.count(1)


def witness_photon_refs(refs) -> Optional[Body]:
    if len(refs) == 1 or all((a - b).is_zero() for a, b in zip(refs[0], refs[-1])):
        direction = (ER(1), ER(0), ER(0))
        return Body("photon#%d" % next(_synth_counter), False, True,
                    PhotonLine(refs[0], direction))
    x, y = refs[0], refs[1]
    if not mu(x, y).is_zero():
        return None
    dt = y[3] - x[3]
    if dt.is_zero():
        return None  # lightlike with zero time separation means same point
    direction = tuple((y[i] - x[i]) / dt for i in range(3))
    return Body("photon#%d" % next(_synth_counter), False, True, PhotonLine(x, direction))


def witness_inertial_refs(refs) -> Optional[Body]:
    if len(refs) == 1 or all((a - b).is_zero() for a, b in zip(refs[0], refs[-1])):
        return Body("inertial#%d" % next(_synth_counter), True, False,
                    InertialLine(refs[0], (ER(0), ER(0), ER(0))))
    x, y = refs[0], refs[1]
    if mu(x, y).sign() >= 0:
        return None  # not strictly timelike
    dt = y[3] - x[3]
    velocity = tuple((y[i] - x[i]) / dt for i in range(3))
    return Body("inertial#%d" % next(_synth_counter), True, False, InertialLine(x, velocity))


def witness_photon(s: Structure, o: Body, x, x2) -> Optional[Body]:
    """The family photon through o-events x and x2, if lightlike; else None."""
    if not s.is_observer(o):
        raise NotAnObserver(o.id)
    if not s.photon_family:
        return None
    x = tuple(ER(c) for c in x)
    x2 = tuple(ER(c) for c in x2)
    for p in (x, x2):
        if not s.domain_of(o).contains(p):
            return None
    refs = [s.reference_point(o, x), s.reference_point(o, x2)]
    return witness_photon_refs(refs)


def witness_inertial(s: Structure, o: Body, x, x2) -> Optional[Body]:
    """The family inertial body through two strictly timelike o-events."""
    if not s.is_observer(o):
        raise NotAnObserver(o.id)
    if not s.inertial_family:
        return None
    refs = [s.reference_point(o, tuple(ER(c) for c in x)),
            s.reference_point(o, tuple(ER(c) for c in x2))]
    return witness_inertial_refs(refs)


# -- quantity sort: linear-form pinning and sampling -------------------------


class _LinForm:
    """Affine form: sum of coeff*param + const over the exact field."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=None, const=None):
        self.coeffs = dict(coeffs or {})
        self.const = const if const is not None else ER(0)

    @staticmethod
    def var(name):
        return _LinForm({name: ER(1)})

    @staticmethod
    def constant(v):
        return _LinForm({}, ER(v))

    def is_constant(self):
        return all(c.is_zero() for c in self.coeffs.values())

    def add(self, other, sign=1):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ER(0)) + (v if sign > 0 else -v)
        return _LinForm(out, self.const + (other.const if sign > 0 else -other.const))

    def scale(self, c):
        c = ER(c)
        return _LinForm({k: c * v for k, v in self.coeffs.items()}, c * self.const)

    def value(self, values: dict) -> ExactReal:
        acc = self.const
        for k, v in self.coeffs.items():
            if not v.is_zero():
                acc = acc + v * values[k]
        return acc


def _term_to_linform(term: Term, env, binding: dict) -> Optional[_LinForm]:
    if isinstance(term, Var):
        if term.name in binding:
            return binding[term.name]
        if term.name in env:
            v = env[term.name]
            return _LinForm.constant(v) if isinstance(v, ExactReal) else None
        return None
    if isinstance(term, ZeroC):
        return _LinForm.constant(0)
    if isinstance(term, OneC):
        return _LinForm.constant(1)
    left = _term_to_linform(term.left, env, binding)
    right = _term_to_linform(term.right, env, binding)
    if left is None or right is None:
        return None
    if isinstance(term, Add):
        return left.add(right)
    if isinstance(term, Sub):
        return left.add(right, sign=-1)
    if isinstance(term, Mul):
        if left.is_constant():
            return right.scale(left.const)
        if right.is_constant():
            return left.scale(right.const)
        return None
    return None


def _pin_with_constraints(names, conjuncts, env, ctx: _Ctx):
    """Pin block variables from corr conjuncts and linear equalities.

    Returns (binding, params, equations) where binding maps each block
    var to a _LinForm over params, and equations is a list of _LinForms
    required to vanish.  Returns None on inconsistency discovered later.
    """
    binding = {n: _LinForm.var(n) for n in names}
    params = list(names)
    equations: list = []
    pending = list(conjuncts)
    progress = True
    while progress:
        progress = False
        remaining = []
        for g in pending:
            corr = _match_corr(g)
            if corr is not None:
                o_t, o2_t, xs_t, ys_t = corr
                try:
                    o = eval_term(o_t, env)
                    o2 = eval_term(o2_t, env)
                except UnboundVariable:
                    remaining.append(g)
                    continue
                c1, c2 = ctx.s.chart_of(o), ctx.s.chart_of(o2)
                if not (isinstance(c1, AffineMap) and isinstance(c2, AffineMap)):
                    continue  # cannot pin; conjunct still checked per sample
                xs_forms = [_term_to_linform(t, env, binding) for t in xs_t]
                if any(fm is None for fm in xs_forms):
                    remaining.append(g)
                    continue
                w = c2.compose(c1.inverse())
                ys_forms = []
                for i in range(4):
                    acc = _LinForm.constant(w.translation[i])
                    for j in range(4):
                        acc = acc.add(xs_forms[j].scale(w.linear[i][j]))
                    ys_forms.append(acc)
                targets = [t.name if isinstance(t, Var) and t.name in binding else None
                           for t in ys_t]
                if all(targets):
                    unpinned = [n for n in targets
                                if n in params and _is_identity(binding[n], n)]
                    if len(unpinned) == 4 and len(set(targets)) == 4:
                        for n, fm in zip(targets, ys_forms):
                            binding[n] = fm
                            params.remove(n)
                        _substitute_pins(binding, equations, targets)
                        ctx.bump_solver()
                        progress = True
                        continue
                # already pinned (or not plain vars): contribute equations
                ys_actual = [_term_to_linform(t, env, binding) for t in ys_t]
                if all(fm is not None for fm in ys_actual):
                    for have, want in zip(ys_actual, ys_forms):
                        equations.append(have.add(want, sign=-1))
                    progress = True
                    continue
                remaining.append(g)
            elif isinstance(g, EqQ):
                l = _term_to_linform(g.left, env, binding)
                r = _term_to_linform(g.right, env, binding)
                if l is not None and r is not None:
                    equations.append(l.add(r, sign=-1))
                    progress = True
                else:
                    remaining.append(g)
            # other conjunct kinds only filter samples
        pending = remaining
    return binding, params, equations


def _is_identity(form: _LinForm, name: str) -> bool:
    return form.const.is_zero() and all(
        (k == name and v == 1) or (k != name and v.is_zero())
        for k, v in form.coeffs.items()) and name in form.coeffs


def _substitute_pins(binding: dict, equations: list, pinned: list):
    """Rewrite forms that still reference freshly pinned names as parameters."""

    def rewrite(form: _LinForm) -> _LinForm:
        out = _LinForm({}, form.const)
        for k, v in form.coeffs.items():
            if k in pinned and not _is_identity(binding[k], k):
                out = out.add(binding[k].scale(v))
            else:
                out.coeffs[k] = out.coeffs.get(k, ER(0)) + v
        return out

    for name in list(binding):
        if name not in pinned:
            binding[name] = rewrite(binding[name])
    for i, eq in enumerate(equations):
        equations[i] = rewrite(eq)


def _solve_equations(params, equations):
    """Gaussian solve; returns (particular, basis) as dicts over params,
    or None if exactly inconsistent."""
    if not equations:
        basis = []
        for p in params:
            basis.append({q: ER(1 if q == p else 0) for q in params})
        return {p: ER(0) for p in params}, basis
    a = tuple(tuple(eq.coeffs.get(p, ER(0)) for p in params) for eq in equations)
    b = tuple(-eq.const for eq in equations)
    res = linalg.solve_linear(a, b)
    if res is None:
        return None
    sol, null = res
    particular = {p: sol[i] for i, p in enumerate(params)}
    basis = [{p: vec[i] for i, p in enumerate(params)} for vec in null]
    return particular, basis


def _corner_values(ctx: _Ctx) -> list:
    corners = [ER(0), ER(1), ER(-1), ER(Fraction(1, 2)), ER(Fraction(-1, 2))]
    for c in ctx.s.constants:
        if all((c - x).sign() != 0 for x in corners):
            corners.append(c)
    return corners


def _sample_tuples(ctx: _Ctx, path: str, dims: int, limit: int):
    """Deterministic tuple stream: corners, then seeded rationals."""
    corners = _corner_values(ctx)
    yielded = 0
    if dims == 0:
        yield ()
        return
    zero = tuple(ER(0) for _ in range(dims))
    yield zero
    yielded += 1
    for i in range(dims):
        for val in corners[1:]:
            if yielded >= limit:
                return
            tup = list(zero)
            tup[i] = val
            yield tuple(tup)
            yielded += 1
    rng = ctx.rng(path)
    while yielded < limit:
        yield tuple(ER(Fraction(rng.randint(-6, 6), rng.randint(1, 6)))
                    for _ in range(dims))
        yielded += 1


def _collect_equations(matrix, limit: int = 4) -> list:
    """EqQ subformulas of the matrix, used to steer samples onto the
    algebraic surfaces where one side of an equivalence can flip."""
    out = []
    from .syntax.ast import subformulas

    for sub in subformulas(matrix):
        if isinstance(sub, EqQ):
            out.append(sub)
            if len(out) >= limit:
                break
    return out


def _term_to_poly_env(term, env, var_polys: dict):
    """Term -> Poly in a single hidden parameter; block variables are
    supplied as polynomials, outer variables as constants."""
    if isinstance(term, Var):
        if term.name in var_polys:
            return var_polys[term.name]
        if term.name in env and isinstance(env[term.name], ExactReal):
            return Poly([env[term.name]])
        return None
    if isinstance(term, ZeroC):
        return Poly([0])
    if isinstance(term, OneC):
        return Poly([1])
    left = _term_to_poly_env(term.left, env, var_polys)
    right = _term_to_poly_env(term.right, env, var_polys)
    if left is None or right is None:
        return None
    if isinstance(term, Add):
        return left + right
    if isinstance(term, Sub):
        return left - right
    if isinstance(term, Mul):
        return left * right
    return None


def _eval_quantity_forall(names, matrix, env, ctx: _Ctx, path: str):
    conjuncts = _flatten_and(matrix.left) if isinstance(matrix, Implies) else []
    binding, params, equations = _pin_with_constraints(names, conjuncts, env, ctx)
    solved = _solve_equations(params, equations)
    if solved is None:
        # The linear part of the hypothesis is exactly unsatisfiable.
        return HOLDS, False, {}
    particular, basis = solved
    dims = len(basis)
    guide_eqs = _collect_equations(matrix) if dims else []
    saw_unknown = False
    sample_no = 0

    def param_values(tup):
        values = {p: particular[p] for p in params}
        for coeff, direction in zip(tup, basis):
            for p in params:
                values[p] = values[p] + coeff * direction[p]
        return values

    def run_sample(values, tag):
        nonlocal saw_unknown
        ctx.samples_used += 1
        env2 = dict(env)
        for n in names:
            env2[n] = binding[n].value(values)
        state, sampled, ev = _eval(matrix, env2, ctx, "%s.q%s" % (path, tag))
        if state == UNKNOWN:
            saw_unknown = True
            return None
        if state == FAILS:
            return FAILS, sampled, {**ev, **{n: env2[n] for n in names}}
        return None

    def coeff_polys(tup, k):
        # Block variables as polynomials in the k-th basis coefficient,
        # all other coefficients frozen to the sampled tuple: stays on the
        # solution manifold of the pinned linear equations.
        param_poly = {}
        for p in params:
            fixed = particular[p]
            for j in range(dims):
                if j != k:
                    fixed = fixed + tup[j] * basis[j][p]
            param_poly[p] = Poly([fixed, basis[k][p]])
        out = {}
        for n in names:
            form = binding[n]
            acc = Poly([form.const])
            for p, c in form.coeffs.items():
                if not c.is_zero():
                    acc = acc + param_poly[p].scale(c)
            out[n] = acc
        return out

    for i, tup in enumerate(_sample_tuples(ctx, path, dims, ctx.budget.samples)):
        if sample_no >= ctx.budget.samples:
            break
        sample_no += 1
        hit = run_sample(param_values(tup), str(i))
        if hit is not None:
            return hit
        if dims and guide_eqs:
            k = dims - 1
            var_polys = coeff_polys(tup, k)
            for eq_i, eq in enumerate(guide_eqs):
                if sample_no >= ctx.budget.samples:
                    break
                lhs = _term_to_poly_env(Sub(eq.left, eq.right), env, var_polys)
                if lhs is None or lhs.degree < 1 or lhs.degree > 2:
                    continue
                for r_i, root in enumerate(lhs.roots()):
                    if sample_no >= ctx.budget.samples:
                        break
                    sample_no += 1
                    guided_tup = tuple(root if j == k else tup[j] for j in range(dims))
                    hit = run_sample(param_values(guided_tup), "%dg%d.%d" % (i, eq_i, r_i))
                    if hit is not None:
                        return hit
    if saw_unknown:
        return UNKNOWN, True, {}
    return HOLDS, True, {}


def _eval_quantity_exists(names, matrix, env, ctx: _Ctx, path: str):
    conjuncts = _flatten_and(matrix)
    # 1. Correspondence witness: the block is exactly the target of a corr.
    for g in conjuncts:
        corr = _match_corr(g)
        if corr is None:
            continue
        o_t, o2_t, xs_t, ys_t = corr
        targets = [t.name if isinstance(t, Var) else None for t in ys_t]
        if set(filter(None, targets)) != set(names) or len(names) != 4:
            continue
        try:
            o = eval_term(o_t, env)
            o2 = eval_term(o2_t, env)
            xs = tuple(eval_term(c, env) for c in xs_t)
        except UnboundVariable:
            continue
        c1, c2 = ctx.s.chart_of(o), ctx.s.chart_of(o2)
        if not (isinstance(c1, AffineMap) and isinstance(c2, AffineMap)):
            continue
        ctx.bump_solver()
        ys = ctx.s.event_correspondence(o, o2, xs)
        env2 = {**env, **dict(zip(targets, ys))}
        state, sampled, ev = _eval(matrix, env2, ctx, path + ".cw")
        if state == HOLDS:
            return HOLDS, sampled, {**ev, **dict(zip(targets, ys))}
        # The computed correspondence point is the only candidate that can
        # match family contents; if contents are injective, its failure
        # refutes the existential exactly.
        if (ctx.s.photon_family or ctx.s.inertial_family) and state == FAILS and not sampled:
            return FAILS, False, {}
    # 2. Root candidates from single-variable polynomial conjuncts.  An
    # equality conjunct of degree 1 or 2 pins every witness to its roots:
    # if the body fails exactly at each root, the existential fails exactly.
    candidates: list = []
    if len(names) == 1:
        var = names[0]
        pinning_roots = None
        for g in conjuncts:
            if isinstance(g, (EqQ, Less)):
                try:
                    p = term_to_poly(Sub(g.left, g.right), var, env)
                except UnsupportedDefinableSet:
                    continue
                if 1 <= p.degree <= 2:
                    roots = p.roots()
                    candidates.extend(roots)
                    if isinstance(g, EqQ) and pinning_roots is None:
                        pinning_roots = roots
                elif isinstance(g, EqQ) and p.degree == 0 and not p.is_zero():
                    return FAILS, False, {}  # unsatisfiable equality conjunct
        if pinning_roots is not None:
            all_exact_fails = True
            for i, root in enumerate(pinning_roots):
                ctx.samples_used += 1
                env2 = {**env, var: root}
                state, sampled, ev = _eval(matrix, env2, ctx, "%s.p%d" % (path, i))
                if state == HOLDS:
                    return HOLDS, sampled, {**ev, var: root}
                if not (state == FAILS and not sampled):
                    all_exact_fails = False
            if all_exact_fails:
                return FAILS, False, {}
    # 3. Corner + seeded tuples.
    tried = 0
    seen_sampled = False
    for i, tup in enumerate(_candidate_stream(candidates, names, ctx, path)):
        if tried >= ctx.budget.samples:
            break
        tried += 1
        ctx.samples_used += 1
        env2 = {**env, **dict(zip(names, tup))}
        state, sampled, ev = _eval(matrix, env2, ctx, "%s.x%d" % (path, i))
        seen_sampled = seen_sampled or sampled
        if state == HOLDS:
            return HOLDS, sampled, {**ev, **dict(zip(names, tup))}
    return UNKNOWN, True, {}


def _candidate_stream(roots, names, ctx: _Ctx, path: str):
    if len(names) == 1:
        for r in roots:
            yield (r,)
    yield from _sample_tuples(ctx, path + ".cand", len(names), ctx.budget.samples)


# ---------------------------------------------------------------------------
# Certified verifiers and axiom checking.


def check_axiom(s: Structure, axiom_name: str, budget: Optional[Budget] = None,
                theory: str = "AccRel") -> Verdict:
    """Check one named axiom; certified reductions on affine structures,
    sampled evaluation elsewhere."""
    from .syntax.corpus import axiom_corpus, UnknownTheory

    budget = budget or Budget()
    try:
        th = axiom_corpus(theory)
        group = th.group(axiom_name)
    except (UnknownTheory, KeyError):
        raise UnknownAxiom(axiom_name)
    certified = _certified_axiom(s, axiom_name, budget)
    if certified is not None:
        return certified
    results = []
    for sub, sentence in group.sentences:
        results.append(evaluate(s, sentence, None, budget))
    return _combine(results)


def _combine(verdicts: Sequence[Verdict]) -> Verdict:
    for v in verdicts:
        if v.is_fails:
            return v
    for v in verdicts:
        if v.outcome == UNKNOWN:
            return v
    method = "certified" if all(v.method == "certified" for v in verdicts) else "sampled"
    budget = verdicts[0].budget_report if verdicts else {}
    return Verdict.holds(method=method, budget=budget)


def _certified_axiom(s: Structure, name: str, budget: Budget) -> Optional[Verdict]:
    if not s.all_charts_affine():
        return None
    if name == "AxField":
        return Verdict.holds(evidence={"note": "tower-field arithmetic is an ordered field by construction"})
    if name == "AxSelf" or name == "AxSelf-":
        return _certify_axself(s)
    if name == "AxPh":
        return _certify_axph(s, budget)
    if name == "AxEv":
        return _certify_axev(s)
    if name == "AxSymd":
        return _certify_axsymd(s)
    if name == "AxCmv":
        if all(b.is_inertial for b in s.observers()) and \
                (s.photon_family or s.inertial_family) and s.all_domains_full():
            return Verdict.holds(evidence={"note": "all observers inertial; each is its own co-moving observer"})
        return None
    return None


def _certify_axself(s: Structure) -> Verdict:
    for o in s.observers():
        chart = s.chart_of(o)
        inv = chart.inverse()
        p0 = inv.apply((ER(0), ER(0), ER(0), ER(0)))
        p1 = inv.apply((ER(0), ER(0), ER(0), ER(1)))
        on_line = o.worldline.contains(p0) and o.worldline.contains(p1)
        img0 = chart.apply(o.worldline.point_at(ER(0)))
        img1 = chart.apply(o.worldline.point_at(ER(1)))
        off_axis = any(not img0[i].is_zero() for i in range(3)) or \
            any(not img1[i].is_zero() for i in range(3))
        if not on_line or off_axis:
            bad = img0 if any(not img0[i].is_zero() for i in range(3)) else img1
            return Verdict.fails(evidence={
                "o": o.id, "x": bad[0], "y": bad[1], "z": bad[2], "t": bad[3]})
        if not s.domain_of(o).is_full():
            return Verdict.unknown(evidence={"note": "restricted chart domain; not certified"})
    return Verdict.holds()


_FIXED_NULL = None


def _fixed_null_vectors():
    global _FIXED_NULL
    if _FIXED_NULL is None:
        dirs = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
                (Fraction(3, 5), Fraction(4, 5), 0), (Fraction(4, 5), 0, Fraction(3, 5)),
                (0, Fraction(5, 13), Fraction(12, 13))]
        _FIXED_NULL = [tuple(ER(c) for c in d) + (ER(1),) for d in dirs] + \
                      [tuple(ER(c) for c in d) + (ER(-1),) for d in dirs]
    return _FIXED_NULL


def _certify_axph(s: Structure, budget: Budget) -> Optional[Verdict]:
    if not s.photon_family:
        return None
    if not s.all_domains_full():
        return None
    from .kinematics import random_null_direction

    for o in s.observers():
        chart = s.chart_of(o)
        inv_lin = chart.inverse().linear
        a = linalg.mat_mul(linalg.transpose(inv_lin), linalg.mat_mul(ETA, inv_lin))
        lam = a[0][0]
        eta_scaled = tuple(tuple(lam * ETA[i][j] for j in range(4)) for i in range(4))
        if not lam.is_zero() and linalg.mat_eq(a, eta_scaled):
            continue
        # The null cone is not preserved: exhibit a lightlike pair in o's
        # chart joined by no photon (or vice versa), exactly.
        nulls = list(_fixed_null_vectors())
        rng = random.Random(budget.seed ^ 0x5EED)
        for _ in range(64):
            d = random_null_direction(rng)
            nulls.append(tuple(d) + (ER(1),))
        for z in nulls:
            q = sum((z[i] * sum((a[i][j] * z[j] for j in range(4)), ER(0))
                     for i in range(4)), ER(0))
            if not q.is_zero():
                zero = (ER(0),) * 4
                evidence = {"o": o.id}
                for i, nm in enumerate(("x1", "x2", "x3", "x4")):
                    evidence[nm] = zero[i]
                for i, nm in enumerate(("x1'", "x2'", "x3'", "x4'")):
                    evidence[nm] = z[i]
                return Verdict.fails(evidence=evidence)
        return None  # could not certify either way; fall back
    return Verdict.holds()


def _certify_axev(s: Structure) -> Verdict:
    observers = s.observers()
    for o in observers:
        for o2 in observers:
            w = s.chart_of(o2).compose(s.chart_of(o).inverse())
            dom2 = s.domain_of(o2)
            if dom2.is_full() and s.domain_of(o).is_full():
                continue
            probe = _domain_escape_point(s, o, o2, w)
            if probe is not None:
                evidence = {"o": o.id, "o'": o2.id}
                for i, nm in enumerate(("x1", "x2", "x3", "x4")):
                    evidence[nm] = probe[i]
                return Verdict.fails(evidence=evidence)
            return Verdict.unknown(evidence={"note": "restricted domains; no certified decision"})
    return Verdict.holds()


def _domain_escape_point(s: Structure, o: Body, o2: Body, w: AffineMap):
    """A point in o's chart (and domain) whose event o2 cannot coordinatize."""
    dom_o, dom_o2 = s.domain_of(o), s.domain_of(o2)
    w_inv = w.inverse()
    for axis, (lo, hi) in enumerate(dom_o2.bounds):
        for bound, outward in ((hi, 1), (lo, -1)):
            if bound is None:
                continue
            for step in (ER(1), ER(Fraction(1, 2)), ER(2)):
                probe = [ER(0)] * 4
                probe[axis] = bound + step * outward
                x = w_inv.apply(tuple(probe))
                if dom_o.contains(x) and not dom_o2.contains(tuple(probe)):
                    return x
    return None


def _certify_axsymd(s: Structure) -> Optional[Verdict]:
    if not s.all_domains_full():
        return None
    observers = s.observers()
    for o in observers:
        for o2 in observers:
            w = s.chart_of(o2).compose(s.chart_of(o).inverse())
            lin = w.linear
            rows = (
                (ER(0), ER(0), ER(0), ER(1)),            # u4 = 0
                tuple(lin[3][j] for j in range(4)),      # (L u)4 = 0
            )
            basis = linalg.null_space(rows)
            bad = _symd_violation(lin, basis)
            if bad is not None:
                zero4 = (ER(0),) * 4
                img = w.apply(bad)
                img0 = w.apply(zero4)
                ev = {"o": o.id, "o'": o2.id}
                for nm, val in zip(("x1", "x2", "x3", "x4"), bad):
                    ev[nm] = val
                for nm, val in zip(("y1", "y2", "y3", "y4"), zero4):
                    ev[nm] = val
                for nm, val in zip(("x1'", "x2'", "x3'", "x4'"), img):
                    ev[nm] = val
                for nm, val in zip(("y1'", "y2'", "y3'", "y4'"), img0):
                    ev[nm] = val
                return Verdict.fails(evidence=ev)
    return Verdict.holds()


def _symd_violation(lin, basis):
    def form(u, v):
        lu = linalg.mat_vec(lin, u)
        lv = linalg.mat_vec(lin, v)
        spatial = sum((lu[i] * lv[i] for i in range(3)), ER(0))
        original = sum((u[i] * v[i] for i in range(3)), ER(0))
        return spatial - original

    for i, u in enumerate(basis):
        if not form(u, u).is_zero():
            return u
        for v in basis[i + 1:]:
            if not form(u, v).is_zero():
                return linalg.vec_add(u, v)
    return None


def recheck_counterexample(s: Structure, sentence: Formula, evidence: dict,
                           budget: Optional[Budget] = None) -> bool:
    """Re-evaluate the quantifier matrix under a counterexample assignment;
    True when the matrix indeed fails (the evidence is sound)."""
    env: Assignment = {}
    node = sentence
    while isinstance(node, Forall):
        if node.var not in evidence:
            break
        val = evidence[node.var]
        env[node.var] = s.bodies[val] if isinstance(val, str) else val
        node = node.body
    v = evaluate(s, node, env, budget or Budget())
    return v.is_fails


# ---------------------------------------------------------------------------
# IND instances via the exact interval solver.


def definable_set(s: Structure, phi: Formula, var: str, env: Assignment) -> IntervalSet:
    """The subset of the quantity sort defined by phi(var), exactly."""
    if isinstance(phi, Less):
        return poly_less_zero(term_to_poly(Sub(phi.left, phi.right), var, _num_env(env)))
    if isinstance(phi, EqQ):
        return poly_eq_zero(term_to_poly(Sub(phi.left, phi.right), var, _num_env(env)))
    if isinstance(phi, Not):
        return definable_set(s, phi.arg, var, env).complement()
    if isinstance(phi, And):
        return definable_set(s, phi.left, var, env).intersect(
            definable_set(s, phi.right, var, env))
    if isinstance(phi, Or):
        return definable_set(s, phi.left, var, env).union(
            definable_set(s, phi.right, var, env))
    if isinstance(phi, Implies):
        return definable_set(s, phi.left, var, env).complement().union(
            definable_set(s, phi.right, var, env))
    if isinstance(phi, Iff):
        a = definable_set(s, phi.left, var, env)
        b = definable_set(s, phi.right, var, env)
        return a.intersect(b).union(a.complement().intersect(b.complement()))
    if isinstance(phi, WAtom):
        return _watom_set(s, phi, var, env)
    if isinstance(phi, (IBAtom, PhAtom, ObAtom, IObAtom)):
        state, _, _ = _eval(phi, env, _Ctx(s, Budget()), "ds")
        return IntervalSet.all() if state == HOLDS else IntervalSet.empty()
    if isinstance(phi, Exists) and phi.var_sort is Sort.BODY:
        return _exists_body_set(s, phi, var, env)
    raise UnsupportedDefinableSet("formula outside the solvable fragment: %r" % type(phi).__name__)


def _num_env(env: Assignment) -> dict:
    return {k: v for k, v in env.items() if isinstance(v, ExactReal)}


def _coord_polys(s: Structure, obs: Body, coords, var, env):
    polys = [term_to_poly(c, var, _num_env(env)) for c in coords]
    if any(p.degree > 1 for p in polys):
        raise UnsupportedDefinableSet("nonlinear coordinate in W")
    chart = s.chart_of(obs)
    if not isinstance(chart, AffineMap):
        raise UnsupportedDefinableSet("non-affine chart")
    inv = chart.inverse()
    ref = []
    for i in range(4):
        acc = Poly([inv.translation[i]])
        for j in range(4):
            acc = acc + polys[j].scale(inv.linear[i][j])
        ref.append(acc)
    return polys, ref


def _domain_set(s: Structure, obs: Body, coord_polys) -> IntervalSet:
    out = IntervalSet.all()
    dom = s.domain_of(obs)
    for i, (lo, hi) in enumerate(dom.bounds):
        if lo is not None:
            cond = poly_less_zero(Poly([lo]) - coord_polys[i])
            if dom.closed:
                cond = cond.union(poly_eq_zero(Poly([lo]) - coord_polys[i]))
            out = out.intersect(cond)
        if hi is not None:
            cond = poly_less_zero(coord_polys[i] - Poly([hi]))
            if dom.closed:
                cond = cond.union(poly_eq_zero(coord_polys[i] - Poly([hi])))
            out = out.intersect(cond)
    return out


def _watom_set(s: Structure, phi: WAtom, var, env) -> IntervalSet:
    obs = eval_term(phi.observer, env)
    body = eval_term(phi.body, env)
    if not s.is_observer(obs):
        return IntervalSet.empty()
    polys, ref = _coord_polys(s, obs, phi.coords, var, env)
    out = _domain_set(s, obs, polys)
    w = body.worldline
    if isinstance(w, (InertialLine, PhotonLine)):
        vel = w.velocity if isinstance(w, InertialLine) else w.direction
        for i in range(3):
            lhs = ref[i] - Poly([w.point[i]]) - (ref[3] - Poly([w.point[3]])).scale(vel[i])
            out = out.intersect(poly_eq_zero(lhs))
        return out
    raise UnsupportedDefinableSet("W over a non-straight worldline")


def _exists_body_set(s: Structure, phi: Exists, var, env) -> IntervalSet:
    bvar = phi.var
    conjuncts = _flatten_and(phi.body)
    is_ph = any(isinstance(g, PhAtom) and isinstance(g.body, Var) and g.body.name == bvar
                for g in conjuncts)
    watoms = [g for g in conjuncts
              if isinstance(g, WAtom) and isinstance(g.body, Var) and g.body.name == bvar]
    rest = [g for g in conjuncts if g not in watoms
            and not (isinstance(g, (PhAtom, IBAtom)) and isinstance(g.body, Var)
                     and g.body.name == bvar)]
    if rest or not is_ph or len(watoms) not in (1, 2):
        raise UnsupportedDefinableSet("existential outside the photon pattern")
    obs = eval_term(watoms[0].observer, env)
    if not s.is_observer(obs):
        return IntervalSet.empty()
    out = IntervalSet.empty()
    for b in s.bodies.values():
        if b.is_photon:
            named = IntervalSet.all()
            for wat in watoms:
                named = named.intersect(_watom_set(s, wat, var, {**env, bvar: b}))
            out = out.union(named)
    if s.photon_family:
        sets = [_coord_polys(s, obs, wat.coords, var, env) for wat in watoms]
        domain = IntervalSet.all()
        for polys, _ in sets:
            domain = domain.intersect(_domain_set(s, obs, polys))
        if len(watoms) == 1:
            out = out.union(domain)
        else:
            _, ref1 = sets[0]
            _, ref2 = sets[1]
            q = Poly([0])
            for i in range(3):
                d = ref1[i] - ref2[i]
                q = q + d * d
            dt = ref1[3] - ref2[3]
            q = q - dt * dt
            out = out.union(domain.intersect(poly_eq_zero(q)))
    return out


def check_ind_instance(s: Structure, inst: IndInstance,
                       budget: Optional[Budget] = None) -> Verdict:
    """Decide one IND instance: compute the defined set exactly and verify
    the least-upper-bound property; falls back to sampled evaluation when
    the set is outside the solvable fragment."""
    from .field import parse_exact

    budget = budget or Budget()
    env: Assignment = {}
    for name, spec in inst.param_values:
        if spec == "@observer":
            env[name] = s.observers()[0]
        elif spec == "@body":
            obs0 = s.observers()[0].id
            pick = next((b for b in s.bodies.values()
                         if not b.is_photon and b.id != obs0), None)
            env[name] = pick if pick is not None else s.observers()[0]
        else:
            env[name] = parse_exact(spec)
    try:
        the_set = definable_set(s, inst.formula, inst.var, env)
    except UnsupportedDefinableSet as exc:
        sentence = instantiate_ind(inst.formula, inst.var)
        v = evaluate(s, sentence, env, budget)
        v.evidence.setdefault("note", "outside exact fragment: %s" % exc)
        return v
    if the_set.is_empty():
        return Verdict.holds(evidence={"case": "empty set; instance vacuously true"})
    if not the_set.bounded_above():
        return Verdict.holds(evidence={"case": "unbounded above; instance vacuously true"})
    sup = the_set.supremum()
    # sup is the max of finitely many exact interval tops: an upper bound
    # by construction, and least because every smaller value is exceeded
    # inside the topmost interval.
    return Verdict.holds(evidence={"sup": sup})


def check_theory(s: Structure, theory: Theory, budget: Optional[Budget] = None,
                 battery: Optional[Sequence[IndInstance]] = None) -> dict:
    """Check every axiom group of the theory; IND (when the theory carries
    the schema) runs the configured battery.  Returns name -> Verdict."""
    budget = budget or Budget()
    out = {}
    for group in theory.groups:
        certified = _certified_axiom(s, group.name, budget)
        if certified is not None:
            out[group.name] = certified
            continue
        results = [evaluate(s, sentence, None, budget) for _, sentence in group.sentences]
        out[group.name] = _combine(results)
    if theory.has_ind_schema:
        for inst in (battery if battery is not None else ind_battery()):
            out["IND.%s" % inst.name] = check_ind_instance(s, inst, budget)
    return out
