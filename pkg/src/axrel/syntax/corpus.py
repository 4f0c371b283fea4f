"""The axiom corpus: SpecRel, AccRel(-), GenRel(n), definitional
expansion, and the IND schema.

Theories are built programmatically as ASTs.  AxField is the finite
ordered-field axiom list; AxSelf/AxPh/AxEv/AxSymd follow their displayed
first-order shapes.  AxCmv, AxPh-, AxEv-, AxSymt- and AxDiff_n have no
displayed shape in the sources (they are delegated to citations); the
encodings here are epsilon-delta reconstructions and are marked
``reconstruction=True`` on their groups.

AxSymd is stored twice: the default corrected form compares the primed
spatial distance component-by-component; ``AxSymd#literal`` transcribes
the garbled displayed right-hand side and exists only as a flagged
curiosity (it is never part of SpecRel).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

from .ast import (
    Add, And, AxiomGroup, EqB, EqQ, Exists, Forall, Formula, IBAtom, IObAtom,
    Iff, Implies, Less, Mul, Not, ObAtom, OneC, Or, PhAtom, Sort, Sub, Term,
    Theory, Var, WAtom, ZeroC, conj, disj, exists_many, forall_many, free_vars,
    is_sentence, subformulas, subterms,
)

__all__ = [
    "axiom_corpus", "named_axiom", "all_named_axioms", "UnknownTheory",
    "expand_definitions", "contract_definitions", "instantiate_ind", "NotQuantityVariable",
    "IndInstance", "ind_battery",
]


class UnknownTheory(KeyError):
    pass


class NotQuantityVariable(ValueError):
    pass


def _bv(name: str) -> Var:
    return Var(name, Sort.BODY)


def _qv(name: str) -> Var:
    return Var(name, Sort.QUANTITY)


def _sq(t: Term) -> Term:
    return Mul(t, t)


def _le(a: Term, b: Term) -> Formula:
    return Or(Less(a, b), EqQ(a, b))


def _num(k: int) -> Term:
    if k == 0:
        return ZeroC()
    t: Term = OneC()
    for _ in range(k - 1):
        t = Add(t, OneC())
    return t


def _names4(prefix: str) -> list:
    # Primes go after the digit (x1', x2', ...) so names stay single tokens.
    ticks = len(prefix) - len(prefix.rstrip("'"))
    stem = prefix.rstrip("'")
    return ["%s%d%s" % (stem, i, "'" * ticks) for i in range(1, 5)]


def _vars4(prefix: str) -> list:
    return [_qv(name) for name in _names4(prefix)]


def _spatial_dist2(xs, ys) -> Term:
    parts = [_sq(Sub(xs[i], ys[i])) for i in range(3)]
    return Add(Add(parts[0], parts[1]), parts[2])


def _dist4sq(xs, ys) -> Term:
    return Add(_spatial_dist2(xs, ys), _sq(Sub(xs[3], ys[3])))


def _corr(o: str, o2: str, xs, ys, bname: str = "b") -> Formula:
    """The event-correspondence subformula: A b . W(o,b,xs) <-> W(o2,b,ys)."""
    b = _bv(bname)
    return Forall(bname, Sort.BODY,
                  Iff(WAtom(_bv(o), b, *xs), WAtom(_bv(o2), b, *ys)))


# ---------------------------------------------------------------------------
# SpecRel axioms.


def _ax_field_sentences() -> tuple:
    x, y, z = _qv("x"), _qv("y"), _qv("z")
    zero, one = ZeroC(), OneC()
    items = [
        ("add_assoc", forall_many(["x", "y", "z"], Sort.QUANTITY,
                                  EqQ(Add(Add(x, y), z), Add(x, Add(y, z))))),
        ("add_comm", forall_many(["x", "y"], Sort.QUANTITY, EqQ(Add(x, y), Add(y, x)))),
        ("add_identity", Forall("x", Sort.QUANTITY, EqQ(Add(x, zero), x))),
        ("add_inverse", Forall("x", Sort.QUANTITY,
                               Exists("y", Sort.QUANTITY, EqQ(Add(x, y), zero)))),
        ("mul_assoc", forall_many(["x", "y", "z"], Sort.QUANTITY,
                                  EqQ(Mul(Mul(x, y), z), Mul(x, Mul(y, z))))),
        ("mul_comm", forall_many(["x", "y"], Sort.QUANTITY, EqQ(Mul(x, y), Mul(y, x)))),
        ("mul_identity", Forall("x", Sort.QUANTITY, EqQ(Mul(x, one), x))),
        ("mul_inverse", Forall("x", Sort.QUANTITY,
                               Implies(Not(EqQ(x, zero)),
                                       Exists("y", Sort.QUANTITY, EqQ(Mul(x, y), one))))),
        ("distributive", forall_many(["x", "y", "z"], Sort.QUANTITY,
                                     EqQ(Mul(x, Add(y, z)), Add(Mul(x, y), Mul(x, z))))),
        ("zero_one_distinct", Not(EqQ(zero, one))),
        ("less_irreflexive", Forall("x", Sort.QUANTITY, Not(Less(x, x)))),
        ("less_transitive", forall_many(["x", "y", "z"], Sort.QUANTITY,
                                        Implies(And(Less(x, y), Less(y, z)), Less(x, z)))),
        ("less_total", forall_many(["x", "y"], Sort.QUANTITY,
                                   disj([Less(x, y), EqQ(x, y), Less(y, x)]))),
        ("add_monotone", forall_many(["x", "y", "z"], Sort.QUANTITY,
                                     Implies(Less(x, y), Less(Add(x, z), Add(y, z))))),
        ("mul_positive", forall_many(["x", "y"], Sort.QUANTITY,
                                     Implies(And(Less(zero, x), Less(zero, y)),
                                             Less(zero, Mul(x, y))))),
    ]
    return tuple(items)


def _ax_self() -> Formula:
    o = _bv("o")
    x, y, z, t = _qv("x"), _qv("y"), _qv("z"), _qv("t")
    zero = ZeroC()
    body = Implies(
        IObAtom(o),
        Iff(WAtom(o, o, x, y, z, t),
            conj([EqQ(x, zero), EqQ(y, zero), EqQ(z, zero)])),
    )
    return Forall("o", Sort.BODY, forall_many(["x", "y", "z", "t"], Sort.QUANTITY, body))


def _ax_ph() -> Formula:
    o, p = _bv("o"), _bv("p")
    xs, ys = _vars4("x"), _vars4("x'")
    photon = Exists("p", Sort.BODY,
                    conj([PhAtom(p), WAtom(o, p, *xs), WAtom(o, p, *ys)]))
    lightlike = EqQ(_spatial_dist2(xs, ys), _sq(Sub(xs[3], ys[3])))
    body = Implies(IObAtom(o), Iff(photon, lightlike))
    return Forall("o", Sort.BODY,
                  forall_many(_names4("x") + _names4("x'"), Sort.QUANTITY, body))


def _ax_ev() -> Formula:
    o, o2 = _bv("o"), _bv("o'")
    xs, ys = _vars4("x"), _vars4("x'")
    body = Implies(
        And(IObAtom(o), IObAtom(o2)),
        exists_many(_names4("x'"), Sort.QUANTITY, _corr("o", "o'", xs, ys)),
    )
    return forall_many(["o", "o'"], Sort.BODY,
                       forall_many(_names4("x"), Sort.QUANTITY, body))


def _ax_symd(literal: bool = False) -> Formula:
    xs, xs2 = _vars4("x"), _vars4("x'")
    ys, ys2 = _vars4("y"), _vars4("y'")
    hyp = conj([
        IObAtom(_bv("o")), IObAtom(_bv("o'")),
        EqQ(xs[3], ys[3]), EqQ(xs2[3], ys2[3]),
        _corr("o", "o'", xs, xs2),
        _corr("o", "o'", ys, ys2),
    ])
    if not literal:
        rhs = _spatial_dist2(xs2, ys2)
    else:
        # The displayed right-hand side, transcribed under the component
        # naming used elsewhere in the axioms (z'_i read as the third
        # components).  Demonstrably not the intended formula.
        rhs = Add(Add(_sq(Sub(xs2[0], xs2[1])), _sq(Sub(ys2[0], ys2[1]))),
                  _sq(Sub(xs2[2], ys2[2])))
    body = Implies(hyp, EqQ(_spatial_dist2(xs, ys), rhs))
    names = _names4("x") + _names4("x'") + _names4("y") + _names4("y'")
    return forall_many(["o", "o'"], Sort.BODY, forall_many(names, Sort.QUANTITY, body))


# ---------------------------------------------------------------------------
# AccRel: the co-moving observer axiom (reconstruction).


def _ax_cmv() -> Formula:
    # At each moment of its life, an observer sees the nearby world for a
    # short while like some inertial observer: the worldview
    # correspondence k -> m is the identity to first order at the moment.
    k, m = "k", "m"
    xs, ys = _vars4("x"), _vars4("y")
    t = _qv("t")
    e, d = _qv("e"), _qv("d")
    here = [ZeroC(), ZeroC(), ZeroC(), t]
    near = Less(_dist4sq(xs, here), _sq(d))
    close = _le(_dist4sq(ys, xs), Mul(_sq(e), _dist4sq(xs, here)))
    inner = forall_many(_names4("x") + _names4("y"), Sort.QUANTITY,
                        Implies(And(_corr(k, m, xs, ys), near), close))
    ladder = Forall("e", Sort.QUANTITY,
                    Implies(Less(ZeroC(), e),
                            Exists("d", Sort.QUANTITY, And(Less(ZeroC(), d), inner))))
    witness = Exists(m, Sort.BODY, And(IObAtom(_bv(m)), ladder))
    body = Implies(ObAtom(_bv(k)),
                   Forall("t", Sort.QUANTITY,
                          Implies(WAtom(_bv(k), _bv(k), *here), witness)))
    return Forall(k, Sort.BODY, body)


# ---------------------------------------------------------------------------
# GenRel axioms (localized; reconstructions except AxSelf-).


def _ax_self_minus() -> Formula:
    o = _bv("o")
    x, y, z, t = _qv("x"), _qv("y"), _qv("z"), _qv("t")
    zero = ZeroC()
    body = Implies(WAtom(o, o, x, y, z, t),
                   conj([EqQ(x, zero), EqQ(y, zero), EqQ(z, zero)]))
    return Forall("o", Sort.BODY, forall_many(["x", "y", "z", "t"], Sort.QUANTITY, body))


def _ax_ev_minus() -> Formula:
    o, o2 = _bv("o"), _bv("o'")
    xs, ys = _vars4("x"), _vars4("y")
    xs2, ys2 = _vars4("x'"), _vars4("y'")
    # (1) an observer coordinatizes the events in which it was observed
    seen = forall_many(["o", "o'"], Sort.BODY, forall_many(_names4("x"), Sort.QUANTITY, Implies(
        conj([ObAtom(o), ObAtom(o2), WAtom(o2, o, *xs)]),
        exists_many(_names4("y"), Sort.QUANTITY, _corr("o'", "o", xs, ys)),
    )))
    # (2) domains of worldview transformations are open
    d = _qv("d")
    inner = forall_many(_names4("x'"), Sort.QUANTITY, Implies(
        Less(_dist4sq(xs2, xs), _sq(d)),
        exists_many(_names4("y'"), Sort.QUANTITY, _corr("o", "o'", xs2, ys2)),
    ))
    open_domains = forall_many(["o", "o'"], Sort.BODY, forall_many(
        _names4("x") + _names4("y"), Sort.QUANTITY, Implies(
            conj([ObAtom(o), ObAtom(o2), _corr("o", "o'", xs, ys)]),
            Exists("d", Sort.QUANTITY, And(Less(ZeroC(), d), inner)),
        )))
    return And(seen, open_domains)


def _ax_ph_minus() -> Formula:
    o, p = _bv("o"), _bv("p")
    t = _qv("t")
    e, d = _qv("e"), _qv("d")
    ys = _vars4("y")
    here = [ZeroC(), ZeroC(), ZeroC(), t]
    origin3 = [ZeroC(), ZeroC(), ZeroC(), ys[3]]
    dt2 = _sq(Sub(ys[3], t))
    space2 = _spatial_dist2(ys, origin3)
    diff_hi = _le(Sub(space2, dt2), Mul(e, dt2))
    diff_lo = _le(Sub(dt2, space2), Mul(e, dt2))
    speed_one = forall_many(_names4("y"), Sort.QUANTITY, Implies(
        conj([WAtom(o, p, *ys), Less(ZeroC(), dt2), Less(dt2, _sq(d))]),
        And(diff_hi, diff_lo),
    ))
    ladder = Forall("e", Sort.QUANTITY, Implies(Less(ZeroC(), e), Exists(
        "d", Sort.QUANTITY, And(Less(ZeroC(), d), speed_one))))
    clause1 = forall_many(["o", "p"], Sort.BODY, Forall("t", Sort.QUANTITY, Implies(
        conj([ObAtom(o), PhAtom(p), WAtom(o, o, *here), WAtom(o, p, *here)]),
        ladder,
    )))
    # any observer can send out photons in any direction, at unit speed
    ds = [_qv("d1"), _qv("d2"), _qv("d3")]
    unit = EqQ(Add(Add(_sq(ds[0]), _sq(ds[1])), _sq(ds[2])), OneC())
    ray = [Mul(ds[0], Sub(ys[3], t)), Mul(ds[1], Sub(ys[3], t)), Mul(ds[2], Sub(ys[3], t)), ys[3]]
    off_ray2 = _spatial_dist2(ys, ray)
    track = forall_many(_names4("y"), Sort.QUANTITY, Implies(
        conj([WAtom(o, p, *ys), Less(ZeroC(), dt2), Less(dt2, _sq(d))]),
        _le(off_ray2, Mul(_sq(e), dt2)),
    ))
    ladder2 = Forall("e", Sort.QUANTITY, Implies(Less(ZeroC(), e), Exists(
        "d", Sort.QUANTITY, And(Less(ZeroC(), d), track))))
    emission = Exists("p", Sort.BODY, conj([PhAtom(p), WAtom(o, p, *here), ladder2]))
    clause2 = Forall("o", Sort.BODY, forall_many(["t", "d1", "d2", "d3"], Sort.QUANTITY, Implies(
        conj([ObAtom(o), WAtom(o, o, *here), unit]), emission)))
    return And(clause1, clause2)


def _ax_symt_minus() -> Formula:
    # Meeting observers see each other's clocks behave the same way at the
    # meeting: first-order rates agree, stated cross-multiplied to avoid
    # division: s*(x4 - t) ~ s'*(y4 - t').
    t, t2 = _qv("t"), _qv("t'")
    s, s2 = _qv("s"), _qv("s'")
    e, d = _qv("e"), _qv("d")
    xs, ys = _vars4("x"), _vars4("y")
    here_o = [ZeroC(), ZeroC(), ZeroC(), t]
    here_o2 = [ZeroC(), ZeroC(), ZeroC(), t2]
    tick_o = [ZeroC(), ZeroC(), ZeroC(), Add(t, s)]
    tick_o2 = [ZeroC(), ZeroC(), ZeroC(), Add(t2, s2)]
    lhs = Mul(s, Sub(xs[3], t))
    rhs = Mul(s2, Sub(ys[3], t2))
    small = Add(_sq(s), _sq(s2))
    sym_hi = _le(Sub(lhs, rhs), Mul(e, small))
    sym_lo = _le(Sub(rhs, lhs), Mul(e, small))
    inner = forall_many(["s", "s'"] + _names4("x") + _names4("y"), Sort.QUANTITY, Implies(
        conj([
            Less(ZeroC(), _sq(s)), Less(_sq(s), _sq(d)),
            Less(ZeroC(), _sq(s2)), Less(_sq(s2), _sq(d)),
            _corr("o", "o'", tick_o, ys),
            _corr("o'", "o", tick_o2, xs),
        ]),
        And(sym_hi, sym_lo),
    ))
    ladder = Forall("e", Sort.QUANTITY, Implies(Less(ZeroC(), e), Exists(
        "d", Sort.QUANTITY, And(Less(ZeroC(), d), inner))))
    body = Implies(
        conj([ObAtom(_bv("o")), ObAtom(_bv("o'")), _corr("o", "o'", here_o, here_o2)]),
        ladder,
    )
    return forall_many(["o", "o'"], Sort.BODY, forall_many(["t", "t'"], Sort.QUANTITY, body))


def _ax_diff(n: int) -> Formula:
    """AxDiff_n: iterated difference quotients of the worldview
    transformation converge along every line through every domain point,
    up to order n (per-direction coefficients)."""
    if n < 1:
        raise ValueError("differentiability order must be >= 1")
    xs = _vars4("x")
    hs = _vars4("h")
    lam = _qv("l")
    e, d = _qv("e"), _qv("d")
    y_names = [_names4("y%d" % j) for j in range(n + 1)]
    y_vars = [[_qv(nm) for nm in row] for row in y_names]
    a_names = [_names4("a%d" % k) for k in range(1, n + 1)]
    a_vars = [[_qv(nm) for nm in row] for row in a_names]

    def scaled_point(j: int) -> list:
        # x + j*lambda*h
        if j == 0:
            return list(xs)
        step = [Mul(_num(j), Mul(lam, hs[i])) for i in range(4)]
        return [Add(xs[i], step[i]) for i in range(4)]

    corr_chain = [_corr("o", "o'", scaled_point(j), y_vars[j]) for j in range(n + 1)]

    def lam_pow(k: int) -> Term:
        t: Term = lam
        for _ in range(k - 1):
            t = Mul(t, lam)
        return t

    bounds = []
    for k in range(1, n + 1):
        # component-wise k-th forward difference minus k! * a_k * lambda^k
        fact = math.factorial(k)
        residual2 = None
        for c in range(4):
            acc: Optional[Term] = None
            for j in range(0, k + 1):
                coeff = math.comb(k, j)
                part = Mul(_num(coeff), y_vars[j][c]) if coeff != 1 else y_vars[j][c]
                if acc is None:
                    acc = part
                elif (k - j) % 2 == 0:
                    acc = Add(acc, part)
                else:
                    acc = Sub(acc, part)
            # note: loop order gives sign (-1)^(k-j) with j ascending
            expected = Mul(_num(fact), Mul(a_vars[k - 1][c], lam_pow(k)))
            comp = _sq(Sub(acc, expected))
            residual2 = comp if residual2 is None else Add(residual2, comp)
        lam2k = _sq(lam_pow(k))
        bounds.append(_le(residual2, Mul(_sq(e), lam2k)))

    flat_y = [nm for row in y_names for nm in row]
    inner = forall_many(["l"] + flat_y, Sort.QUANTITY, Implies(
        conj([Less(ZeroC(), _sq(lam)), Less(_sq(lam), _sq(d))] + corr_chain),
        conj(bounds),
    ))
    ladder = Forall("e", Sort.QUANTITY, Implies(Less(ZeroC(), e), Exists(
        "d", Sort.QUANTITY, And(Less(ZeroC(), d), inner))))
    flat_a = [nm for row in a_names for nm in row]
    with_coeffs = exists_many(flat_a, Sort.QUANTITY, ladder)
    ws = _vars4("w")
    in_domain = exists_many(_names4("w"), Sort.QUANTITY, _corr("o", "o'", xs, ws))
    body = Implies(conj([ObAtom(_bv("o")), ObAtom(_bv("o'")), in_domain]),
                   forall_many(_names4("h"), Sort.QUANTITY, with_coeffs))
    return forall_many(["o", "o'"], Sort.BODY, forall_many(_names4("x"), Sort.QUANTITY, body))


# ---------------------------------------------------------------------------
# Theories.


def _specrel_groups() -> tuple:
    return (
        AxiomGroup("AxField", _ax_field_sentences()),
        AxiomGroup("AxSelf", (("AxSelf", _ax_self()),)),
        AxiomGroup("AxPh", (("AxPh", _ax_ph()),)),
        AxiomGroup("AxEv", (("AxEv", _ax_ev()),)),
        AxiomGroup("AxSymd", (("AxSymd", _ax_symd()),)),
    )


def axiom_corpus(name: str) -> Theory:
    """Theory by name: SpecRel, AccRelMinus, AccRel, or GenRel(n)."""
    if name == "SpecRel":
        return Theory("SpecRel", _specrel_groups())
    if name in ("AccRelMinus", "AccRel-"):
        groups = _specrel_groups() + (
            AxiomGroup("AxCmv", (("AxCmv", _ax_cmv()),), reconstruction=True),
        )
        return Theory("AccRelMinus", groups)
    if name == "AccRel":
        groups = _specrel_groups() + (
            AxiomGroup("AxCmv", (("AxCmv", _ax_cmv()),), reconstruction=True),
        )
        return Theory("AccRel", groups, has_ind_schema=True)
    m = re.fullmatch(r"GenRel\((\d+)\)", name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UnknownTheory(name)
        groups = (
            AxiomGroup("AxField", _ax_field_sentences()),
            AxiomGroup("AxSelf-", (("AxSelf-", _ax_self_minus()),)),
            AxiomGroup("AxPh-", (("AxPh-", _ax_ph_minus()),), reconstruction=True),
            AxiomGroup("AxEv-", (("AxEv-", _ax_ev_minus()),), reconstruction=True),
            AxiomGroup("AxSymt-", (("AxSymt-", _ax_symt_minus()),), reconstruction=True),
            AxiomGroup("AxDiff_%d" % n, (("AxDiff_%d" % n, _ax_diff(n)),), reconstruction=True),
        )
        return Theory(name, groups, has_ind_schema=True)
    raise UnknownTheory(name)


def named_axiom(name: str) -> Formula:
    """A single axiom sentence by name (e.g. ``AxPh``, ``AxSymd#literal``)."""
    if name == "AxSymd#literal":
        return _ax_symd(literal=True)
    for theory in ("SpecRel", "AccRel", "GenRel(2)"):
        for group in axiom_corpus(theory).groups:
            for sub, sentence in group.sentences:
                if sub == name or group.name == name and len(group.sentences) == 1:
                    return sentence
    raise UnknownTheory(name)


def all_named_axioms() -> list:
    """Every (name, sentence) in the corpus, for round-trip sweeps."""
    out = []
    seen = set()
    for theory in ("SpecRel", "AccRel", "GenRel(1)", "GenRel(2)", "GenRel(3)"):
        for group in axiom_corpus(theory).groups:
            for sub, sentence in group.sentences:
                key = (group.name, sub)
                if key not in seen:
                    seen.add(key)
                    out.append(("%s.%s" % key if len(group.sentences) > 1 else sub, sentence))
    out.append(("AxSymd#literal", _ax_symd(literal=True)))
    return out


# ---------------------------------------------------------------------------
# Definitional expansion down to the primitive signature.


def expand_definitions(f: Formula) -> Formula:
    """Replace Ob/IOb and the 0/1/- sugar by their defining formulas.

    The result contains only primitive symbols; expansion is idempotent
    and deterministic (fresh variables are numbered in traversal order).
    """
    counter = [0]

    def fresh(prefix: str) -> str:
        counter[0] += 1
        return "_%s%d" % (prefix, counter[0])

    def expand_atom_terms(node: Formula) -> Formula:
        # Eliminate the leftmost-innermost sugar term, then recurse.
        target = _first_sugar_term(node)
        if target is None:
            return node
        name = fresh("q")
        v = Var(name, Sort.QUANTITY)
        replaced = _replace_term_once(node, target, v)
        if isinstance(target, ZeroC):
            w = fresh("w")
            guard = Forall(w, Sort.QUANTITY,
                           EqQ(Add(v, Var(w, Sort.QUANTITY)), Var(w, Sort.QUANTITY)))
        elif isinstance(target, OneC):
            w = fresh("w")
            guard = Forall(w, Sort.QUANTITY,
                           EqQ(Mul(v, Var(w, Sort.QUANTITY)), Var(w, Sort.QUANTITY)))
        else:  # Sub: v is the unique u with right + u = left
            guard = EqQ(Add(target.right, v), target.left)
        return Exists(name, Sort.QUANTITY, And(guard, expand_atom_terms(replaced)))

    def visit(node: Formula) -> Formula:
        if isinstance(node, ObAtom):
            b, names = fresh("b"), [fresh("q") for _ in range(4)]
            w = WAtom(node.body, Var(b, Sort.BODY),
                      *(Var(nm, Sort.QUANTITY) for nm in names))
            return Exists(b, Sort.BODY, exists_many(names, Sort.QUANTITY, w))
        if isinstance(node, IObAtom):
            return And(IBAtom(node.body), visit(ObAtom(node.body)))
        if isinstance(node, Not):
            return Not(visit(node.arg))
        if isinstance(node, (And, Or, Implies, Iff)):
            return type(node)(visit(node.left), visit(node.right))
        if isinstance(node, (Forall, Exists)):
            return type(node)(node.var, node.var_sort, visit(node.body))
        return expand_atom_terms(node)

    return visit(f)


def contract_definitions(f: Formula) -> Formula:
    """Partial inverse of expand_definitions: inline existentials that pin
    their variable definitionally.

    In any ordered field,  E v . (A w . v+w = w) & phi(v)  is equivalent
    to  phi(0),  likewise for the multiplicative unit and for
    E v . (t + v = s) & phi(v)  versus  phi(s - t).  The evaluator
    applies this before quantifier processing so expanded formulas are
    decided exactly like their sugared originals.
    """
    from .ast import substitute_term

    def pin_of(var: str, guard: Formula) -> Optional[Term]:
        if isinstance(guard, Forall) and guard.var_sort is Sort.QUANTITY:
            b = guard.body
            w = guard.var
            if isinstance(b, EqQ) and isinstance(b.right, Var) and b.right.name == w:
                l = b.left
                if isinstance(l, (Add, Mul)):
                    pair = {t.name for t in (l.left, l.right) if isinstance(t, Var)}
                    if pair == {var, w} and isinstance(l.left, Var) and isinstance(l.right, Var):
                        return ZeroC() if isinstance(l, Add) else OneC()
        if isinstance(guard, EqQ) and isinstance(guard.left, Add):
            t, v = guard.left.left, guard.left.right
            if isinstance(v, Var) and v.name == var and not _mentions(t, var) \
                    and not _mentions(guard.right, var):
                return Sub(guard.right, t)
        return None

    def visit(node: Formula) -> Formula:
        if isinstance(node, Exists) and node.var_sort is Sort.QUANTITY \
                and isinstance(node.body, And):
            guard, rest = node.body.left, node.body.right
            pin = pin_of(node.var, guard)
            if pin is not None:
                return visit(substitute_term(rest, node.var, pin))
        if isinstance(node, Not):
            return Not(visit(node.arg))
        if isinstance(node, (And, Or, Implies, Iff)):
            return type(node)(visit(node.left), visit(node.right))
        if isinstance(node, (Forall, Exists)):
            return type(node)(node.var, node.var_sort, visit(node.body))
        return node

    return visit(f)


def _mentions(t: Term, var: str) -> bool:
    return any(isinstance(x, Var) and x.name == var for x in subterms(t))


def _first_sugar_term(atom: Formula) -> Optional[Term]:
    def scan(t: Term) -> Optional[Term]:
        if isinstance(t, (Add, Mul, Sub)):
            hit = scan(t.left) or scan(t.right)
            if hit is not None:
                return hit
            return t if isinstance(t, Sub) else None
        if isinstance(t, (ZeroC, OneC)):
            return t
        return None

    from .ast import _formula_terms

    for term in _formula_terms(atom):
        hit = scan(term)
        if hit is not None:
            return hit
    return None


def _replace_term_once(atom: Formula, target: Term, replacement: Term) -> Formula:
    done = [False]

    def rt(t: Term) -> Term:
        if done[0]:
            return t
        if t is target:
            done[0] = True
            return replacement
        if isinstance(t, (Add, Mul, Sub)):
            left = rt(t.left)
            right = rt(t.right)
            return type(t)(left, right)
        return t

    if isinstance(atom, (EqQ, Less)):
        return type(atom)(rt(atom.left), rt(atom.right))
    if isinstance(atom, WAtom):
        return WAtom(atom.observer, atom.body, *(rt(c) for c in atom.coords))
    return atom


# ---------------------------------------------------------------------------
# The IND schema.


def instantiate_ind(phi: Formula, var: str = "t") -> Formula:
    """The IND instance for phi with distinguished quantity variable var:
    if the set phi defines is nonempty and bounded above, it has a least
    upper bound.  Parameters (other free variables) are universally
    quantified in front.

    Instances whose formula stays inside the ordered-field sublanguage
    are exactly the first-order continuity axioms for the quantity sort;
    instances mentioning W or body predicates reach beyond them.
    """
    frees = free_vars(phi)
    if var not in frees:
        raise NotQuantityVariable("%r is not free in the formula" % var)
    if frees[var] is not Sort.QUANTITY:
        raise NotQuantityVariable("%r is not quantity-sorted" % var)
    params = sorted(n for n in frees if n != var)
    used = set(frees)

    def fresh(base: str) -> str:
        name = base
        n = 1
        while name in used:
            n += 1
            name = "%s_%d" % (base, n)
        used.add(name)
        return name

    ub_name = fresh("u")
    sup_name = fresh("s")
    other_ub = fresh("u'")

    def upper_bound(u: str) -> Formula:
        return Forall(var, Sort.QUANTITY,
                      Implies(phi, _le(_qv(var), _qv(u))))

    nonempty = Exists(var, Sort.QUANTITY, phi)
    bounded = Exists(ub_name, Sort.QUANTITY, upper_bound(ub_name))
    least = Forall(other_ub, Sort.QUANTITY,
                   Implies(upper_bound(other_ub), _le(_qv(sup_name), _qv(other_ub))))
    has_sup = Exists(sup_name, Sort.QUANTITY, And(upper_bound(sup_name), least))
    instance = Implies(And(nonempty, bounded), has_sup)
    for p in reversed(params):
        instance = Forall(p, frees[p], instance)
    return instance


# ---------------------------------------------------------------------------
# The configured IND battery (interval-definable sets, exact suprema).


@dataclass(frozen=True)
class IndInstance:
    name: str
    formula: Formula          # free in `var` (+ possibly parameters)
    var: str
    field_language: bool      # True if no W/body symbols occur
    expected_sup: Optional[str] = None   # literal, None for empty sets
    param_values: tuple = ()  # ((name, literal-or-body), ...) fixed bindings


def ind_battery() -> list:
    """Twenty IND instances over interval-definable bounded sets."""
    from .parser import parse

    q = {"t": Sort.QUANTITY, "p": Sort.QUANTITY}
    qb = {"t": Sort.QUANTITY, "o": Sort.BODY, "k": Sort.BODY}
    items = [
        ("sqrt2", "t*t < 1+1", True, "sqrt(2)", ()),
        ("unit", "t < 1", True, "1", ()),
        ("parabola", "t*t < t+t", True, "2", ()),
        ("golden", "t*t + t < 1", True, "-1/2 + 1/2*sqrt(5)", ()),
        ("empty_order", "t < 0 & 0 < t", True, None, ()),
        ("empty_square", "t*t < 0", True, None, ()),
        ("half", "t+t = 1", True, "1/2", ()),
        ("neg_sqrt2", "t*t = 1+1 & t < 0", True, "-sqrt(2)", ()),
        ("union", "t < 1 | t < 1+1", True, "2", ()),
        ("shifted", "(t+1)*(t+1) < 1+1+1+1", True, "1", ()),
        ("hump", "0 < t*(1-t)", True, "1", ()),
        ("circle", "t*t + t*t < 1", True, "1/2*sqrt(2)", ()),
        ("open_unit", "0 < t & t*t < t", True, "1", ()),
        ("two_pieces", "t < 0-1 | (0 < t & t+t+t < 1)", True, "1/3", ()),
        ("sqrt3", "t*t < 1+1+1", True, "sqrt(3)", ()),
        ("offset_sqrt2", "(t-1)*(t-1) < 1+1", True, "1 + sqrt(2)", ()),
        ("photon_reach", "E p:B . Ph(p) & W(o,p,0,0,0,0) & W(o,p,t,0,0,1)",
         False, "1", (("o", "@observer"),)),
        ("body_position", "W(o,k,t,0,0,1)", False, None, (("o", "@observer"), ("k", "@body"))),
        ("param_cut", "t < p", True, "p", (("p", "3/4"),)),
        ("param_square", "t*t < p*p", True, "3/4", (("p", "3/4"),)),
    ]
    out = []
    for name, text, field_lang, sup, params in items:
        decls = dict(q)
        if not field_lang:
            decls = dict(qb)
        if any(p[0] == "p" for p in params):
            decls["p"] = Sort.QUANTITY
        out.append(IndInstance(name, parse(text, decls), "t", field_lang, sup, params))
    return out
