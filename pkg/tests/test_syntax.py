import random

import pytest

from axrel.syntax import (
    Add, And, EqQ, Exists, Forall, IBAtom, IObAtom, Iff, Implies, Less, Mul,
    Not, ObAtom, OneC, Or, PhAtom, Sort, SortError, Sub, Var, WAtom, ZeroC,
    alpha_equal, all_named_axioms, axiom_corpus, expand_definitions, free_vars,
    ind_battery, instantiate_ind, is_sentence, named_axiom, parse,
    parse_theory_file, print_formula, FormulaSyntaxError, UnknownTheory,
)
from axrel.syntax.corpus import NotQuantityVariable
from axrel.syntax.ast import subformulas


def test_parse_quantified_axiom_shape():
    f = parse("A o:B . IOb(o) -> W(o,o,0,0,0,0)")
    assert isinstance(f, Forall)
    assert f.var_sort is Sort.BODY
    assert is_sentence(f)


def test_parse_sort_error():
    with pytest.raises(SortError):
        parse("W(x,b,0,0,0,0)", {"x": Sort.QUANTITY, "b": Sort.BODY})


def test_parse_undeclared_variable():
    with pytest.raises(FormulaSyntaxError):
        parse("W(o,b,0,0,0,0)", {"o": Sort.BODY})


def test_positions_reported():
    try:
        parse("A o:B . IOb(o) & & W(o,o,0,0,0,0)")
    except FormulaSyntaxError as exc:
        assert exc.pos > 0
    else:
        raise AssertionError("expected a syntax error")


def test_corpus_round_trip():
    for name, sentence in all_named_axioms():
        assert is_sentence(sentence), name
        assert alpha_equal(parse(print_formula(sentence)), sentence), name


def test_shadowed_binders_print_renamed_apart():
    inner = Forall("x", Sort.QUANTITY, EqQ(Var("x", Sort.QUANTITY), ZeroC()))
    outer = Forall("x", Sort.QUANTITY,
                   And(Less(ZeroC(), Var("x", Sort.QUANTITY)), inner))
    text = print_formula(outer)
    assert text.count("A x:Q") == 1  # the inner binder got a fresh name
    assert alpha_equal(parse(text), outer)


def test_print_injective_on_corpus():
    texts = {}
    for name, sentence in all_named_axioms():
        text = print_formula(sentence)
        if text in texts:
            assert alpha_equal(sentence, texts[text])
        texts[text] = sentence


def _random_formula(rng, depth, scope):
    # scope: dict name -> Sort of available bound variables
    qvars = [n for n, s in scope.items() if s is Sort.QUANTITY]
    bvars = [n for n, s in scope.items() if s is Sort.BODY]

    def term(d=2):
        if d == 0 or not qvars or rng.random() < 0.3:
            if qvars and rng.random() < 0.6:
                return Var(rng.choice(qvars), Sort.QUANTITY)
            return ZeroC() if rng.random() < 0.5 else OneC()
        ctor = rng.choice([Add, Mul, Sub])
        return ctor(term(d - 1), term(d - 1))

    if depth == 0 or rng.random() < 0.25:
        kind = rng.randrange(4 if bvars else 2)
        if kind == 0:
            return EqQ(term(), term())
        if kind == 1:
            return Less(term(), term())
        if kind == 2:
            atom = rng.choice([IBAtom, PhAtom, ObAtom, IObAtom])
            return atom(Var(rng.choice(bvars), Sort.BODY))
        o, b = rng.choice(bvars), rng.choice(bvars)
        return WAtom(Var(o, Sort.BODY), Var(b, Sort.BODY),
                     term(), term(), term(), term())
    roll = rng.random()
    if roll < 0.18:
        return Not(_random_formula(rng, depth - 1, scope))
    if roll < 0.62:
        ctor = rng.choice([And, Or, Implies, Iff])
        return ctor(_random_formula(rng, depth - 1, scope),
                    _random_formula(rng, depth - 1, scope))
    sort = Sort.QUANTITY if rng.random() < 0.6 else Sort.BODY
    name = "%s%d" % ("q" if sort is Sort.QUANTITY else "c", len(scope))
    ctor = Forall if rng.random() < 0.5 else Exists
    inner = _random_formula(rng, depth - 1, {**scope, name: sort})
    return ctor(name, sort, inner)


def test_round_trip_thousand_random_formulas():
    rng = random.Random(2024)
    for i in range(1000):
        f = Forall("o0", Sort.BODY, _random_formula(rng, 4, {"o0": Sort.BODY}))
        assert is_sentence(f), i
        back = parse(print_formula(f))
        assert alpha_equal(back, f), (i, print_formula(f))


def test_specrel_has_exactly_the_five_named_groups():
    th = axiom_corpus("SpecRel")
    assert th.axiom_names() == ["AxField", "AxSelf", "AxPh", "AxEv", "AxSymd"]
    assert not th.has_ind_schema


def test_accrelminus_is_specrel_plus_axcmv():
    th = axiom_corpus("AccRelMinus")
    assert th.axiom_names() == ["AxField", "AxSelf", "AxPh", "AxEv", "AxSymd", "AxCmv"]
    assert not th.has_ind_schema
    assert th.group("AxCmv").reconstruction


def test_accrel_carries_ind_schema():
    th = axiom_corpus("AccRel")
    assert th.has_ind_schema


def test_genrel_groups_and_ind():
    th = axiom_corpus("GenRel(2)")
    assert th.axiom_names() == [
        "AxField", "AxSelf-", "AxPh-", "AxEv-", "AxSymt-", "AxDiff_2"]
    assert th.has_ind_schema


def test_unknown_theory():
    with pytest.raises(UnknownTheory):
        axiom_corpus("Newton")


def test_axfield_is_a_finite_list():
    group = axiom_corpus("SpecRel").group("AxField")
    assert len(group.sentences) == 15
    for _, sentence in group.sentences:
        assert is_sentence(sentence)


def test_axsymd_literal_variant_differs():
    corrected = named_axiom("AxSymd")
    literal = named_axiom("AxSymd#literal")
    assert not alpha_equal(corrected, literal)


def test_expand_iob():
    f = parse("A o:B . IOb(o) -> IOb(o)")
    e = expand_definitions(f)
    names = {type(sub).__name__ for sub in subformulas(e)}
    assert "IObAtom" not in names and "ObAtom" not in names
    assert "IBAtom" in names and "WAtom" in names


def test_expand_no_sugar_is_identity():
    f = parse("A x:Q y:Q . x + y = y + x")
    # 0/1-free, Ob-free formula with only primitive symbols stays put
    assert alpha_equal(expand_definitions(f), f)


def test_expansion_idempotent_on_corpus():
    for name, sentence in all_named_axioms():
        once = expand_definitions(sentence)
        assert alpha_equal(expand_definitions(once), once), name
        assert is_sentence(once)


def test_expansion_removes_all_sugar():
    for name, sentence in all_named_axioms():
        expanded = expand_definitions(sentence)
        for sub in subformulas(expanded):
            assert not isinstance(sub, (ObAtom, IObAtom)), name
            from axrel.syntax.ast import _formula_terms, subterms
            for t in _formula_terms(sub):
                for leaf in subterms(t):
                    assert not isinstance(leaf, (ZeroC, OneC, Sub)), name


def test_instantiate_ind_shape():
    phi = parse("t*t < 1+1", {"t": Sort.QUANTITY})
    inst = instantiate_ind(phi, "t")
    assert is_sentence(inst)
    assert alpha_equal(parse(print_formula(inst)), inst)


def test_instantiate_ind_rejects_body_variable():
    phi = parse("Ph(p)", {"p": Sort.BODY})
    with pytest.raises(NotQuantityVariable):
        instantiate_ind(phi, "p")
    with pytest.raises(NotQuantityVariable):
        instantiate_ind(parse("0 < 1"), "t")


def test_instantiate_ind_closes_parameters():
    phi = parse("t < p", {"t": Sort.QUANTITY, "p": Sort.QUANTITY})
    inst = instantiate_ind(phi, "t")
    assert is_sentence(inst)
    assert isinstance(inst, Forall) and inst.var == "p"


def test_ind_battery_is_twenty():
    battery = ind_battery()
    assert len(battery) == 20
    assert sum(1 for item in battery if item.field_language) == 18


def test_theory_file_parsing():
    text = """
# sample formula file
axiom self_like:
  A o:B . IOb(o) -> W(o,o,0,0,0,0)
theorem trivial: A x:Q . x = x
"""
    entries = parse_theory_file(text)
    assert [(k, n) for k, n, _ in entries] == [
        ("axiom", "self_like"), ("theorem", "trivial")]
    assert all(is_sentence(f) for _, _, f in entries)
