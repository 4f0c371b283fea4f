"""Two-sorted first-order language: AST, parser, printer, axiom corpus."""

from .ast import (
    Add, And, AxiomGroup, EqB, EqQ, Exists, Forall, Formula, IBAtom, IObAtom,
    Iff, Implies, Less, Mul, Not, ObAtom, OneC, Or, PhAtom, Sort, SortError,
    Sub, Term, Theory, Var, WAtom, ZeroC, alpha_equal, free_vars, is_sentence,
)
from .parser import FormulaSyntaxError, parse, parse_theory_file
from .printer import print_formula
from .corpus import (
    IndInstance, NotQuantityVariable, UnknownTheory, all_named_axioms,
    axiom_corpus, contract_definitions, expand_definitions, ind_battery,
    instantiate_ind, named_axiom,
)

__all__ = [
    "Add", "And", "AxiomGroup", "EqB", "EqQ", "Exists", "Forall", "Formula",
    "IBAtom", "IObAtom", "Iff", "Implies", "Less", "Mul", "Not", "ObAtom",
    "OneC", "Or", "PhAtom", "Sort", "SortError", "Sub", "Term", "Theory",
    "Var", "WAtom", "ZeroC", "alpha_equal", "free_vars", "is_sentence",
    "FormulaSyntaxError", "parse", "parse_theory_file", "print_formula",
    "IndInstance", "NotQuantityVariable", "UnknownTheory", "all_named_axioms",
    "axiom_corpus", "contract_definitions", "expand_definitions", "ind_battery", "instantiate_ind",
    "named_axiom",
]
