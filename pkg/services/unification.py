"""
Unification, one-way matching and renaming apart for clausal terms
"""

from typing import Dict, Optional

from models.clause import Clause, Compound, Literal, Term, Variable
from services.formula import clause_variables, rename_clause

Substitution = Dict[Variable, Term]


def walk(term: Term, subst: Substitution) -> Term:
    while isinstance(term, Variable) and term in subst:
        term = subst[term]
    return term


def occurs(variable: Variable, term: Term, subst: Substitution) -> bool:
    term = walk(term, subst)
    if term == variable:
        return True
    if isinstance(term, Compound):
        return any(occurs(variable, arg, subst) for arg in term.args)
    return False


def unify(left: Term, right: Term, subst: Optional[Substitution] = None) -> Optional[Substitution]:
    """
    Robinson unification with occurs check

    Args:
        left: First term
        right: Second term
        subst: Triangular substitution to extend (not modified)

    Returns:
        Extended substitution, or None when the terms do not unify
    """
    subst = dict(subst) if subst else {}
    stack = [(left, right)]
    while stack:
        first, second = stack.pop()
        first = walk(first, subst)
        second = walk(second, subst)
        if first == second:
            continue
        if isinstance(first, Variable):
            if occurs(first, second, subst):
                return None
            subst[first] = second
        elif isinstance(second, Variable):
            if occurs(second, first, subst):
                return None
            subst[second] = first
        else:
            if first.functor != second.functor or first.arity != second.arity:
                return None
            stack.extend(zip(reversed(first.args), reversed(second.args)))
    return subst


def substitute(term: Term, subst: Substitution) -> Term:
    term = walk(term, subst)
    if isinstance(term, Variable) or not term.args:
        return term
    return Compound(term.functor, tuple(substitute(arg, subst) for arg in term.args))


def substitute_literal(literal: Literal, subst: Substitution) -> Literal:
    return Literal(literal.positive, substitute(literal.atom, subst))


def match(pattern: Term, target: Term, subst: Optional[Substitution] = None) -> Optional[Substitution]:
    """
    One-way matching: bind only pattern variables so that pattern·σ == target

    Target variables are treated as constants and never bound.
    """
    subst = dict(subst) if subst else {}
    stack = [(pattern, target)]
    while stack:
        first, second = stack.pop()
        if isinstance(first, Variable):
            bound = subst.get(first)
            if bound is None:
                subst[first] = second
            elif bound != second:
                return None
            continue
        if not isinstance(second, Compound) or first.functor != second.functor or first.arity != second.arity:
            return None
        stack.extend(zip(first.args, second.args))
    return subst


def rename_apart(clause: Clause, suffix: str) -> Clause:
    """Give every variable of a clause a suffix so it shares none with another clause"""
    mapping = {variable: Variable(f"{variable.name}_{suffix}") for variable in clause_variables(clause)}
    return rename_clause(clause, mapping) if mapping else clause
