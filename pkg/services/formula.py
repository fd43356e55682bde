"""
Clause rendering, canonical forms and structural measures
"""

from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from models.clause import EQUALITY, AnnotatedClause, Clause, ClauseRole, Compound, Literal, SignatureStats, Term, Variable

EMPTY_CLAUSE_TEXT = '($false)'

_ROLE_NAMES = {
    ClauseRole.AXIOM: 'axiom',
    ClauseRole.DERIVED: 'plain',
    ClauseRole.CONJECTURE: 'conjecture',
}


def render_term(term: Term) -> str:
    if isinstance(term, Variable):
        return term.name
    if not term.args:
        return term.functor
    return f"{term.functor}({','.join(render_term(arg) for arg in term.args)})"


def render_literal(literal: Literal) -> str:
    if literal.is_equality:
        left, right = literal.atom.args
        operator = '=' if literal.positive else '!='
        return f"{render_term(left)}{operator}{render_term(right)}"
    text = render_term(literal.atom)
    return text if literal.positive else f"~{text}"


def render_clause(clause: Clause) -> str:
    """
    Render a clause in the parenthesized prompt style

    Args:
        clause: Clause to render

    Returns:
        `(lit|lit|...)`, or `($false)` for the empty clause
    """
    if clause.is_empty:
        return EMPTY_CLAUSE_TEXT
    return f"({'|'.join(render_literal(literal) for literal in clause.literals)})"


def render_annotated(annotated: AnnotatedClause) -> str:
    """Render `cnf(name,role,(...))` without the trailing period, as prompts list context axioms"""
    return f"cnf({annotated.name},{_ROLE_NAMES[annotated.role]},{render_clause(annotated.clause)})"


def iter_term_variables(term: Term) -> Iterator[Variable]:
    if isinstance(term, Variable):
        yield term
        return
    for arg in term.args:
        yield from iter_term_variables(arg)


def clause_variables(clause: Clause) -> List[Variable]:
    """Distinct variables in first textual occurrence order"""
    seen: Dict[Variable, None] = {}
    for literal in clause.literals:
        for variable in iter_term_variables(literal.atom):
            seen.setdefault(variable, None)
    return list(seen)


def rename_term(term: Term, mapping: Mapping[Variable, Term]) -> Term:
    if isinstance(term, Variable):
        return mapping.get(term, term)
    if not term.args:
        return term
    return Compound(term.functor, tuple(rename_term(arg, mapping) for arg in term.args))


def rename_clause(clause: Clause, mapping: Mapping[Variable, Term]) -> Clause:
    return Clause(tuple(Literal(literal.positive, rename_term(literal.atom, mapping)) for literal in clause.literals))


def normalize_variables(clause: Clause) -> Clause:
    """
    Rename variables to X1..Xn by first textual occurrence

    Literal order is preserved, so the result is idempotent and identical for
    alpha-equivalent inputs written with the same literal order.
    """
    mapping = {variable: Variable(f"X{index}") for index, variable in enumerate(clause_variables(clause), start=1)}
    if all(variable == target for variable, target in mapping.items()):
        return clause
    return rename_clause(clause, mapping)


def term_weight(term: Term) -> int:
    if isinstance(term, Variable):
        return 1
    return 1 + sum(term_weight(arg) for arg in term.args)


def literal_weight(literal: Literal) -> int:
    return term_weight(literal.atom)


def clause_weight(clause: Clause) -> int:
    """Count predicate, functor and variable occurrences; polarity is not a symbol"""
    return sum(literal_weight(literal) for literal in clause.literals)


def _term_symbols(term: Term, seen: Dict[str, None]):
    if isinstance(term, Variable):
        return
    seen.setdefault(term.functor, None)
    for arg in term.args:
        _term_symbols(arg, seen)


def clause_symbols(clause: Clause) -> List[str]:
    """Distinct predicate and function symbols of a clause, variables excluded"""
    seen: Dict[str, None] = {}
    for literal in clause.literals:
        _term_symbols(literal.atom, seen)
    return list(seen)


def signature_stats(clauses: Iterable[Clause]) -> SignatureStats:
    """
    Count, per clause, which symbols appear and which symbol pairs appear together

    Args:
        clauses: Non-empty collection of clauses

    Returns:
        SignatureStats where every count is a number of clauses
    """
    stats = SignatureStats()
    count = 0
    for clause in clauses:
        count += 1
        symbols = sorted(clause_symbols(clause))
        for symbol in symbols:
            stats.occurrence[symbol] = stats.occurrence.get(symbol, 0) + 1
        for pair in combinations(symbols, 2):
            key = frozenset(pair)
            stats.cooccurrence[key] = stats.cooccurrence.get(key, 0) + 1
    if count == 0:
        raise ValueError("signature statistics need at least one clause")
    return stats


def _skeleton(literal: Literal) -> str:
    mapping = {variable: Variable('_') for variable in iter_term_variables(literal.atom)}
    return render_literal(Literal(literal.positive, rename_term(literal.atom, mapping)))


def _numbered(literal: Literal, mapping: Dict[Variable, Variable]) -> Tuple[str, Dict[Variable, Variable]]:
    """Render a literal with variables numbered on from mapping; returns the extended mapping"""
    extended = dict(mapping)
    for variable in iter_term_variables(literal.atom):
        if variable not in extended:
            extended[variable] = Variable(f"X{len(extended) + 1}")
    return render_literal(Literal(literal.positive, rename_term(literal.atom, extended))), extended


def clause_key(clause: Clause) -> str:
    """
    Comparison key that ignores literal order and variable names

    Literals are placed in order of their variable-blind shape. Among literals
    of equal shape every placement is explored, pruned to those rendering
    smallest at each position, and the lexicographically smallest sequence of
    renumbered literals is the key.
    """
    remaining = sorted(clause.literals, key=_skeleton)
    # Each state: (rendered prefix, variable mapping, literals still to place)
    states = [((), {}, remaining)]
    for _ in range(len(remaining)):
        best = None
        candidates = []
        for prefix, mapping, rest in states:
            shape = _skeleton(rest[0])
            seen = set()
            for position, literal in enumerate(rest):
                if _skeleton(literal) != shape:
                    break
                if literal in seen:
                    continue
                seen.add(literal)
                text, extended = _numbered(literal, mapping)
                if best is None or text < best:
                    best, candidates = text, []
                if text == best:
                    candidates.append((prefix + (text,), extended, rest[:position] + rest[position + 1:]))
        states = candidates
    return '|'.join(states[0][0]) if states else ''


def is_ground(clause: Clause) -> bool:
    return not clause_variables(clause)


def contains_equality(clauses: Iterable[Clause]) -> bool:
    return any(literal.is_equality for clause in clauses for literal in clause.literals)


def _collect_functions(term: Term, functions: Dict[str, int]):
    if isinstance(term, Variable):
        return
    functions.setdefault(term.functor, term.arity)
    for arg in term.args:
        _collect_functions(arg, functions)


def signature_of(clauses: Iterable[Clause]) -> Tuple[Dict[str, int], Dict[str, int]]:
    """
    Function and predicate symbols with their arities, in first-occurrence order

    Returns:
        Tuple of (functions, predicates); equality is not listed as a predicate
    """
    functions: Dict[str, int] = {}
    predicates: Dict[str, int] = {}
    for clause in clauses:
        for literal in clause.literals:
            if literal.atom.functor != EQUALITY:
                predicates.setdefault(literal.atom.functor, literal.atom.arity)
            for arg in literal.atom.args:
                _collect_functions(arg, functions)
    return functions, predicates
