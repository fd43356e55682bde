"""
ResolutionProver - Given-clause saturation by binary resolution and factoring
Provides the internal entailment oracle and the internal saturation engine
"""

import heapq
import time
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import structlog

from models.clause import EQUALITY, AnnotatedClause, Clause, ClauseRole, Compound, Literal, Variable
from models.prover import ProverLimits, SaturationOutput, SaturationRecord, Verdict, VerdictStatus
from services.formula import (
    clause_key,
    clause_variables,
    clause_weight,
    contains_equality,
    literal_weight,
    normalize_variables,
    rename_clause,
    signature_of,
)
from services.unification import match, rename_apart, substitute_literal, unify

logger = structlog.get_logger(__name__)


def is_tautology(clause: Clause) -> bool:
    """True when the clause holds a literal and its complement"""
    positives = {literal.atom for literal in clause.literals if literal.positive}
    return any(not literal.positive and literal.atom in positives for literal in clause.literals)


def _merge(literals: Iterable[Literal]) -> Tuple[Literal, ...]:
    return tuple(dict.fromkeys(literals))


def _resolvent(first: Clause, i: int, second: Clause, j: int, subst) -> Clause:
    literals = [substitute_literal(literal, subst) for k, literal in enumerate(first.literals) if k != i]
    literals += [substitute_literal(literal, subst) for k, literal in enumerate(second.literals) if k != j]
    return normalize_variables(Clause(_merge(literals)))


def _resolve_on(first: Clause, first_indices: Sequence[int], second: Clause,
                second_indices: Sequence[int]) -> List[Clause]:
    second = rename_apart(second, 'r')
    results: Dict[Clause, None] = {}
    for i in first_indices:
        left = first.literals[i]
        for j in second_indices:
            right = second.literals[j]
            if left.positive == right.positive:
                continue
            subst = unify(left.atom, right.atom)
            if subst is not None:
                results.setdefault(_resolvent(first, i, second, j, subst), None)
    return list(results)


def resolve(first: Clause, second: Clause) -> Set[Clause]:
    """
    All binary resolvents of two clauses

    Args:
        first: Clause
        second: Clause, renamed apart from `first` internally

    Returns:
        Set of normalized resolvents (empty when no literal pair unifies)
    """
    first = normalize_variables(first)
    second = normalize_variables(second)
    return set(_resolve_on(first, range(len(first)), second, range(len(second))))


def _factors(clause: Clause, positive_only: bool = False) -> List[Clause]:
    results: Dict[Clause, None] = {}
    literals = clause.literals
    for i in range(len(literals)):
        for j in range(i + 1, len(literals)):
            if literals[i].positive != literals[j].positive:
                continue
            if positive_only and not literals[i].positive:
                continue
            subst = unify(literals[i].atom, literals[j].atom)
            if subst is None:
                continue
            merged = [substitute_literal(literal, subst) for k, literal in enumerate(literals) if k != j]
            results.setdefault(normalize_variables(Clause(_merge(merged))), None)
    return list(results)


def factor(clause: Clause) -> Set[Clause]:
    """Factors from every unifiable same-polarity literal pair"""
    return set(_factors(normalize_variables(clause)))


def subsumes(general: Clause, specific: Clause) -> bool:
    """
    True when a substitution maps `general` onto a sub-multiset of `specific`
    """
    if len(general) > len(specific):
        return False
    available = {(literal.positive, literal.predicate) for literal in specific.literals}
    if any((literal.positive, literal.predicate) not in available for literal in general.literals):
        return False
    ordered = sorted(general.literals, key=literal_weight, reverse=True)

    def search(index: int, subst, used: frozenset) -> bool:
        if index == len(ordered):
            return True
        literal = ordered[index]
        for k, target in enumerate(specific.literals):
            if k in used or target.positive != literal.positive:
                continue
            extended = match(literal.atom, target.atom, subst)
            if extended is not None and search(index + 1, extended, used | {k}):
                return True
        return False

    return search(0, {}, frozenset())


def subsumed(clause: Clause, store: Iterable[Clause]) -> bool:
    return any(subsumes(candidate, clause) for candidate in store)


def selected_indices(clause: Clause) -> List[int]:
    """
    Literals a clause may resolve on

    A clause with negative literals resolves only on its heaviest negative
    literal (first one on ties); an all-positive clause resolves on every literal.
    """
    negatives = [index for index, literal in enumerate(clause.literals) if not literal.positive]
    if not negatives:
        return list(range(len(clause)))
    best = negatives[0]
    for index in negatives[1:]:
        if literal_weight(clause.literals[index]) > literal_weight(clause.literals[best]):
            best = index
    return [best]


def equality_axioms(clauses: Sequence[Clause]) -> List[Tuple[str, Clause]]:
    """
    Reflexivity, symmetry, transitivity and congruence clauses for the symbols of `clauses`
    """
    x1, x2, x3, y = Variable('X1'), Variable('X2'), Variable('X3'), Variable('Y')

    def eq(left, right, positive=True):
        return Literal(positive, Compound(EQUALITY, (left, right)))

    axioms = [
        ('equality_reflexivity', Clause((eq(x1, x1),))),
        ('equality_symmetry', Clause((eq(x2, x1), eq(x1, x2, False)))),
        ('equality_transitivity', Clause((eq(x1, x3), eq(x1, x2, False), eq(x2, x3, False)))),
    ]
    functions, predicates = signature_of(clauses)
    for symbol, arity in functions.items():
        arguments = tuple(Variable(f"X{index}") for index in range(1, arity + 1))
        for position in range(arity):
            replaced = arguments[:position] + (y,) + arguments[position + 1:]
            axioms.append((f"congruence_{symbol}_{position + 1}", normalize_variables(Clause((
                eq(Compound(symbol, arguments), Compound(symbol, replaced)),
                eq(arguments[position], y, False),
            )))))
    for symbol, arity in predicates.items():
        arguments = tuple(Variable(f"X{index}") for index in range(1, arity + 1))
        for position in range(arity):
            replaced = arguments[:position] + (y,) + arguments[position + 1:]
            axioms.append((f"congruence_{symbol}_{position + 1}", normalize_variables(Clause((
                Literal(False, Compound(symbol, arguments)),
                eq(arguments[position], y, False),
                Literal(True, Compound(symbol, replaced)),
            )))))
    return axioms


def negate_conjecture(conjecture: Clause, taken: Set[str]) -> List[Clause]:
    """
    Ground the conjecture's variables with fresh constants and negate each literal

    Returns:
        One unit clause per conjecture literal
    """
    mapping = {}
    counter = 0
    for variable in clause_variables(conjecture):
        while f"sk{counter}" in taken:
            counter += 1
        mapping[variable] = Compound(f"sk{counter}")
        counter += 1
    grounded = rename_clause(conjecture, mapping)
    return [Clause((literal.negate(),)) for literal in grounded.literals]


@dataclass
class _Active:
    name: str
    clause: Clause
    selected: List[int]


class ResolutionProver:
    """
    Given-clause loop over binary resolution with negative literal selection,
    positive factoring, tautology deletion and forward/backward subsumption.

    The lightest passive clause is processed first; ties go to the earlier
    clause, so runs are deterministic for fixed inputs and limits.
    """

    def __init__(self, limits: Optional[ProverLimits] = None, derived_prefix: str = 'c'):
        self.limits = limits or ProverLimits()
        self.derived_prefix = derived_prefix

    def saturate(self, axioms: Sequence[AnnotatedClause]) -> SaturationOutput:
        """
        Saturate an axiom set with no goal and return the full derivation log

        Args:
            axioms: Non-empty axiom list

        Returns:
            SaturationOutput with axiom records first, then derived records
        """
        if not axioms:
            raise ValueError("saturation needs at least one axiom")
        inputs = [SaturationRecord(axiom.name, ClauseRole.AXIOM, axiom.clause) for axiom in axioms]
        output = self._run(inputs)
        logger.info("internal saturation finished", axioms=len(axioms), derived=len(output.derived),
                    complete=output.complete)
        return output

    def prove(self, premises: Sequence[Clause], conjecture: Clause) -> Verdict:
        """
        Decide whether premises entail the conjecture by refutation

        Returns:
            Entailed with the refutation trace, NotEntailed when saturation
            finishes without the empty clause, ResourceOut otherwise
        """
        inputs = [SaturationRecord(f"premise_{index}", ClauseRole.AXIOM, clause)
                  for index, clause in enumerate(premises, start=1)]
        if contains_equality(list(premises) + [conjecture]):
            inputs += [SaturationRecord(name, ClauseRole.AXIOM, clause)
                       for name, clause in equality_axioms(list(premises) + [conjecture])]
        functions, predicates = signature_of(list(premises) + [conjecture])
        negated = negate_conjecture(conjecture, set(functions) | set(predicates))
        inputs += [SaturationRecord(f"negated_conjecture_{index}", ClauseRole.CONJECTURE, clause)
                   for index, clause in enumerate(negated, start=1)]

        output = self._run(inputs)
        if output.refutation is not None:
            return Verdict(VerdictStatus.ENTAILED, tuple(self.refutation_trace(output)))
        if output.complete:
            return Verdict(VerdictStatus.NOT_ENTAILED, reason='saturated')
        return Verdict(VerdictStatus.RESOURCE_OUT, reason=output.szs_status or 'limits')

    @staticmethod
    def refutation_trace(output: SaturationOutput) -> List[SaturationRecord]:
        """Records the empty clause depends on, in derivation order"""
        by_name = {record.name: record for record in output.records}
        needed: Set[str] = set()
        stack = [output.refutation]
        while stack:
            name = stack.pop()
            if name in needed:
                continue
            needed.add(name)
            stack.extend(by_name[name].parents)
        return [record for record in output.records if record.name in needed]

    def _run(self, inputs: List[SaturationRecord]) -> SaturationOutput:
        limits = self.limits
        deadline = time.monotonic() + limits.timeout
        records = list(inputs)
        taken = {record.name for record in inputs}
        seen: Set[str] = set()
        passive: List[Tuple[int, int, str, Clause]] = []
        sequence = 0

        for record in inputs:
            clause = normalize_variables(record.clause)
            if is_tautology(clause):
                logger.debug("dropping tautological input", name=record.name)
                continue
            key = clause_key(clause)
            if key in seen:
                continue
            seen.add(key)
            heapq.heappush(passive, (clause_weight(clause), sequence, record.name, clause))
            sequence += 1

        active: List[_Active] = []
        derived = 0
        counter = 0
        incomplete = False
        stop_reason = None
        refutation = None

        while passive and refutation is None and stop_reason is None:
            if time.monotonic() > deadline:
                stop_reason = 'timeout'
                break
            _, _, name, given = heapq.heappop(passive)
            if given.is_empty:
                refutation = name
                break
            if subsumed(given, (entry.clause for entry in active)):
                continue
            active = [entry for entry in active if not subsumes(given, entry.clause)]
            current = _Active(name, given, selected_indices(given))
            active.append(current)

            inferences: List[Tuple[Clause, Tuple[str, ...], str]] = []
            if not given.has_negative:
                inferences += [(clause, (name,), 'factoring') for clause in _factors(given, positive_only=True)]
            for other in active:
                for clause in _resolve_on(given, current.selected, other.clause, other.selected):
                    inferences.append((clause, (name, other.name), 'resolution'))

            for clause, parents, rule in inferences:
                if is_tautology(clause):
                    continue
                if clause_weight(clause) > limits.max_weight:
                    incomplete = True
                    continue
                key = clause_key(clause)
                if key in seen or subsumed(clause, (entry.clause for entry in active)):
                    continue
                seen.add(key)
                derived += 1
                counter += 1
                while f"{self.derived_prefix}{counter}" in taken:
                    counter += 1
                new_name = f"{self.derived_prefix}{counter}"
                taken.add(new_name)
                records.append(SaturationRecord(new_name, ClauseRole.DERIVED, clause, parents, rule))
                if clause.is_empty:
                    refutation = new_name
                    break
                heapq.heappush(passive, (clause_weight(clause), sequence, new_name, clause))
                sequence += 1
                if derived >= limits.max_clauses:
                    stop_reason = 'max_clauses'
                    break
                if time.monotonic() > deadline:
                    stop_reason = 'timeout'
                    break

        complete = refutation is None and stop_reason is None and not passive and not incomplete
        status = None
        if refutation is None and not complete:
            status = stop_reason or 'weight_limit'
        logger.debug("given-clause loop stopped", derived=derived, active=len(active), passive=len(passive),
                     refutation=refutation, reason=status)
        return SaturationOutput(records=records, complete=complete, refutation=refutation,
                                prover='internal', szs_status=status)


def saturate_internal(axioms: Sequence[AnnotatedClause], limits: Optional[ProverLimits] = None) -> SaturationOutput:
    return ResolutionProver(limits).saturate(axioms)


def prove_internal(premises: Sequence[Clause], conjecture: Clause, limits: Optional[ProverLimits] = None) -> Verdict:
    return ResolutionProver(limits).prove(premises, conjecture)
