"""
Unit tests for the internal resolution engine
"""

from itertools import combinations

import pytest

from models.clause import AnnotatedClause, ClauseRole
from models.prover import ProverLimits, VerdictStatus
from services.derivation_graph import build_graph
from services.formula import clause_key, is_ground, render_clause
from services.resolution_prover import (
    ResolutionProver,
    equality_axioms,
    factor,
    is_tautology,
    negate_conjecture,
    prove_internal,
    resolve,
    saturate_internal,
    selected_indices,
    subsumes,
)
from services.tptp_parser import parse_clause, parse_tptp_file
from services.unification import match


def clauses(*texts):
    return [parse_clause(text) for text in texts]


@pytest.mark.unit
class TestInferenceRules:
    """Resolution, factoring, subsumption and selection on single clauses"""

    def test_tautology(self):
        assert is_tautology(parse_clause('(p(X1)|q|~p(X1))'))
        assert not is_tautology(parse_clause('(p(X1)|~p(a))'))

    def test_resolve_produces_normalized_resolvent(self):
        resolvents = resolve(parse_clause('(p(a))'), parse_clause('(q(X1)|~p(X1))'))

        assert {render_clause(clause) for clause in resolvents} == {'(q(a))'}

    def test_resolve_without_complementary_pair(self):
        assert resolve(parse_clause('(p(a))'), parse_clause('(q(X1))')) == set()

    def test_factor_merges_unifiable_literals(self):
        factors = factor(parse_clause('(p(X1)|p(a)|q(X1))'))

        assert {render_clause(clause) for clause in factors} == {'(p(a)|q(a))'}

    def test_subsumes(self):
        assert subsumes(parse_clause('(p(X1))'), parse_clause('(p(a)|q(b))'))
        assert subsumes(parse_clause('(p(X1)|q(X1))'), parse_clause('(q(a)|p(a)|r)'))
        assert not subsumes(parse_clause('(p(X1)|q(X1))'), parse_clause('(p(a)|q(b))'))
        assert not subsumes(parse_clause('(p(a))'), parse_clause('(p(X1))'))

    def test_selection_prefers_heaviest_negative_literal(self):
        clause = parse_clause('(r(X1)|~p(X1)|~q(f(X1),X2))')

        assert selected_indices(clause) == [2]
        assert selected_indices(parse_clause('(p(a)|q(b))')) == [0, 1]

    def test_negated_conjecture_uses_fresh_constants(self):
        negated = negate_conjecture(parse_clause('(p(X1,X2)|~q(X2))'), {'sk0'})

        assert [render_clause(clause) for clause in negated] == ['(~p(sk1,sk2))', '(q(sk2))']

    def test_equality_axioms_cover_symbols(self):
        names = [name for name, _ in equality_axioms(clauses('(p(f(X1))|X1=a)'))]

        assert names[:3] == ['equality_reflexivity', 'equality_symmetry', 'equality_transitivity']
        assert 'congruence_f_1' in names
        assert 'congruence_p_1' in names


@pytest.mark.unit
class TestProving:
    """Refutation-based entailment checks"""

    def test_set_theory_entailment(self):
        premises = clauses(
            '(disjoint(X1,complement(X2))|~member(f23(X1,complement(X2)),X2))',
            '(subset(image(X1,domain_of(X2)),X3)|~disjoint(X2,universal_set))',
            '(associative(X1,X2)|~disjoint(X1,X3)|~member(f35(X1,X2),X3))',
            '(disjoint(X1,X2)|member(f23(X1,X2),X3)|~subset(X1,X3))',
        )

        verdict = prove_internal(premises, parse_clause('(disjoint(X1,complement(X2))|~subset(X1,X2))'))

        assert verdict.status == VerdictStatus.ENTAILED
        assert verdict.evidence[-1].clause.is_empty

    def test_class_theory_selection_pair(self):
        theorem = parse_clause('(~inductive(X1)|~subclass(X1,complement(X2))|~subclass(universal_class,X2))')
        first = parse_clause('(subclass(complement(X1),X2)|~subclass(universal_class,X1))')
        third = parse_clause('(~inductive(X1)|~subclass(X2,null_class)|~subclass(X1,X2))')

        assert prove_internal([first, third], theorem).entailed
        assert prove_internal([first], theorem).status == VerdictStatus.NOT_ENTAILED
        assert prove_internal([third], theorem).status == VerdictStatus.NOT_ENTAILED

    def test_not_entailed_after_saturation(self):
        verdict = prove_internal(clauses('(p(a))', '(q(X1)|~p(X1))'), parse_clause('(r(a))'))

        assert verdict.status == VerdictStatus.NOT_ENTAILED
        assert verdict.reason == 'saturated'

    def test_weight_limit_gives_resource_out(self):
        limits = ProverLimits(timeout=10, max_clauses=1000, max_weight=5)

        verdict = prove_internal(clauses('(p(a))', '(p(f(X1))|~p(X1))'), parse_clause('(q(a))'), limits)

        assert verdict.status == VerdictStatus.RESOURCE_OUT
        assert not verdict.is_definite

    def test_clause_limit_gives_resource_out(self):
        limits = ProverLimits(timeout=10, max_clauses=5, max_weight=100)

        verdict = prove_internal(clauses('(p(a))', '(p(f(X1))|~p(X1))'), parse_clause('(q(a))'), limits)

        assert verdict.status == VerdictStatus.RESOURCE_OUT
        assert verdict.reason == 'max_clauses'

    def test_equality_reasoning(self):
        verdict = prove_internal(clauses('(a=b)', '(p(a))'), parse_clause('(p(b))'))

        assert verdict.entailed

    def test_premise_equal_to_conjecture(self):
        conjecture = parse_clause('(p(X1)|~q(X1))')

        assert prove_internal([parse_clause('(~q(Y)|p(Y))')], conjecture).entailed

    def test_runs_are_deterministic(self):
        premises = clauses('(p(a))', '(q(X1)|~p(X1))', '(r(X1)|~q(X1))')
        prover = ResolutionProver(ProverLimits())

        first = prover.prove(premises, parse_clause('(r(a))'))
        second = prover.prove(premises, parse_clause('(r(a))'))

        assert [record.name for record in first.evidence] == [record.name for record in second.evidence]


REFUTATION_CASES = [
    pytest.param(
        ['(disjoint(X1,complement(X2))|~member(f23(X1,complement(X2)),X2))',
         '(subset(image(X1,domain_of(X2)),X3)|~disjoint(X2,universal_set))',
         '(associative(X1,X2)|~disjoint(X1,X3)|~member(f35(X1,X2),X3))',
         '(disjoint(X1,X2)|member(f23(X1,X2),X3)|~subset(X1,X3))'],
        '(disjoint(X1,complement(X2))|~subset(X1,X2))', id='set-theory'),
    pytest.param(
        ['(subclass(complement(X1),X2)|~subclass(universal_class,X1))',
         '(~inductive(X1)|~subclass(X2,null_class)|~subclass(X1,X2))'],
        '(~inductive(X1)|~subclass(X1,complement(X2))|~subclass(universal_class,X2))', id='class-theory'),
    pytest.param(['(p(a))', '(q(X1)|~p(X1))', '(r(X1)|~q(X1))'], '(r(a))', id='chain'),
    pytest.param(['(p(X1)|p(X2))', '(~p(X1)|~p(X2))'], '(q(a))', id='factoring'),
    pytest.param(['(a=b)', '(p(a))'], '(p(b))', id='equality'),
]

UNRELATED_PREMISES = ['(u(c))', '(v(X1)|~u(X1))', '(w(X1,X2)|~v(X1)|~u(X2))']

NOT_ENTAILED_PREMISES = ['(p(a))', '(q(X1)|~p(X1))', '(s(X1,X2)|~q(X1)|~p(X2))', '(t(b))']


def assert_refutation_replays(evidence, premises, conjecture):
    """Every record of a refutation is an input or follows from its parents by one rule"""
    by_name = {record.name: record for record in evidence}
    inputs = {clause_key(clause) for clause in premises}
    inputs |= {clause_key(clause) for _, clause in equality_axioms(list(premises) + [conjecture])}

    for record in evidence:
        parents = [by_name[name].clause for name in record.parents]
        if not parents and record.role == ClauseRole.CONJECTURE:
            assert len(record.clause) == 1 and is_ground(record.clause), record
            literal = record.clause.literals[0].negate()
            assert any(candidate.positive == literal.positive and match(candidate.atom, literal.atom) is not None
                       for candidate in conjecture.literals), record
        elif not parents:
            assert clause_key(record.clause) in inputs, record
        elif record.rule == 'factoring':
            assert clause_key(record.clause) in {clause_key(clause) for clause in factor(parents[0])}, record
        else:
            assert record.rule == 'resolution' and len(parents) == 2, record
            assert clause_key(record.clause) in {clause_key(clause) for clause in resolve(*parents)}, record


@pytest.mark.unit
class TestSoundness:
    """Refutations check out step by step, and entailment is monotone"""

    @pytest.mark.parametrize('premise_texts, conjecture_text', REFUTATION_CASES)
    def test_refutation_steps_follow_from_their_parents(self, premise_texts, conjecture_text):
        premises = clauses(*premise_texts)
        conjecture = parse_clause(conjecture_text)

        verdict = prove_internal(premises, conjecture)

        assert verdict.entailed
        assert verdict.evidence[-1].clause.is_empty
        assert_refutation_replays(verdict.evidence, premises, conjecture)

    @pytest.mark.parametrize('premise_texts, conjecture_text', REFUTATION_CASES)
    def test_extra_premises_keep_an_entailment(self, premise_texts, conjecture_text):
        premises = clauses(*UNRELATED_PREMISES) + clauses(*premise_texts)
        conjecture = parse_clause(conjecture_text)

        verdict = prove_internal(premises, conjecture)

        assert verdict.entailed
        assert_refutation_replays(verdict.evidence, premises, conjecture)

    @pytest.mark.parametrize('conjecture_text', ['(r(a))', '(s(a,b))', '(q(b))', '(~t(b))'])
    def test_premise_subsets_stay_not_entailed(self, conjecture_text):
        conjecture = parse_clause(conjecture_text)

        assert prove_internal(clauses(*NOT_ENTAILED_PREMISES), conjecture).status == VerdictStatus.NOT_ENTAILED
        for size in range(1, len(NOT_ENTAILED_PREMISES)):
            for subset in combinations(NOT_ENTAILED_PREMISES, size):
                verdict = prove_internal(clauses(*subset), conjecture)
                assert verdict.status == VerdictStatus.NOT_ENTAILED, subset

    def test_entailed_consequence_survives_every_superset(self):
        conjecture = parse_clause('(s(a,a))')
        base = clauses(*NOT_ENTAILED_PREMISES)

        assert prove_internal(base, conjecture).entailed
        for extra in UNRELATED_PREMISES:
            assert prove_internal(base + [parse_clause(extra)], conjecture).entailed


@pytest.mark.unit
class TestSaturation:
    """Goal-free saturation logs"""

    @pytest.fixture
    def chain_axioms(self):
        return [
            AnnotatedClause('fact', ClauseRole.AXIOM, parse_clause('(p(a))')),
            AnnotatedClause('step1', ClauseRole.AXIOM, parse_clause('(q(X1)|~p(X1))')),
            AnnotatedClause('step2', ClauseRole.AXIOM, parse_clause('(r(X1)|~q(X1))')),
            AnnotatedClause('join', ClauseRole.AXIOM, parse_clause('(s(X1)|~q(X1)|~r(X1))')),
        ]

    def test_saturation_log_forms_a_graph(self, chain_axioms):
        output = saturate_internal(chain_axioms)
        graph = build_graph(output, 'TST')

        assert output.complete
        assert output.refutation is None
        assert graph.roots == ['fact', 'step1', 'step2', 'join']
        derived = {clause_key(graph.clause(name)): name for name in graph.derived_nodes}
        assert clause_key(parse_clause('(s(a))')) in derived
        assert all(len(graph.parents(name)) == 2 for name in graph.derived_nodes)

    def test_derived_names_avoid_axiom_names(self, chain_axioms):
        axioms = chain_axioms + [AnnotatedClause('c1', ClauseRole.AXIOM, parse_clause('(t(b))'))]

        output = saturate_internal(axioms)
        names = [record.name for record in output.records]

        assert len(names) == len(set(names))

    def test_saturation_needs_axioms(self):
        with pytest.raises(ValueError):
            saturate_internal([])

    @pytest.mark.slow
    def test_domain_files_saturate_completely(self, axiom_dir):
        limits = ProverLimits(timeout=600, max_clauses=1500, max_weight=30)
        for path in sorted(axiom_dir.glob('*.p')):
            output = saturate_internal(parse_tptp_file(path, path.stem), limits)
            graph = build_graph(output, path.stem)

            assert output.complete, path.name
            assert output.refutation is None, path.name
            assert len(graph.derived_nodes) >= 10, path.name
