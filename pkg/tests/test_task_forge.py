"""
Tests for entailment, premise selection and reconstruction task generation
"""

import random

import pytest

from config.pipeline_config import level_matrix, load_pipeline_config
from models.prover import Verdict, VerdictStatus
from models.task import DifficultySpec, TaskKind
from services.derivation_graph import all_node_depths
from services.formula import clause_key, render_clause
from services.oracle import EntailmentOracle
from services.pipeline import DomainState, TaskPipeline
from services.task_forge import (
    gen_entailment,
    gen_reconstruction,
    gen_selection,
    minimize_premises,
    perturb_premises,
    pick_distractors,
)
from services.tptp_parser import parse_clause
from utils.errors import OracleResourceOut, TaskGenerationError
from tests.conftest import ENTAILMENT_FIGURE, RECONSTRUCTION_FIGURE, ROOT, RuleOracle, graph_from

THEOREM_RULES = {
    '(holds(t))': [['(holds(l2))', '(holds(l3))'], ['(holds(ax2))', '(holds(ax3))']],
}


def holds(name):
    return parse_clause(f'(holds({name}))')


def names(clauses):
    return sorted(render_clause(clause)[7:-2] for clause in clauses)


@pytest.fixture
def rule_oracle():
    return RuleOracle(THEOREM_RULES)


@pytest.mark.unit
class TestPerturbation:
    """Random premise edits"""

    def test_same_seed_same_edits(self, entailment_figure):
        premises = [holds('l2'), holds('l3')]

        first = perturb_premises(premises, entailment_figure, 3, random.Random(11))
        second = perturb_premises(premises, entailment_figure, 3, random.Random(11))

        assert first == second

    def test_zero_edits_keep_premises(self, entailment_figure):
        premises = [holds('l2'), holds('l3'), holds('l2')]

        assert perturb_premises(premises, entailment_figure, 0, random.Random(1)) == [holds('l2'), holds('l3')]

    def test_excluded_clauses_are_never_added(self, entailment_figure):
        for seed in range(25):
            edited = perturb_premises([holds('l2')], entailment_figure, 4, random.Random(seed), exclude=[holds('t')])
            assert holds('t') not in edited
            assert edited

    def test_infeasible_edit(self):
        graph = graph_from({}, ['A'])

        with pytest.raises(TaskGenerationError) as excinfo:
            perturb_premises([holds('a')], graph, 1, random.Random(0))

        assert excinfo.value.error_code == 'PERTURBATION_INFEASIBLE'

    def test_negative_k(self, entailment_figure):
        with pytest.raises(TaskGenerationError):
            perturb_premises([holds('l2')], entailment_figure, -1, random.Random(0))


@pytest.mark.unit
class TestEntailmentGeneration:
    """Entailment instances labelled by the oracle"""

    def spec(self, d=1, k=0):
        return DifficultySpec(level=d, d=d, k=k, task_kind=TaskKind.ENTAILMENT)

    def test_unperturbed_cut_is_entailed(self, entailment_figure, rule_oracle):
        task = gen_entailment(entailment_figure, 'T', self.spec(), random.Random(3), rule_oracle,
                              task_id='TST-entailment-L1-0000', seed=3)

        assert task.label is True
        assert names(task.premises) == ['l2', 'l3']
        assert [axiom.name for axiom in task.context] == ['Ax2', 'Ax3']
        assert task.conjecture == holds('t')
        assert task.domain_name == 'TST'

    def test_label_matches_a_fresh_oracle(self, entailment_figure, rule_oracle):
        for seed in range(30):
            task = gen_entailment(entailment_figure, 'T', self.spec(k=3), random.Random(seed), rule_oracle)

            assert task.label == RuleOracle(THEOREM_RULES).entails(task.premises, task.conjecture)
            assert holds('t') not in task.premises

    def test_depth_two_cut(self, entailment_figure, rule_oracle):
        task = gen_entailment(entailment_figure, 'T', self.spec(d=2), random.Random(0), rule_oracle)

        assert names(task.premises) == ['ax2', 'ax3']

    def test_label_mismatch(self, entailment_figure, rule_oracle):
        with pytest.raises(TaskGenerationError) as excinfo:
            gen_entailment(entailment_figure, 'T', self.spec(), random.Random(0), rule_oracle, target_label=False)

        assert excinfo.value.error_code == 'LABEL_MISMATCH'

    def test_cut_that_does_not_entail(self, entailment_figure):
        with pytest.raises(TaskGenerationError) as excinfo:
            gen_entailment(entailment_figure, 'T', self.spec(), random.Random(0), RuleOracle({}))

        assert excinfo.value.error_code == 'CUT_NOT_ENTAILED'

    def test_resource_out_aborts_the_attempt(self, entailment_figure, mocker):
        oracle = mocker.Mock()
        oracle.check.return_value = Verdict(VerdictStatus.RESOURCE_OUT, reason='timeout')

        with pytest.raises(OracleResourceOut):
            gen_entailment(entailment_figure, 'T', self.spec(), random.Random(0), oracle)

    def test_kind_mismatch(self, entailment_figure, rule_oracle):
        spec = DifficultySpec(level=1, d=1, k=0, task_kind=TaskKind.SELECTION)

        with pytest.raises(TaskGenerationError) as excinfo:
            gen_entailment(entailment_figure, 'T', spec, random.Random(0), rule_oracle)

        assert excinfo.value.error_code == 'KIND_MISMATCH'


@pytest.mark.unit
class TestSelectionGeneration:
    """Minimal premise sets mixed with distractors"""

    def spec(self, k=1):
        return DifficultySpec(level=1, d=1, k=k, task_kind=TaskKind.SELECTION)

    def test_answer_points_at_the_minimal_set(self, entailment_figure, rule_oracle):
        task = gen_selection(entailment_figure, 'T', self.spec(), random.Random(5), rule_oracle)

        assert len(task.pool) == 3
        assert len(task.answer) == 2
        assert names(task.minimal_premises) == ['l2', 'l3']
        distractor = [clause for index, clause in enumerate(task.pool, start=1) if index not in task.answer]
        assert names(distractor)[0] in ('ax1', 'l1')

    def test_minimize_drops_redundant_premises(self, rule_oracle):
        kept = minimize_premises([holds('l2'), holds('l1'), holds('l3')], holds('t'), rule_oracle)

        assert names(kept) == ['l2', 'l3']

    def test_theorem_copy_wins(self, rule_oracle):
        kept = minimize_premises([holds('l2'), holds('t'), holds('l3')], holds('t'), rule_oracle)

        assert kept == [holds('t')]

    def test_minimize_needs_sufficient_premises(self, rule_oracle):
        with pytest.raises(TaskGenerationError) as excinfo:
            minimize_premises([holds('ax1')], holds('t'), rule_oracle)

        assert excinfo.value.error_code == 'NOT_SUFFICIENT'

    def test_minimize_class_theory_premises(self):
        theorem = parse_clause('(~inductive(X1)|~subclass(X1,complement(X2))|~subclass(universal_class,X2))')
        first = parse_clause('(subclass(complement(X1),X2)|~subclass(universal_class,X1))')
        third = parse_clause('(~inductive(X1)|~subclass(X2,null_class)|~subclass(X1,X2))')
        complement = parse_clause('(~member(X1,complement(X2))|~member(X1,X2))')

        kept = minimize_premises([first, third, complement], theorem, EntailmentOracle('internal'))

        assert kept == [first, third]

    def test_distractors_exclude_ancestors(self, entailment_figure):
        drawn = pick_distractors(entailment_figure, 2, [], random.Random(0), theorem='T')

        assert names(drawn) == ['ax1', 'l1']

    def test_insufficient_distractors(self, entailment_figure, rule_oracle):
        with pytest.raises(TaskGenerationError) as excinfo:
            gen_selection(entailment_figure, 'T', self.spec(k=3), random.Random(0), rule_oracle)

        assert excinfo.value.error_code == 'INSUFFICIENT_DISTRACTORS'

    def test_distractors_that_entail_are_rejected(self, entailment_figure):
        rules = {'(holds(t))': [['(holds(l2))', '(holds(l3))'], ['(holds(l1))'], ['(holds(ax1))']]}

        with pytest.raises(TaskGenerationError) as excinfo:
            gen_selection(entailment_figure, 'T', self.spec(), random.Random(0), RuleOracle(rules))

        assert excinfo.value.error_code == 'DISTRACTORS_ENTAIL'

    def test_strict_substitution_check(self, entailment_figure):
        rules = {'(holds(t))': [['(holds(l2))', '(holds(l3))'],
                                ['(holds(l1))', '(holds(l3))'], ['(holds(ax1))', '(holds(l3))'],
                                ['(holds(l2))', '(holds(l1))'], ['(holds(l2))', '(holds(ax1))']]}

        task = gen_selection(entailment_figure, 'T', self.spec(), random.Random(0), RuleOracle(rules))
        assert len(task.answer) == 2

        with pytest.raises(TaskGenerationError) as excinfo:
            gen_selection(entailment_figure, 'T', self.spec(), random.Random(0), RuleOracle(rules),
                          strict_distractors=True)
        assert excinfo.value.error_code == 'DISTRACTOR_SUBSTITUTES'


@pytest.mark.unit
class TestReconstructionGeneration:
    """Shuffled binary proofs"""

    def spec(self, d=2):
        return DifficultySpec(level=d, d=d, k=0, task_kind=TaskKind.RECONSTRUCTION)

    def test_edges_map_back_to_the_proof(self, reconstruction_figure):
        task = gen_reconstruction(reconstruction_figure, 'C7', self.spec(), random.Random(9))
        label = {position: render_clause(clause)[7:-2].upper()
                 for position, clause in enumerate(task.clauses, start=1)}

        assert len(task.clauses) == 7
        assert label[task.theorem_index] == 'C7'
        assert {label[child]: {label[first], label[second]} for child, first, second in task.edges} == {
            child: set(parents) for child, parents in RECONSTRUCTION_FIGURE.items()
        }
        assert list(task.edges) == sorted(task.edges)
        assert all(first < second for _, first, second in task.edges)

    def test_same_seed_same_numbering(self, reconstruction_figure):
        first = gen_reconstruction(reconstruction_figure, 'C7', self.spec(), random.Random(4))
        second = gen_reconstruction(reconstruction_figure, 'C7', self.spec(), random.Random(4))

        assert first == second

    def test_no_qualifying_subgraph(self, reconstruction_figure):
        with pytest.raises(TaskGenerationError) as excinfo:
            gen_reconstruction(reconstruction_figure, 'C7', self.spec(d=3), random.Random(0))

        assert excinfo.value.error_code == 'NO_QUALIFYING_SUBGRAPH'

    def test_repeated_clauses_rejected(self):
        clauses = {'C1': '(p(X1))', 'C3': '(p(Y))'}
        graph = graph_from(RECONSTRUCTION_FIGURE, ['C1', 'C2', 'C3', 'C4'], clauses)

        with pytest.raises(TaskGenerationError) as excinfo:
            gen_reconstruction(graph, 'C7', self.spec(), random.Random(0))

        assert excinfo.value.error_code == 'DUPLICATE_CLAUSES'


@pytest.mark.unit
class TestLabelBalance:
    """Entailment batches alternate target labels while the retry budget allows"""

    RULES = {
        '(holds(t))': [['(holds(l2))', '(holds(l3))'], ['(holds(ax2))', '(holds(ax3))']],
        '(holds(l1))': [['(holds(ax1))', '(holds(ax2))']],
        '(holds(l2))': [['(holds(ax2))', '(holds(ax3))']],
        '(holds(l3))': [['(holds(ax3))', '(holds(ax2))']],
    }

    @pytest.fixture
    def batch(self, tmp_path):
        path = tmp_path / 'balance.yaml'
        path.write_text(
            "seed: 5\n"
            "domains: [{code: SET, axiom_file: SET.p}]\n"
            "levels:\n"
            "  matrix:\n"
            "    entailment: {1: {k: 1}}\n"
            "counts: {per_configuration: 60, levels: [1]}\n"
            "generation: {retry_budget: 40, workers: 2}\n"
        )
        config = load_pipeline_config(path)
        pipeline = TaskPipeline(config, oracle=RuleOracle(self.RULES))
        graph = graph_from(ENTAILMENT_FIGURE, [f'Ax{index}' for index in range(1, 44)], domain='SET')
        state = DomainState(config.domain('SET'), graph, pipeline.rater.score_graph(graph), all_node_depths(graph),
                            'resolution')
        return pipeline.generate_configuration(state, level_matrix(config, TaskKind.ENTAILMENT)[1])

    def test_true_share_is_balanced(self, batch):
        tasks, shortfall = batch
        share = sum(task.label for task in tasks) / len(tasks)

        assert len(tasks) >= 50
        assert len(tasks) + shortfall == 60
        assert 0.4 <= share <= 0.6

    def test_labels_follow_instance_parity(self, batch):
        tasks, _ = batch

        assert all(task.label == (int(task.task_id[-4:]) % 2 == 0) for task in tasks)


@pytest.mark.slow
@pytest.mark.integration
class TestGenerationOnDomainAxioms:
    """Generation against the internal prover on the set theory axioms"""

    @pytest.fixture(scope='class')
    def prepared(self):
        config = load_pipeline_config(ROOT / 'configs' / 'smoke.yaml')
        pipeline = TaskPipeline(config)
        return pipeline, pipeline.prepare_domain(config.domain('SET'))

    def test_labels_agree_with_a_fresh_oracle(self, prepared):
        pipeline, state = prepared
        spec = level_matrix(pipeline.config, TaskKind.ENTAILMENT)[1]
        candidates = pipeline.candidates(state, spec)
        fresh = EntailmentOracle('internal', pipeline.config.prover.oracle)
        generated = 0

        for index in range(50):
            theorem = candidates[index % len(candidates)]
            try:
                task = gen_entailment(state.graph, theorem, spec, random.Random(index), pipeline.oracle)
            except (TaskGenerationError, OracleResourceOut):
                continue
            generated += 1
            assert fresh.check(task.premises, task.conjecture).entailed == task.label

        assert generated > 0

    def test_selection_answers_are_minimal(self, prepared):
        pipeline, state = prepared
        spec = level_matrix(pipeline.config, TaskKind.SELECTION)[1]
        candidates = pipeline.candidates(state, spec)
        fresh = EntailmentOracle('internal', pipeline.config.prover.oracle)
        generated = 0

        for index in range(30):
            theorem = candidates[index % len(candidates)]
            try:
                task = gen_selection(state.graph, theorem, spec, random.Random(index), pipeline.oracle)
            except (TaskGenerationError, OracleResourceOut):
                continue
            generated += 1
            minimal = list(task.minimal_premises)
            assert fresh.entails(minimal, task.theorem)
            if len(minimal) > 1:
                for clause in minimal:
                    assert not fresh.entails([other for other in minimal if other != clause], task.theorem)
            keys = {clause_key(clause) for clause in minimal}
            assert len(keys) == len(minimal)

        assert generated > 0
