"""
Grader - Scores model answers against generated tasks
"""

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import structlog

from models.grading import GradeReport, ParsedAnswer, StepVerdict
from models.prover import VerdictStatus
from models.task import EntailmentTask, ReconstructionTask, SelectionTask, TaskKind
from services.answer_parser import parse_answer
from services.oracle import EntailmentOracle
from utils.errors import AnswerFormatError, GradingError

logger = structlog.get_logger(__name__)

Answer = Union[str, ParsedAnswer]


class Grader:
    """
    Grades the three task kinds

    Reconstruction answers go through a structural check and then an oracle
    check of every step. With strict set, a structure that leaves any listed
    clause unused scores zero.
    """

    def __init__(self, oracle: Optional[EntailmentOracle] = None, strict: bool = True, workers: int = 1):
        self.oracle = oracle
        self.strict = strict
        self.workers = max(1, workers)

    @staticmethod
    def _report(task, score: float, **fields) -> GradeReport:
        return GradeReport(task_id=task.task_id, task_type=task.kind.value, level=task.spec.level,
                           score=score, **fields)

    @staticmethod
    def _parse(task, kind: TaskKind, answer: Answer) -> ParsedAnswer:
        if task.kind != kind:
            raise GradingError(f"cannot grade a {task.kind.value} task as {kind.value}", error_code='KIND_MISMATCH',
                               task_id=task.task_id)
        if isinstance(answer, ParsedAnswer):
            if answer.kind != kind:
                raise GradingError(f"answer was parsed as {answer.kind.value}", error_code='KIND_MISMATCH',
                                   task_id=task.task_id)
            return answer
        return parse_answer(kind, answer)

    def grade_entailment(self, task: EntailmentTask, answer: Answer) -> GradeReport:
        try:
            parsed = self._parse(task, TaskKind.ENTAILMENT, answer)
        except AnswerFormatError:
            return self._report(task, 0.0, failure_reason='format')
        correct = parsed.value == task.label
        return self._report(task, 1.0 if correct else 0.0, failure_reason=None if correct else 'wrong_label')

    def grade_selection(self, task: SelectionTask, answer: Answer) -> GradeReport:
        """Exact set match against the stored minimal premise indices"""
        try:
            parsed = self._parse(task, TaskKind.SELECTION, answer)
        except AnswerFormatError:
            return self._report(task, 0.0, failure_reason='format')
        correct = set(parsed.value) == set(task.answer)
        return self._report(task, 1.0 if correct else 0.0, failure_reason=None if correct else 'wrong_selection')

    def structural_problem(self, task: ReconstructionTask, steps: Sequence[Tuple[int, int, int]]) -> Optional[str]:
        """Reason the steps do not form a valid proof structure, or None"""
        size = len(task.clauses)
        children = Counter(child for child, _, _ in steps)
        for child, first, second in steps:
            if not all(1 <= index <= size for index in (child, first, second)):
                return 'index_out_of_range'
            if children[child] > 1:
                return 'duplicate_child'
            if first == second or child in (first, second):
                return 'invalid_parents'
        structure = nx.DiGraph()
        structure.add_edges_from((parent, child) for child, first, second in steps for parent in (first, second))
        if not nx.is_directed_acyclic_graph(structure):
            return 'cycle'
        if self.strict and set(structure.nodes) != set(range(1, size + 1)):
            return 'unused_clauses'
        return None

    def grade_reconstruction(self, task: ReconstructionTask, answer: Answer,
                             oracle: Optional[EntailmentOracle] = None) -> GradeReport:
        """
        Score = oracle-sound steps / ground-truth steps, capped at 1

        Steps the oracle cannot decide count as unsound and flag the report.
        """
        oracle = oracle or self.oracle
        if oracle is None:
            raise GradingError("reconstruction grading needs an entailment oracle", error_code='NO_ORACLE')
        try:
            parsed = self._parse(task, TaskKind.RECONSTRUCTION, answer)
        except AnswerFormatError:
            return self._report(task, 0.0, structural_ok=False, failure_reason='format')

        steps = parsed.value
        problem = self.structural_problem(task, steps)
        if problem is not None:
            return self._report(task, 0.0, structural_ok=False, failure_reason=problem)

        clauses = task.clauses
        queries = [([clauses[first - 1], clauses[second - 1]], clauses[child - 1]) for child, first, second in steps]
        verdicts = oracle.check_many(queries)
        step_verdicts = tuple(StepVerdict(child, (first, second), verdict.status.value)
                              for (child, first, second), verdict in zip(steps, verdicts))
        sound = sum(1 for verdict in verdicts if verdict.status == VerdictStatus.ENTAILED)
        flagged = any(not verdict.is_definite for verdict in verdicts)
        score = min(1.0, sound / len(task.edges)) if task.edges else 0.0
        return self._report(task, score, step_verdicts=step_verdicts, flagged=flagged,
                            failure_reason=None if score == 1.0 else 'unsound_steps')

    def grade(self, task, answer: Answer) -> GradeReport:
        if isinstance(task, EntailmentTask):
            return self.grade_entailment(task, answer)
        if isinstance(task, SelectionTask):
            return self.grade_selection(task, answer)
        if isinstance(task, ReconstructionTask):
            return self.grade_reconstruction(task, answer)
        raise GradingError(f"unknown task type {type(task).__name__}", error_code='KIND_MISMATCH')

    def grade_many(self, pairs: Sequence[Tuple[object, Answer]]) -> List[GradeReport]:
        """Grade (task, answer) pairs; reports keep the input order"""
        if self.workers == 1:
            return [self.grade(task, answer) for task, answer in pairs]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(lambda pair: self.grade(*pair), pairs))

    @staticmethod
    def summarize(reports: Iterable[GradeReport]) -> Dict:
        """Mean score per task type and level"""
        totals: Dict[str, List[float]] = {}
        flagged = 0
        count = 0
        for report in reports:
            count += 1
            flagged += report.flagged
            totals.setdefault(f"{report.task_type}/L{report.level}", []).append(report.score)
        by_configuration = {
            key: {'count': len(scores), 'mean_score': sum(scores) / len(scores)}
            for key, scores in sorted(totals.items())
        }
        all_scores = [score for scores in totals.values() for score in scores]
        return {
            'total': count,
            'flagged': flagged,
            'mean_score': sum(all_scores) / len(all_scores) if all_scores else 0.0,
            'by_configuration': by_configuration,
        }


def grade_reconstruction(task: ReconstructionTask, answer: Answer, oracle: EntailmentOracle,
                         strict: bool = True) -> GradeReport:
    return Grader(oracle, strict=strict).grade_reconstruction(task, answer)
