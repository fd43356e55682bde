"""
Task models - difficulty settings and the three generated task families
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Tuple

from models.clause import AnnotatedClause, Clause
from services.formula import render_annotated, render_clause
from services.tptp_parser import parse_annotated_clause, parse_clause
from utils.validation import ConfigValidator


class TaskKind(str, Enum):
    ENTAILMENT = 'entailment'
    SELECTION = 'selection'
    RECONSTRUCTION = 'reconstruction'


@dataclass(frozen=True)
class DifficultySpec:
    """Proof depth d and perturbation or distractor count k of one difficulty level"""

    level: int
    d: int
    k: int
    task_kind: TaskKind

    def __post_init__(self):
        object.__setattr__(self, 'task_kind', TaskKind(self.task_kind))
        if not 1 <= self.level <= ConfigValidator.LEVEL_COUNT:
            raise ValueError(f"level must lie in 1..{ConfigValidator.LEVEL_COUNT}, got {self.level}")
        if self.d < 1:
            raise ValueError(f"depth must be at least 1, got {self.d}")
        if self.k < 0:
            raise ValueError(f"k must be non-negative, got {self.k}")
        if self.task_kind == TaskKind.RECONSTRUCTION and self.k != 0:
            raise ValueError(f"reconstruction has no perturbation count, got k={self.k}")

    def to_dict(self) -> Dict[str, Any]:
        return {'level': self.level, 'd': self.d, 'k': self.k, 'task_kind': self.task_kind.value}


@dataclass(frozen=True)
class _TaskHeader:
    task_id: str
    domain: str
    domain_name: str
    spec: DifficultySpec
    seed: int
    theorem_name: str

    kind = None

    def _record(self, prompt: str, answer: Any, payload: Dict[str, Any]) -> Dict[str, Any]:
        return {
            'id': self.task_id,
            'domain': self.domain,
            'domain_name': self.domain_name,
            'task_type': self.kind.value,
            'level': self.spec.level,
            'd': self.spec.d,
            'k': self.spec.k,
            'prompt': prompt,
            'answer': answer,
            'theorem_name': self.theorem_name,
            'seed': self.seed,
            'payload': payload,
        }

    @staticmethod
    def _header(record: Dict[str, Any], kind: TaskKind) -> Dict[str, Any]:
        return {
            'task_id': record['id'],
            'domain': record['domain'],
            'domain_name': record.get('domain_name', record['domain']),
            'spec': DifficultySpec(record['level'], record['d'], record['k'], kind),
            'seed': record['seed'],
            'theorem_name': record['theorem_name'],
        }


@dataclass(frozen=True)
class EntailmentTask(_TaskHeader):
    context: Tuple[AnnotatedClause, ...] = ()
    premises: Tuple[Clause, ...] = ()
    conjecture: Clause = field(default_factory=Clause)
    label: bool = True

    kind = TaskKind.ENTAILMENT

    @property
    def answer(self) -> bool:
        return self.label

    def payload(self) -> Dict[str, Any]:
        return {
            'context': [render_annotated(axiom) for axiom in self.context],
            'premises': [render_clause(premise) for premise in self.premises],
            'conjecture': render_clause(self.conjecture),
        }

    def to_record(self, prompt: str) -> Dict[str, Any]:
        return self._record(prompt, self.label, self.payload())

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> 'EntailmentTask':
        payload = record['payload']
        return cls(
            **cls._header(record, cls.kind),
            context=tuple(parse_annotated_clause(text, record['domain']) for text in payload['context']),
            premises=tuple(parse_clause(text) for text in payload['premises']),
            conjecture=parse_clause(payload['conjecture']),
            label=bool(record['answer']),
        )


@dataclass(frozen=True)
class SelectionTask(_TaskHeader):
    context: Tuple[AnnotatedClause, ...] = ()
    theorem: Clause = field(default_factory=Clause)
    pool: Tuple[Clause, ...] = ()
    answer: Tuple[int, ...] = ()

    kind = TaskKind.SELECTION

    @property
    def minimal_premises(self) -> Tuple[Clause, ...]:
        return tuple(self.pool[index - 1] for index in self.answer)

    def payload(self) -> Dict[str, Any]:
        return {
            'context': [render_annotated(axiom) for axiom in self.context],
            'theorem': render_clause(self.theorem),
            'pool': [render_clause(clause) for clause in self.pool],
        }

    def to_record(self, prompt: str) -> Dict[str, Any]:
        return self._record(prompt, list(self.answer), self.payload())

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> 'SelectionTask':
        payload = record['payload']
        return cls(
            **cls._header(record, cls.kind),
            context=tuple(parse_annotated_clause(text, record['domain']) for text in payload['context']),
            theorem=parse_clause(payload['theorem']),
            pool=tuple(parse_clause(text) for text in payload['pool']),
            answer=tuple(record['answer']),
        )


@dataclass(frozen=True)
class ReconstructionTask(_TaskHeader):
    """Shuffled proof clauses numbered from 1 with the (child, parent, parent) answer triples"""

    clauses: Tuple[Clause, ...] = ()
    edges: Tuple[Tuple[int, int, int], ...] = ()
    theorem_index: int = 0
    calculus: str = 'resolution'

    kind = TaskKind.RECONSTRUCTION

    @property
    def answer(self) -> Tuple[Tuple[int, int, int], ...]:
        return self.edges

    @property
    def theorem(self) -> Clause:
        return self.clauses[self.theorem_index - 1]

    def payload(self) -> Dict[str, Any]:
        return {
            'clauses': [render_clause(clause) for clause in self.clauses],
            'theorem_index': self.theorem_index,
            'calculus': self.calculus,
        }

    def to_record(self, prompt: str) -> Dict[str, Any]:
        return self._record(prompt, [list(edge) for edge in self.edges], self.payload())

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> 'ReconstructionTask':
        payload = record['payload']
        return cls(
            **cls._header(record, cls.kind),
            clauses=tuple(parse_clause(text) for text in payload['clauses']),
            edges=tuple(tuple(edge) for edge in record['answer']),
            theorem_index=payload['theorem_index'],
            calculus=payload.get('calculus', 'resolution'),
        )


TASK_TYPES = {
    TaskKind.ENTAILMENT: EntailmentTask,
    TaskKind.SELECTION: SelectionTask,
    TaskKind.RECONSTRUCTION: ReconstructionTask,
}


def task_from_record(record: Dict[str, Any]):
    """Rebuild a task from one dataset line"""
    return TASK_TYPES[TaskKind(record['task_type'])].from_record(record)
