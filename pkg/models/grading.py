"""
Grading models - parsed answers, grade reports and the dataset manifest
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

from models.task import TaskKind

AnswerValue = Union[bool, Tuple[int, ...], Tuple[Tuple[int, int, int], ...]]


@dataclass(frozen=True)
class ParsedAnswer:
    """A model answer reduced to the value its task kind expects"""

    kind: TaskKind
    value: AnswerValue


@dataclass(frozen=True)
class StepVerdict:
    child: int
    parents: Tuple[int, int]
    status: str

    def to_dict(self) -> Dict[str, Any]:
        return {'child': self.child, 'parents': list(self.parents), 'status': self.status}


@dataclass(frozen=True)
class GradeReport:
    task_id: str
    task_type: str
    level: int
    score: float
    structural_ok: bool = True
    step_verdicts: Tuple[StepVerdict, ...] = ()
    failure_reason: Optional[str] = None
    flagged: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.task_id,
            'task_type': self.task_type,
            'level': self.level,
            'score': self.score,
            'structural_ok': self.structural_ok,
            'step_verdicts': [step.to_dict() for step in self.step_verdicts],
            'failure_reason': self.failure_reason,
            'flagged': self.flagged,
        }


@dataclass
class DatasetManifest:
    """Summary written next to every emitted dataset"""

    seed: int
    domains: List[str] = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)
    shortfall: Dict[str, int] = field(default_factory=dict)
    tool_versions: Dict[str, str] = field(default_factory=dict)
    timestamp: str = ''
    total: int = 0
    content_hash: str = ''
    path: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'domains': list(self.domains),
            'counts': dict(self.counts),
            'shortfall': dict(self.shortfall),
            'tool_versions': dict(self.tool_versions),
            'timestamp': self.timestamp,
            'total': self.total,
            'content_hash': self.content_hash,
            'path': self.path,
        }
