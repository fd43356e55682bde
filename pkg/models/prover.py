"""
Prover models - limits, verdicts and saturation logs
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from models.clause import Clause, ClauseRole


@dataclass(frozen=True)
class ProverLimits:
    """Resource bounds for one proof attempt or saturation run"""

    timeout: float = 10.0
    max_clauses: int = 4000
    max_weight: int = 40

    def __post_init__(self):
        if self.timeout <= 0 or self.max_clauses <= 0 or self.max_weight <= 0:
            raise ValueError("prover limits must all be positive")

    def to_dict(self) -> Dict:
        return {'timeout': self.timeout, 'max_clauses': self.max_clauses, 'max_weight': self.max_weight}


class VerdictStatus(str, Enum):
    ENTAILED = 'Entailed'
    NOT_ENTAILED = 'NotEntailed'
    RESOURCE_OUT = 'ResourceOut'


@dataclass(frozen=True)
class SaturationRecord:
    """One clause of a derivation log with the names of the clauses it came from"""

    name: str
    role: ClauseRole
    clause: Clause
    parents: Tuple[str, ...] = ()
    rule: Optional[str] = None

    def __repr__(self) -> str:
        return f'<SaturationRecord {self.name} <- {",".join(self.parents) or "-"}>'


@dataclass
class SaturationOutput:
    records: List[SaturationRecord] = field(default_factory=list)
    complete: bool = False
    refutation: Optional[str] = None
    prover: str = 'internal'
    szs_status: Optional[str] = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def derived(self) -> List[SaturationRecord]:
        return [record for record in self.records if record.parents]


@dataclass(frozen=True)
class Verdict:
    status: VerdictStatus
    evidence: Tuple[SaturationRecord, ...] = ()
    reason: str = ''

    @property
    def is_definite(self) -> bool:
        return self.status != VerdictStatus.RESOURCE_OUT

    @property
    def entailed(self) -> bool:
        return self.status == VerdictStatus.ENTAILED

    def to_dict(self) -> Dict:
        return {'status': self.status.value, 'reason': self.reason, 'trace_length': len(self.evidence)}


@dataclass(frozen=True)
class ExternalProverConfig:
    """
    How to launch one external prover

    `arguments` is a template; `{problem}` and `{timeout}` are substituted
    per invocation.
    """

    name: str
    executable: str
    arguments: str
    dialect: str = 'tstp'
    limits: ProverLimits = field(default_factory=ProverLimits)
