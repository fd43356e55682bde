"""
SzsStatus - Mapping between SZS status lines and entailment verdicts
"""

import re
from typing import Dict, Optional

from models.prover import VerdictStatus

_STATUS_LINE = re.compile(r'^\s*[%#]?\s*SZS\s+status\s+([A-Za-z]+)', re.MULTILINE)


class SzsStatus:
    """Utility class for reading SZS statuses from prover output"""

    ENTAILED_STATUSES = ['Theorem', 'Unsatisfiable', 'ContradictoryAxioms']

    NOT_ENTAILED_STATUSES = ['CounterSatisfiable', 'Satisfiable']

    STATUS_DESCRIPTIONS = {
        'Theorem': 'The conjecture follows from the axioms',
        'Unsatisfiable': 'The clause set has no model',
        'ContradictoryAxioms': 'The axioms alone are unsatisfiable',
        'CounterSatisfiable': 'Some model of the axioms falsifies the conjecture',
        'Satisfiable': 'The clause set has a model',
        'Timeout': 'The prover ran out of time',
        'ResourceOut': 'The prover ran out of resources',
        'GaveUp': 'The prover stopped without a result',
        'Unknown': 'No result was reported',
    }

    @staticmethod
    def parse_status(output: str) -> Optional[str]:
        """
        Find the last SZS status reported in prover output

        Args:
            output: Raw prover stdout

        Returns:
            Status word, or None when no status line is present
        """
        matches = _STATUS_LINE.findall(output or '')
        return matches[-1] if matches else None

    @staticmethod
    def to_verdict_status(status: Optional[str]) -> VerdictStatus:
        if status in SzsStatus.ENTAILED_STATUSES:
            return VerdictStatus.ENTAILED
        if status in SzsStatus.NOT_ENTAILED_STATUSES:
            return VerdictStatus.NOT_ENTAILED
        return VerdictStatus.RESOURCE_OUT

    @staticmethod
    def describe(status: Optional[str]) -> str:
        return SzsStatus.STATUS_DESCRIPTIONS.get(status or 'Unknown', f'Unrecognized status: {status}')

    @staticmethod
    def get_status_info(status: Optional[str]) -> Dict:
        verdict = SzsStatus.to_verdict_status(status)
        return {
            'status': status,
            'verdict': verdict.value,
            'definite': verdict != VerdictStatus.RESOURCE_OUT,
            'description': SzsStatus.describe(status),
        }
