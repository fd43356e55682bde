"""
EntailmentOracle - Routes entailment queries to the internal engine or an external prover
"""

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from models.clause import Clause
from models.prover import ProverLimits, Verdict, VerdictStatus
from services.external_prover import ExternalProver
from services.formula import clause_key, contains_equality
from services.resolution_prover import ResolutionProver
from utils.errors import ConfigurationError

logger = structlog.get_logger(__name__)

Query = Tuple[Sequence[Clause], Clause]


class EntailmentOracle:
    """
    Answers premises ⊨ conjecture with a definite verdict or ResourceOut

    Modes:
        internal: always the resolution engine
        external: always the configured external prover
        auto: equality-bearing queries go external when a prover is configured
    """

    MODES = ('internal', 'external', 'auto')

    def __init__(self, mode: str = 'internal', limits: Optional[ProverLimits] = None,
                 external: Optional[ExternalProver] = None, workers: int = 1):
        if mode not in self.MODES:
            raise ConfigurationError(f"unknown prover mode: {mode}", mode=mode)
        if mode == 'external' and external is None:
            raise ConfigurationError("external prover mode needs an external prover", mode=mode)
        self.mode = mode
        self.limits = limits or ProverLimits()
        self.external = external
        self.workers = max(1, workers)
        self._cache: Dict[Tuple[Tuple[str, ...], str], Verdict] = {}
        self._lock = threading.Lock()
        self._counts = {'queries': 0, 'cache_hits': 0, 'internal': 0, 'external': 0,
                        VerdictStatus.ENTAILED.value: 0, VerdictStatus.NOT_ENTAILED.value: 0,
                        VerdictStatus.RESOURCE_OUT.value: 0}

    def _route(self, premises: Sequence[Clause], conjecture: Clause) -> str:
        if self.mode != 'auto':
            return self.mode
        if self.external is not None and contains_equality(list(premises) + [conjecture]):
            return 'external'
        return 'internal'

    def check(self, premises: Sequence[Clause], conjecture: Clause) -> Verdict:
        """
        Decide one entailment query; identical queries up to variable renaming
        and premise order are answered from the cache
        """
        key = (tuple(sorted(clause_key(premise) for premise in premises)), clause_key(conjecture))
        with self._lock:
            self._counts['queries'] += 1
            cached = self._cache.get(key)
            if cached is not None:
                self._counts['cache_hits'] += 1
                return cached

        route = self._route(premises, conjecture)
        if route == 'external':
            verdict = self.external.check_entailment(premises, conjecture)
        else:
            verdict = ResolutionProver(self.limits).prove(premises, conjecture)

        with self._lock:
            self._counts[route] += 1
            self._counts[verdict.status.value] += 1
            self._cache.setdefault(key, verdict)
        if not verdict.is_definite:
            logger.debug("oracle query ended without verdict", route=route, premises=len(premises),
                         reason=verdict.reason)
        return verdict

    def entails(self, premises: Sequence[Clause], conjecture: Clause) -> bool:
        return self.check(premises, conjecture).entailed

    def check_many(self, queries: Sequence[Query]) -> List[Verdict]:
        """Answer several queries concurrently; results keep the query order"""
        if self.workers == 1 or len(queries) < 2:
            return [self.check(premises, conjecture) for premises, conjecture in queries]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(lambda query: self.check(*query), queries))

    @property
    def stats(self) -> Dict[str, int]:
        with self._lock:
            return dict(self._counts)
