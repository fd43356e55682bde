"""
TaskPipeline - Configuration to dataset: saturate, build graphs, rate, generate, emit
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import structlog

from config.pipeline_config import DomainConfig, PipelineConfig, level_matrix
from models.graph import DerivationGraph
from models.prover import ExternalProverConfig, ProverLimits
from models.rating import InterestScore
from models.task import DifficultySpec, TaskKind
from services.dataset_writer import configuration_key, emit_jsonl
from services.derivation_graph import all_node_depths, binary_proof_subgraph, build_graph
from services.external_prover import ExternalProver
from services.formula import clause_key
from services.interest_rater import InterestRater
from services.oracle import EntailmentOracle
from services.resolution_prover import saturate_internal
from services.task_forge import gen_entailment, gen_reconstruction, gen_selection
from services.tptp_parser import parse_tptp_file
from utils.errors import ConfigurationError, DerivationGraphError, ExternalProverError, OracleResourceOut, \
    TaskGenerationError
from utils.seeding import SeedGenerator

logger = structlog.get_logger(__name__)

_RETRYABLE = (TaskGenerationError, OracleResourceOut, DerivationGraphError)


def build_oracle(mode: str, limits: ProverLimits, vampire: Optional[ExternalProverConfig], workers: int = 1,
                 tptp_root: Optional[str] = None) -> EntailmentOracle:
    """
    Oracle for a prover mode

    auto falls back to the internal prover when the external one is missing;
    external raises instead.
    """
    external = None
    if mode in ('external', 'auto') and vampire is not None:
        candidate = ExternalProver(vampire, max_concurrent=workers, tptp_root=tptp_root)
        if candidate.is_available():
            external = candidate
        elif mode == 'external':
            candidate.ensure_available()
        else:
            logger.warning("external oracle not found, using the internal prover only",
                           executable=candidate.config.executable)
    return EntailmentOracle(mode if external is not None else 'internal', limits, external, workers=workers)


@dataclass
class DomainState:
    """Everything generation needs about one domain"""

    domain: DomainConfig
    graph: DerivationGraph
    scores: Dict[str, InterestScore]
    depths: Dict[str, int]
    calculus: str


class TaskPipeline:
    """Runs a validated PipelineConfig end to end"""

    def __init__(self, config: PipelineConfig, oracle: Optional[EntailmentOracle] = None):
        self.config = config
        self.rater = InterestRater(config.rater)
        self.oracle = oracle or self.build_oracle()

    def _external(self, name: str) -> ExternalProver:
        prover = self.config.prover
        settings = prover.eprover if name == 'eprover' else prover.vampire
        return ExternalProver(settings, max_concurrent=self.config.generation.workers, tptp_root=prover.tptp_root)

    def build_oracle(self) -> EntailmentOracle:
        prover = self.config.prover
        return build_oracle(prover.mode, prover.oracle, prover.vampire, self.config.generation.workers,
                            prover.tptp_root)

    def saturate(self, domain: DomainConfig):
        """
        Saturate a domain's axioms

        Returns:
            Tuple of (saturation output, calculus name)
        """
        if not domain.axiom_file.is_file():
            raise ConfigurationError(f"axiom file not found: {domain.axiom_file}", error_code='AXIOM_FILE_NOT_FOUND',
                                     domain=domain.code, path=str(domain.axiom_file))
        mode = self.config.prover.mode
        if mode in ('external', 'auto'):
            prover = self._external('eprover')
            if prover.is_available():
                return prover.run_saturation(domain.axiom_file), 'superposition'
            if mode == 'external':
                raise ExternalProverError(f"eprover executable not found: {prover.config.executable}",
                                          domain=domain.code)
            logger.warning("external saturator not found, saturating internally", domain=domain.code)
        axioms = parse_tptp_file(domain.axiom_file, domain.code, self.config.prover.tptp_root)
        return saturate_internal(axioms, self.config.prover.saturation), 'resolution'

    def prepare_domain(self, domain: DomainConfig) -> DomainState:
        output, calculus = self.saturate(domain)
        graph = build_graph(output, domain.code)
        scores = self.rater.score_graph(graph)
        logger.info("domain prepared", domain=domain.code, nodes=len(graph), edges=graph.edge_count,
                    complete=output.complete, calculus=calculus)
        return DomainState(domain, graph, scores, all_node_depths(graph), calculus)

    def candidates(self, state: DomainState, spec: DifficultySpec) -> List[str]:
        """Best-rated theorems that can carry a task of this spec"""
        graph = state.graph
        if spec.task_kind == TaskKind.RECONSTRUCTION:
            feasible = []
            for name in graph.derived_nodes:
                if state.depths[name] != spec.d:
                    continue
                subgraph = binary_proof_subgraph(graph, name, spec.d)
                if subgraph is None:
                    continue
                if len({clause_key(graph.clause(node)) for node in subgraph.nodes}) == len(subgraph.nodes):
                    feasible.append(name)
        else:
            feasible = [name for name in graph.derived_nodes if state.depths[name] >= spec.d]
        ranked = sorted(feasible, key=lambda name: (-state.scores[name].combined, name))
        return ranked[:self.config.rater.top_n]

    def _generate_once(self, state: DomainState, spec: DifficultySpec, theorem: str, index: int, attempt: int,
                       target_label: Optional[bool]):
        seed = SeedGenerator.derive_seed(self.config.seed, state.domain.code, spec.task_kind.value, spec.level,
                                         index, attempt)
        rng = SeedGenerator.rng(seed)
        header = {
            'task_id': SeedGenerator.task_id(state.domain.code, spec.task_kind.value, spec.level, index),
            'seed': seed,
            'domain_name': state.domain.name,
        }
        if spec.task_kind == TaskKind.ENTAILMENT:
            return gen_entailment(state.graph, theorem, spec, rng, self.oracle, target_label=target_label, **header)
        if spec.task_kind == TaskKind.SELECTION:
            return gen_selection(state.graph, theorem, spec, rng, self.oracle,
                                 strict_distractors=self.config.generation.strict_distractor_check, **header)
        return gen_reconstruction(state.graph, theorem, spec, rng, calculus=state.calculus, **header)

    def _instance(self, state: DomainState, spec: DifficultySpec, candidates: List[str], index: int,
                  first_attempt: int) -> Tuple[Optional[object], int]:
        """
        Try attempts first_attempt.. until one succeeds

        Returns:
            Tuple of (task or None, next attempt number)
        """
        budget = self.config.generation.retry_budget
        balance = self.config.generation.balance_labels and spec.task_kind == TaskKind.ENTAILMENT
        for attempt in range(first_attempt, budget):
            theorem = candidates[(index + attempt) % len(candidates)]
            # Label targets alternate by index for the first half of the budget, then any label is kept
            target = (index % 2 == 0) if balance and attempt < budget // 2 else None
            try:
                return self._generate_once(state, spec, theorem, index, attempt, target), attempt + 1
            except _RETRYABLE as exc:
                logger.debug("generation attempt rejected", domain=state.domain.code, kind=spec.task_kind.value,
                             level=spec.level, index=index, attempt=attempt, theorem=theorem,
                             reason=getattr(exc, 'error_code', type(exc).__name__))
        logger.warning("instance abandoned", domain=state.domain.code, kind=spec.task_kind.value,
                       level=spec.level, index=index, error_code='RETRY_BUDGET_EXHAUSTED', budget=budget)
        return None, budget

    @staticmethod
    def fingerprint(task) -> str:
        return SeedGenerator.fingerprint({'theorem': task.theorem_name, 'payload': task.payload()})

    def generate_configuration(self, state: DomainState, spec: DifficultySpec) -> Tuple[List, int]:
        """
        Generate the configured number of unique instances of one (kind, level)

        Instances are tried in parallel, then accepted in index order; an
        instance whose fingerprint repeats an earlier one retries with its
        next attempt.

        Returns:
            Tuple of (tasks in index order, shortfall)
        """
        count = self.config.counts.per_configuration
        candidates = self.candidates(state, spec)
        if not candidates:
            logger.warning("no candidate theorems", domain=state.domain.code, kind=spec.task_kind.value,
                           level=spec.level, d=spec.d)
            return [], count

        accepted: Dict[int, object] = {}
        seen = set()
        next_attempt = {index: 0 for index in range(count)}
        pending = list(range(count))
        shortfall = 0
        with ThreadPoolExecutor(max_workers=self.config.generation.workers) as pool:
            while pending:
                outcomes = list(pool.map(
                    lambda index: self._instance(state, spec, candidates, index, next_attempt[index]), pending))
                retry = []
                for index, (task, following) in zip(pending, outcomes):
                    next_attempt[index] = following
                    if task is None:
                        shortfall += 1
                        continue
                    fingerprint = self.fingerprint(task)
                    if fingerprint not in seen:
                        seen.add(fingerprint)
                        accepted[index] = task
                    elif following < self.config.generation.retry_budget:
                        retry.append(index)
                    else:
                        shortfall += 1
                pending = retry
        tasks = [accepted[index] for index in sorted(accepted)]
        logger.info("configuration generated", domain=state.domain.code, kind=spec.task_kind.value,
                    level=spec.level, generated=len(tasks), shortfall=shortfall)
        return tasks, shortfall

    def run(self, output_path):
        tasks = []
        shortfall: Dict[str, int] = {}
        for domain in self.config.domains:
            state = self.prepare_domain(domain)
            for kind in self.config.counts.task_kinds:
                specs = level_matrix(self.config, kind)
                for level in self.config.counts.levels:
                    generated, missing = self.generate_configuration(state, specs[level])
                    tasks.extend(generated)
                    if missing:
                        shortfall[configuration_key(domain.code, kind.value, level)] = missing

        extra = {'prover_mode': self.oracle.mode}
        manifest = emit_jsonl(tasks, output_path, seed=self.config.seed,
                              domains=[domain.code for domain in self.config.domains], shortfall=shortfall,
                              extra_versions=extra)
        logger.info("pipeline finished", total=manifest.total, expected=self.config.expected_total,
                    shortfall=sum(shortfall.values()), oracle=self.oracle.stats)
        return manifest


def run_pipeline(config: PipelineConfig, output_path):
    return TaskPipeline(config).run(output_path)
