"""
Task generation - entailment, premise selection and proof reconstruction instances
with oracle-checked answers
"""

import random
from typing import Dict, List, Optional, Sequence

import structlog

from models.clause import Clause
from models.graph import DerivationGraph
from models.task import DifficultySpec, EntailmentTask, ReconstructionTask, SelectionTask, TaskKind
from services.derivation_graph import binary_proof_subgraph, premises_at_depth
from services.formula import clause_key
from services.oracle import EntailmentOracle
from utils.errors import OracleResourceOut, TaskGenerationError

logger = structlog.get_logger(__name__)

# Selection answers are re-verified clause by clause up to this size
MINIMALITY_CHECK_LIMIT = 6


def _dedupe(clauses: Sequence[Clause]) -> List[Clause]:
    unique: Dict[str, Clause] = {}
    for clause in clauses:
        unique.setdefault(clause_key(clause), clause)
    return list(unique.values())


def _require_definite(verdict, what: str):
    if not verdict.is_definite:
        raise OracleResourceOut(f"oracle gave no verdict while {what}", reason=verdict.reason)
    return verdict


def _check_kind(spec: DifficultySpec, kind: TaskKind):
    if spec.task_kind != kind:
        raise TaskGenerationError(f"expected a {kind.value} spec, got {spec.task_kind.value}",
                                  error_code='KIND_MISMATCH')


def perturb_premises(p_correct: Sequence[Clause], g: DerivationGraph, k: int, rng: random.Random,
                     exclude: Sequence[Clause] = ()) -> List[Clause]:
    """
    Apply k random edits to a premise set

    Each edit is drawn uniformly from the feasible ones among adding a graph
    clause, removing a premise (never the last one) and replacing a premise
    by a graph clause.

    Args:
        p_correct: Starting premises
        g: Graph supplying clauses to add
        k: Number of edits
        rng: Instance random generator
        exclude: Clauses that may never be added, such as the conjecture

    Returns:
        Edited, deduplicated premise list
    """
    if k < 0:
        raise TaskGenerationError(f"k must be non-negative, got {k}", error_code='PERTURBATION_INFEASIBLE')
    current = _dedupe(p_correct)
    banned = {clause_key(clause) for clause in exclude}
    graph_clauses = _dedupe([g.clause(name) for name in g.nodes])

    for _ in range(k):
        present = {clause_key(clause) for clause in current}
        candidates = [clause for clause in graph_clauses
                      if clause_key(clause) not in present and clause_key(clause) not in banned]
        feasible = []
        if candidates:
            feasible.append('add')
        if len(current) > 1:
            feasible.append('remove')
        if candidates and current:
            feasible.append('replace')
        if not feasible:
            raise TaskGenerationError("no feasible premise edit left", error_code='PERTURBATION_INFEASIBLE',
                                      premises=len(current))
        edit = rng.choice(feasible)
        if edit == 'add':
            current.append(rng.choice(candidates))
        elif edit == 'remove':
            current.pop(rng.randrange(len(current)))
        else:
            current[rng.randrange(len(current))] = rng.choice(candidates)
    return current


def gen_entailment(g: DerivationGraph, theorem: str, spec: DifficultySpec, rng: random.Random,
                   oracle: EntailmentOracle, *, task_id: str = '', seed: int = 0, domain_name: str = '',
                   target_label: Optional[bool] = None) -> EntailmentTask:
    """
    Build one entailment instance: the depth-d premise cut, k edits, and the
    oracle's verdict on the edited premises as label

    Raises:
        OracleResourceOut: any oracle query ended without a verdict
        TaskGenerationError: the cut does not entail the theorem, or the label
            differs from target_label
    """
    _check_kind(spec, TaskKind.ENTAILMENT)
    cut = premises_at_depth(g, theorem, spec.d)
    conjecture = g.clause(theorem)
    p_correct = [g.clause(name) for name in cut.premises]

    verdict = _require_definite(oracle.check(p_correct, conjecture), "checking the premise cut")
    if not verdict.entailed:
        logger.warning("premise cut does not entail its theorem", domain=g.domain, theorem=theorem, depth=spec.d)
        raise TaskGenerationError(f"depth-{spec.d} cut of {theorem} is not entailing",
                                  error_code='CUT_NOT_ENTAILED',
                                  theorem=theorem)

    premises = perturb_premises(p_correct, g, spec.k, rng, exclude=[conjecture])
    rng.shuffle(premises)
    label = _require_definite(oracle.check(premises, conjecture), "labelling").entailed
    if target_label is not None and label != target_label:
        raise TaskGenerationError(f"label {label} differs from target {target_label}", error_code='LABEL_MISMATCH')

    return EntailmentTask(
        task_id=task_id,
        domain=g.domain,
        domain_name=domain_name or g.domain,
        spec=spec,
        seed=seed,
        theorem_name=theorem,
        context=tuple(g.annotated(name) for name in cut.context_axioms),
        premises=tuple(premises),
        conjecture=conjecture,
        label=label,
    )


def minimize_premises(p_sufficient: Sequence[Clause], theorem: Clause, oracle: EntailmentOracle) -> List[Clause]:
    """
    Drop premises one at a time while the rest still entails the theorem

    Copies of the theorem are tried last, so a set containing the theorem
    shrinks to the theorem alone.
    """
    target = clause_key(theorem)
    premises = _dedupe(p_sufficient)
    premises.sort(key=lambda clause: clause_key(clause) == target)

    if not _require_definite(oracle.check(premises, theorem), "checking sufficiency").entailed:
        raise TaskGenerationError("premises do not entail the theorem", error_code='NOT_SUFFICIENT')

    kept = list(premises)
    for clause in premises:
        remainder = [other for other in kept if other != clause]
        if not remainder:
            continue
        verdict = _require_definite(oracle.check(remainder, theorem), "pruning premises")
        if verdict.entailed:
            kept = remainder
    return kept


def pick_distractors(g: DerivationGraph, k: int, exclude: Sequence[Clause], rng: random.Random,
                     theorem: Optional[str] = None) -> List[Clause]:
    """
    Sample k graph clauses that play no part in the theorem's derivation

    Ancestors of the theorem, the theorem and anything equal to an excluded
    clause up to variable renaming are never drawn.
    """
    if k == 0:
        return []
    banned = {clause_key(clause) for clause in exclude}
    skipped = set()
    if theorem is not None:
        skipped = g.ancestors(theorem) | {theorem}
        banned.add(clause_key(g.clause(theorem)))

    candidates: Dict[str, Clause] = {}
    for name in g.nodes:
        if name in skipped:
            continue
        key = clause_key(g.clause(name))
        if key not in banned:
            candidates.setdefault(key, g.clause(name))
    if len(candidates) < k:
        raise TaskGenerationError(f"need {k} distractors, only {len(candidates)} available",
                                  error_code='INSUFFICIENT_DISTRACTORS', available=len(candidates))
    return rng.sample(list(candidates.values()), k)


def gen_selection(g: DerivationGraph, theorem: str, spec: DifficultySpec, rng: random.Random,
                  oracle: EntailmentOracle, *, task_id: str = '', seed: int = 0, domain_name: str = '',
                  strict_distractors: bool = False) -> SelectionTask:
    """
    Build one premise selection instance

    The depth-d cut is pruned to a minimal entailing set, k distractors are
    mixed in and the pool is shuffled; the answer lists the 1-based pool
    positions of the minimal set.
    """
    _check_kind(spec, TaskKind.SELECTION)
    cut = premises_at_depth(g, theorem, spec.d)
    conjecture = g.clause(theorem)
    minimal = minimize_premises([g.clause(name) for name in cut.premises], conjecture, oracle)

    if len(minimal) <= MINIMALITY_CHECK_LIMIT and len(minimal) > 1:
        queries = [([other for other in minimal if other != clause], conjecture) for clause in minimal]
        for verdict in oracle.check_many(queries):
            if _require_definite(verdict, "verifying minimality").entailed:
                raise TaskGenerationError("pruned premise set is not minimal", error_code='NOT_MINIMAL',
                                          theorem=theorem)

    distractors = pick_distractors(g, spec.k, minimal, rng, theorem)
    if distractors:
        verdict = _require_definite(oracle.check(distractors, conjecture), "checking distractors")
        if verdict.entailed:
            raise TaskGenerationError("distractors alone entail the theorem", error_code='DISTRACTORS_ENTAIL',
                                      theorem=theorem)
    if strict_distractors and distractors and len(minimal) > 1:
        queries = [([other for other in minimal if other != dropped] + [distractor], conjecture)
                   for distractor in distractors for dropped in minimal]
        for verdict in oracle.check_many(queries):
            if _require_definite(verdict, "checking distractor substitution").entailed:
                raise TaskGenerationError("a distractor can stand in for a minimal premise",
                                          error_code='DISTRACTOR_SUBSTITUTES', theorem=theorem)

    pool = [(clause, True) for clause in minimal] + [(clause, False) for clause in distractors]
    rng.shuffle(pool)
    answer = tuple(index for index, (_, needed) in enumerate(pool, start=1) if needed)

    return SelectionTask(
        task_id=task_id,
        domain=g.domain,
        domain_name=domain_name or g.domain,
        spec=spec,
        seed=seed,
        theorem_name=theorem,
        context=tuple(g.annotated(name) for name in cut.context_axioms),
        theorem=conjecture,
        pool=tuple(clause for clause, _ in pool),
        answer=answer,
    )


def gen_reconstruction(g: DerivationGraph, theorem: str, spec: DifficultySpec, rng: random.Random, *,
                       task_id: str = '', seed: int = 0, domain_name: str = '',
                       calculus: str = 'resolution') -> ReconstructionTask:
    """
    Shuffle and number the clauses of the theorem's binary proof of depth d

    Raises:
        TaskGenerationError: no binary proof of that depth, or two proof
            clauses equal up to variable renaming
    """
    _check_kind(spec, TaskKind.RECONSTRUCTION)
    subgraph = binary_proof_subgraph(g, theorem, spec.d)
    if subgraph is None:
        raise TaskGenerationError(f"{theorem} has no binary proof of depth {spec.d}",
                                  error_code='NO_QUALIFYING_SUBGRAPH', theorem=theorem)
    keys = {clause_key(g.clause(name)) for name in subgraph.nodes}
    if len(keys) != len(subgraph.nodes):
        raise TaskGenerationError(f"proof of {theorem} repeats a clause", error_code='DUPLICATE_CLAUSES',
                                  theorem=theorem)

    order = list(subgraph.nodes)
    rng.shuffle(order)
    index = {name: position for position, name in enumerate(order, start=1)}
    edges = sorted((index[name], *sorted(index[parent] for parent in g.parents(name)))
                   for name in subgraph.derived)

    return ReconstructionTask(
        task_id=task_id,
        domain=g.domain,
        domain_name=domain_name or g.domain,
        spec=spec,
        seed=seed,
        theorem_name=theorem,
        clauses=tuple(g.clause(name) for name in order),
        edges=tuple(edges),
        theorem_index=index[theorem],
        calculus=calculus,
    )
