"""
Derivation graph construction and the structural queries task generation relies on
"""

from typing import Dict, Iterable, List, Optional, Tuple, Union

import networkx as nx
import structlog

from models.clause import AnnotatedClause, ClauseRole
from models.graph import DepthCut, DerivationGraph, ProofSubgraph
from models.prover import SaturationOutput, SaturationRecord
from utils.errors import DerivationGraphError

logger = structlog.get_logger(__name__)


def build_graph(records: Union[SaturationOutput, Iterable[SaturationRecord]], domain: str = '') -> DerivationGraph:
    """
    Build and validate a derivation DAG from a saturation log

    Args:
        records: Saturation output or its records
        domain: Domain code stored on every node

    Returns:
        DerivationGraph

    Raises:
        DerivationGraphError: duplicate names, unknown parents, parented axioms,
            parentless derived clauses or cycles
    """
    if isinstance(records, SaturationOutput):
        records = records.records
    graph = DerivationGraph(domain)
    records = list(records)

    for record in records:
        if record.name in graph:
            raise DerivationGraphError(f"duplicate node name: {record.name}", error_code='DUPLICATE_NODE',
                                       node=record.name)
        parents = tuple(dict.fromkeys(record.parents))
        if record.role == ClauseRole.AXIOM and parents:
            raise DerivationGraphError(f"axiom {record.name} lists parents", error_code='AXIOM_HAS_PARENTS',
                                       node=record.name)
        if record.role == ClauseRole.DERIVED and not parents:
            raise DerivationGraphError(f"derived clause {record.name} has no parents",
                                       error_code='MISSING_PARENTS', node=record.name)
        graph.add_clause(AnnotatedClause(record.name, record.role, record.clause, domain), parents, record.rule)

    for record in records:
        for parent in graph.parents(record.name):
            if parent not in graph:
                raise DerivationGraphError(f"{record.name} names unknown parent {parent}",
                                           error_code='UNKNOWN_PARENT', node=record.name, parent=parent)
            graph.add_edge(parent, record.name)

    if not nx.is_directed_acyclic_graph(graph.graph):
        cycle = [edge[0] for edge in nx.find_cycle(graph.graph)]
        raise DerivationGraphError(f"derivation cycle through {', '.join(cycle)}", error_code='CYCLE_DETECTED',
                                   cycle=cycle)

    logger.debug("built derivation graph", domain=domain, nodes=len(graph), edges=graph.edge_count,
                 axioms=len(graph.roots))
    return graph


def context_axioms(g: DerivationGraph, target: str) -> List[str]:
    """Axiom ancestors of target, or the target itself when it is an axiom"""
    if g.is_axiom(target):
        return [target]
    return g.ordered(name for name in g.ancestors(target) if g.is_axiom(name))


def premises_at_depth(g: DerivationGraph, target: str, d: int) -> DepthCut:
    """
    Cut the derivation of target d inferences above it

    Level 0 is the target; level i holds the parents of the derived nodes of
    level i-1. The frontier is level d plus every axiom met on an earlier
    level, so each downward path stops at the first of the two it reaches.
    """
    g.require(target)
    if d < 1:
        raise DerivationGraphError(f"depth must be at least 1, got {d}", error_code='INVALID_DEPTH', depth=d)
    if g.is_axiom(target):
        raise DerivationGraphError(f"{target} is an axiom and has no premises", error_code='INVALID_DEPTH',
                                   node=target, depth=d)

    frontier = {}
    level = [target]
    for _ in range(d):
        following = {}
        for name in level:
            if g.is_axiom(name):
                frontier[name] = None
                continue
            for parent in g.parents(name):
                following[parent] = None
        level = list(following)
    frontier.update(dict.fromkeys(level))
    return DepthCut(tuple(g.ordered(frontier)), tuple(context_axioms(g, target)), d)


def node_depth(g: DerivationGraph, target: str) -> int:
    """Longest inference path from an axiom to target, in edges"""
    g.require(target)
    if g.is_axiom(target):
        return 0
    closure = g.ancestors(target) | {target}
    return nx.dag_longest_path_length(g.graph.subgraph(closure))


def size_window(d: int) -> Tuple[int, int]:
    """Node count bounds of a binary proof of depth d: a single path up to a full tree"""
    return 2 * d + 1, 2 ** (d + 1) - 1


def binary_proof_subgraph(g: DerivationGraph, target: str, d: int,
                          window: Optional[Tuple[int, int]] = None) -> Optional[ProofSubgraph]:
    """
    Ancestor closure of target when it is a binary proof of depth exactly d

    Returns:
        ProofSubgraph, or None when some derived node does not have two
        parents, the depth differs or the size is outside the window
    """
    g.require(target)
    if d < 1:
        raise DerivationGraphError(f"depth must be at least 1, got {d}", error_code='INVALID_DEPTH', depth=d)
    if g.is_axiom(target):
        return None

    nodes = g.ordered(g.ancestors(target) | {target})
    low, high = window or size_window(d)
    if not low <= len(nodes) <= high:
        return None
    for name in nodes:
        if not g.is_axiom(name) and len(g.parents(name)) != 2:
            return None
    if node_depth(g, target) != d:
        return None

    edges = tuple((parent, name) for name in nodes for parent in g.parents(name))
    return ProofSubgraph(target=target, nodes=tuple(nodes), edges=edges, depth=d)


def all_node_depths(g: DerivationGraph) -> Dict[str, int]:
    """node_depth of every node in one topological sweep"""
    depths: Dict[str, int] = {}
    for name in nx.topological_sort(g.graph):
        parents = g.parents(name)
        depths[name] = 1 + max(depths[parent] for parent in parents) if parents else 0
    return depths
