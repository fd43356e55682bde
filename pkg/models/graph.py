"""
Derivation graph model - clauses as nodes, parent -> child inference edges
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Set, Tuple

import networkx as nx

from models.clause import AnnotatedClause
from utils.errors import DerivationGraphError


class DerivationGraph:
    """
    DAG over named clauses. Nodes remember their insertion order, which is
    the order every listing method returns them in.
    """

    def __init__(self, domain: str = ''):
        self.domain = domain
        self._graph = nx.DiGraph()

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    def __contains__(self, name: str) -> bool:
        return name in self._graph

    def __repr__(self) -> str:
        return f'<DerivationGraph {self.domain or "?"} nodes={len(self)} edges={self.edge_count}>'

    @property
    def graph(self) -> nx.DiGraph:
        """Read-only networkx view"""
        return self._graph.copy(as_view=True)

    @property
    def edge_count(self) -> int:
        return self._graph.number_of_edges()

    def add_clause(self, annotated: AnnotatedClause, parents: Tuple[str, ...] = (), rule: Optional[str] = None):
        self._graph.add_node(annotated.name, clause=annotated, parents=tuple(parents), rule=rule,
                             order=len(self._graph))

    def add_edge(self, parent: str, child: str):
        self._graph.add_edge(parent, child)

    def require(self, name: str):
        if name not in self._graph:
            raise DerivationGraphError(f"unknown node: {name}", error_code='UNKNOWN_NODE', node=name)

    def annotated(self, name: str) -> AnnotatedClause:
        self.require(name)
        return self._graph.nodes[name]['clause']

    def clause(self, name: str):
        return self.annotated(name).clause

    def rule(self, name: str) -> Optional[str]:
        self.require(name)
        return self._graph.nodes[name]['rule']

    def parents(self, name: str) -> Tuple[str, ...]:
        self.require(name)
        return self._graph.nodes[name]['parents']

    def children(self, name: str) -> List[str]:
        self.require(name)
        return self.ordered(self._graph.successors(name))

    def is_axiom(self, name: str) -> bool:
        return not self.parents(name)

    @property
    def nodes(self) -> List[str]:
        return list(self._graph.nodes)

    @property
    def roots(self) -> List[str]:
        return [name for name in self._graph.nodes if not self._graph.nodes[name]['parents']]

    @property
    def derived_nodes(self) -> List[str]:
        return [name for name in self._graph.nodes if self._graph.nodes[name]['parents']]

    def ancestors(self, name: str) -> Set[str]:
        self.require(name)
        return nx.ancestors(self._graph, name)

    def descendants(self, name: str) -> Set[str]:
        self.require(name)
        return nx.descendants(self._graph, name)

    def ordered(self, names: Iterable[str]) -> List[str]:
        nodes = self._graph.nodes
        return sorted(names, key=lambda name: nodes[name]['order'])

    def export_edges(self) -> str:
        """One `parent -> child` line per edge, children in insertion order"""
        lines = [f"{parent} -> {child}" for child in self.derived_nodes for parent in self.parents(child)]
        return '\n'.join(lines) + ('\n' if lines else '')


@dataclass(frozen=True)
class DepthCut:
    premises: Tuple[str, ...]
    context_axioms: Tuple[str, ...]
    depth: int


@dataclass(frozen=True)
class ProofSubgraph:
    """Ancestor closure of a target in which every derived node has two parents"""

    target: str
    nodes: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    depth: int

    @property
    def derived(self) -> List[str]:
        children = dict.fromkeys(child for _, child in self.edges)
        return [name for name in self.nodes if name in children]
