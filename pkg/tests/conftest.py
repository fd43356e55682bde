"""
Shared fixtures: small derivation graphs, the topology reconstruction listing and a rule-driven oracle
"""

import os
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import pytest

os.environ.setdefault('SATFORGE_ENV', 'testing')

from config.settings import TestingConfig  # noqa: E402
from models.clause import ClauseRole  # noqa: E402
from models.prover import SaturationRecord, Verdict, VerdictStatus  # noqa: E402
from models.task import DifficultySpec, ReconstructionTask, TaskKind  # noqa: E402
from services.derivation_graph import build_graph  # noqa: E402
from services.formula import clause_key  # noqa: E402
from services.tptp_parser import parse_clause  # noqa: E402

TestingConfig.init_logging()

ROOT = Path(__file__).resolve().parent.parent
DATA = Path(__file__).resolve().parent / 'data'

TOPOLOGY_CLAUSES = [
    '(element_of_set(X3,f10(X2,X1,X3))|~element_of_collection(X1,top_of_basis(X2))|~element_of_set(X3,X1))',
    '(subset_sets(X1,X2)|~element_of_set(X3,union_of_members(top_of_basis(subspace_topology(X2,X4,X1)))))',
    '(element_of_set(X1,f1(X2,X1))|~element_of_set(X1,union_of_members(X2)))',
    '(element_of_collection(f1(X2,X1),X2)|~element_of_set(X1,union_of_members(X2)))',
    '(element_of_set(X1,union_of_members(X2))|~element_of_set(X1,X3)|~element_of_collection(X3,X2))',
    '(subset_sets(X4,X2)|~element_of_collection(X1,subspace_topology(X2,X3,X4)))',
    '(element_of_set(X1,union_of_members(X2))|~element_of_set(X1,union_of_members(top_of_basis(X2))))',
    '(element_of_collection(f10(X2,X1,X3),X2)|~element_of_collection(X1,top_of_basis(X2))|~element_of_set(X3,X1))',
    '(subset_sets(X1,X2)|~element_of_collection(f1(X3,X4),top_of_basis(subspace_topology(X2,X5,X1)))'
    '|~element_of_set(X4,union_of_members(X3)))',
    '(element_of_set(X1,X3)|~element_of_set(X1,intersection_of_members(X2))|~element_of_collection(X3,X2))',
    '(subset_sets(X1,X2)|~element_of_collection(union_of_members(top_of_basis(top_of_basis('
    'subspace_topology(X2,X3,X1)))),X4)|~element_of_set(X5,intersection_of_members(X4)))',
    '(element_of_set(X1,union_of_members(X2))|~element_of_collection(f10(X3,X4,X1),X2)'
    '|~element_of_collection(X4,top_of_basis(X3))|~element_of_set(X1,X4))',
    '(element_of_set(X1,union_of_members(X2))|~element_of_collection(f1(X3,X1),top_of_basis(X2))'
    '|~element_of_set(X1,union_of_members(X3)))',
    '(element_of_set(X1,union_of_members(X2))|~element_of_collection(X3,top_of_basis(X2))|~element_of_set(X1,X3))',
    '(subset_sets(X1,X2)|~element_of_collection(X3,top_of_basis(subspace_topology(X2,X4,X1)))|~element_of_set(X5,X3))',
    '(element_of_set(X1,union_of_members(X2))|~element_of_collection(union_of_members(top_of_basis(X2)),X3)'
    '|~element_of_set(X1,intersection_of_members(X3)))',
]

# child -> parents of the topology proof, clause numbers as above
TOPOLOGY_EDGES = {
    11: (2, 16), 12: (1, 5), 13: (3, 14), 14: (8, 12), 15: (6, 8),
    16: (7, 10), 2: (4, 9), 7: (4, 13), 9: (3, 15),
}

ENTAILMENT_FIGURE = {
    'L1': ('Ax1', 'Ax2'),
    'L2': ('Ax2', 'Ax3'),
    'L3': ('Ax3', 'Ax2'),
    'T': ('L2', 'L3'),
}

RECONSTRUCTION_FIGURE = {
    'C5': ('C1', 'C2'),
    'C6': ('C3', 'C4'),
    'C7': ('C5', 'C6'),
}


def records_for(edges: Dict[str, Sequence[str]], axioms: Iterable[str], clauses: Dict[str, str] = None):
    """Saturation records for a graph given as child -> parents; axioms first"""
    clauses = clauses or {}

    def clause(name):
        return parse_clause(clauses.get(name, f"(holds({name.lower()}))"))

    records = [SaturationRecord(name, ClauseRole.AXIOM, clause(name)) for name in axioms]
    records += [SaturationRecord(name, ClauseRole.DERIVED, clause(name), tuple(parents), 'resolution')
                for name, parents in edges.items()]
    return records


def graph_from(edges, axioms, clauses=None, domain='TST'):
    return build_graph(records_for(edges, axioms, clauses), domain)


class RuleOracle:
    """
    Stand-in oracle: premises entail a conjecture when they include one of the
    listed sufficient clause sets for it, or the conjecture itself
    """

    def __init__(self, rules: Dict[str, List[Sequence[str]]]):
        self.rules = {
            clause_key(parse_clause(target)): [{clause_key(parse_clause(text)) for text in group} for group in groups]
            for target, groups in rules.items()
        }
        self.workers = 1
        self.mode = 'internal'
        self.calls = 0

    def check(self, premises, conjecture) -> Verdict:
        self.calls += 1
        keys = {clause_key(premise) for premise in premises}
        target = clause_key(conjecture)
        if target in keys or any(group <= keys for group in self.rules.get(target, [])):
            return Verdict(VerdictStatus.ENTAILED)
        return Verdict(VerdictStatus.NOT_ENTAILED, reason='saturated')

    def entails(self, premises, conjecture) -> bool:
        return self.check(premises, conjecture).entailed

    def check_many(self, queries):
        return [self.check(premises, conjecture) for premises, conjecture in queries]

    @property
    def stats(self):
        return {'queries': self.calls}


@pytest.fixture
def entailment_figure():
    """Three axioms, three lemmas and a theorem T derived from L2 and L3"""
    return graph_from(ENTAILMENT_FIGURE, ['Ax1', 'Ax2', 'Ax3'])


@pytest.fixture
def reconstruction_figure():
    """Full binary proof of depth 2 over four axioms"""
    return graph_from(RECONSTRUCTION_FIGURE, ['C1', 'C2', 'C3', 'C4'])


@pytest.fixture
def topology_graph():
    """The sixteen topology clauses as a derivation graph named by clause number"""
    axioms = [str(number) for number in range(1, 17) if number not in TOPOLOGY_EDGES]
    order = [2, 7, 9, 11, 12, 13, 14, 15, 16]
    edges = {str(child): tuple(str(parent) for parent in TOPOLOGY_EDGES[child]) for child in order}
    clauses = {str(number): text for number, text in enumerate(TOPOLOGY_CLAUSES, start=1)}
    return graph_from(edges, axioms, clauses, domain='TOP')


@pytest.fixture
def topology_task():
    """Reconstruction task whose clause numbering matches the topology listing"""
    edges: List[Tuple[int, int, int]] = sorted(
        (child, *sorted(parents)) for child, parents in TOPOLOGY_EDGES.items())
    return ReconstructionTask(
        task_id='TOP-reconstruction-L4-0000',
        domain='TOP',
        domain_name='Topology',
        spec=DifficultySpec(level=4, d=6, k=0, task_kind=TaskKind.RECONSTRUCTION),
        seed=0,
        theorem_name='11',
        clauses=tuple(parse_clause(text) for text in TOPOLOGY_CLAUSES),
        edges=tuple(edges),
        theorem_index=11,
        calculus='superposition',
    )


@pytest.fixture
def edge_oracle(mocker, topology_task):
    """Mock oracle that accepts exactly the ground-truth steps of the topology task"""
    index = {clause_key(clause): position for position, clause in enumerate(topology_task.clauses, start=1)}
    truth = {child: set(parents) for child, parents in TOPOLOGY_EDGES.items()}

    def check_many(queries):
        verdicts = []
        for premises, conjecture in queries:
            child = index[clause_key(conjecture)]
            parents = {index[clause_key(premise)] for premise in premises}
            sound = truth.get(child) == parents
            verdicts.append(Verdict(VerdictStatus.ENTAILED if sound else VerdictStatus.NOT_ENTAILED))
        return verdicts

    oracle = mocker.Mock()
    oracle.check_many.side_effect = check_many
    oracle.workers = 1
    return oracle


@pytest.fixture
def smoke_config_path():
    return ROOT / 'configs' / 'smoke.yaml'


@pytest.fixture
def axiom_dir():
    return ROOT / 'axioms'
