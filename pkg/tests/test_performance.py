"""
Performance tests for parsing, proving, graph queries and grading
"""

import os
import time

import psutil
import pytest

from models.prover import ProverLimits
from services.derivation_graph import all_node_depths, build_graph, premises_at_depth
from services.formula import clause_key
from services.grader import Grader
from services.interest_rater import InterestRater
from services.oracle import EntailmentOracle
from services.resolution_prover import saturate_internal
from services.tptp_parser import parse_clause, parse_tptp_file, parse_tptp_text
from tests.conftest import DATA, graph_from, records_for


def chain_edges(length):
    """A long chain where node n{i} is derived from n{i-1} and an axiom a{i}"""
    edges = {'n1': ('a0', 'a1')}
    for index in range(2, length + 1):
        edges[f'n{index}'] = (f'n{index - 1}', f'a{index}')
    return edges


@pytest.mark.performance
class TestPerformance:
    """Timing and memory budgets"""

    def test_parsing_performance(self):
        lines = [line for line in (DATA / 'corpus.p').read_text().splitlines()
                 if line.startswith('cnf(') and not line.startswith("cnf('")]
        renamed = '\n'.join(line.replace('cnf(', f'cnf(r{copy}_', 1) for copy in range(25) for line in lines)

        start_time = time.time()
        clauses = parse_tptp_text(renamed, 'MIX')
        parse_time = time.time() - start_time

        assert len(clauses) >= 1000
        assert parse_time < 5.0, f"Parsing took too long: {parse_time}s"

    def test_clause_key_performance(self):
        clause = parse_clause('(subset_sets(X1,X2)|~element_of_collection(X3,top_of_basis(subspace_topology(X2,X4,X1)))'
                              '|~element_of_set(X5,X3))')

        start_time = time.time()
        keys = {clause_key(clause) for _ in range(2000)}
        key_time = time.time() - start_time

        assert len(keys) == 1
        assert key_time < 3.0, f"Canonical keys took too long: {key_time}s"

    @pytest.mark.slow
    def test_saturation_performance(self, axiom_dir):
        axioms = parse_tptp_file(axiom_dir / 'SET.p', 'SET')

        start_time = time.time()
        output = saturate_internal(axioms, ProverLimits(timeout=600, max_clauses=1500, max_weight=30))
        saturation_time = time.time() - start_time

        assert output.complete
        assert saturation_time < 60.0, f"Saturation took too long: {saturation_time}s"

    def test_graph_queries_on_a_deep_chain(self):
        graph = graph_from(chain_edges(400), [f'a{index}' for index in range(401)])

        start_time = time.time()
        depths = all_node_depths(graph)
        cut = premises_at_depth(graph, 'n400', 50)
        query_time = time.time() - start_time

        assert depths['n400'] == 400
        assert cut.premises[-1] == 'n350'
        assert query_time < 2.0, f"Graph queries took too long: {query_time}s"

    def test_rating_performance(self):
        graph = graph_from(chain_edges(300), [f'a{index}' for index in range(301)])

        start_time = time.time()
        scores = InterestRater().score_graph(graph)
        rating_time = time.time() - start_time

        assert len(scores) == 601
        assert rating_time < 5.0, f"Rating took too long: {rating_time}s"

    def test_concurrent_oracle_queries(self):
        oracle = EntailmentOracle('internal', ProverLimits(timeout=5), workers=4)
        premises = [parse_clause('(p(a))'), parse_clause('(q(X1)|~p(X1))'), parse_clause('(r(X1)|~q(X1))')]
        queries = [(premises, parse_clause(f'(r(c{index}))')) for index in range(20)]

        start_time = time.time()
        verdicts = oracle.check_many(queries)
        total_time = time.time() - start_time

        assert all(verdict.is_definite for verdict in verdicts)
        assert total_time < 10.0, f"Concurrent queries took too long: {total_time}s"

    def test_grading_memory_usage(self, topology_task, edge_oracle):
        process = psutil.Process(os.getpid())
        initial_memory = process.memory_info().rss
        answer = '\n'.join(f"{child} <- {first}, {second}" for child, first, second in topology_task.edges)

        reports = Grader(edge_oracle).grade_many([(topology_task, answer)] * 500)

        memory_increase = process.memory_info().rss - initial_memory
        assert all(report.score == 1.0 for report in reports)
        assert memory_increase < 100 * 1024 * 1024, f"Memory usage too high: {memory_increase} bytes"

    def test_graph_build_performance(self):
        records = records_for(chain_edges(2000), [f'a{index}' for index in range(2001)])

        start_time = time.time()
        graph = build_graph(records, 'TST')
        build_time = time.time() - start_time

        assert len(graph) == 4001
        assert build_time < 5.0, f"Graph build took too long: {build_time}s"
