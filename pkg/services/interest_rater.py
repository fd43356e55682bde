"""
InterestRater - Complexity, surprisingness and usefulness scores over a derivation graph
"""

from itertools import combinations
from typing import Dict, List, Optional

import networkx as nx
import structlog

from models.clause import Clause, SignatureStats
from models.graph import DerivationGraph
from models.rating import InterestScore, RaterConfig
from services.formula import clause_symbols, clause_weight, signature_stats

logger = structlog.get_logger(__name__)


def _popcount(mask: int) -> int:
    return bin(mask).count('1')


class InterestRater:
    """Scores every clause of one graph; axioms are scored but never ranked"""

    def __init__(self, config: Optional[RaterConfig] = None):
        self.config = config or RaterConfig()

    def score_complexity(self, clause: Clause) -> float:
        return max(0.0, 1.0 - clause_weight(clause) / self.config.weight_cap)

    @staticmethod
    def score_surprisingness(clause: Clause, stats: SignatureStats) -> float:
        """
        One minus the mean familiarity of the clause's symbol pairs

        A pair's familiarity is how often it co-occurs in the axioms relative to
        the rarer of its two symbols.
        """
        symbols = sorted(clause_symbols(clause))
        if len(symbols) < 2:
            return 0.0
        pairs = list(combinations(symbols, 2))
        familiarity = sum(
            stats.cooccurrences(first, second) / max(1, min(stats.occurrences(first), stats.occurrences(second)))
            for first, second in pairs
        )
        return max(0.0, 1.0 - familiarity / len(pairs))

    def _provisional(self, complexity: float, surprisingness: float) -> bool:
        cfg = self.config
        partial = cfg.complexity_weight * complexity + cfg.surprisingness_weight * surprisingness
        return partial >= cfg.interest_threshold * (cfg.complexity_weight + cfg.surprisingness_weight)

    def score_usefulness(self, g: DerivationGraph, partial: Dict[str, tuple]) -> Dict[str, float]:
        """
        Share of each node's descendants that are provisionally interesting

        Args:
            g: Derivation graph
            partial: node -> (complexity, surprisingness)

        Returns:
            node -> usefulness, 0.0 for nodes without descendants
        """
        position = {name: index for index, name in enumerate(g.nodes)}
        interesting = 0
        for name, (complexity, surprisingness) in partial.items():
            if self._provisional(complexity, surprisingness):
                interesting |= 1 << position[name]

        below: Dict[str, int] = {}
        for name in reversed(list(nx.topological_sort(g.graph))):
            mask = 0
            for child in g.children(name):
                mask |= below[child] | (1 << position[child])
            below[name] = mask

        usefulness = {}
        for name in g.nodes:
            total = _popcount(below[name])
            usefulness[name] = _popcount(below[name] & interesting) / total if total else 0.0
        return usefulness

    def score_graph(self, g: DerivationGraph) -> Dict[str, InterestScore]:
        """Score every node; surprisingness is measured against the graph's axioms"""
        cfg = self.config
        stats = signature_stats(g.clause(name) for name in g.roots)
        partial = {
            name: (self.score_complexity(g.clause(name)), self.score_surprisingness(g.clause(name), stats))
            for name in g.nodes
        }
        usefulness = self.score_usefulness(g, partial)
        scores = {}
        for name in g.nodes:
            complexity, surprisingness = partial[name]
            combined = (cfg.complexity_weight * complexity + cfg.surprisingness_weight * surprisingness
                        + cfg.usefulness_weight * usefulness[name])
            scores[name] = InterestScore(complexity, surprisingness, usefulness[name], min(1.0, combined))
        return scores

    def rank_theorems(self, g: DerivationGraph, scores: Optional[Dict[str, InterestScore]] = None,
                      top_n: Optional[int] = None) -> List[str]:
        """Derived nodes by combined score, best first, ties by name"""
        scores = scores if scores is not None else self.score_graph(g)
        ranked = sorted(g.derived_nodes, key=lambda name: (-scores[name].combined, name))
        ranked = ranked[:top_n or self.config.top_n]
        logger.debug("ranked theorems", domain=g.domain, candidates=len(g.derived_nodes), kept=len(ranked))
        return ranked

    @staticmethod
    def export_scores(scores: Dict[str, InterestScore]) -> str:
        lines = ['node\tcomplexity\tsurprisingness\tusefulness\tcombined']
        for name, score in scores.items():
            lines.append(f"{name}\t{score.complexity:.4f}\t{score.surprisingness:.4f}\t"
                         f"{score.usefulness:.4f}\t{score.combined:.4f}")
        return '\n'.join(lines) + '\n'


def rank_theorems(g: DerivationGraph, cfg: Optional[RaterConfig] = None) -> List[str]:
    return InterestRater(cfg).rank_theorems(g)
