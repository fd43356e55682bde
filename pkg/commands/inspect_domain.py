"""
`inspect` - saturate one domain and report its derivation graph
"""

from pathlib import Path
from typing import Optional

import click

from commands.common import echo_json, handle_forge_errors, prover_mode_option
from config.pipeline_config import load_pipeline_config
from services.formula import render_clause
from services.pipeline import TaskPipeline


@click.command('inspect')
@click.option('--config', 'config_path', required=True, type=click.Path(dir_okay=False), help='Pipeline YAML file')
@click.option('--domain', 'domain_code', required=True, help='Domain code, e.g. SET')
@click.option('--top', type=click.IntRange(min=1), default=10, show_default=True,
              help='How many of the best-rated theorems to list')
@click.option('--export-graph', type=click.Path(dir_okay=False), default=None,
              help='Write the graph edges, one "parent -> child" per line')
@click.option('--export-scores', type=click.Path(dir_okay=False), default=None,
              help='Write every node score as TSV')
@prover_mode_option
@handle_forge_errors
def inspect_domain(config_path: str, domain_code: str, top: int, export_graph: Optional[str],
                   export_scores: Optional[str], prover_mode: Optional[str]):
    """Saturate a domain and list its most interesting theorems."""
    config = load_pipeline_config(config_path, {'prover_mode': prover_mode})
    pipeline = TaskPipeline(config)
    state = pipeline.prepare_domain(config.domain(domain_code.upper()))
    graph = state.graph

    if export_graph:
        Path(export_graph).write_text(graph.export_edges(), encoding='utf-8')
    if export_scores:
        Path(export_scores).write_text(pipeline.rater.export_scores(state.scores), encoding='utf-8')

    ranked = pipeline.rater.rank_theorems(graph, state.scores, top_n=top)
    echo_json({
        'success': True,
        'domain': state.domain.code,
        'calculus': state.calculus,
        'nodes': len(graph),
        'axioms': len(graph.roots),
        'edges': graph.edge_count,
        'max_depth': max(state.depths.values(), default=0),
        'top_theorems': [
            {
                'name': name,
                'clause': render_clause(graph.clause(name)),
                'depth': state.depths[name],
                **state.scores[name].to_dict(),
            }
            for name in ranked
        ],
    })
