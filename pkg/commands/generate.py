"""
`generate` - run the generation pipeline
"""

from pathlib import Path
from typing import Optional

import click

from commands.common import echo_json, handle_forge_errors, prover_mode_option, workers_option
from config.pipeline_config import load_pipeline_config
from services.pipeline import run_pipeline


@click.command('generate')
@click.option('--config', 'config_path', required=True, type=click.Path(dir_okay=False),
              help='Pipeline YAML file')
@click.option('--output', 'output_path', type=click.Path(dir_okay=False), default='out/tasks.jsonl',
              show_default=True, help='Dataset JSONL path; the manifest is written next to it')
@click.option('--seed', type=int, default=None, help='Override the global seed')
@prover_mode_option
@workers_option
@click.option('--axiom-root', type=click.Path(file_okay=False), default=None,
              help='Directory the domain axiom files are resolved against')
@handle_forge_errors
def generate(config_path: str, output_path: str, seed: Optional[int], prover_mode: Optional[str],
             workers: Optional[int], axiom_root: Optional[str]):
    """Generate entailment, selection and reconstruction tasks."""
    config = load_pipeline_config(config_path, {
        'seed': seed,
        'prover_mode': prover_mode,
        'workers': workers,
        'axiom_root': axiom_root,
    })
    manifest = run_pipeline(config, Path(output_path))
    echo_json({
        'success': True,
        'path': manifest.path,
        'total': manifest.total,
        'expected': config.expected_total,
        'shortfall': manifest.shortfall,
        'content_hash': manifest.content_hash,
    })
