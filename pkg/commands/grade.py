"""
`grade` - score an answers file against a generated dataset
"""

from typing import Optional

import click
import structlog

from commands.common import echo_json, handle_forge_errors, prover_mode_option, workers_option
from config.pipeline_config import load_pipeline_config
from config.settings import get_config
from models.prover import ExternalProverConfig, ProverLimits
from services.answer_parser import answer_text
from services.dataset_writer import read_answers, read_tasks, write_reports
from services.external_prover import DEFAULT_ARGUMENTS
from services.grader import Grader
from services.pipeline import build_oracle

logger = structlog.get_logger(__name__)


def _env_oracle(prover_mode: Optional[str], workers: int):
    settings = get_config()
    limits = ProverLimits(settings.PROVER_TIMEOUT, settings.PROVER_MAX_CLAUSES, settings.PROVER_MAX_WEIGHT)
    vampire = ExternalProverConfig('vampire', settings.VAMPIRE_PATH, DEFAULT_ARGUMENTS['vampire'], limits=limits)
    return build_oracle(prover_mode or 'internal', limits, vampire, workers, settings.TPTP_ROOT)


@click.command('grade')
@click.option('--tasks', 'tasks_path', required=True, type=click.Path(exists=True, dir_okay=False),
              help='Dataset JSONL written by generate')
@click.option('--answers', 'answers_path', required=True, type=click.Path(exists=True, dir_okay=False),
              help='JSONL of {id, answer} objects')
@click.option('--output', 'output_path', type=click.Path(dir_okay=False), default=None,
              help='Where to write one grade report per line')
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='Pipeline YAML supplying prover settings and grading strictness')
@click.option('--lenient', is_flag=True, help='Do not zero reconstructions that leave clauses unused')
@prover_mode_option
@workers_option
@handle_forge_errors
def grade(tasks_path: str, answers_path: str, output_path: Optional[str], config_path: Optional[str],
          lenient: bool, prover_mode: Optional[str], workers: Optional[int]):
    """Grade model answers and print mean scores per task type and level."""
    strict = True
    if config_path:
        config = load_pipeline_config(config_path, {'prover_mode': prover_mode, 'workers': workers})
        oracle = build_oracle(config.prover.mode, config.prover.oracle, config.prover.vampire,
                              config.generation.workers, config.prover.tptp_root)
        strict = config.grading.strict
    else:
        oracle = _env_oracle(prover_mode, workers or get_config().WORKER_COUNT)
    if lenient:
        strict = False

    tasks = read_tasks(tasks_path)
    answers = read_answers(answers_path)
    missing = [task.task_id for task in tasks if task.task_id not in answers]
    if missing:
        logger.warning("tasks without an answer are graded as unparseable", count=len(missing))

    grader = Grader(oracle, strict=strict, workers=oracle.workers)
    reports = grader.grade_many([(task, answer_text(answers.get(task.task_id))) for task in tasks])
    if output_path:
        write_reports(reports, output_path)
    echo_json({'success': True, 'strict': strict, **Grader.summarize(reports)})
