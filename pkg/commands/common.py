"""
Helpers shared by the CLI commands
"""

import functools
import sys

import click
import orjson
import structlog

from utils.errors import ForgeError

logger = structlog.get_logger(__name__)


def echo_json(payload, err: bool = False):
    click.echo(orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS).decode('utf-8'), err=err)


def handle_forge_errors(command):
    """Print ForgeErrors as their JSON payload on stderr and exit with status 1"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ForgeError as exc:
            logger.error("command failed", command=command.__name__, error_code=exc.error_code, error=exc.message)
            echo_json(exc.to_dict(), err=True)
            sys.exit(1)

    return wrapper


prover_mode_option = click.option('--prover-mode', type=click.Choice(['internal', 'external', 'auto']),
                                  default=None, help='Override the prover mode of the config file')
workers_option = click.option('--workers', type=click.IntRange(min=1), default=None,
                              help='Worker threads for oracle calls and generation')
