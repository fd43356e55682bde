"""
satforge - CNF reasoning task generator
Purpose: Saturate TPTP axiom sets, mine derivation graphs for interesting
theorems, and emit graded entailment, premise selection and proof
reconstruction tasks.
"""

import click

from commands.generate import generate
from commands.grade import grade
from commands.inspect_domain import inspect_domain
from config.settings import get_config


@click.group()
@click.version_option(get_config().VERSION, prog_name=get_config().SERVICE_NAME)
def cli():
    """Generate and grade first-order reasoning tasks."""
    get_config().init_logging()


cli.add_command(generate)
cli.add_command(grade)
cli.add_command(inspect_domain)


if __name__ == '__main__':
    cli()
