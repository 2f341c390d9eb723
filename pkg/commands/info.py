"""
`info` command: supported theories, operations and effective configuration
"""
import click

from config.settings import (
    AXIOM_CHECK_CONFIG,
    CLI_CONFIG,
    IA_SAMPLE_CONFIG,
    LANGUAGE_CONFIG,
    OPERATIONS,
    ORACLE_CONFIG,
    THEORIES,
)
from utils.helpers import dump_document


def info_document() -> dict:
    return {
        "theories": list(THEORIES),
        "operations": list(OPERATIONS),
        "config": {
            "axiom_check": AXIOM_CHECK_CONFIG,
            "oracle": ORACLE_CONFIG,
            "language": LANGUAGE_CONFIG,
            "interface_automata": IA_SAMPLE_CONFIG,
            "cli": CLI_CONFIG,
        },
    }


@click.command("info")
def info_command():
    """Show theories, operations and the configuration in effect"""
    click.echo(dump_document(info_document()), nl=False)
