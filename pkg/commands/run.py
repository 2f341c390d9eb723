"""
`run` command: evaluate one problem instance and emit its result document

The machine document goes to --out (standard output when omitted); a one-line
human summary goes to standard output, or to standard error when the document
already took standard output.
"""
import logging

import click

from config.settings import OPERATIONS, THEORIES
from services.instance_service import exit_code, invalid_document, parse_instance, run
from utils.errors import ValidationError
from utils.helpers import load_json, write_document

logger = logging.getLogger(__name__)


def _summary(document: dict) -> str:
    line = f"{document.get('theory')} {document.get('operation')}: {document['status']}"
    verification = document.get("verification")
    if isinstance(verification, dict) and "maximal" in verification:
        line += f" (solves={verification['solves']}, maximal={verification['maximal']}, via {verification['method']})"
    elif isinstance(verification, dict) and verification.get("maximality") == "unverified":
        line += " (maximality unverified at this size)"
    if "message" in document:
        line += f" - {document['message']}"
    return line


@click.command("run")
@click.option("--theory", required=True, type=click.Choice(THEORIES), help="Heap instance to work in")
@click.option("--op", "operation", required=True, type=click.Choice(OPERATIONS), help="Operation to perform")
@click.option("--a", "a_path", type=click.Path(exists=True, dir_okay=False), help="First operand document")
@click.option("--b", "b_path", type=click.Path(exists=True, dir_okay=False), help="Second operand document")
@click.option("--bound", type=int, help="Word-length bound for language checks")
@click.option("--seed", type=int, help="Seed for sampled checks")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the result document here")
@click.option("--sieve", "sieve_path", type=click.Path(exists=True, dir_okay=False), help="Alphabet registry for language theories")
@click.option("--witness-cap", type=int, help="Maximum witnesses reported per check")
@click.pass_context
def run_command(ctx, theory, operation, a_path, b_path, bound, seed, out, sieve_path, witness_cap):
    """Compute a quotient, composition, refinement or law check for two operands"""
    context = {"theory": theory, "operation": operation}
    try:
        instance = parse_instance(
            {
                "theory": theory,
                "op": operation,
                "a": load_json(a_path),
                "b": load_json(b_path),
                "sieve": load_json(sieve_path),
                "options": {"bound": bound, "seed": seed, "witness_cap": witness_cap},
            }
        )
        document = run(instance)
    except ValidationError as e:
        logger.info("rejected instance: %s", e)
        document = invalid_document(e, **context)

    text = write_document(document, out)
    if out is None:
        click.echo(text, nl=False)
    click.echo(_summary(document), err=out is None)
    ctx.exit(exit_code(document))
