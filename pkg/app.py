"""
Preorder heap toolkit - command-line entry point

Closed-form quotients, compositions and law checks for four heap instances:
finite Boolean lattices, assume-guarantee contracts, interface automata, and
regular languages over several alphabets (synchronous and asynchronous
sieves). Every solve is checked against a brute-force oracle at desk scale.

Commands:
  heapcalc run --theory T --op OP [--a FILE] [--b FILE] [--bound K] [--seed N]
               [--out FILE] [--sieve FILE] [--witness-cap N]
  heapcalc info
"""
import logging

import click
from dotenv import load_dotenv

# Load environment variables before the settings module reads them
load_dotenv()

from commands.info import info_command  # noqa: E402
from commands.run import run_command  # noqa: E402
from config.settings import LOG_CONFIG  # noqa: E402


@click.group()
@click.option("--log-level", default=None, help="Override LOG_LEVEL for this invocation")
def cli(log_level):
    """Preorder heap toolkit"""
    logging.basicConfig(level=(log_level or LOG_CONFIG["level"]).upper(), format=LOG_CONFIG["format"])


# Register commands
cli.add_command(run_command)
cli.add_command(info_command)


if __name__ == "__main__":
    cli()
