"""Command groups of the workbench CLI and the helpers they share.

Exit status: 0 when every check passed, 1 when a check failed, 2 when the
input could not be used (bad config, unreadable file, broken precondition).
"""

import functools
import json

import click
from flask import current_app

from errors import CoherentError, IoError

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def guarded(command):
    """Map input and precondition errors to exit status 2."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (CoherentError, IoError) as e:
            current_app.logger.debug("%s failed", command.__name__, exc_info=True)
            click.echo(f"error: {e}", err=True)
            click.get_current_context().exit(EXIT_CONFIG)
    return wrapper


def emit(document):
    click.echo(json.dumps(document, indent=current_app.config['REPORT_INDENT'], allow_nan=False))


def finish(passed):
    click.get_current_context().exit(EXIT_PASS if passed else EXIT_FAIL)


def config_seed(seed):
    return current_app.config['SEED'] if seed is None else seed


def fock_cutoff(dim, cutoff):
    if cutoff is not None:
        return cutoff
    if dim == 1:
        return current_app.config['FOCK_CUTOFF_D1']
    if dim == 2:
        return current_app.config['FOCK_CUTOFF_D2']
    return 8
