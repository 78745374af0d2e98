"""`flask suite ...`: run a builtin or file-based verification suite."""

import click
from flask import Blueprint, current_app

import suite_engine
from blueprints import EXIT_CONFIG, finish, guarded
from errors import IoError

suites_bp = Blueprint('suites', __name__, cli_group=None)


def resolve_seed(cli_seed, config):
    """--seed, then COHERENT_SEED, then the suite file, then 0."""
    if cli_seed is not None:
        return cli_seed
    if current_app.config.get('SEED_FROM_ENV'):
        return int(current_app.config['SEED'])
    return config.seed


@suites_bp.cli.command('suite')
@click.argument('name')
@click.option('--seed', type=int, default=None, help='Overrides COHERENT_SEED and the suite file.')
@click.option('--out', type=click.Path(dir_okay=False), help='Write the JSON report here.')
@click.option('--workers', type=int, default=None, help='Run checks on a thread pool.')
@click.option('--strip-timing', is_flag=True, help='Zero wall times for byte-exact comparisons.')
@guarded
def suite(name, seed, out, workers, strip_timing):
    """Run NAME, a builtin suite or a path to a suite file."""
    config = suite_engine.load_suite(name)
    seed = resolve_seed(seed, config)
    workers = current_app.config['SUITE_WORKERS'] if workers is None else workers
    if workers < 1:
        click.echo("error: --workers must be at least 1", err=True)
        click.get_current_context().exit(EXIT_CONFIG)

    report = suite_engine.run_suite(config, seed=seed, workers=workers)
    text = suite_engine.report_json(report, strip_timing=strip_timing,
                                    indent=current_app.config['REPORT_INDENT'])
    out = out or config.outputs.get('report')
    if out:
        try:
            with open(out, 'w') as f:
                f.write(text + '\n')
        except OSError as e:
            raise IoError(f"cannot write {out}: {e.strerror or e}") from e
    else:
        click.echo(text)

    for event in report['events']:
        current_app.logger.warning(event)
    summary = report['summary']
    click.echo(f"{config.name}: {summary['passed']}/{summary['total']} checks passed (seed {seed})",
               err=True)
    finish(suite_engine.report_passed(report))


@suites_bp.cli.command('suites')
def list_suites():
    """List the builtin suites."""
    for name in suite_engine.BUILTIN_SUITES:
        click.echo(name)
