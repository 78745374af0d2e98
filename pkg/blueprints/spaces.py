"""Commands on point samples: Gram matrices and shadows."""

import click
import numpy as np
from flask import Blueprint, current_app

import quantum_realization
from blueprints import config_seed, emit, finish, guarded
from errors import NotShadowError
from kernel_spaces import check_positive_type, random_sample, separated_sample
from models import dump_matrix, dump_points, load_matrix, load_points, space_from_document

spaces_bp = Blueprint('spaces', __name__, cli_group=None)


@spaces_bp.cli.command('gram')
@click.argument('points', type=click.Path(dir_okay=False))
@click.option('--out', type=click.Path(dir_okay=False), help='Write the Gram matrix here.')
@click.option('--eps-rank', type=float, default=None)
@guarded
def gram(points, out, eps_rank):
    """Gram matrix, numerical rank and positive-type check of a points file."""
    sample = load_points(points)
    eps_rank = current_app.config['EPS_RANK'] if eps_rank is None else eps_rank
    fact = quantum_realization.factor_gram(sample, eps_rank)
    report = check_positive_type(sample, current_app.config['PSD_EPS'])
    if out:
        dump_matrix(out, fact.G)
    current_app.logger.info("gram: %d points, rank %d", fact.n, fact.rank)
    emit({'space': sample.space.kind, 'n': fact.n, 'rank': fact.rank, 'eps_rank': eps_rank,
          'min_eigenvalue': report['min_eigenvalue'], 'max_eigenvalue': report['max_eigenvalue'],
          'passed': report['passed']})
    finish(report['passed'])


@spaces_bp.cli.command('points')
@click.argument('kind', type=click.Choice(['szego', 'moebius', 'klauder']))
@click.argument('out', type=click.Path(dir_okay=False))
@click.option('--dim', type=int, default=1, show_default=True, help='Klauder dimension.')
@click.option('--count', type=int, default=12, show_default=True)
@click.option('--radius', type=float, default=None, help='Klauder zeta components stay inside it.')
@click.option('--separated', is_flag=True, help='Spread the points so their Gram matrix is well conditioned.')
@click.option('--seed', type=int, default=None)
@guarded
def points(kind, out, dim, count, radius, separated, seed):
    """Write a seeded random sample of KIND to OUT."""
    space = space_from_document({'space': kind, 'dim': dim}, source='points')
    rng = np.random.default_rng(config_seed(seed))
    if separated:
        sample = separated_sample(space, count, rng)
    else:
        sample = random_sample(space, count, rng, radius)
    dump_points(out, sample)
    current_app.logger.info("points: wrote %d %s points to %s", len(sample), kind, out)
    emit({'space': kind, 'count': len(sample), 'out': out})


@spaces_bp.cli.command('shadow')
@click.argument('points', type=click.Path(dir_okay=False))
@click.argument('kernel', type=click.Path(dir_okay=False))
@click.option('--out', type=click.Path(dir_okay=False), help='Write the operator matrix here.')
@click.option('--tol', type=float, default=None)
@guarded
def shadow(points, kernel, out, tol):
    """Operator on the sample span whose shadow is the given kernel matrix."""
    sample = load_points(points)
    fact = quantum_realization.factor_gram(sample, current_app.config['EPS_RANK'])
    X = load_matrix(kernel)
    try:
        op = quantum_realization.operator_from_kernel(fact, X, tol)
    except NotShadowError as e:
        emit({'n': fact.n, 'rank': fact.rank, 'passed': False, 'error': str(e)})
        finish(False)
    if out:
        dump_matrix(out, op.M)
    emit({'n': fact.n, 'rank': fact.rank, 'residual': op.residual, 'passed': True})
    finish(True)
