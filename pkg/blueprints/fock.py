"""`flask fock ...`: checks on the truncated Fock space."""

import click
import numpy as np
from flask import Blueprint

import fock_space
import kernel_spaces
import oscillator_algebra
from blueprints import config_seed, emit, finish, fock_cutoff, guarded

fock_bp = Blueprint('fock', __name__, cli_group='fock')


def _fock_options(command):
    command = click.option('--tol', type=float, default=None)(command)
    command = click.option('--cutoff', type=int, default=None,
                           help='Total-degree cutoff; defaults to 30 for d=1, 12 for d=2.')(command)
    return click.option('--dim', type=int, default=1, show_default=True)(command)


@fock_bp.cli.command('ccr')
@_fock_options
@guarded
def ccr(dim, cutoff, tol):
    """Canonical commutation relations on all states below the cutoff."""
    cutoff = fock_cutoff(dim, cutoff)
    report = fock_space.ccr_check(dim, cutoff, fock_space.CCR_TOL if tol is None else tol)
    emit(report)
    finish(report['passed'])


@fock_bp.cli.command('weyl')
@_fock_options
@click.option('--probe-degree', type=int, default=None)
@click.option('--p', 'p_value', type=complex, default=0.5, show_default=True,
              help='Every component of p.')
@click.option('--q', 'q_value', type=complex, default=0.5, show_default=True,
              help='Every component of q.')
@guarded
def weyl(dim, cutoff, tol, probe_degree, p_value, q_value):
    """Weyl relation e^{p*a} e^{a*q} = e^{p*q} e^{a*q} e^{p*a} on low-degree states."""
    cutoff = fock_cutoff(dim, cutoff)
    probe_degree = cutoff // 4 if probe_degree is None else probe_degree
    report = fock_space.weyl_check(np.full(dim, p_value), np.full(dim, q_value), cutoff,
                                   probe_degree, fock_space.WEYL_TOL if tol is None else tol)
    emit({'max_difference': report['max_difference'],
          'vacuum_expectation': [report['vacuum_expectation'].real, report['vacuum_expectation'].imag],
          'expected_vacuum': [report['expected_vacuum'].real, report['expected_vacuum'].imag],
          'tolerance': report['tolerance'], 'passed': report['passed']})
    finish(report['passed'])


@fock_bp.cli.command('gamma')
@_fock_options
@click.option('--count', type=int, default=20, show_default=True)
@click.option('--seed', type=int, default=None)
@guarded
def gamma(dim, cutoff, tol, count, seed):
    """Gamma(x)|z> against |x z> for seeded oscillator elements and points."""
    cutoff = fock_cutoff(dim, cutoff)
    tol = 1e-8 if tol is None else tol
    rng = np.random.default_rng(config_seed(seed))
    space = kernel_spaces.klauder_space(dim)
    results = []
    for _ in range(count):
        x = oscillator_algebra.random_element(rng, dim, 0.5)
        z = kernel_spaces.random_points(space, 1, rng, 0.5)[0]
        results.append(fock_space.gamma_action_check(x, z, cutoff, tol))
    passed = all(r['passed'] for r in results)
    emit({'dim': dim, 'cutoff': cutoff, 'count': count,
          'max_residual': max((r['residual'] for r in results), default=0.0),
          'max_tail_bound': max((r['tail_bound'] for r in results), default=0.0),
          'tolerance': tol, 'passed': passed})
    finish(passed)


@fock_bp.cli.command('overlap')
@_fock_options
@click.option('--pairs', type=int, default=50, show_default=True)
@click.option('--seed', type=int, default=None)
@guarded
def overlap(dim, cutoff, tol, pairs, seed):
    """Truncated Glauber overlaps, plus Gauss-Hermite quadrature when d = 1."""
    cutoff = fock_cutoff(dim, cutoff)
    tol = 1e-10 if tol is None else tol
    rng = np.random.default_rng(config_seed(seed))
    space = kernel_spaces.klauder_space(dim)
    points = kernel_spaces.random_points(space, 2 * pairs, rng)
    errors, within_tail = [], True
    quadrature = []
    for z, w in zip(points[::2], points[1::2]):
        report = fock_space.glauber_overlap(z.zeta, w.zeta, cutoff)
        errors.append(report['error'])
        within_tail = within_tail and report['passed']
        if dim == 1:
            exact = kernel_spaces.eval_kernel(space, z, w)
            value = fock_space.gauss_hermite_overlap(z, w)
            quadrature.append(abs(value - exact) / abs(exact))
    document = {'dim': dim, 'cutoff': cutoff, 'pairs': pairs, 'max_error': max(errors, default=0.0),
                'tail_bound_holds': within_tail, 'tolerance': tol}
    passed = within_tail and document['max_error'] <= tol
    if quadrature:
        document['max_quadrature_error'] = max(quadrature)
        passed = passed and document['max_quadrature_error'] <= 1e-8
    document['passed'] = passed
    emit(document)
    finish(passed)
