"""Commands on coherent maps and oscillator elements."""

import click
import numpy as np
from flask import Blueprint, current_app

import coherent_maps
import oscillator_algebra
from blueprints import config_seed, emit, finish, guarded
from errors import ConfigError, NotShadowError
from models import (dump_matrix, load_points, parse_json, point_from_json,
                    point_to_json, read_json)
from suite_engine import build_map, build_separable

maps_bp = Blueprint('maps', __name__, cli_group=None)

_map_argument = click.argument('map_file', metavar='MAP', type=click.Path(dir_okay=False))
_points_argument = click.argument('points', type=click.Path(dir_okay=False))


def _load_map(path, space, seed):
    """A map file holds one entry in the format of a suite's "maps" object."""
    spec = read_json(path)
    if not isinstance(spec, dict) or 'family' not in spec:
        raise ConfigError("map file needs a 'family'", field=path)
    name = spec.get('label', 'A')
    return name, spec, build_map(name, spec, space, np.random.default_rng([seed, 0]))


@maps_bp.cli.command('quantize')
@_points_argument
@_map_argument
@click.option('--depth', type=int, default=1, show_default=True)
@click.option('--tol', type=float, default=None)
@click.option('--seed', type=int, default=None)
@click.option('--out', type=click.Path(dir_okay=False), help='Write Gamma(A) here.')
@guarded
def quantize(points, map_file, depth, tol, seed, out):
    """Gamma(A) on the orbit of the points under A."""
    sample = load_points(points)
    _, _, spec = _load_map(map_file, sample.space, config_seed(seed))
    orbit = coherent_maps.build_orbit(sample, [spec], depth=depth,
                                      eps_rank=current_app.config['EPS_RANK'])
    tol = current_app.config['SHADOW_TOL'] if tol is None else tol
    try:
        gamma = coherent_maps.quantize(orbit, spec, tol)
    except NotShadowError as e:
        emit({'map': spec.label, 'passed': False, 'error': str(e)})
        finish(False)
    if out:
        dump_matrix(out, gamma.M)
    emit({'map': spec.label, 'orbit_points': len(orbit.closed_points),
          'rank': orbit.factorization.rank, 'support': len(gamma.support),
          'residual': gamma.residual, 'tolerance': tol, 'passed': True})
    finish(True)


@maps_bp.cli.command('check-coherent')
@_points_argument
@_map_argument
@click.option('--tol', type=float, default=coherent_maps.COHERENCE_TOL, show_default=True)
@click.option('--seed', type=int, default=None)
@guarded
def check_coherent(points, map_file, tol, seed):
    """K(z, A z') = K(A* z, z') over all sample pairs."""
    sample = load_points(points)
    _, _, spec = _load_map(map_file, sample.space, config_seed(seed))
    report = coherent_maps.check_coherence(sample.space, spec, sample, tol)
    emit(report)
    finish(report['passed'])


@maps_bp.cli.command('check-separable')
@_points_argument
@_map_argument
@click.option('--chi', type=complex, default=None, help='Separation constant for non-scalar maps.')
@click.option('--tol', type=float, default=coherent_maps.COHERENCE_TOL, show_default=True)
@click.option('--seed', type=int, default=None)
@guarded
def check_separable(points, map_file, chi, tol, seed):
    """K(z, alpha z') = chi K(z, z') over all sample pairs."""
    sample = load_points(points)
    name, raw, spec = _load_map(map_file, sample.space, config_seed(seed))
    if chi is None:
        sep = build_separable(name, raw, sample.space, map_file)
    else:
        sep = coherent_maps.SeparableSpec(alpha=spec.forward, chi=chi, label=name)
    report = coherent_maps.check_separable(sample.space, sep, sample, tol)
    emit(report)
    finish(report['passed'])


@maps_bp.cli.command('osc')
@click.argument('operation', type=click.Choice(['product', 'adjoint', 'inverse', 'action']))
@click.argument('element', type=click.Path(dir_okay=False))
@click.argument('other', required=False, type=click.Path(dir_okay=False))
@click.option('--point', help='Klauder point as JSON {"z0": [re, im], "zeta": [...]}.')
@guarded
def osc(operation, element, other, point):
    """Evaluate the oscillator semigroup: product, adjoint, inverse or action on a point."""
    x = oscillator_algebra.from_dict(read_json(element), element)
    if operation == 'product':
        if other is None:
            raise click.UsageError("product needs a second element")
        y = oscillator_algebra.from_dict(read_json(other), other)
        emit(oscillator_algebra.to_dict(oscillator_algebra.multiply(x, y)))
    elif operation == 'adjoint':
        emit(oscillator_algebra.to_dict(oscillator_algebra.adjoint(x)))
    elif operation == 'inverse':
        result = oscillator_algebra.to_dict(oscillator_algebra.inverse(x))
        result['condition_number'] = oscillator_algebra.condition_number(x)
        emit(result)
    else:
        if point is None:
            raise click.UsageError("action needs --point")
        z = point_from_json('klauder', parse_json(point, '--point'), '--point')
        image = oscillator_algebra.act_on_point(x, z)
        emit({'point': point_to_json(image)})
    finish(True)
