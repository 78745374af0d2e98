"""Verification suite engine.

A suite is one JSON document naming a space, a sample, a set of maps and an
ordered list of checks. run_suite() builds the shared objects once and then
dispatches every check to its executor:
1. each check runs in isolation; an exception marks that check failed and
   is recorded in the event log, the remaining checks still run
2. checks may run on a thread pool, the report keeps config order
3. randomness comes from numpy generators seeded by (seed, check index),
   so a report depends only on the config and the seed
"""

import json
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

import coherent_maps
import fock_space
import kernel_spaces
import oscillator_algebra
import quantum_realization
from errors import ConfigError, ParseError
from models import (decode_complex, decode_matrix, decode_vector, load_points,
                    point_from_json, read_json, SampleSet, space_from_document)

logger = logging.getLogger(__name__)

__version__ = '0.4.0'
TOOL_NAME = 'coherent-workbench'

SUITES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'suites')
BUILTIN_SUITES = ('moebius-gamma', 'klauder-unitary', 'fock-ccr', 'regression', 'wrong-adjoint')

DEFAULT_TOLERANCES = {
    'psd': kernel_spaces.PSD_EPS,
    'hermitian': kernel_spaces.HERMITIAN_TOL,
    'projectivity': kernel_spaces.PROJECTIVITY_TOL,
    'shadow': quantum_realization.SHADOW_TOL,
    'coherence': coherent_maps.COHERENCE_TOL,
    'quantize': coherent_maps.QUANTIZE_TOL,
    'parallel': coherent_maps.PARALLEL_EPS,
    'ccr': fock_space.CCR_TOL,
    'weyl': fock_space.WEYL_TOL,
    'overlap': 1e-10,
    'gamma': 1e-8,
    'quadrature': 1e-8,
    'oracle': 1e-12,
    'oracle_inverse': 1e-10,
}

# Inverses of worse conditioned elements are skipped by the oscillator oracle.
ORACLE_MAX_CONDITION = 1e4

_TOP_LEVEL_KEYS = {'name', 'seed', 'space', 'sample', 'maps', 'orbit', 'checks',
                   'tolerances', 'eps_rank', 'outputs', 'description'}
_SAMPLE_CHECKS = {'positive_type', 'hermitian', 'projectivity', 'shadow_identity',
                  'coherence', 'separable', 'homomorphism', 'unitary',
                  'adjoint_exchange', 'slenderness', 'normal_kernel'}


@dataclass
class SuiteConfig:
    name: str
    seed: int = 0
    space: dict = None
    sample: dict = None
    maps: dict = field(default_factory=dict)
    orbit: dict = None
    checks: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    eps_rank: float = quantum_realization.EPS_RANK
    outputs: dict = field(default_factory=dict)
    source: str = '<config>'

    def tolerance(self, check, key):
        if 'tol' in check:
            return float(check['tol'])
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))


# ---------------------------------------------------------------------------
# Loading and validation
# ---------------------------------------------------------------------------

def _require(condition, message, where):
    if not condition:
        raise ConfigError(message, field=where)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def validate_config(raw, source='<config>'):
    """Turn a decoded JSON document into a SuiteConfig or raise ConfigError."""
    _require(isinstance(raw, dict), "suite must be a JSON object", source)
    unknown = sorted(set(raw) - _TOP_LEVEL_KEYS)
    _require(not unknown, f"unknown keys {unknown}", source)
    name = raw.get('name', os.path.splitext(os.path.basename(source))[0])
    _require(isinstance(name, str) and name, "must be a nonempty string", 'name')
    seed = raw.get('seed', 0)
    _require(_is_int(seed) and seed >= 0, f"must be a nonnegative integer, got {seed!r}", 'seed')

    space = raw.get('space')
    if space is not None:
        _require(isinstance(space, dict) and 'kind' in space, "needs a 'kind'", 'space')
    sample = raw.get('sample')
    if sample is not None:
        _require(isinstance(sample, dict), "must be an object", 'sample')
        _require(space is not None or 'file' in sample, "a sample needs a space", 'sample')
        modes = [k for k in ('count', 'points', 'file') if k in sample]
        _require(len(modes) == 1, "give exactly one of 'count', 'points', 'file'", 'sample')
        if 'count' in sample:
            _require(_is_int(sample['count']) and sample['count'] > 0,
                     f"must be a positive integer, got {sample['count']!r}", 'sample.count')
        if 'separated' in sample:
            _require(isinstance(sample['separated'], bool), "must be true or false", 'sample.separated')
            _require('count' in sample, "only random samples can be separated", 'sample.separated')

    maps = raw.get('maps', {})
    _require(isinstance(maps, dict), "must be an object of named maps", 'maps')
    for map_name, spec in maps.items():
        _require(isinstance(spec, dict) and 'family' in spec, "needs a 'family'", f"maps.{map_name}")
        _require(spec['family'] in _MAP_BUILDERS,
                 f"unknown family {spec['family']!r}; choose from {sorted(_MAP_BUILDERS)}",
                 f"maps.{map_name}.family")

    checks = raw.get('checks', [])
    _require(isinstance(checks, list), "must be a list", 'checks')
    for idx, check in enumerate(checks):
        where = f"checks[{idx}]"
        _require(isinstance(check, dict) and 'kind' in check, "needs a 'kind'", where)
        kind = check['kind']
        _require(kind in _CHECK_EXECUTORS,
                 f"unknown kind {kind!r}; choose from {sorted(_CHECK_EXECUTORS)}", f"{where}.kind")
        if kind in _SAMPLE_CHECKS:
            _require(sample is not None, f"'{kind}' needs a sample", where)
        for ref in _referenced_maps(check):
            _require(_base_name(ref) in maps or _base_name(ref) == 'identity',
                     f"unknown map {ref!r}", where)
        expect = check.get('expect', 'pass')
        _require(expect in ('pass', 'fail'), f"expect must be 'pass' or 'fail', got {expect!r}",
                 f"{where}.expect")

    tolerances = raw.get('tolerances', {})
    _require(isinstance(tolerances, dict), "must be an object", 'tolerances')
    for key, value in tolerances.items():
        _require(key in DEFAULT_TOLERANCES, f"unknown tolerance {key!r}", f"tolerances.{key}")
        _require(isinstance(value, (int, float)) and value > 0,
                 f"must be a positive number, got {value!r}", f"tolerances.{key}")

    eps_rank = raw.get('eps_rank', quantum_realization.EPS_RANK)
    _require(isinstance(eps_rank, (int, float)) and 0 < eps_rank < 1,
             f"must lie in (0, 1), got {eps_rank!r}", 'eps_rank')

    return SuiteConfig(name=name, seed=seed, space=space, sample=sample, maps=maps,
                       orbit=raw.get('orbit'), checks=checks, tolerances=tolerances,
                       eps_rank=float(eps_rank), outputs=raw.get('outputs', {}), source=source)


def load_suite(name_or_path):
    """A builtin suite by name, or a suite file by path."""
    path = name_or_path
    if name_or_path in BUILTIN_SUITES:
        path = os.path.join(SUITES_DIR, f"{name_or_path}.json")
    return validate_config(read_json(path), source=path)


# ---------------------------------------------------------------------------
# Building spaces, samples and maps
# ---------------------------------------------------------------------------

def _base_name(ref):
    for suffix in ('*', '^-1'):
        if ref.endswith(suffix):
            return ref[:-len(suffix)]
    return ref


def _referenced_maps(check):
    refs = list(check.get('maps', []))
    if 'map' in check:
        refs.append(check['map'])
    refs.extend((check.get('orbit') or {}).get('maps', []))
    return [part for ref in refs for part in ref.split('.')]


def build_space(spec, where='space'):
    try:
        return space_from_document({'space': spec.get('kind'), 'dim': spec.get('dim'),
                                    'matrix': spec.get('matrix')}, source=where)
    except ParseError as e:
        raise ConfigError(str(e), field=where) from e


def build_sample(config, space, rng):
    spec = config.sample
    if 'file' in spec:
        path = spec['file']
        if not os.path.isabs(path):
            path = os.path.join(os.path.dirname(os.path.abspath(config.source)), path)
        return load_points(path)
    if 'points' in spec:
        points = [point_from_json(space.kind, raw, f"sample.points[{i}]")
                  for i, raw in enumerate(spec['points'])]
        return SampleSet(space, points)
    if spec.get('separated'):
        return kernel_spaces.separated_sample(space, spec['count'], rng)
    return kernel_spaces.random_sample(space, spec['count'], rng, spec.get('radius'))


def _moebius(spec, space, rng, where):
    if 'matrix' in spec:
        A = decode_matrix(spec['matrix'], f"{where}.matrix")
    elif spec.get('random') == 'gu11':
        A = coherent_maps.random_gu11(rng, spec.get('scale', 0.5))
    else:
        A = coherent_maps.random_moebius_matrix(rng, spec.get('scale', 0.3))
    adjoint = spec.get('adjoint', 'sigma')
    if adjoint == 'sigma':
        return coherent_maps.moebius_map(A)
    if adjoint == 'conjugate_transpose':
        return coherent_maps.moebius_map(A, adjoint_matrix=A.conj().T)
    return coherent_maps.moebius_map(A, adjoint_matrix=decode_matrix(adjoint, f"{where}.adjoint"))


def _oscillator(spec, space, rng, where):
    d = space.dim or 1
    if 'element' in spec:
        x = oscillator_algebra.from_dict(spec['element'], f"{where}.element")
    elif spec.get('random') == 'unitary':
        x = oscillator_algebra.embed_unitary(
            oscillator_algebra.random_unitary_element(rng, d, spec.get('scale', 0.5)))
    else:
        x = oscillator_algebra.random_element(rng, d, spec.get('scale', 0.5))
    return coherent_maps.klauder_map(x)


def _unitary(spec, space, rng, where):
    u = oscillator_algebra.UnitaryOscElement(
        float(spec.get('alpha_im', 0.0)),
        decode_vector(spec['q'], f"{where}.q"),
        decode_matrix(spec['A'], f"{where}.A"),
    )
    return coherent_maps.klauder_map(oscillator_algebra.embed_unitary(u))


def _heisenberg(spec, space, rng, where):
    w = oscillator_algebra.HeisenbergElement(float(spec.get('lambda', 0.0)),
                                             decode_vector(spec['q'], f"{where}.q"))
    return coherent_maps.klauder_map(oscillator_algebra.heisenberg_embed(w))


def _scalar(spec, space, rng, where):
    return coherent_maps.scalar_map(space, decode_complex(spec['c'], f"{where}.c"))


def _identity(spec, space, rng, where):
    return coherent_maps.IDENTITY_MAP


_MAP_BUILDERS = {
    'moebius': _moebius,
    'oscillator': _oscillator,
    'unitary': _unitary,
    'heisenberg': _heisenberg,
    'scalar': _scalar,
    'identity': _identity,
}


def build_map(name, spec, space, rng):
    """MapSpec for one entry of a suite's "maps" object."""
    where = f"maps.{name}"
    try:
        spec_map = _MAP_BUILDERS[spec['family']](spec, space, rng, where)
    except KeyError as e:
        raise ConfigError(f"missing field {e}", field=where) from e
    return coherent_maps.MapSpec(forward=spec_map.forward, adjoint=spec_map.adjoint,
                                 inverse=spec_map.inverse, label=name)


def build_separable(name, spec, space, where):
    if spec['family'] == 'scalar':
        sep = kernel_spaces.scalar_separable(space, decode_complex(spec['c'], f"{where}.c"))
        return coherent_maps.SeparableSpec(alpha=sep.alpha, chi=sep.chi, label=name,
                                           adjoint=sep.adjoint, inverse=sep.inverse)
    if spec['family'] == 'identity':
        return coherent_maps.SeparableSpec(alpha=lambda z: z, chi=1.0, label=name,
                                           adjoint=lambda z: z, inverse=lambda z: z)
    raise ConfigError(f"family {spec['family']!r} has no separation constant", field=where)


# ---------------------------------------------------------------------------
# Run context
# ---------------------------------------------------------------------------

@dataclass
class SuiteContext:
    config: SuiteConfig
    space: object = None
    sample: SampleSet = None
    maps: dict = field(default_factory=dict)
    orbits: dict = field(default_factory=dict)
    _factorization: object = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def map(self, ref):
        """A map by name; 'A*' is the adjoint of A, 'A.B' the composition."""
        if '.' in ref:
            parts = [self.map(part) for part in ref.split('.')]
            result = parts[-1]
            for part in reversed(parts[:-1]):
                result = coherent_maps.compose(part, result)
            return result
        if ref.endswith('*'):
            return coherent_maps.adjoint_map(self.map(ref[:-1]))
        if ref == 'identity' and ref not in self.maps:
            return coherent_maps.IDENTITY_MAP
        return self.maps[ref]

    @property
    def factorization(self):
        if self._factorization is None:
            with self._lock:
                if self._factorization is None:
                    self._factorization = quantum_realization.factor_gram(self.sample, self.config.eps_rank)
        return self._factorization

    def orbit(self, check):
        return self.orbits[_orbit_key(self.config, check)]


def _default_orbit_maps(check):
    kind = check['kind']
    if kind == 'homomorphism':
        a, b = check['maps']
        return [b, f"{a}.{b}"]
    if kind == 'adjoint_exchange':
        return [check['map'], f"{check['map']}*"]
    if kind == 'normal_kernel':
        return [f"{check['map']}*", f"{check['map']}^-1"]
    return [check['map']] if 'map' in check else []


def _orbit_key(config, check):
    orbit = check.get('orbit') or config.orbit or {}
    maps = orbit.get('maps') or _default_orbit_maps(check)
    return tuple(maps), int(orbit.get('depth', 1))


def _resolve_orbit_map(ctx, ref):
    if ref.endswith('^-1'):
        return coherent_maps.inverse_map(ctx.map(ref[:-3]))
    return ctx.map(ref)


_ORBIT_CHECKS = {'homomorphism', 'unitary', 'adjoint_exchange', 'normal_kernel'}


def prepare_context(config, seed):
    """Space, sample, maps and every orbit the checks need, built in config order."""
    rng = np.random.default_rng([seed, 0])
    ctx = SuiteContext(config=config)
    if config.space is not None:
        ctx.space = build_space(config.space)
    if config.sample is not None:
        ctx.sample = build_sample(config, ctx.space, rng)
        ctx.space = ctx.sample.space
    for name, spec in config.maps.items():
        ctx.maps[name] = build_map(name, spec, ctx.space, rng)
    for check in config.checks:
        if check['kind'] not in _ORBIT_CHECKS:
            continue
        key = _orbit_key(config, check)
        if key not in ctx.orbits:
            maps = [_resolve_orbit_map(ctx, ref) for ref in key[0]]
            ctx.orbits[key] = coherent_maps.build_orbit(ctx.sample, maps, depth=key[1],
                                                        eps_rank=config.eps_rank)
    return ctx


# ---------------------------------------------------------------------------
# Check executors: (ctx, check, rng) -> (passed, residual, tolerance)
# ---------------------------------------------------------------------------

def _check_positive_type(ctx, check, rng):
    tol = ctx.config.tolerance(check, 'psd')
    report = kernel_spaces.check_positive_type(ctx.sample, tol)
    residual = max(0.0, -report['min_eigenvalue']) / max(report['max_eigenvalue'], 1.0)
    return report['passed'], residual, tol


def _check_hermitian(ctx, check, rng):
    report = kernel_spaces.check_hermitian(ctx.sample, ctx.config.tolerance(check, 'hermitian'))
    return report['passed'], report['max_residual'], report['tolerance']


def _check_projectivity(ctx, check, rng):
    report = kernel_spaces.check_projectivity(ctx.space, ctx.sample, trials=check.get('trials', 8),
                                              rng=rng, tol=ctx.config.tolerance(check, 'projectivity'))
    return report['passed'], report['max_residual'], report['tolerance']


def _check_shadow_identity(ctx, check, rng):
    tol = ctx.config.tolerance(check, 'shadow')
    fact = ctx.factorization
    op = quantum_realization.operator_from_kernel(fact, fact.G)
    residual = float(linalg.norm(op.M - np.eye(fact.rank)))
    return residual <= tol, residual, tol


def _check_coherence(ctx, check, rng):
    report = coherent_maps.check_coherence(ctx.space, ctx.map(check['map']), ctx.sample,
                                           ctx.config.tolerance(check, 'coherence'))
    return report['passed'], report['max_residual'], report['tolerance']


def _check_separable(ctx, check, rng):
    """A scalar map carries its own chi; any other map is tested against check["chi"]."""
    name = check['map']
    spec = ctx.config.maps.get(name, {'family': 'identity'})
    if 'chi' in check:
        spec_map = ctx.map(name)
        sep = coherent_maps.SeparableSpec(alpha=spec_map.forward, label=name,
                                          chi=decode_complex(check['chi'], 'chi'))
    else:
        sep = build_separable(name, spec, ctx.space, f"maps.{name}")
    report = coherent_maps.check_separable(ctx.space, sep, ctx.sample,
                                           ctx.config.tolerance(check, 'coherence'))
    return report['passed'], report['max_residual'], report['tolerance']


def _check_homomorphism(ctx, check, rng):
    a, b = (ctx.map(ref) for ref in check['maps'])
    report = coherent_maps.verify_homomorphism(ctx.orbit(check), a, b,
                                               ctx.config.tolerance(check, 'quantize'))
    return report['passed'], report['residual'], report['tolerance']


def _check_unitary(ctx, check, rng):
    report = coherent_maps.verify_unitary(ctx.orbit(check), ctx.map(check['map']),
                                          ctx.config.tolerance(check, 'quantize'))
    residual = max(report['kernel_residual'], report['operator_residual'])
    return report['passed'], residual, report['tolerance']


def _check_adjoint_exchange(ctx, check, rng):
    report = coherent_maps.verify_adjoint_exchange(ctx.orbit(check), ctx.map(check['map']),
                                                   ctx.config.tolerance(check, 'quantize'))
    return report['passed'], report['residual'], report['tolerance']


def _check_normal_kernel(ctx, check, rng):
    """Conjugation law N(AX) = Gamma(A) N(X) Gamma(A)^-1 for X(z, z') = 1 + conj(zeta) zeta'."""
    def kernel(z, w):
        return 1.0 + sum(a.conjugate() * b for a, b in zip(z.zeta, w.zeta))

    report = coherent_maps.conjugate_normal_kernel(ctx.orbit(check), ctx.map(check['map']), kernel,
                                                   ctx.config.tolerance(check, 'quantize'))
    return report['passed'], report['residual'], report['tolerance']


def _check_slenderness(ctx, check, rng):
    report = coherent_maps.slenderness_probe(ctx.space, ctx.sample,
                                             ctx.config.tolerance(check, 'parallel'),
                                             ctx.config.eps_rank)
    return report['passed'], float(abs(report['rank'] - report['classes'])), 0.0


def _fock_dims(ctx, check):
    d = check.get('dim', (ctx.space.dim if ctx.space is not None and ctx.space.kind == 'klauder' else 1))
    return d, check.get('cutoff', fock_space.default_cutoff(d))


def _check_ccr(ctx, check, rng):
    d, cutoff = _fock_dims(ctx, check)
    report = fock_space.ccr_check(d, cutoff, ctx.config.tolerance(check, 'ccr'))
    return report['passed'], report['max_residual'], report['tolerance']


def _check_weyl(ctx, check, rng):
    d, cutoff = _fock_dims(ctx, check)
    p = decode_vector(check.get('p', [0.5] * d), 'p')
    q = decode_vector(check.get('q', [0.5] * d), 'q')
    report = fock_space.weyl_check(p, q, cutoff, check.get('probe_degree', cutoff // 4),
                                   ctx.config.tolerance(check, 'weyl'))
    return report['passed'], report['max_difference'], report['tolerance']


def _random_zetas(rng, d, count, radius=1.0):
    space = kernel_spaces.klauder_space(d)
    return [np.array(z.zeta) for z in kernel_spaces.random_points(space, count, rng, radius)]


def _check_glauber_overlap(ctx, check, rng):
    d, cutoff = _fock_dims(ctx, check)
    tol = ctx.config.tolerance(check, 'overlap')
    pairs = check.get('pairs', 50)
    zetas = _random_zetas(rng, d, 2 * pairs)
    worst, passed = 0.0, True
    for zeta, zeta2 in zip(zetas[::2], zetas[1::2]):
        report = fock_space.glauber_overlap(zeta, zeta2, cutoff)
        worst = max(worst, report['error'])
        passed = passed and report['passed']
    return passed and worst <= tol, worst, tol


def _check_gamma_action(ctx, check, rng):
    d, cutoff = _fock_dims(ctx, check)
    tol = ctx.config.tolerance(check, 'gamma')
    space = kernel_spaces.klauder_space(d)
    worst, passed = 0.0, True
    for _ in range(check.get('count', 20)):
        x = oscillator_algebra.random_element(rng, d, 0.5)
        z = kernel_spaces.random_points(space, 1, rng, 0.5)[0]
        report = fock_space.gamma_action_check(x, z, cutoff, tol)
        worst = max(worst, report['residual'])
        passed = passed and report['passed']
    return passed, worst, tol


def _check_gauss_hermite(ctx, check, rng):
    tol = ctx.config.tolerance(check, 'quadrature')
    space = kernel_spaces.klauder_space(1)
    points = kernel_spaces.random_points(space, 2 * check.get('pairs', 20), rng)
    worst = 0.0
    for z, z2 in zip(points[::2], points[1::2]):
        exact = kernel_spaces.eval_kernel(space, z, z2)
        value = fock_space.gauss_hermite_overlap(z, z2, check.get('nodes', fock_space.QUADRATURE_NODES))
        worst = max(worst, abs(value - exact) / abs(exact))
    return worst <= tol, worst, tol


def _check_oscillator_oracle(ctx, check, rng):
    """Structured product, adjoint and inverse against block-matrix arithmetic.

    Inverses are compared relative to the size of the block inverse, on
    elements with condition number at most ORACLE_MAX_CONDITION. The record
    carries whichever part is worse against its own tolerance.
    """
    tol = ctx.config.tolerance(check, 'oracle')
    tol_inverse = ctx.config.tolerance(check, 'oracle_inverse')
    worst = worst_inverse = 0.0
    for _ in range(check.get('pairs', 100)):
        d = int(rng.integers(1, check.get('max_dim', 4) + 1))
        x = oscillator_algebra.random_element(rng, d, contraction=False)
        y = oscillator_algebra.random_element(rng, d, contraction=False)
        bx, by = oscillator_algebra.as_block_matrix(x), oscillator_algebra.as_block_matrix(y)
        product = oscillator_algebra.as_block_matrix(oscillator_algebra.multiply(x, y))
        adjoint = oscillator_algebra.as_block_matrix(oscillator_algebra.adjoint(x))
        J = oscillator_algebra.block_involution(d)
        worst = max(worst, float(np.max(np.abs(product - bx @ by))),
                    float(np.max(np.abs(adjoint - J @ bx.conj().T @ J))))
        if oscillator_algebra.condition_number(x) > ORACLE_MAX_CONDITION:
            continue
        expected = linalg.inv(bx)
        inverse = oscillator_algebra.as_block_matrix(oscillator_algebra.inverse(x))
        worst_inverse = max(worst_inverse, float(np.max(np.abs(inverse - expected))
                                                 / max(1.0, np.max(np.abs(expected)))))
    passed = worst <= tol and worst_inverse <= tol_inverse
    if worst_inverse * tol > worst * tol_inverse:
        return passed, worst_inverse, tol_inverse
    return passed, worst, tol


_CHECK_EXECUTORS = {
    'positive_type': _check_positive_type,
    'hermitian': _check_hermitian,
    'projectivity': _check_projectivity,
    'shadow_identity': _check_shadow_identity,
    'coherence': _check_coherence,
    'separable': _check_separable,
    'homomorphism': _check_homomorphism,
    'unitary': _check_unitary,
    'adjoint_exchange': _check_adjoint_exchange,
    'normal_kernel': _check_normal_kernel,
    'slenderness': _check_slenderness,
    'ccr': _check_ccr,
    'weyl': _check_weyl,
    'glauber_overlap': _check_glauber_overlap,
    'gamma_action': _check_gamma_action,
    'gauss_hermite': _check_gauss_hermite,
    'oscillator_oracle': _check_oscillator_oracle,
}


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------

def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if np.isfinite(value) else None


def _run_check(ctx, index, check, seed):
    kind = check['kind']
    rng = np.random.default_rng([seed, index + 1])
    record = {'name': check.get('name', f"{kind}-{index}"), 'kind': kind, 'passed': False,
              'residual': None, 'tolerance': None, 'wall_time': 0.0, 'error': None}
    started = time.perf_counter()
    try:
        passed, residual, tolerance = _CHECK_EXECUTORS[kind](ctx, check, rng)
        expect_pass = check.get('expect', 'pass') == 'pass'
        record.update(passed=bool(passed) == expect_pass, residual=_finite_or_none(residual),
                      tolerance=_finite_or_none(tolerance))
    except Exception as e:
        logger.debug("check #%d (%s) raised", index, kind, exc_info=True)
        record['error'] = f"{type(e).__name__}: {e}"
    record['wall_time'] = time.perf_counter() - started
    return record


def run_suite(config, seed=None, workers=1):
    """Run every check of a suite and return the report.

    seed overrides the config's seed. A broken setup (space, sample or maps)
    raises ConfigError; a failing or erroring check only marks its record.
    """
    seed = config.seed if seed is None else seed
    report = {'tool': TOOL_NAME, 'version': __version__, 'suite': config.name, 'seed': seed,
              'checks': [], 'summary': {}, 'events': []}
    try:
        ctx = prepare_context(config, seed)
    except (ConfigError, ParseError):
        raise
    except Exception as e:
        raise ConfigError(f"cannot set up suite: {type(e).__name__}: {e}", field=config.name) from e

    indexed = list(enumerate(config.checks))
    if workers > 1 and len(indexed) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda item: _run_check(ctx, item[0], item[1], seed), indexed))
    else:
        records = [_run_check(ctx, index, check, seed) for index, check in indexed]

    for index, record in enumerate(records):
        report['checks'].append(record)
        if record['error'] is not None:
            report['events'].append(f"Check #{index} ({record['kind']}) FAILED: {record['error']}")
        elif not record['passed']:
            report['events'].append(
                f"Check #{index} ({record['kind']}) FAILED: residual {record['residual']} "
                f"above tolerance {record['tolerance']}"
            )
    passed = sum(1 for r in records if r['passed'])
    report['summary'] = {'total': len(records), 'passed': passed, 'failed': len(records) - passed}
    logger.info("suite %s seed %d: %d/%d checks passed", config.name, seed, passed, len(records))
    return report


def report_passed(report):
    return report['summary'].get('failed', 0) == 0


def report_json(report, strip_timing=False, indent=2):
    """Serialized report; strip_timing zeroes wall_time so runs compare byte for byte."""
    if strip_timing:
        report = dict(report, checks=[dict(r, wall_time=0.0) for r in report['checks']])
    return json.dumps(report, indent=indent, allow_nan=False)
