"""Coherent spaces as kernel objects, builtin spaces, sampled kernel checks.

Builtin kinds:
- finite:   points are indices into a user-supplied Hermitian matrix
- embedded: points are vectors v in C^d, K(v, v') = v* v'
- szego:    open unit disk, K(z, z') = 1 / (1 - conj(z) z')
- moebius:  |z1| > |z2| in C^2, K = 1 / (conj(z1) z1' - conj(z2) z2'), degree -1
- klauder:  [z0, zeta] in C x C^d, K = exp(conj(z0) + z0' + zeta* zeta'), degree 1

projective_extension and times_space build new spaces from old ones.
"""

import cmath
import logging
import math

import numpy as np
from scipy import linalg

from errors import (DomainError, KernelSymmetryError, NotProjectiveError,
                    SingularityError)
from models import (CoherentSpace, DiskPoint, EmbeddedPoint, FinitePoint,
                    KlauderPoint, MoebiusPoint, ProjectivePoint, SampleSet,
                    SeparableSpec, TimesPoint)

logger = logging.getLogger(__name__)

# Strict domain inequalities keep this much distance from the boundary.
DOMAIN_MARGIN = 1e-12
PSD_EPS = 1e-10
HERMITIAN_TOL = 1e-12
PROJECTIVITY_TOL = 1e-10
_TINY = 1e-300


def _finite(*values):
    return all(math.isfinite(v.real) and math.isfinite(v.imag) for v in values)


def _reciprocal(denominator, kind):
    if denominator == 0:
        raise SingularityError(f"{kind} kernel denominator vanished")
    return 1.0 / denominator


# ---------------------------------------------------------------------------
# Builtin spaces
# ---------------------------------------------------------------------------

def szego_space():
    def contains(point):
        return (isinstance(point, DiskPoint) and _finite(point.z)
                and abs(point.z) < 1.0 - DOMAIN_MARGIN)

    def kernel(z, w):
        return _reciprocal(1.0 - z.z.conjugate() * w.z, 'szego')

    return CoherentSpace('szego', kernel, contains, label='Szego disk')


def moebius_space():
    def contains(point):
        return (isinstance(point, MoebiusPoint) and _finite(point.z1, point.z2)
                and abs(point.z2) < abs(point.z1) * (1.0 - DOMAIN_MARGIN))

    def kernel(z, w):
        return _reciprocal(z.z1.conjugate() * w.z1 - z.z2.conjugate() * w.z2, 'moebius')

    def scale(lam, point):
        lam = complex(lam)
        return MoebiusPoint(lam * point.z1, lam * point.z2)

    return CoherentSpace('moebius', kernel, contains, projective_degree=-1,
                         scalar_multiply=scale, label='Moebius space')


def klauder_space(dim):
    """Klauder space over C^dim.

    Scalar multiplication is [z0 + log(alpha), zeta] with the principal
    branch of log; other branches change coherent states by unit phases.
    """
    if dim < 1:
        raise DomainError(f"Klauder dimension must be positive, got {dim}")

    def contains(point):
        return (isinstance(point, KlauderPoint) and len(point.zeta) == dim
                and _finite(point.z0, *point.zeta))

    def kernel(z, w):
        exponent = z.z0.conjugate() + w.z0
        for a, b in zip(z.zeta, w.zeta):
            exponent += a.conjugate() * b
        return cmath.exp(exponent)

    def scale(alpha, point):
        alpha = complex(alpha)
        if alpha == 0:
            raise DomainError("scalar multiplication by 0 is not defined")
        return KlauderPoint(point.z0 + cmath.log(alpha), point.zeta)

    return CoherentSpace('klauder', kernel, contains, projective_degree=1,
                         scalar_multiply=scale, dim=dim, label=f'Klauder space Kl[C^{dim}]')


def embedded_space(dim):
    def contains(point):
        return isinstance(point, EmbeddedPoint) and len(point.v) == dim and _finite(*point.v)

    def kernel(z, w):
        return complex(sum(a.conjugate() * b for a, b in zip(z.v, w.v)))

    def scale(lam, point):
        lam = complex(lam)
        return EmbeddedPoint(tuple(lam * c for c in point.v))

    return CoherentSpace('embedded', kernel, contains, projective_degree=1,
                         scalar_multiply=scale, dim=dim, label=f'C^{dim} embedded')


def finite_space(matrix):
    """Finite space on indices 0..n-1 with the given kernel matrix."""
    matrix = np.array(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"finite kernel must be a square matrix, got shape {matrix.shape}")
    asym = np.max(np.abs(matrix - matrix.conj().T), initial=0.0)
    if asym > HERMITIAN_TOL * (1.0 + np.max(np.abs(matrix), initial=0.0)):
        raise KernelSymmetryError(f"finite kernel is not Hermitian (deviation {asym:.3e})")
    matrix.setflags(write=False)
    size = matrix.shape[0]

    def contains(point):
        return isinstance(point, FinitePoint) and 0 <= point.index < size

    def kernel(z, w):
        return complex(matrix[z.index, w.index])

    return CoherentSpace('finite', kernel, contains, dim=size, label=f'finite space of {size} points')


BUILTIN_SPACES = {
    'szego': lambda dim=None: szego_space(),
    'moebius': lambda dim=None: moebius_space(),
    'klauder': lambda dim=1: klauder_space(dim),
    'embedded': lambda dim=1: embedded_space(dim),
}


def builtin_space(kind, dim=None):
    builder = BUILTIN_SPACES.get(kind)
    if builder is None:
        raise DomainError(f"unknown builtin space {kind!r}; choose from {sorted(BUILTIN_SPACES)}")
    return builder() if dim is None else builder(dim)


# ---------------------------------------------------------------------------
# Derived spaces
# ---------------------------------------------------------------------------

def projective_extension(space, e):
    """Space on C* x Z with kernel conj(lam)**e K(z, z') lam'**e."""
    if not isinstance(e, int) or isinstance(e, bool) or e == 0:
        raise NotProjectiveError(f"projective degree must be a nonzero integer, got {e!r}")

    def contains(point):
        return (isinstance(point, ProjectivePoint) and _finite(point.lam)
                and point.lam != 0 and space.domain_contains(point.base))

    def kernel(z, w):
        return z.lam.conjugate() ** e * space.kernel(z.base, w.base) * w.lam ** e

    def scale(lam, point):
        return ProjectivePoint(complex(lam) * point.lam, point.base)

    return CoherentSpace('projective', kernel, contains, projective_degree=e,
                         scalar_multiply=scale, dim=space.dim, base=space,
                         label=f'P^{e}({space.label or space.kind})')


def scalar_separable(space, c):
    """Scalar multiplication by c as a separable map, chi = c**e."""
    if not space.is_projective:
        raise NotProjectiveError(f"{space.kind} space has no scalar multiplication")
    c = complex(c)
    if c == 0:
        raise DomainError("scalar multiplication by 0 is not defined")
    e = space.projective_degree
    return SeparableSpec(
        alpha=lambda z: space.scalar_multiply(c, z),
        chi=c ** e,
        label=f'scale({c:g})',
        adjoint=lambda z: space.scalar_multiply(c.conjugate(), z),
        inverse=lambda z: space.scalar_multiply(1.0 / c, z),
    )


def times_space(space):
    """Product space over pairs (alpha, z) with K(alpha' z, alpha z').

    Points are TimesPoint(alpha, z) where alpha is a SeparableSpec; for the
    builtins use scalar_separable to obtain the scalar multiplications.
    """
    def contains(point):
        return (isinstance(point, TimesPoint) and callable(getattr(point.alpha, 'alpha', None))
                and space.domain_contains(point.base))

    def kernel(z, w):
        return space.kernel(w.alpha(z.base), z.alpha(w.base))

    return CoherentSpace('times', kernel, contains, dim=space.dim, base=space,
                         label=f'sep x {space.label or space.kind}')


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_kernel(space, z, w):
    for name, point in (('z', z), ("z'", w)):
        if not space.domain_contains(point):
            raise DomainError(f"{name} = {point!r} is outside the {space.kind} domain")
    return complex(space.kernel(z, w))


def gram_matrix(sample):
    """G[j, k] = K(z_j, z_k), Hermitized after checking it already is."""
    kernel = sample.space.kernel
    points = sample.points
    n = len(points)
    gram = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            gram[j, k] = kernel(points[j], points[k])
    if not np.all(np.isfinite(gram)):
        raise SingularityError("Gram matrix has non-finite entries")
    hermitian = 0.5 * (gram + gram.conj().T)
    correction = linalg.norm(gram - hermitian)
    scale = linalg.norm(hermitian)
    if correction > HERMITIAN_TOL * max(scale, 1.0):
        raise KernelSymmetryError(
            f"Gram matrix of {sample.space.kind} sample is not Hermitian: "
            f"correction {correction:.3e} relative to norm {scale:.3e}"
        )
    return hermitian


def check_hermitian(sample, tol=HERMITIAN_TOL):
    """Largest |K(z, z') - conj K(z', z)| / (1 + |K(z, z')|) over sample pairs."""
    kernel = sample.space.kernel
    worst = 0.0
    for z in sample:
        for w in sample:
            a = kernel(z, w)
            worst = max(worst, abs(a - kernel(w, z).conjugate()) / (1.0 + abs(a)))
    return {'max_residual': worst, 'tolerance': tol, 'passed': worst <= tol}


def check_positive_type(sample, eps=PSD_EPS):
    """Passes iff lambda_min(G) >= -eps * max(lambda_max(G), 1)."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    eigenvalues = linalg.eigvalsh(gram_matrix(sample))
    lam_min, lam_max = float(eigenvalues[0]), float(eigenvalues[-1])
    threshold = -eps * max(lam_max, 1.0)
    return {
        'n': len(sample),
        'min_eigenvalue': lam_min,
        'max_eigenvalue': lam_max,
        'threshold': threshold,
        'passed': lam_min >= threshold,
    }


def random_scalars(rng, count, low=0.5, high=2.0):
    """Nonzero complex scalars, modulus log-uniform in [low, high], uniform phase."""
    modulus = np.exp(rng.uniform(np.log(low), np.log(high), size=count))
    phase = rng.uniform(-np.pi, np.pi, size=count)
    return [complex(m * np.exp(1j * t)) for m, t in zip(modulus, phase)]


def check_projectivity(space, sample, trials=8, rng=None, lambdas=None, tol=PROJECTIVITY_TOL):
    """Max relative residual of K(z', lam z) = lam**e K(z', z) over sample pairs."""
    if not space.is_projective:
        raise NotProjectiveError(f"{space.kind} space has no scalar multiplication")
    if lambdas is None:
        rng = rng if rng is not None else np.random.default_rng(0)
        lambdas = random_scalars(rng, trials)
    e = space.projective_degree
    worst = 0.0
    for lam in lambdas:
        lam = complex(lam)
        factor = lam ** e
        for z in sample:
            scaled = space.scalar_multiply(lam, z)
            for w in sample:
                lhs = space.kernel(w, scaled)
                rhs = factor * space.kernel(w, z)
                worst = max(worst, abs(lhs - rhs) / max(abs(rhs), _TINY))
    return {
        'degree': e,
        'trials': len(lambdas),
        'max_residual': worst,
        'tolerance': tol,
        'passed': worst <= tol,
    }


# ---------------------------------------------------------------------------
# Random points
# ---------------------------------------------------------------------------

def _disk(rng, size, radius):
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, size=size))
    t = rng.uniform(-np.pi, np.pi, size=size)
    return r * np.exp(1j * t)


def random_points(space, count, rng, radius=None):
    """Seeded random points in a space's domain.

    - szego: uniform in the disk of radius 0.9 (uniform radius squared)
    - moebius: z1, z2 uniform in the unit disk, kept if |z2| < 0.9|z1| and |z1| > 0.1
    - klauder: zeta components uniform in the disk of radius 1, z0 = -|zeta|^2 / 2
    - embedded: components uniform in the unit disk
    - projective: scalar log-uniform in [0.5, 2] times a random base point
    - times: scalar separable map log-uniform in [0.5, 2] with a random base point
    """
    kind = space.kind
    if kind == 'szego':
        return [DiskPoint(complex(z)) for z in _disk(rng, count, radius or 0.9)]
    if kind == 'moebius':
        points = []
        while len(points) < count:
            z1, z2 = _disk(rng, 2, 1.0)
            if abs(z1) > 0.1 and abs(z2) < 0.9 * abs(z1):
                points.append(MoebiusPoint(complex(z1), complex(z2)))
        return points
    if kind == 'klauder':
        points = []
        for _ in range(count):
            zeta = _disk(rng, space.dim, radius or 1.0)
            z0 = -0.5 * float(np.vdot(zeta, zeta).real)
            points.append(KlauderPoint(complex(z0), tuple(complex(c) for c in zeta)))
        return points
    if kind == 'embedded':
        return [EmbeddedPoint(tuple(complex(c) for c in _disk(rng, space.dim, radius or 1.0)))
                for _ in range(count)]
    if kind == 'finite':
        indices = rng.choice(space.dim, size=min(count, space.dim), replace=False)
        return [FinitePoint(int(i)) for i in indices]
    if kind == 'projective':
        bases = random_points(space.base, count, rng, radius)
        return [ProjectivePoint(lam, b) for lam, b in zip(random_scalars(rng, count), bases)]
    if kind == 'times':
        bases = random_points(space.base, count, rng, radius)
        return [TimesPoint(scalar_separable(space.base, c), b)
                for c, b in zip(random_scalars(rng, count), bases)]
    raise DomainError(f"no random point generator for {kind!r} spaces")


def random_sample(space, count, rng, radius=None):
    return SampleSet(space, random_points(space, count, rng, radius))


# Separated samples keep the normalized Gram matrix this far from singular.
SEPARATION_FLOOR = 1e-3
_SEPARATION_ATTEMPTS = 1000


def _circle_radius(count, base):
    """Equally spaced points at radius r have normalized Gram spectrum r^(2k), k < count."""
    if count < 2:
        return base
    return max(base, SEPARATION_FLOOR ** (1.0 / (2 * (count - 1))))


def _normalized_overlap(space, z, w):
    value = abs(eval_kernel(space, z, w))
    return value / math.sqrt(abs(eval_kernel(space, z, z)) * abs(eval_kernel(space, w, w)))


def separated_points(space, count, rng):
    """Seeded points whose coherent states are well separated.

    - szego: a randomly rotated regular polygon on a circle of radius >= 0.9
    - moebius: the same polygon for z2 / z1, with |z1| uniform in [0.5, 1)
    - klauder: rejection sampling until every pairwise normalized overlap is
      at most 0.5 / (count - 1), so the normalized Gram eigenvalues lie in
      [0.5, 1.5]; the zeta disk widens when a point cannot be placed
    """
    kind = space.kind
    if kind in ('szego', 'moebius'):
        radius = _circle_radius(count, 0.9 if kind == 'szego' else 0.85)
        phase = rng.uniform(-np.pi, np.pi)
        ratios = radius * np.exp(1j * (phase + 2 * np.pi * np.arange(count) / max(count, 1)))
        if kind == 'szego':
            return [DiskPoint(complex(a)) for a in ratios]
        z1 = np.sqrt(rng.uniform(0.25, 1.0, size=count)) * np.exp(1j * rng.uniform(-np.pi, np.pi, size=count))
        return [MoebiusPoint(complex(s), complex(s * a)) for s, a in zip(z1, ratios)]
    if kind != 'klauder':
        raise DomainError(f"no separated point generator for {kind!r} spaces")

    cap = 0.5 / max(count - 1, 1)
    spacing = math.sqrt(2.0 * math.log(1.0 / cap)) if cap < 1.0 else 1.0
    radius = spacing * math.sqrt(count)
    points = []
    while len(points) < count:
        for _ in range(_SEPARATION_ATTEMPTS):
            candidate = random_points(space, 1, rng, radius)[0]
            if all(_normalized_overlap(space, candidate, p) <= cap for p in points):
                points.append(candidate)
                break
        else:
            radius *= 1.5
            logger.debug("separated sample: widening zeta disk to %.3g after %d points",
                         radius, len(points))
    return points


def separated_sample(space, count, rng):
    return SampleSet(space, separated_points(space, count, rng))


# ---------------------------------------------------------------------------
# Hardy-space realization of the Szego and Moebius coherent states
# ---------------------------------------------------------------------------

def _hardy_ratio(space, point):
    if space.kind == 'szego':
        return 1.0 + 0j, point.z
    if space.kind == 'moebius':
        return 1.0 / point.z1, point.z2 / point.z1
    raise DomainError(f"no Hardy realization for {space.kind!r} spaces")


def hardy_vector(space, point, cutoff):
    """Taylor coefficients of the coherent state: prefactor * w**l, l = 0..cutoff.

    The truncated inner product converges to K(z, z') geometrically in |w w'|.
    """
    if not space.domain_contains(point):
        raise DomainError(f"{point!r} is outside the {space.kind} domain")
    prefactor, w = _hardy_ratio(space, point)
    return prefactor * w ** np.arange(cutoff + 1)


def hardy_overlap(space, z, w, cutoff):
    """Compare the truncated Hardy inner product with the closed-form kernel."""
    truncated = complex(np.vdot(hardy_vector(space, z, cutoff), hardy_vector(space, w, cutoff)))
    exact = eval_kernel(space, z, w)
    pz, rz = _hardy_ratio(space, z)
    pw, rw = _hardy_ratio(space, w)
    x = abs(rz) * abs(rw)
    tail = abs(pz) * abs(pw) * x ** (cutoff + 1) / (1.0 - x)
    error = abs(truncated - exact)
    logger.debug("hardy overlap cutoff=%d error=%.3e tail=%.3e", cutoff, error, tail)
    return {'truncated': truncated, 'exact': exact, 'error': error,
            'tail_bound': tail, 'passed': error <= tail + 1e-14 * (1.0 + abs(exact))}
