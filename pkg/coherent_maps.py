"""Coherent maps and their quantization on finite orbit samples.

A coherent map A: Z -> Z has an adjoint A* with K(z, A z') = K(A* z, z').
Its quantization Gamma(A) is the linear map with Gamma(A)|z> = |A z>. On a
finite orbit sample P this is fitted from the points z whose image A z is
again in P (structurally equal, so compose() chains functions instead of
multiplying matrices). The fit is certified through the shadow identity
<z|Gamma(A)|z'> = K(z, A z').

Operator identities are measured on coherent vectors of points where every
factor is determined by the orbit, so the checks never depend on how the
least-squares fit extends outside the sampled images.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from errors import (DomainError, IllConditionedError, InvalidMapError,
                    MissingAdjointError, NotProjectiveError, NotShadowError,
                    OrbitNotClosedError, SingularityError)
from kernel_spaces import eval_kernel, gram_matrix, scalar_separable
from models import (IDENTITY_MAP, MapSpec, MoebiusPoint, MultiplierSpec,
                    ProjectivePoint, SampleSet, SeparableSpec)
import oscillator_algebra
from quantum_realization import (EPS_RANK, OperatorOnSpan, factor_gram,
                                 operator_from_kernel, shadow_of_operator)

logger = logging.getLogger(__name__)

COHERENCE_TOL = 1e-10
QUANTIZE_TOL = 1e-8
PARALLEL_EPS = 1e-10
HOMOGENEITY_TOL = 1e-10
DEFAULT_DEPTH = 2
_TINY = 1e-300


def _relative(a, b):
    return abs(a - b) / max(abs(a), abs(b), _TINY)


def _points(sample):
    return sample.points if isinstance(sample, SampleSet) else tuple(sample)


# ---------------------------------------------------------------------------
# Orbit samples
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OrbitSample:
    base: SampleSet
    maps: tuple
    depth: int
    closed_points: SampleSet
    factorization: object
    index: dict

    def lookup(self, point):
        return self.index.get(point)

    def determined(self, fn):
        """(sources, images): sample indices k with fn(z_k) in the orbit, and where it lands."""
        sources, images = [], []
        for k, point in enumerate(self.closed_points):
            hit = self.index.get(fn(point))
            if hit is not None:
                sources.append(k)
                images.append(hit)
        return sources, images


def build_orbit(base, maps, depth=DEFAULT_DEPTH, eps_rank=EPS_RANK):
    """Base points plus their images under all words of length <= depth in maps."""
    points, index = [], {}

    def add(point):
        if point in index:
            return False
        index[point] = len(points)
        points.append(point)
        return True

    frontier = [p for p in base if add(p)]
    for _ in range(depth):
        fresh = []
        for point in frontier:
            for spec in maps:
                image = spec.forward(point)
                if add(image):
                    fresh.append(image)
        frontier = fresh
    closed = SampleSet(base.space, points)
    fact = factor_gram(closed, eps_rank)
    logger.debug("orbit of %d base points, depth %d: %d points, rank %d",
                 len(base), depth, len(points), fact.rank)
    return OrbitSample(base=base, maps=tuple(maps), depth=depth, closed_points=closed,
                       factorization=fact, index=index)


# ---------------------------------------------------------------------------
# Coherence and composition
# ---------------------------------------------------------------------------

def adjoint_map(spec):
    if spec.adjoint is None:
        raise MissingAdjointError(f"map '{spec.label}' has no adjoint")
    return MapSpec(forward=spec.adjoint, adjoint=spec.forward, label=f"{spec.label}*")


def inverse_map(spec):
    if spec.inverse is None:
        raise InvalidMapError(f"map '{spec.label}' has no inverse")
    return MapSpec(forward=spec.inverse, inverse=spec.forward, label=f"{spec.label}^-1")


def check_coherence(space, spec, sample, tol=COHERENCE_TOL):
    """Max relative residual of K(z, A z') = K(A* z, z') over sample pairs."""
    if spec.adjoint is None:
        raise MissingAdjointError(f"map '{spec.label}' has no adjoint to check")
    points = _points(sample)
    images = [spec.forward(z) for z in points]
    adjoints = [spec.adjoint(z) for z in points]
    worst = 0.0
    for j, z in enumerate(points):
        for k, w in enumerate(points):
            lhs = eval_kernel(space, z, images[k])
            rhs = eval_kernel(space, adjoints[j], w)
            worst = max(worst, _relative(lhs, rhs))
    return {'map': spec.label, 'pairs': len(points) ** 2, 'max_residual': worst,
            'tolerance': tol, 'passed': worst <= tol}


def compose(spec_a, spec_b, require_adjoint=False):
    """A o B with adjoint B* o A* and inverse B^-1 o A^-1 when both exist."""
    fa, fb = spec_a.forward, spec_b.forward
    adjoint = None
    if spec_a.adjoint is not None and spec_b.adjoint is not None:
        aa, ab = spec_a.adjoint, spec_b.adjoint
        adjoint = lambda z: ab(aa(z))  # noqa: E731
    elif require_adjoint:
        missing = spec_a.label if spec_a.adjoint is None else spec_b.label
        raise MissingAdjointError(f"cannot compose adjoints: '{missing}' has none")
    inverse = None
    if spec_a.inverse is not None and spec_b.inverse is not None:
        ia, ib = spec_a.inverse, spec_b.inverse
        inverse = lambda z: ib(ia(z))  # noqa: E731
    return MapSpec(forward=lambda z: fa(fb(z)), adjoint=adjoint, inverse=inverse,
                   label=f"{spec_a.label}.{spec_b.label}")


def check_strong_homogeneity(space, spec, sample, scalars, tol=COHERENCE_TOL):
    """K(A(c z), z') against K(c (A z), z') for scalar multiplications c."""
    if not space.is_projective:
        raise NotProjectiveError(f"{space.kind} space has no scalar multiplication")
    points = _points(sample)
    worst = 0.0
    for c in scalars:
        for z in points:
            left = spec.forward(space.scalar_multiply(c, z))
            right = space.scalar_multiply(c, spec.forward(z))
            for w in points:
                worst = max(worst, _relative(eval_kernel(space, left, w),
                                             eval_kernel(space, right, w)))
    return {'max_residual': worst, 'tolerance': tol, 'passed': worst <= tol}


# ---------------------------------------------------------------------------
# Quantization
# ---------------------------------------------------------------------------

def _fit(source, target):
    """Minimum-norm M with M @ source = target."""
    return linalg.lstsq(source.T, target.T)[0].T


def _quantize(orbit, spec, tol, weight=None):
    sources, images = orbit.determined(spec.forward)
    if not sources:
        raise OrbitNotClosedError(
            f"no point of the {len(orbit.closed_points)}-point orbit has its "
            f"'{spec.label}' image in the orbit"
        )
    fact = orbit.factorization
    R, G = fact.R, fact.G
    factors = np.ones(len(sources), dtype=complex)
    if weight is not None:
        factors = np.array([weight(orbit.closed_points.points[k]) for k in sources], dtype=complex)
    target = R[:, images] * factors
    M = _fit(R[:, sources], target)
    expected = G[:, images] * factors
    residual = linalg.norm(R.conj().T @ M @ R[:, sources] - expected) / (1.0 + linalg.norm(expected))
    if residual > tol:
        raise NotShadowError(
            f"quantization of '{spec.label}' misses the shadow identity: "
            f"residual {residual:.3e} > {tol:g}"
        )
    return OperatorOnSpan(fact, M, support=tuple(sources), residual=float(residual))


def quantize(orbit, spec, tol=QUANTIZE_TOL):
    """Gamma(A) on the span of the orbit, fitted on points whose image is in the orbit."""
    return _quantize(orbit, spec, tol)


def _operator_residual(fact, difference, reference, columns):
    R = fact.R[:, columns]
    return float(linalg.norm(difference @ R) / (1.0 + linalg.norm(reference @ R)))


def verify_homomorphism(orbit, spec_a, spec_b, tol=QUANTIZE_TOL, product=None):
    """||(Gamma(AB) - Gamma(A) Gamma(B)) v|| over coherent vectors v where all three are determined.

    product defaults to compose(A, B); pass a separately built map (for
    example from a group law) to check it against the composition.
    """
    product = product or compose(spec_a, spec_b)
    g_a = quantize(orbit, spec_a, tol)
    g_b = quantize(orbit, spec_b, tol)
    g_ab = quantize(orbit, product, tol)
    support_a = set(g_a.support)
    columns = []
    for k in g_ab.support:
        point = orbit.closed_points.points[k]
        hit = orbit.lookup(spec_b.forward(point))
        if hit is not None and hit in support_a:
            columns.append(k)
    if not columns:
        raise OrbitNotClosedError(
            f"orbit determines no point for '{spec_a.label}' after '{spec_b.label}'"
        )
    difference = g_ab.M - g_a.M @ g_b.M
    residual = _operator_residual(orbit.factorization, difference, g_ab.M, columns)
    return {'points': len(columns), 'residual': residual, 'tolerance': tol,
            'passed': residual <= tol}


def verify_unitary(orbit, spec, tol=QUANTIZE_TOL):
    """Kernel invariance K(Az, Az') = K(z, z') and isometry of Gamma(A) on its support."""
    space = orbit.closed_points.space
    points = orbit.closed_points.points
    G = orbit.factorization.G
    moved = np.array([[eval_kernel(space, spec.forward(z), spec.forward(w)) for w in points]
                      for z in points])
    kernel_residual = float(linalg.norm(moved - G) / linalg.norm(G))

    gamma = quantize(orbit, spec, tol)
    support = list(gamma.support)
    V = gamma.M @ orbit.factorization.R[:, support]
    G_ss = G[np.ix_(support, support)]
    operator_residual = float(linalg.norm(V.conj().T @ V - G_ss) / linalg.norm(G_ss))
    return {
        'kernel_residual': kernel_residual,
        'operator_residual': operator_residual,
        'tolerance': tol,
        'passed': kernel_residual <= tol and operator_residual <= tol,
    }


def verify_adjoint_exchange(orbit, spec, tol=QUANTIZE_TOL):
    """Gamma(A)* against Gamma(A*) between the supports of the two fits."""
    g_a = quantize(orbit, spec, tol)
    g_adj = quantize(orbit, adjoint_map(spec), tol)
    R = orbit.factorization.R
    rows, cols = R[:, list(g_a.support)], R[:, list(g_adj.support)]
    lhs = (g_a.M @ rows).conj().T @ cols
    rhs = rows.conj().T @ g_adj.M @ cols
    residual = float(linalg.norm(lhs - rhs) / (1.0 + linalg.norm(rhs)))
    return {'residual': residual, 'tolerance': tol, 'passed': residual <= tol}


# ---------------------------------------------------------------------------
# Multipliers and separable maps
# ---------------------------------------------------------------------------

def _parallel_pairs(G, eps):
    diag = np.real(np.diag(G))
    pairs = []
    n = G.shape[0]
    for j in range(n):
        for k in range(j + 1, n):
            defect = 1.0 - abs(G[j, k]) ** 2 / (diag[j] * diag[k])
            if defect <= eps:
                pairs.append((j, k))
    return pairs


def check_multiplier(space, mult, sample, tol=COHERENCE_TOL, eps=PARALLEL_EPS):
    """m(z')K(w, Az') = lam m(z)K(w, Az) for parallel pairs |z'> = lam|z> in the sample.

    Passes vacuously when the sample holds no parallel pair.
    """
    points = _points(sample)
    G = gram_matrix(SampleSet(space, points))
    pairs = _parallel_pairs(G, eps)
    images = [mult.map.forward(z) for z in points]
    worst = 0.0
    for j, k in pairs:
        lam = G[j, k] / G[j, j]
        m_j, m_k = mult.m(points[j]), mult.m(points[k])
        for w in points:
            lhs = m_k * eval_kernel(space, w, images[k])
            rhs = lam * m_j * eval_kernel(space, w, images[j])
            worst = max(worst, _relative(lhs, rhs))
    return {'parallel_pairs': len(pairs), 'max_residual': worst, 'tolerance': tol,
            'passed': worst <= tol}


def check_separable(space, sep, sample, tol=COHERENCE_TOL):
    """Max relative residual of K(z, alpha z') = chi K(z, z')."""
    points = _points(sample)
    chi = complex(sep.chi)
    worst = 0.0
    for z in points:
        for w in points:
            lhs = eval_kernel(space, z, sep.alpha(w))
            rhs = chi * eval_kernel(space, z, w)
            worst = max(worst, _relative(lhs, rhs))
    return {'map': sep.label, 'chi': [chi.real, chi.imag], 'max_residual': worst,
            'tolerance': tol, 'passed': worst <= tol}


def separable_map(sep):
    return MapSpec(forward=sep.alpha, adjoint=sep.adjoint, inverse=sep.inverse, label=sep.label)


def compose_separable(s1, s2):
    """alpha1 o alpha2 with chi multiplied."""
    f1, f2 = s1.alpha, s2.alpha
    adjoint = inverse = None
    if s1.adjoint is not None and s2.adjoint is not None:
        a1, a2 = s1.adjoint, s2.adjoint
        adjoint = lambda z: a2(a1(z))  # noqa: E731
    if s1.inverse is not None and s2.inverse is not None:
        i1, i2 = s1.inverse, s2.inverse
        inverse = lambda z: i2(i1(z))  # noqa: E731
    return SeparableSpec(alpha=lambda z: f1(f2(z)), chi=complex(s1.chi) * complex(s2.chi),
                         label=f"{s1.label}.{s2.label}", adjoint=adjoint, inverse=inverse)


def adjoint_separable(sep):
    """alpha* is separable with chi(alpha*) = conj chi(alpha)."""
    if sep.adjoint is None:
        raise MissingAdjointError(f"separable map '{sep.label}' has no adjoint")
    return SeparableSpec(alpha=sep.adjoint, chi=complex(sep.chi).conjugate(),
                         label=f"{sep.label}*", adjoint=sep.alpha)


def inverse_separable(sep):
    """alpha^-1 is separable with chi(alpha^-1) = 1 / chi(alpha)."""
    if sep.inverse is None:
        raise InvalidMapError(f"separable map '{sep.label}' has no inverse")
    return SeparableSpec(alpha=sep.inverse, chi=1.0 / complex(sep.chi),
                         label=f"{sep.label}^-1", inverse=sep.alpha)


def quantize_with_multiplier(orbit, mult, tol=QUANTIZE_TOL):
    """Gamma_m(A) with Gamma_m(A)|z> = m(z)|A z>.

    The orbit must pass the slenderness probe: rank deficiency of its Gram
    matrix has to come from parallel pairs only.
    """
    probe = slenderness_probe(orbit.closed_points.space, orbit.closed_points)
    if not probe['passed']:
        raise IllConditionedError(
            f"orbit Gram rank {probe['rank']} is below the {probe['classes']} "
            f"classes of parallel states"
        )
    return _quantize(orbit, mult.map, tol, weight=mult.m)


def diag_operator(orbit, m, tol=QUANTIZE_TOL):
    """a(m) with a(m)|z> = m(z)|z>."""
    return quantize_with_multiplier(orbit, MultiplierSpec(m, IDENTITY_MAP, label='diag'), tol)


def diag_operator_adjoint(orbit, m, tol=QUANTIZE_TOL):
    """a*(m) := a(conj m)*."""
    return diag_operator(orbit, lambda z: complex(m(z)).conjugate(), tol).adjoint()


# ---------------------------------------------------------------------------
# Normal kernels
# ---------------------------------------------------------------------------

def _kernel_values(X, points):
    if callable(X):
        return np.array([[X(z, w) for w in points] for z in points], dtype=complex)
    return np.asarray(getattr(X, 'X', X), dtype=complex)


def check_homogeneous_kernel(space, X, points, scalars=(2.0, 0.5j), tol=HOMOGENEITY_TOL):
    """X(c z, w) = X(z, w) = X(z, c w) for scalar multiplications c."""
    worst = 0.0
    for c in scalars:
        for z in points:
            cz = space.scalar_multiply(c, z)
            for w in points:
                value = X(z, w)
                worst = max(worst, _relative(X(cz, w), value),
                            _relative(X(z, space.scalar_multiply(c, w)), value))
    return {'max_residual': worst, 'tolerance': tol, 'passed': worst <= tol}


def normal_kernel_operator(orbit, X, tol=None):
    """N(X): the operator whose shadow is X(z, z') K(z, z').

    X is a callable kernel or a KernelOnSample. Callable kernels on projective
    spaces are probed for homogeneity first.
    """
    points = orbit.closed_points.points
    space = orbit.closed_points.space
    if callable(X) and space.is_projective:
        probe = check_homogeneous_kernel(space, X, points)
        if not probe['passed']:
            raise NotShadowError(
                f"kernel is not homogeneous: residual {probe['max_residual']:.3e}"
            )
    values = _kernel_values(X, points)
    return operator_from_kernel(orbit.factorization, values * orbit.factorization.G, tol)


def recover_normal_kernel(fact, op):
    """X = shadow / K entrywise, defined where the coherent product vanishes nowhere."""
    G = fact.G
    smallest = np.min(np.abs(G))
    if smallest <= 1e-14 * np.max(np.abs(G)):
        raise SingularityError(f"coherent product vanishes on the sample (min |K| = {smallest:.3e})")
    return shadow_of_operator(fact, op).X / G


def conjugate_kernel(spec, X):
    """(A X)(z, z') = X(A* z, A^-1 z')."""
    if spec.adjoint is None:
        raise MissingAdjointError(f"map '{spec.label}' has no adjoint")
    if spec.inverse is None:
        raise InvalidMapError(f"map '{spec.label}' has no inverse")
    adjoint, inverse = spec.adjoint, spec.inverse
    return lambda z, w: X(adjoint(z), inverse(w))


def conjugate_normal_kernel(orbit, spec, X, tol=QUANTIZE_TOL):
    """N(A X) against Gamma(A) N(X) Gamma(A)^-1.

    Gamma(A) enters through <z|Gamma(A) = <A* z|, so the orbit must contain
    images under A* and A^-1; rows run over the support of Gamma(A*), columns
    over the support of Gamma(A^-1).
    """
    n_x = normal_kernel_operator(orbit, X)
    n_ax = normal_kernel_operator(orbit, conjugate_kernel(spec, X))
    g_adj = quantize(orbit, adjoint_map(spec), tol)
    g_inv = quantize(orbit, inverse_map(spec), tol)
    R = orbit.factorization.R
    rows, cols = R[:, list(g_adj.support)], R[:, list(g_inv.support)]
    lhs = rows.conj().T @ n_ax.M @ cols
    rhs = (g_adj.M @ rows).conj().T @ n_x.M @ (g_inv.M @ cols)
    residual = float(linalg.norm(lhs - rhs) / (1.0 + linalg.norm(lhs)))
    return {'residual': residual, 'tolerance': tol, 'passed': residual <= tol}


# ---------------------------------------------------------------------------
# Slenderness
# ---------------------------------------------------------------------------

def slenderness_probe(space, sample, eps=PARALLEL_EPS, eps_rank=EPS_RANK):
    """Rank of the normalized Gram matrix against the number of parallel classes.

    Parallel pairs have |K(z, z')|^2 = K(z, z) K(z', z') within eps. The probe
    passes when the rank equals the number of classes of mutually parallel
    states, i.e. every linear dependence is explained by parallel pairs.
    """
    points = _points(sample)
    G = gram_matrix(SampleSet(space, points))
    scale = np.sqrt(np.real(np.diag(G)))
    normalized = G / np.outer(scale, scale)
    eigenvalues = linalg.eigvalsh(normalized)
    rank = int(np.count_nonzero(eigenvalues > eps_rank * eigenvalues[-1]))

    pairs = _parallel_pairs(G, eps)
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for j, k in pairs:
        parent[find(j)] = find(k)
    classes = len({find(i) for i in range(len(points))})
    return {'n': len(points), 'rank': rank, 'parallel_pairs': len(pairs),
            'classes': classes, 'passed': rank == classes}


# ---------------------------------------------------------------------------
# Moebius maps
# ---------------------------------------------------------------------------

def moebius_invariants(A):
    """(alpha, beta, gamma) of a 2x2 matrix."""
    A = np.asarray(A, dtype=complex)
    alpha = abs(A[0, 0]) ** 2 - abs(A[1, 0]) ** 2
    beta = A[0, 0].conjugate() * A[0, 1] - A[1, 0].conjugate() * A[1, 1]
    gamma = abs(A[1, 1]) ** 2 - abs(A[0, 1]) ** 2
    return float(alpha), complex(beta), float(gamma)


def in_moebius_semigroup(A, tol=1e-12):
    """alpha > 0, |beta| <= alpha, gamma <= alpha - 2|beta|, up to tol * alpha.

    GU(1,1) matrices sit on the boundary gamma = alpha, beta = 0.
    """
    alpha, beta, gamma = moebius_invariants(A)
    slack = tol * abs(alpha)
    return alpha > 0 and abs(beta) <= alpha + slack and gamma <= alpha - 2 * abs(beta) + slack


def moebius_sigma(A):
    """The Moebius adjoint [[conj A11, -conj A21], [-conj A12, conj A22]]."""
    A = np.asarray(A, dtype=complex)
    return np.array([[A[0, 0].conjugate(), -A[1, 0].conjugate()],
                     [-A[0, 1].conjugate(), A[1, 1].conjugate()]])


def is_gu11(A, tol=1e-12):
    """A preserves |z1|^2 - |z2|^2: beta = 0 and gamma = alpha > 0."""
    alpha, beta, gamma = moebius_invariants(A)
    return alpha > 0 and abs(beta) <= tol * alpha and abs(gamma - alpha) <= tol * alpha


def moebius_action(A):
    (a11, a12), (a21, a22) = [[complex(x) for x in row] for row in np.asarray(A, dtype=complex)]
    return lambda z: MoebiusPoint(a11 * z.z1 + a12 * z.z2, a21 * z.z1 + a22 * z.z2)


def moebius_map(A, adjoint_matrix=None, label='moebius'):
    """Linear map of the Moebius space with adjoint A^sigma.

    A must satisfy the semigroup inequalities. adjoint_matrix overrides the
    adjoint without validation, which is how a wrong adjoint is exercised.
    """
    A = np.asarray(A, dtype=complex)
    if A.shape != (2, 2):
        raise InvalidMapError(f"Moebius map needs a 2x2 matrix, got {A.shape}")
    if not in_moebius_semigroup(A):
        alpha, beta, gamma = moebius_invariants(A)
        raise InvalidMapError(
            f"matrix violates alpha > 0, |beta| <= alpha, gamma <= alpha - 2|beta|: "
            f"alpha={alpha:.6g}, |beta|={abs(beta):.6g}, gamma={gamma:.6g}"
        )
    adjoint = moebius_sigma(A) if adjoint_matrix is None else adjoint_matrix
    inverse = None
    if abs(linalg.det(A)) > 1e-12 * linalg.norm(A) ** 2:
        A_inv = linalg.inv(A)
        if in_moebius_semigroup(A_inv):
            inverse = moebius_action(A_inv)
    return MapSpec(forward=moebius_action(A), adjoint=moebius_action(adjoint),
                   inverse=inverse, label=label)


def random_gu11(rng, scale=0.5):
    """e^{i theta} [[a, b], [conj b, conj a]] with |a|^2 - |b|^2 = 1."""
    t = scale * rng.uniform()
    phi, psi, theta = rng.uniform(-np.pi, np.pi, size=3)
    a = np.cosh(t) * np.exp(1j * phi)
    b = np.sinh(t) * np.exp(1j * psi)
    return np.exp(1j * theta) * np.array([[a, b], [b.conjugate(), a.conjugate()]])


def random_moebius_matrix(rng, scale=0.3, max_tries=10000):
    """Perturbation of the identity with both A and A^sigma in the semigroup."""
    for _ in range(max_tries):
        noise = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        A = np.eye(2) + scale * noise / np.sqrt(2.0)
        if in_moebius_semigroup(A) and in_moebius_semigroup(moebius_sigma(A)):
            return A
    raise InvalidMapError(f"no admissible Moebius matrix found in {max_tries} draws")


# ---------------------------------------------------------------------------
# Klauder maps
# ---------------------------------------------------------------------------

def klauder_map(x, label='osc'):
    """Action of an oscillator element, with the action of x* as adjoint."""
    adj = oscillator_algebra.adjoint(x)
    inverse = None
    try:
        inv = oscillator_algebra.inverse(x)
        inverse = lambda z: oscillator_algebra.act_on_point(inv, z)  # noqa: E731
    except oscillator_algebra.SingularError:
        logger.debug("oscillator element '%s' is not invertible", label)
    return MapSpec(forward=lambda z: oscillator_algebra.act_on_point(x, z),
                   adjoint=lambda z: oscillator_algebra.act_on_point(adj, z),
                   inverse=inverse, label=label)


def scalar_map(space, c):
    """Scalar multiplication by c as a map, adjoint by conj(c), inverse by 1/c."""
    return separable_map(scalar_separable(space, c))


# ---------------------------------------------------------------------------
# Lifts to the projective extension
# ---------------------------------------------------------------------------

def projective_lift(alpha, spec):
    """[alpha, A](lam, z) = (alpha lam, A z) with adjoint [conj alpha, A*]."""
    alpha = complex(alpha)
    if alpha == 0:
        raise DomainError("lift factor must be nonzero")
    forward = spec.forward
    adjoint = None
    if spec.adjoint is not None:
        spec_adjoint = spec.adjoint
        adjoint = lambda p: ProjectivePoint(alpha.conjugate() * p.lam, spec_adjoint(p.base))  # noqa: E731
    return MapSpec(forward=lambda p: ProjectivePoint(alpha * p.lam, forward(p.base)),
                   adjoint=adjoint, label=f"[{alpha:g},{spec.label}]")


def separable_lifts(sep, degree=1):
    """(A_S, B_S) on the projective extension of the given degree.

    A_S(lam, z) = (lam, S z) and B_S(lam, z) = (conj(chi)**degree * lam, z),
    adjoint to each other. Only degrees 1 and -1 have a single-valued B_S.
    """
    if degree not in (1, -1):
        raise NotProjectiveError(f"separable lifts need degree 1 or -1, got {degree}")
    factor = complex(sep.chi).conjugate() ** degree
    alpha = sep.alpha

    def lift_a(p):
        return ProjectivePoint(p.lam, alpha(p.base))

    def lift_b(p):
        return ProjectivePoint(factor * p.lam, p.base)

    return (MapSpec(forward=lift_a, adjoint=lift_b, label=f"A_{sep.label}"),
            MapSpec(forward=lift_b, adjoint=lift_a, label=f"B_{sep.label}"))
