"""Truncated bosonic Fock space over C^d.

The basis is the occupation states |alpha> with total degree |alpha| <= cutoff,
ordered by degree and, within a degree, lexicographically descending, so
for d = 2 the order is (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...

Coherent vectors are unnormalized: |[z0, zeta]> has coefficients
e^{z0} zeta^alpha / sqrt(alpha!), and <z|z'> = exp(conj z0 + z0' + zeta* zeta')
up to the factorial tail beyond the cutoff.
"""

import functools
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite_e
from scipy import linalg, special

from errors import (DegreeError, DimensionError, QuadratureError,
                    TruncationWarning)
from models import KlauderPoint
import oscillator_algebra

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = {1: 30, 2: 12}
LARGE_ARGUMENT = 2.0
CCR_TOL = 1e-13
WEYL_TOL = 1e-8
QUADRATURE_NODES = 64
QUADRATURE_TOL = 1e-9


def default_cutoff(d):
    return DEFAULT_CUTOFF.get(d, 8)


# ---------------------------------------------------------------------------
# Basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiIndex:
    alpha: tuple

    @property
    def degree(self):
        return sum(self.alpha)


def _compositions(m, d):
    if d == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in _compositions(m - first, d - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class FockBasis:
    d: int
    cutoff: int
    indices: tuple
    position: dict
    degrees: np.ndarray
    log_factorials: np.ndarray

    @property
    def size(self):
        return len(self.indices)

    def index_of(self, alpha):
        alpha = tuple(alpha)
        if len(alpha) != self.d or sum(alpha) > self.cutoff or min(alpha) < 0:
            raise DegreeError(f"{alpha} is not a multi-index of degree <= {self.cutoff} in {self.d} modes")
        return self.position[alpha]

    def block(self, m):
        """Slice of the basis holding degree m."""
        start = math.comb(m - 1 + self.d, self.d) if m > 0 else 0
        return slice(start, math.comb(m + self.d, self.d))


@functools.lru_cache(maxsize=32)
def fock_basis(d, cutoff):
    if d < 1:
        raise DimensionError(f"Fock space needs at least one mode, got d={d}")
    if cutoff < 0:
        raise DegreeError(f"cutoff must be nonnegative, got {cutoff}")
    indices = tuple(MultiIndex(a) for m in range(cutoff + 1) for a in _compositions(m, d))
    position = {mi.alpha: i for i, mi in enumerate(indices)}
    degrees = np.array([mi.degree for mi in indices])
    log_fact = np.array([sum(math.lgamma(k + 1) for k in mi.alpha) for mi in indices])
    degrees.setflags(write=False)
    log_fact.setflags(write=False)
    logger.debug("Fock basis d=%d cutoff=%d size=%d", d, cutoff, len(indices))
    return FockBasis(d=d, cutoff=cutoff, indices=indices, position=position,
                     degrees=degrees, log_factorials=log_fact)


@dataclass(frozen=True, eq=False)
class FockVector:
    basis: FockBasis
    coeffs: np.ndarray

    @property
    def cutoff(self):
        return self.basis.cutoff

    def inner(self, other):
        return complex(np.vdot(self.coeffs, other.coeffs))

    def norm(self):
        return float(linalg.norm(self.coeffs))


@dataclass(frozen=True, eq=False)
class FockOperator:
    basis: FockBasis
    matrix: np.ndarray

    def __post_init__(self):
        n = self.basis.size
        if self.matrix.shape != (n, n):
            raise DimensionError(f"operator is {self.matrix.shape}, basis has {n} states")

    @property
    def cutoff(self):
        return self.basis.cutoff

    def _check(self, other):
        if other.basis is not self.basis:
            raise DimensionError("operands live on different truncations")

    def __matmul__(self, other):
        self._check(other)
        if isinstance(other, FockVector):
            return FockVector(self.basis, self.matrix @ other.coeffs)
        return FockOperator(self.basis, self.matrix @ other.matrix)

    def __add__(self, other):
        self._check(other)
        return FockOperator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return FockOperator(self.basis, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return FockOperator(self.basis, complex(scalar) * self.matrix)

    __rmul__ = __mul__

    def adjoint(self):
        return FockOperator(self.basis, self.matrix.conj().T)

    def expm(self):
        return FockOperator(self.basis, linalg.expm(self.matrix))


def identity(d, cutoff):
    basis = fock_basis(d, cutoff)
    return FockOperator(basis, np.eye(basis.size, dtype=complex))


def basis_vector(d, cutoff, alpha):
    basis = fock_basis(d, cutoff)
    coeffs = np.zeros(basis.size, dtype=complex)
    coeffs[basis.index_of(alpha)] = 1.0
    return FockVector(basis, coeffs)


def vacuum(d, cutoff):
    return basis_vector(d, cutoff, (0,) * d)


# ---------------------------------------------------------------------------
# Ladder operators
# ---------------------------------------------------------------------------

def annihilator(k, d, cutoff):
    """a_k for modes k = 1..d: |alpha> -> sqrt(alpha_k) |alpha - e_k>."""
    if not 1 <= k <= d:
        raise IndexError(f"mode {k} out of range 1..{d}")
    basis = fock_basis(d, cutoff)
    matrix = np.zeros((basis.size, basis.size), dtype=complex)
    for col, mi in enumerate(basis.indices):
        n = mi.alpha[k - 1]
        if n > 0:
            lowered = mi.alpha[:k - 1] + (n - 1,) + mi.alpha[k:]
            matrix[basis.position[lowered], col] = math.sqrt(n)
    return FockOperator(basis, matrix)


def creator(k, d, cutoff):
    """a_k*, the transpose of a_k: raises degree, top-degree states go to zero."""
    return annihilator(k, d, cutoff).adjoint()


def smeared(p, cutoff):
    """p* a = sum_k conj(p_k) a_k."""
    p = np.ravel(np.asarray(p, dtype=complex))
    d = p.shape[0]
    if d == 0:
        raise DimensionError("smeared operator needs a nonempty vector")
    basis = fock_basis(d, cutoff)
    matrix = np.zeros((basis.size, basis.size), dtype=complex)
    for k in range(d):
        if p[k] != 0:
            matrix += p[k].conjugate() * annihilator(k + 1, d, cutoff).matrix
    return FockOperator(basis, matrix)


def smeared_adjoint(q, cutoff):
    """a* q = sum_k q_k a_k*, the adjoint of q* a."""
    return smeared(q, cutoff).adjoint()


def ccr_check(d, cutoff, tol=CCR_TOL):
    """(a_j a_k* - a_k* a_j) |alpha> = delta_jk |alpha> on all states of degree < cutoff."""
    basis = fock_basis(d, cutoff)
    below = basis.degrees < cutoff
    lowering = [annihilator(k, d, cutoff).matrix for k in range(1, d + 1)]
    worst = 0.0
    for j in range(d):
        for k in range(d):
            commutator = lowering[j] @ lowering[k].T - lowering[k].T @ lowering[j]
            if j == k:
                commutator = commutator - np.eye(basis.size)
            worst = max(worst, float(np.max(np.abs(commutator[:, below]), initial=0.0)))
    return {'d': d, 'cutoff': cutoff, 'max_residual': worst, 'tolerance': tol,
            'passed': worst <= tol}


def smeared_commutator_defect(p, q, cutoff, max_degree):
    """max |((p*a)(a*q) - (a*q)(p*a) - p*q) v| over basis states v of degree <= max_degree."""
    if max_degree >= cutoff:
        raise DegreeError(f"max_degree {max_degree} must stay below the cutoff {cutoff}")
    pa = smeared(p, cutoff)
    aq = smeared_adjoint(q, cutoff)
    scalar = complex(np.vdot(np.ravel(p), np.ravel(q)))
    commutator = pa.matrix @ aq.matrix - aq.matrix @ pa.matrix - scalar * np.eye(pa.basis.size)
    columns = pa.basis.degrees <= max_degree
    return float(np.max(np.abs(commutator[:, columns]), initial=0.0))


# ---------------------------------------------------------------------------
# Coherent vectors
# ---------------------------------------------------------------------------

def _monomials(basis, zeta):
    """zeta^alpha / sqrt(alpha!) over the basis."""
    powers = np.ones(basis.size, dtype=complex)
    exponents = np.array([mi.alpha for mi in basis.indices])
    for k in range(basis.d):
        powers = powers * zeta[k] ** exponents[:, k]
    return powers * np.exp(-0.5 * basis.log_factorials)


def coherent_vector(z, cutoff):
    """Truncated e^{z0} |zeta> for a Klauder point z."""
    zeta = np.asarray(z.zeta, dtype=complex)
    if np.any(np.abs(zeta) > LARGE_ARGUMENT):
        warnings.warn(
            f"coherent argument |zeta| = {np.max(np.abs(zeta)):.3g} exceeds {LARGE_ARGUMENT}; "
            f"the degree-{cutoff} truncation tail is no longer small",
            TruncationWarning, stacklevel=2,
        )
    basis = fock_basis(len(zeta), cutoff)
    return FockVector(basis, np.exp(complex(z.z0)) * _monomials(basis, zeta))


def exp_tail(x, n):
    """sum_{m > n} x**m / m! for x >= 0."""
    if x <= 0:
        return 0.0
    return float(np.exp(x) * special.gammainc(n + 1, x))


def glauber_overlap(zeta, zeta2, cutoff):
    """Truncated <zeta|zeta'> against e^{zeta* zeta'} with its factorial tail bound."""
    zeta = np.ravel(np.asarray(zeta, dtype=complex))
    zeta2 = np.ravel(np.asarray(zeta2, dtype=complex))
    truncated = coherent_vector(KlauderPoint(0j, tuple(zeta)), cutoff).inner(
        coherent_vector(KlauderPoint(0j, tuple(zeta2)), cutoff))
    exact = complex(np.exp(np.vdot(zeta, zeta2)))
    tail = exp_tail(float(linalg.norm(zeta) * linalg.norm(zeta2)), cutoff)
    error = abs(truncated - exact)
    return {'truncated': truncated, 'exact': exact, 'error': error, 'tail_bound': tail,
            'passed': error <= tail + 1e-14 * abs(exact)}


def glauber_point_vector(zeta, cutoff):
    return coherent_vector(KlauderPoint(0j, tuple(complex(c) for c in np.ravel(zeta))), cutoff)


# ---------------------------------------------------------------------------
# Symmetric powers and the oscillator representation
# ---------------------------------------------------------------------------

def sym_power_operator(A, cutoff):
    """Lambda(A) with Lambda(A)|zeta> = |A zeta>, block diagonal by degree.

    Entry [beta, alpha] is c * sqrt(alpha!) / sqrt(beta!) where c is the
    coefficient of zeta^alpha in (A zeta)^beta; the coefficients are built
    degree by degree from (A zeta)^beta = (A zeta)^(beta - e_i) (A zeta)_i.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"Lambda needs a square matrix, got shape {A.shape}")
    d = A.shape[0]
    basis = fock_basis(d, cutoff)
    matrix = np.zeros((basis.size, basis.size), dtype=complex)
    matrix[0, 0] = 1.0
    previous = np.ones((1, 1), dtype=complex)
    for m in range(1, cutoff + 1):
        rows = basis.indices[basis.block(m)]
        low = basis.block(m - 1)
        offset = low.start
        # shifts[j][a] = position of alpha - e_j within degree m-1, or -1
        shifts = np.full((d, len(rows)), -1)
        for a, mi in enumerate(rows):
            for j in range(d):
                if mi.alpha[j] > 0:
                    lowered = mi.alpha[:j] + (mi.alpha[j] - 1,) + mi.alpha[j + 1:]
                    shifts[j, a] = basis.position[lowered] - offset
        current = np.zeros((len(rows), len(rows)), dtype=complex)
        for b, mi in enumerate(rows):
            i = next(idx for idx, n in enumerate(mi.alpha) if n > 0)
            parent = mi.alpha[:i] + (mi.alpha[i] - 1,) + mi.alpha[i + 1:]
            parent_row = previous[basis.position[parent] - offset]
            for j in range(d):
                valid = shifts[j] >= 0
                current[b, valid] += A[i, j] * parent_row[shifts[j, valid]]
        block = basis.block(m)
        half_log = 0.5 * basis.log_factorials[block]
        matrix[block, block] = current * np.exp(half_log[None, :] - half_log[:, None])
        previous = current
    return FockOperator(basis, matrix)


def gamma_osc(x, cutoff):
    """Gamma(x) = e^rho exp(a* q) Lambda(A) exp(p* a) for x = [rho, p, q, A].

    exp(p* a) and exp(a* q) are nilpotent on the truncation, so both series
    terminate and the factorization is exact below the cutoff.
    """
    lowering = smeared(x.p, cutoff).expm()
    raising = smeared_adjoint(x.q, cutoff).expm()
    return (raising @ sym_power_operator(x.A, cutoff) @ lowering) * complex(np.exp(x.rho))


def gamma_tail_bound(x, z, cutoff):
    """Bound on ||Gamma(x) P|z> - P|x z>|| with P the projection to degree <= cutoff.

    Only exp(p* a) pulls mass down from beyond the cutoff; the lost part is
    bounded per degree by the exponential tail of |p* zeta|.
    """
    zeta = np.asarray(z.zeta, dtype=complex)
    growth = max(1.0, float(linalg.norm(x.A, 2))) ** cutoff
    raise_norm = float(linalg.norm(smeared_adjoint(x.q, cutoff).expm().matrix, 2))
    r2 = float(np.vdot(zeta, zeta).real)
    pz = abs(complex(np.vdot(x.p, zeta)))
    scale = abs(np.exp(complex(z.z0))) ** 2
    total = 0.0
    for m in range(cutoff + 1):
        total += scale * r2 ** m / math.factorial(m) * exp_tail(pz, cutoff - m) ** 2
    return abs(np.exp(x.rho)) * raise_norm * growth * math.sqrt(total)


def gamma_action_check(x, z, cutoff, tol=1e-8):
    """||Gamma(x)|z> - |x z>|| against max(tol, analytic tail bound)."""
    image = oscillator_algebra.act_on_point(x, z)
    residual = (gamma_osc(x, cutoff) @ coherent_vector(z, cutoff)).coeffs - coherent_vector(image, cutoff).coeffs
    residual = float(linalg.norm(residual))
    bound = gamma_tail_bound(x, z, cutoff)
    return {'residual': residual, 'tail_bound': bound, 'tolerance': tol,
            'passed': residual <= max(tol, bound)}


def gamma_homomorphism_defect(x, y, cutoff, max_degree):
    """||(Gamma(xy) - Gamma(x) Gamma(y)) v|| over basis states v of degree <= max_degree."""
    difference = (gamma_osc(oscillator_algebra.multiply(x, y), cutoff)
                  - gamma_osc(x, cutoff) @ gamma_osc(y, cutoff))
    columns = difference.basis.degrees <= max_degree
    return float(linalg.norm(difference.matrix[:, columns], 2))


# ---------------------------------------------------------------------------
# Weyl relations and normal ordering
# ---------------------------------------------------------------------------

def weyl_check(p, q, cutoff, probe_degree, tol=WEYL_TOL):
    """Compare e^{p*a} e^{a*q} with e^{p*q} e^{a*q} e^{p*a} on states of degree <= probe_degree."""
    if probe_degree > cutoff // 2:
        raise DegreeError(f"probe degree {probe_degree} exceeds half the cutoff {cutoff}")
    lowering = smeared(p, cutoff).expm()
    raising = smeared_adjoint(q, cutoff).expm()
    scalar = complex(np.exp(np.vdot(np.ravel(p), np.ravel(q))))
    lhs = (lowering @ raising).matrix
    rhs = scalar * (raising @ lowering).matrix
    columns = lowering.basis.degrees <= probe_degree
    difference = float(np.max(linalg.norm(lhs[:, columns] - rhs[:, columns], axis=0)))
    return {'max_difference': difference, 'vacuum_expectation': complex(lhs[0, 0]),
            'expected_vacuum': scalar, 'tolerance': tol, 'passed': difference <= tol}


def normal_ordered_monomial(beta, alpha, cutoff):
    """(a*)^beta a^alpha."""
    beta, alpha = tuple(beta), tuple(alpha)
    if len(beta) != len(alpha):
        raise DimensionError(f"beta has {len(beta)} modes, alpha has {len(alpha)}")
    if sum(beta) + sum(alpha) > cutoff:
        raise DegreeError(f"|beta| + |alpha| = {sum(beta) + sum(alpha)} exceeds the cutoff {cutoff}")
    d = len(alpha)
    basis = fock_basis(d, cutoff)
    result = np.eye(basis.size, dtype=complex)
    for k, n in enumerate(alpha, start=1):
        if n:
            result = np.linalg.matrix_power(annihilator(k, d, cutoff).matrix, n) @ result
    for k, n in enumerate(beta, start=1):
        if n:
            result = np.linalg.matrix_power(creator(k, d, cutoff).matrix, n) @ result
    return FockOperator(basis, result)


def normal_order_rank(d, cutoff):
    """Rank of the normally ordered monomials with |beta|, |alpha| <= cutoff // 2."""
    half = cutoff // 2
    exponents = [mi.alpha for mi in fock_basis(d, half).indices]
    rows = [normal_ordered_monomial(b, a, cutoff).matrix.ravel() for b in exponents for a in exponents]
    rank = int(np.linalg.matrix_rank(np.array(rows)))
    return {'monomials': len(rows), 'rank': rank, 'passed': rank == len(rows)}


def matrix_element(op, z, z2):
    """<z|op|z'> with truncated coherent vectors."""
    return coherent_vector(z, op.cutoff).inner(op @ coherent_vector(z2, op.cutoff))


# ---------------------------------------------------------------------------
# Gaussian realization (d = 1)
# ---------------------------------------------------------------------------

def gaussian_coherent_function(z, x):
    """f_z(x) = exp(z0 - (x - zeta)^2 / 2)."""
    if len(z.zeta) != 1:
        raise DimensionError(f"Gaussian realization is one-dimensional, point has d={len(z.zeta)}")
    x = np.asarray(x, dtype=float)
    return np.exp(complex(z.z0) - 0.5 * (x - z.zeta[0]) ** 2)


def _gauss_hermite_sum(z, z2, nodes):
    # integrand divided by the weight exp(-x^2/2) of hermegauss
    x, w = hermite_e.hermegauss(nodes)
    zeta, zeta2 = z.zeta[0], z2.zeta[0]
    exponent = (complex(z.z0).conjugate() + complex(z2.z0)
                - 0.5 * (x - zeta.conjugate()) ** 2 - 0.5 * (x - zeta2) ** 2 + x ** 2)
    return complex(np.sum(w * np.exp(exponent)) / math.sqrt(2.0 * math.pi))


def gauss_hermite_overlap(z, z2, nodes=QUADRATURE_NODES, tol=QUADRATURE_TOL):
    """f_z* f_z' against dmu(x) = (2 pi)^{-1/2} exp(x^2 / 2) dx, which equals K(z, z')."""
    if len(z.zeta) != 1 or len(z2.zeta) != 1:
        raise DimensionError("Gaussian overlap is defined for d = 1 only")
    if nodes < QUADRATURE_NODES:
        raise QuadratureError(f"need at least {QUADRATURE_NODES} nodes, got {nodes}")
    value = _gauss_hermite_sum(z, z2, nodes)
    refined = _gauss_hermite_sum(z, z2, nodes + 16)
    if not (np.isfinite(value) and abs(value - refined) <= tol * (1.0 + abs(refined))):
        raise QuadratureError(
            f"quadrature did not converge: {nodes} nodes give {value:.12g}, "
            f"{nodes + 16} give {refined:.12g}"
        )
    return value


def time_frequency_point(tau, omega):
    """The point whose Gaussian function is e^{i omega t} e^{-(t - tau)^2 / 2}."""
    return KlauderPoint(complex(0.0, omega * tau) - 0.5 * omega ** 2, (complex(tau, omega),))
