"""Finite quantum spaces: Gram factorization, admissibility, shadows.

A sample z_1..z_n spans a quantum space of dimension r = rank(G). Writing
G = U diag(lam) U* and keeping eigenvalues above eps_rank * lam_max gives
R = diag(lam)**(1/2) U* (r x n); column k of R is the coherent vector of
z_k in an orthonormal basis of the span, so <z_j|z_k> = (R* R)[j, k].

Operators on the span are r x r matrices M in that basis, with shadow
<z_j|M|z_k> = (R* M R)[j, k]. Everything here is relative to the sample:
admissibility over the whole space cannot be decided from finitely many
points, only refuted.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from errors import (DimensionError, IllConditionedError, NotAdmissibleError,
                    NotPositiveError, NotShadowError)
from kernel_spaces import gram_matrix

logger = logging.getLogger(__name__)

EPS_RANK = 1e-10
ADMISSIBLE_TOL = 1e-8
SHADOW_TOL = 1e-8
FACTOR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GramFactorization:
    sample: object
    G: np.ndarray
    R: np.ndarray
    rank: int
    eps_rank: float
    eigenvalues: np.ndarray
    basis: np.ndarray
    null_basis: np.ndarray

    @property
    def n(self):
        return self.G.shape[0]

    @property
    def R_pinv(self):
        """U diag(lam)**(-1/2), the right inverse of R (R @ R_pinv = I_r)."""
        kept = self.eigenvalues[-self.rank:][::-1] if self.rank else self.eigenvalues[:0]
        return self.basis / np.sqrt(kept)

    def coherent_vector(self, k):
        return self.R[:, k]


@dataclass(frozen=True, eq=False)
class FunctionOnSample:
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class KernelOnSample:
    X: np.ndarray


@dataclass(frozen=True, eq=False)
class OperatorOnSpan:
    """An r x r matrix acting on the span of a factorized sample.

    support lists sample indices whose coherent vectors the operator was
    fitted on; residual is the certified fit residual when there was one.
    """
    factorization: GramFactorization
    M: np.ndarray
    support: Optional[tuple] = None
    residual: float = 0.0

    def __post_init__(self):
        r = self.factorization.rank
        if self.M.shape != (r, r):
            raise DimensionError(f"operator must be {r}x{r} on this span, got {self.M.shape}")

    def adjoint(self):
        return OperatorOnSpan(self.factorization, self.M.conj().T)

    def __matmul__(self, other):
        if other.factorization is not self.factorization:
            raise DimensionError("operators live on different factorizations")
        return OperatorOnSpan(self.factorization, self.M @ other.M)

    def shadow(self):
        return shadow_of_operator(self.factorization, self)


def _array(value, attr):
    return np.asarray(getattr(value, attr, value), dtype=complex)


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------

def factor_gram(sample, eps_rank=EPS_RANK, gram=None):
    """Eigendecomposition factor R with G = R* R on the kept eigenspace.

    Raises NotPositiveError when lambda_min < -eps_rank * lambda_max.
    """
    G = gram_matrix(sample) if gram is None else np.asarray(gram, dtype=complex)
    eigenvalues, vectors = linalg.eigh(G)
    lam_max = max(float(eigenvalues[-1]), 0.0)
    if eigenvalues[0] < -eps_rank * lam_max:
        raise NotPositiveError(
            f"Gram matrix of {len(sample)} points is not positive semidefinite: "
            f"lambda_min = {eigenvalues[0]:.3e}, lambda_max = {lam_max:.3e}"
        )
    keep = eigenvalues > eps_rank * lam_max
    rank = int(np.count_nonzero(keep))
    # eigh sorts ascending; the kept block is the tail, stored largest first
    basis = vectors[:, keep][:, ::-1]
    R = np.sqrt(eigenvalues[keep][::-1])[:, None] * basis.conj().T
    null_basis = vectors[:, ~keep]

    defect = linalg.norm(G - R.conj().T @ R)
    if defect > FACTOR_TOL * (1.0 + linalg.norm(G)):
        raise IllConditionedError(f"factor reproduces G only to {defect:.3e}")
    logger.debug("factor_gram n=%d rank=%d lambda_max=%.3e", G.shape[0], rank, lam_max)
    return GramFactorization(sample=sample, G=G, R=R, rank=rank, eps_rank=eps_rank,
                             eigenvalues=eigenvalues, basis=basis, null_basis=null_basis)


# ---------------------------------------------------------------------------
# Admissible functions
# ---------------------------------------------------------------------------

def admissibility_defect(fact, f):
    """||N* f|| for an orthonormal null basis N of G."""
    values = _array(f, 'values')
    if values.shape != (fact.n,):
        raise DimensionError(f"function has {values.shape} values for a sample of {fact.n}")
    if fact.null_basis.shape[1] == 0:
        return 0.0
    return float(linalg.norm(fact.null_basis.conj().T @ values))


def is_admissible(fact, f, tol=ADMISSIBLE_TOL):
    """Sample-relative admissibility: every null vector c of G has c* f = 0.

    The test is a necessary condition for admissibility on the whole space.
    """
    values = _array(f, 'values')
    return admissibility_defect(fact, values) <= tol * linalg.norm(values)


def vector_from_admissible(fact, f, tol=ADMISSIBLE_TOL):
    """psi in the factor basis with <z_k|psi> = f(z_k), by least squares through R."""
    values = _array(f, 'values')
    if not is_admissible(fact, values, tol):
        raise NotAdmissibleError(
            f"function is not admissible on this sample: null-space defect "
            f"{admissibility_defect(fact, values):.3e} exceeds {tol:g} * ||f||"
        )
    if fact.rank == 0:
        return np.zeros(0, dtype=complex)
    psi = linalg.lstsq(fact.R.conj().T, values)[0]
    residual = linalg.norm(fact.R.conj().T @ psi - values)
    if residual > tol * (1.0 + linalg.norm(values)):
        raise NotAdmissibleError(f"least-squares residual {residual:.3e} exceeds tolerance")
    return psi


# ---------------------------------------------------------------------------
# Operators and shadows
# ---------------------------------------------------------------------------

def operator_from_kernel(fact, X, tol=None):
    """The operator on the span whose shadow is X.

    X must annihilate the null space from both sides (X c = 0 and X* c = 0
    for Gram null vectors c) within tol; the default tolerance is
    SHADOW_TOL * (1 + ||X||_F).
    """
    X = _array(X, 'X')
    if X.shape != (fact.n, fact.n):
        raise DimensionError(f"kernel is {X.shape}, sample has {fact.n} points")
    if tol is None:
        tol = SHADOW_TOL * (1.0 + linalg.norm(X))
    N = fact.null_basis
    for idx in range(N.shape[1]):
        right = linalg.norm(X @ N[:, idx])
        left = linalg.norm(X.conj().T @ N[:, idx])
        if right > tol or left > tol:
            raise NotShadowError(
                f"kernel does not vanish on null vector #{idx}: "
                f"|Xc| = {right:.3e}, |X*c| = {left:.3e}, tolerance {tol:.3e}"
            )
    P = fact.R_pinv
    # the identity has shadow G, so only X - G is mapped through P
    M = np.eye(fact.rank, dtype=complex) + P.conj().T @ (X - fact.G) @ P
    residual = linalg.norm(fact.R.conj().T @ M @ fact.R - X)
    if residual > tol:
        raise NotShadowError(f"reconstruction residual {residual:.3e} exceeds {tol:.3e}")
    return OperatorOnSpan(fact, M, residual=float(residual))


def shadow_of_operator(fact, M):
    """R* M R, the matrix of <z_j|M|z_k> over the sample."""
    M = _array(M, 'M')
    if M.shape != (fact.rank, fact.rank):
        raise DimensionError(f"operator is {M.shape}, span has dimension {fact.rank}")
    return KernelOnSample(fact.R.conj().T @ M @ fact.R)
