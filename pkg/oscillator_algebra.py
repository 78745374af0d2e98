"""Oscillator semigroup Os[V], unitary oscillator group and Heisenberg group, V = C^d.

An element [rho, p, q, A] stands for the block matrix

    | 1  p*  rho |
    | 0  A   q   |
    | 0  0   1   |

and acts on Klauder points by [rho, p, q, A][z0, zeta] = [rho + z0 + p* zeta, q + A zeta].
The algebra below works on the structured form; as_block_matrix exists so
tests can compare against plain matrix arithmetic.

Unitary elements [alpha, q, A] (alpha imaginary, A unitary) embed as
[(alpha - q* q) / 2, -A* q, q, A]. The Heisenberg element W_lam(q) is the
unitary element with alpha = -i lam and A = 1; with that sign the group law
W_lam(q) W_lam'(q') = W_{lam + lam' + sigma(q, q')}(q + q') agrees with the
Os[V] product, where sigma(q, q') = 2 Im q* q'.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from errors import DimensionError, DomainError, NotUnitaryError, ParseError, SingularError
from models import (KlauderPoint, decode_complex, decode_matrix, decode_vector,
                    encode_array, encode_complex)

SINGULAR_RATIO = 1e-12
UNITARY_TOL = 1e-12


def _frozen(array, dtype=complex):
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class OscElement:
    rho: complex
    p: np.ndarray
    q: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'rho', complex(self.rho))
        for name in ('p', 'q', 'A'):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        d = self.q.shape[0] if self.q.ndim == 1 else -1
        if self.p.shape != (d,) or self.q.shape != (d,) or self.A.shape != (d, d):
            raise DimensionError(
                f"oscillator element needs p, q of length d and A d x d; "
                f"got p {self.p.shape}, q {self.q.shape}, A {self.A.shape}"
            )
        if not (np.isfinite(self.rho) and np.all(np.isfinite(self.p))
                and np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.A))):
            raise DomainError("oscillator element has non-finite entries")

    @property
    def d(self):
        return self.q.shape[0]


@dataclass(frozen=True, eq=False)
class UnitaryOscElement:
    """[alpha, q, A] with alpha = i * alpha_im stored through its imaginary part."""
    alpha_im: float
    q: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'alpha_im', float(self.alpha_im))
        object.__setattr__(self, 'q', _frozen(self.q))
        object.__setattr__(self, 'A', _frozen(self.A))
        d = self.q.shape[0]
        if self.A.shape != (d, d):
            raise DimensionError(f"A must be {d}x{d}, got {self.A.shape}")
        defect = linalg.norm(self.A.conj().T @ self.A - np.eye(d))
        if defect > UNITARY_TOL:
            raise NotUnitaryError(f"A is not unitary: ||A*A - I|| = {defect:.3e}")

    @property
    def alpha(self):
        return 1j * self.alpha_im

    @property
    def d(self):
        return self.q.shape[0]


@dataclass(frozen=True, eq=False)
class HeisenbergElement:
    lam: float
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'lam', float(self.lam))
        object.__setattr__(self, 'q', _frozen(np.ravel(self.q)))


def _same_dim(x, y):
    if x.d != y.d:
        raise DimensionError(f"dimension mismatch: {x.d} vs {y.d}")


# ---------------------------------------------------------------------------
# Os[V]
# ---------------------------------------------------------------------------

def identity(d):
    return OscElement(0.0, np.zeros(d), np.zeros(d), np.eye(d))


def linear(A):
    """The element [0, 0, 0, A]."""
    A = np.asarray(A, dtype=complex)
    d = A.shape[0]
    return OscElement(0.0, np.zeros(d), np.zeros(d), A)


def multiply(x, y):
    """[rho, p, q, A][rho', p', q', A'] = [rho' + rho + p* q', A'* p + p', q + A q', A A']."""
    _same_dim(x, y)
    return OscElement(
        y.rho + x.rho + np.vdot(x.p, y.q),
        y.A.conj().T @ x.p + y.p,
        x.q + x.A @ y.q,
        x.A @ y.A,
    )


def adjoint(x):
    return OscElement(x.rho.conjugate(), x.q, x.p, x.A.conj().T)


def condition_number(x):
    s = linalg.svdvals(x.A)
    return float(s[0] / s[-1]) if s[-1] > 0 else float('inf')


def inverse(x):
    """[p* A^-1 q - rho, -A^-* p, -A^-1 q, A^-1]."""
    s = linalg.svdvals(x.A)
    if s[-1] <= SINGULAR_RATIO * s[0]:
        raise SingularError(
            f"A is numerically singular: sigma_min / sigma_max = {s[-1] / s[0]:.3e}"
        )
    A_inv = linalg.inv(x.A)
    return OscElement(
        np.vdot(x.p, A_inv @ x.q) - x.rho,
        -A_inv.conj().T @ x.p,
        -A_inv @ x.q,
        A_inv,
    )


def as_block_matrix(x):
    d = x.d
    block = np.zeros((d + 2, d + 2), dtype=complex)
    block[0, 0] = 1.0
    block[0, 1:d + 1] = x.p.conj()
    block[0, d + 1] = x.rho
    block[1:d + 1, 1:d + 1] = x.A
    block[1:d + 1, d + 1] = x.q
    block[d + 1, d + 1] = 1.0
    return block


def block_involution(d):
    """Swap of the first and last block coordinates; adjoint(x) is J x^H J in block form."""
    J = np.eye(d + 2)
    J[[0, d + 1]] = J[[d + 1, 0]]
    return J


def from_block_matrix(block):
    block = np.asarray(block, dtype=complex)
    d = block.shape[0] - 2
    return OscElement(block[0, d + 1], block[0, 1:d + 1].conj(),
                      block[1:d + 1, d + 1], block[1:d + 1, 1:d + 1])


def act_on_point(x, z):
    """[rho + z0 + p* zeta, q + A zeta]."""
    zeta = np.asarray(z.zeta, dtype=complex)
    if zeta.shape != (x.d,):
        raise DimensionError(f"point has dimension {zeta.shape[0]}, element has {x.d}")
    z0 = x.rho + z.z0 + np.vdot(x.p, zeta)
    image = x.q + x.A @ zeta
    return KlauderPoint(complex(z0), tuple(complex(c) for c in image))


# ---------------------------------------------------------------------------
# Unitary oscillator group
# ---------------------------------------------------------------------------

def embed_unitary(u):
    """[(alpha - q* q) / 2, -A* q, q, A]."""
    defect = linalg.norm(u.A.conj().T @ u.A - np.eye(u.d))
    if defect > UNITARY_TOL:
        raise NotUnitaryError(f"A is not unitary: ||A*A - I|| = {defect:.3e}")
    return OscElement(0.5 * (u.alpha - np.vdot(u.q, u.q)), -u.A.conj().T @ u.q, u.q, u.A)


def unitary_multiply(u, v):
    """[alpha + alpha' - 2i Im(q* A q'), q + A q', A A']."""
    _same_dim(u, v)
    cross = np.vdot(u.q, u.A @ v.q)
    return UnitaryOscElement(
        u.alpha_im + v.alpha_im - 2.0 * cross.imag,
        u.q + u.A @ v.q,
        u.A @ v.A,
    )


def unitary_inverse(u):
    """[-alpha, -A* q, A*]."""
    A_adj = u.A.conj().T
    return UnitaryOscElement(-u.alpha_im, -A_adj @ u.q, A_adj)


def unitary_defect(x):
    """||x* x - 1|| and ||x x* - 1|| in block form; vanishes for unitary elements."""
    block = as_block_matrix(x)
    adj = as_block_matrix(adjoint(x))
    eye = np.eye(x.d + 2)
    return max(linalg.norm(adj @ block - eye), linalg.norm(block @ adj - eye))


# ---------------------------------------------------------------------------
# Heisenberg group
# ---------------------------------------------------------------------------

def sigma(q, q2):
    """Symplectic form 2 Im q* q'."""
    return 2.0 * float(np.vdot(q, q2).imag)


def heisenberg_multiply(w, w2):
    if w.q.shape != w2.q.shape:
        raise DimensionError(f"dimension mismatch: {w.q.shape[0]} vs {w2.q.shape[0]}")
    return HeisenbergElement(w.lam + w2.lam + sigma(w.q, w2.q), w.q + w2.q)


def heisenberg_inverse(w):
    return HeisenbergElement(-w.lam, -w.q)


def heisenberg_unitary(w):
    return UnitaryOscElement(-w.lam, w.q, np.eye(w.q.shape[0]))


def heisenberg_embed(w):
    """W_lam(q) as [(-i lam - q* q) / 2, -q, q, 1]."""
    return embed_unitary(heisenberg_unitary(w))


# ---------------------------------------------------------------------------
# Random elements and JSON
# ---------------------------------------------------------------------------

def random_unitary(rng, d):
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    Q, R = linalg.qr(Z)
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def _ball(rng, d, radius):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v * (radius * rng.uniform() ** (1.0 / (2 * d)) / np.linalg.norm(v))


def random_element(rng, d, scale=0.5, contraction=True):
    """Random [rho, p, q, A] with ||p||, ||q|| <= scale and, if contraction, ||A|| <= 1."""
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    if contraction:
        A = A / max(linalg.norm(A, 2), 1.0) * rng.uniform(0.5, 1.0)
    rho = complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
    return OscElement(rho, _ball(rng, d, scale), _ball(rng, d, scale), A)


def random_unitary_element(rng, d, scale=0.5):
    return UnitaryOscElement(rng.uniform(-1.0, 1.0), _ball(rng, d, scale), random_unitary(rng, d))


def to_dict(x):
    return {'rho': encode_complex(x.rho), 'p': encode_array(x.p),
            'q': encode_array(x.q), 'A': encode_array(x.A)}


def from_dict(raw, where='element'):
    """Parse {"rho": [re, im], "p": [...], "q": [...], "A": [[...]]}."""
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: oscillator element must be an object")
    missing = [k for k in ('rho', 'p', 'q', 'A') if k not in raw]
    if missing:
        raise ParseError(f"{where}: missing fields {missing}")
    return OscElement(decode_complex(raw['rho'], f"{where}.rho"),
                      decode_vector(raw['p'], f"{where}.p"),
                      decode_vector(raw['q'], f"{where}.q"),
                      decode_matrix(raw['A'], f"{where}.A"))
