"""Data layer: point types, space and map descriptors, JSON artifact codec.

Points are frozen dataclasses and compare structurally, so two points are
the same point only when every field is bitwise equal. Orbit samples rely
on this to recognize images they already contain.

Complex numbers are written to JSON as two-element arrays [re, im]; bare
numbers are accepted on input as real values.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from errors import DomainError, IoError, ParseError


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinitePoint:
    index: int


@dataclass(frozen=True)
class DiskPoint:
    z: complex


@dataclass(frozen=True)
class MoebiusPoint:
    z1: complex
    z2: complex


@dataclass(frozen=True)
class KlauderPoint:
    z0: complex
    zeta: tuple

    @property
    def dim(self):
        return len(self.zeta)


@dataclass(frozen=True)
class ProjectivePoint:
    lam: complex
    base: object


@dataclass(frozen=True)
class EmbeddedPoint:
    v: tuple


@dataclass(frozen=True)
class TimesPoint:
    """A pair (alpha, z) of a separable map and a base point."""
    alpha: object
    base: object


def klauder_point(z0, zeta):
    """Build a KlauderPoint from any numeric z0 and sequence zeta."""
    return KlauderPoint(complex(z0), tuple(complex(c) for c in np.ravel(zeta)))


def glauber_point(zeta):
    """Point of the z0 = 0 slice, whose states are the optical coherent states."""
    return klauder_point(0.0, zeta)


# ---------------------------------------------------------------------------
# Spaces, samples, maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoherentSpace:
    """A coherent space given by its kernel and domain predicate.

    projective_degree and scalar_multiply are set together for spaces with
    a scalar multiplication satisfying K(z', lam z) = lam**e K(z', z).
    """
    kind: str
    kernel: Callable
    domain_contains: Callable
    projective_degree: Optional[int] = None
    scalar_multiply: Optional[Callable] = None
    dim: Optional[int] = None
    base: Optional['CoherentSpace'] = None
    label: str = ''

    @property
    def is_projective(self):
        return self.scalar_multiply is not None and self.projective_degree is not None


@dataclass(frozen=True, eq=False)
class SampleSet:
    space: CoherentSpace
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, 'points', tuple(self.points))
        if not self.points:
            raise DomainError("a sample needs at least one point")
        for idx, point in enumerate(self.points):
            if not self.space.domain_contains(point):
                raise DomainError(
                    f"Point #{idx} {point!r} is outside the {self.space.kind} domain"
                )

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True, eq=False)
class MapSpec:
    """A map Z -> Z with optional adjoint and inverse."""
    forward: Callable
    adjoint: Optional[Callable] = None
    inverse: Optional[Callable] = None
    label: str = 'map'

    def __call__(self, point):
        return self.forward(point)


@dataclass(frozen=True, eq=False)
class SeparableSpec:
    """A separable map alpha with K(z, alpha z') = chi K(z, z')."""
    alpha: Callable
    chi: complex
    label: str = 'separable'
    adjoint: Optional[Callable] = None
    inverse: Optional[Callable] = None

    def __call__(self, point):
        return self.alpha(point)


@dataclass(frozen=True, eq=False)
class MultiplierSpec:
    """A function m on points together with the map it multiplies."""
    m: Callable
    map: MapSpec
    label: str = field(default='multiplier')


IDENTITY_MAP = MapSpec(forward=lambda z: z, adjoint=lambda z: z,
                       inverse=lambda z: z, label='identity')


# ---------------------------------------------------------------------------
# Complex JSON encoding
# ---------------------------------------------------------------------------

def encode_complex(value):
    value = complex(value)
    return [value.real, value.imag]


def decode_complex(raw, where='value'):
    """Decode [re, im] or a bare real number."""
    if isinstance(raw, bool):
        raise ParseError(f"{where}: expected a number or [re, im], got {raw!r}")
    if isinstance(raw, (int, float)):
        value = complex(float(raw), 0.0)
    elif isinstance(raw, list) and len(raw) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw):
        value = complex(float(raw[0]), float(raw[1]))
    else:
        raise ParseError(f"{where}: expected a number or [re, im], got {raw!r}")
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ParseError(f"{where}: non-finite value {raw!r}")
    return value


def encode_array(array):
    """Nested [re, im] lists for a complex array of any rank."""
    array = np.asarray(array, dtype=complex)
    if array.ndim == 0:
        return encode_complex(array.item())
    return [encode_array(row) for row in array]


def decode_vector(raw, where='vector'):
    if not isinstance(raw, list):
        raise ParseError(f"{where}: expected a list, got {type(raw).__name__}")
    return np.array([decode_complex(x, f"{where}[{i}]") for i, x in enumerate(raw)],
                    dtype=complex)


def decode_matrix(raw, where='matrix'):
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{where}: expected a non-empty list of rows")
    rows = [decode_vector(row, f"{where}[{i}]") for i, row in enumerate(raw)]
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"{where}[{i}]: row has {len(row)} entries, expected {width}")
    return np.vstack(rows) if width else np.zeros((len(rows), 0), dtype=complex)


# ---------------------------------------------------------------------------
# Points <-> JSON
# ---------------------------------------------------------------------------

def point_to_json(point):
    if isinstance(point, DiskPoint):
        return encode_complex(point.z)
    if isinstance(point, MoebiusPoint):
        return [encode_complex(point.z1), encode_complex(point.z2)]
    if isinstance(point, KlauderPoint):
        return {'z0': encode_complex(point.z0), 'zeta': [encode_complex(c) for c in point.zeta]}
    if isinstance(point, EmbeddedPoint):
        return [encode_complex(c) for c in point.v]
    if isinstance(point, FinitePoint):
        return point.index
    if isinstance(point, ProjectivePoint):
        return {'lambda': encode_complex(point.lam), 'base': point_to_json(point.base)}
    raise TypeError(f"no JSON form for {type(point).__name__}")


def point_from_json(kind, raw, where='point'):
    if kind == 'szego':
        return DiskPoint(decode_complex(raw, where))
    if kind == 'moebius':
        if not isinstance(raw, list) or len(raw) != 2:
            raise ParseError(f"{where}: Moebius point must be [z1, z2]")
        return MoebiusPoint(decode_complex(raw[0], f"{where}.z1"),
                            decode_complex(raw[1], f"{where}.z2"))
    if kind == 'klauder':
        if not isinstance(raw, dict) or 'z0' not in raw or 'zeta' not in raw:
            raise ParseError(f"{where}: Klauder point must be {{\"z0\": ..., \"zeta\": [...]}}")
        zeta = decode_vector(raw['zeta'], f"{where}.zeta")
        return KlauderPoint(decode_complex(raw['z0'], f"{where}.z0"),
                            tuple(complex(c) for c in zeta))
    if kind == 'embedded':
        return EmbeddedPoint(tuple(complex(c) for c in decode_vector(raw, where)))
    if kind == 'finite':
        if not isinstance(raw, int) or isinstance(raw, bool):
            raise ParseError(f"{where}: finite point must be an integer index")
        return FinitePoint(raw)
    raise ParseError(f"{where}: unknown space kind {kind!r}")


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

def read_json(path):
    """Load a JSON file, mapping decode failures to ParseError with position."""
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise IoError(f"cannot read {path}: {e.strerror or e}") from e
    return parse_json(text, source=path)


def parse_json(text, source='<string>'):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: {e.msg}", line=e.lineno, column=e.colno) from e


def write_json(path, document, indent=None):
    try:
        with open(path, 'w') as f:
            json.dump(document, f, indent=indent, allow_nan=False)
            f.write('\n')
    except OSError as e:
        raise IoError(f"cannot write {path}: {e.strerror or e}") from e


def dump_matrix(path, matrix):
    """Write a complex array as nested [re, im] pairs.

    json writes floats with repr, so a reload is bitwise equal.
    """
    array = np.asarray(matrix, dtype=complex)
    if not np.all(np.isfinite(array)):
        raise ValueError(f"refusing to write non-finite entries to {path}")
    write_json(path, encode_array(array))


def load_matrix(path):
    """Read a matrix written by dump_matrix. Rows are lists of entries."""
    return decode_matrix(read_json(path), path)


_FILE_SPACES = ('szego', 'moebius', 'klauder', 'embedded', 'finite')


def space_from_document(document, source='<document>'):
    """Build the CoherentSpace a points document refers to."""
    import kernel_spaces
    if not isinstance(document, dict):
        raise ParseError(f"{source}: expected an object with 'space' and 'points'")
    kind = document.get('space')
    dim = document.get('dim')
    if kind == 'szego':
        return kernel_spaces.szego_space()
    if kind == 'moebius':
        return kernel_spaces.moebius_space()
    if kind in ('klauder', 'embedded'):
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise ParseError(f"{source}: '{kind}' needs a positive integer 'dim', got {dim!r}")
        builder = kernel_spaces.klauder_space if kind == 'klauder' else kernel_spaces.embedded_space
        return builder(dim)
    if kind == 'finite':
        return kernel_spaces.finite_space(decode_matrix(document.get('matrix'), f"{source}.matrix"))
    raise ParseError(f"{source}: unknown space {kind!r}")


def load_points(path):
    """Read {"space": ..., "dim": d, "points": [...]} into a SampleSet."""
    document = read_json(path)
    return sample_from_document(document, source=path)


def sample_from_document(document, source='<document>'):
    space = space_from_document(document, source)
    raw_points = document.get('points')
    if not isinstance(raw_points, list) or not raw_points:
        raise ParseError(f"{source}: 'points' must be a non-empty list")
    points = [point_from_json(space.kind, raw, f"{source}.points[{i}]")
              for i, raw in enumerate(raw_points)]
    return SampleSet(space, points)


def dump_points(path, sample):
    """Write a sample so that load_points rebuilds the same space.

    Finite samples carry the full kernel matrix; derived spaces have no
    points-file form and are rejected.
    """
    space = sample.space
    if space.kind not in _FILE_SPACES:
        raise DomainError(f"{space.kind} samples cannot be written to a points file")
    document = {'space': space.kind, 'points': [point_to_json(p) for p in sample]}
    if space.kind == 'finite':
        indices = [FinitePoint(k) for k in range(space.dim)]
        document['matrix'] = encode_array([[space.kernel(z, w) for w in indices] for z in indices])
    elif space.dim is not None:
        document['dim'] = space.dim
    write_json(path, document, indent=1)
