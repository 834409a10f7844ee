"""Exact state evolution for Grover iterations on a block-partitioned database.

A database of ``n_items`` entries with a single target item is split into
``n_blocks`` blocks of equal size.  Every operator used by full Grover
search and by GRK partial search is a real reflection, and all of them
preserve the 3-dimensional subspace spanned by

* the target item,
* the uniform superposition of the other items in the target block,
* the uniform superposition of all items in non-target blocks.

``SymmetricState`` stores one real per-item amplitude for each class, in
that fixed order, so state evolution is exact and O(1) in the database
size.  ``FullState`` keeps the literal length-N amplitude vector and acts
as a brute-force oracle for cross-checks at moderate N.
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    CapacityError,
    DomainError,
    GeometryError,
    InvalidStateError,
    SubspaceViolationError,
)

DEFAULT_FULL_VECTOR_CAP = 4096
STATE_NORM_TOL = 1e-9
SUBSPACE_TOL = 1e-9


@dataclass(frozen=True)
class DatabaseGeometry:
    """Partition of ``n_items`` database entries into ``n_blocks`` equal blocks."""

    n_items: int
    n_blocks: int

    def __post_init__(self):
        if self.n_items < 1 or self.n_blocks < 1:
            raise GeometryError(
                f"need n_items >= 1 and n_blocks >= 1, got ({self.n_items}, {self.n_blocks})"
            )
        if self.n_items % self.n_blocks != 0:
            raise GeometryError(
                f"n_blocks={self.n_blocks} does not divide n_items={self.n_items}"
            )

    @property
    def block_size(self) -> int:
        return self.n_items // self.n_blocks

    def require_partition(self):
        """Partial-search operators additionally need at least two blocks."""
        if self.n_blocks < 2:
            raise GeometryError(
                f"partial search needs n_blocks >= 2, got {self.n_blocks}"
            )


@dataclass(frozen=True)
class RotationAngles:
    """Rotation angles of the global and local Grover iterations.

    ``theta1`` satisfies sin^2(theta1) = 1/N and ``theta2`` satisfies
    sin^2(theta2) = 1/b.  The ``*_asymptotic`` values are the large-block
    simplifications 1/sqrt(N) and 1/sqrt(b).
    """

    theta1: float
    theta2: float
    theta1_asymptotic: float
    theta2_asymptotic: float

    @classmethod
    def for_geometry(cls, geometry: DatabaseGeometry) -> "RotationAngles":
        n = geometry.n_items
        b = geometry.block_size
        return cls(
            theta1=math.asin(1.0 / math.sqrt(n)),
            theta2=math.asin(1.0 / math.sqrt(b)),
            theta1_asymptotic=1.0 / math.sqrt(n),
            theta2_asymptotic=1.0 / math.sqrt(b),
        )


def rotation_angles(geometry: DatabaseGeometry) -> RotationAngles:
    return RotationAngles.for_geometry(geometry)


@dataclass(frozen=True)
class SymmetricState:
    """State in the symmetric subspace, stored as per-item amplitudes.

    ``amp_target`` is the amplitude of the target item, ``amp_target_rest``
    the amplitude of each of the other ``b - 1`` items in the target block,
    and ``amp_outside`` the amplitude of each of the ``(K - 1) b`` items in
    non-target blocks.  All amplitudes are real.
    """

    geometry: DatabaseGeometry
    amp_target: float
    amp_target_rest: float
    amp_outside: float

    def basis_coefficients(self) -> np.ndarray:
        """Coefficients on the orthonormal (target, block rest, outside) basis."""
        b = self.geometry.block_size
        k = self.geometry.n_blocks
        return np.array(
            [
                self.amp_target,
                math.sqrt(b - 1) * self.amp_target_rest,
                math.sqrt((k - 1) * b) * self.amp_outside,
            ]
        )

    @classmethod
    def from_basis_coefficients(
        cls, geometry: DatabaseGeometry, coefficients: np.ndarray
    ) -> "SymmetricState":
        b = geometry.block_size
        k = geometry.n_blocks
        c1, c2, c3 = (float(c) for c in coefficients)
        return cls(
            geometry=geometry,
            amp_target=c1,
            amp_target_rest=c2 / math.sqrt(b - 1) if b > 1 else 0.0,
            amp_outside=c3 / math.sqrt((k - 1) * b) if k > 1 else 0.0,
        )

    def norm_squared(self) -> float:
        b = self.geometry.block_size
        k = self.geometry.n_blocks
        return (
            self.amp_target**2
            + (b - 1) * self.amp_target_rest**2
            + (k - 1) * b * self.amp_outside**2
        )


def _require_normalized(state: SymmetricState, tol: float = STATE_NORM_TOL):
    err = abs(state.norm_squared() - 1.0)
    if err > tol:
        raise InvalidStateError(f"state norm^2 deviates from 1 by {err:.3e}")


def _require_count(times) -> int:
    if not isinstance(times, (int, np.integer)) or times < 0:
        raise DomainError(f"iteration count must be a nonnegative integer, got {times!r}")
    return int(times)


def _s1_coefficients(geometry: DatabaseGeometry) -> np.ndarray:
    """Uniform superposition of the whole database, in the symmetric basis."""
    n = geometry.n_items
    b = geometry.block_size
    k = geometry.n_blocks
    return np.array([1.0, math.sqrt(b - 1), math.sqrt((k - 1) * b)]) / math.sqrt(n)


def target_reflection_matrix(geometry: DatabaseGeometry) -> np.ndarray:
    """The oracle: flips the sign of the target amplitude."""
    return np.diag([-1.0, 1.0, 1.0])


def uniform_reflection_matrix(geometry: DatabaseGeometry) -> np.ndarray:
    """Reflection about the uniform superposition of the whole database."""
    s1 = _s1_coefficients(geometry)
    return np.eye(3) - 2.0 * np.outer(s1, s1)


def global_matrix(geometry: DatabaseGeometry) -> np.ndarray:
    """One global Grover iteration in the symmetric basis."""
    return -uniform_reflection_matrix(geometry) @ target_reflection_matrix(geometry)


def local_matrix(geometry: DatabaseGeometry) -> np.ndarray:
    """One simultaneous local iteration in the symmetric basis.

    Acts as a rotation by 2*theta2 on the (target, block rest) sector and
    leaves the outside coefficient untouched, so non-target blocks keep
    their amplitudes exactly.
    """
    theta2 = rotation_angles(geometry).theta2
    c, s = math.cos(2.0 * theta2), math.sin(2.0 * theta2)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def uniform_state(geometry: DatabaseGeometry) -> SymmetricState:
    """Uniform superposition: every item carries amplitude 1/sqrt(N)."""
    a = 1.0 / math.sqrt(geometry.n_items)
    return SymmetricState(geometry, a, a, a)


def apply_global(state: SymmetricState, times: int) -> SymmetricState:
    """Apply the global Grover iteration ``times`` times."""
    times = _require_count(times)
    _require_normalized(state)
    if times == 0:
        return state
    m = np.linalg.matrix_power(global_matrix(state.geometry), times)
    return SymmetricState.from_basis_coefficients(
        state.geometry, m @ state.basis_coefficients()
    )


def apply_local(state: SymmetricState, times: int) -> SymmetricState:
    """Apply the simultaneous local iteration ``times`` times."""
    times = _require_count(times)
    _require_normalized(state)
    if times == 0:
        return state
    m = np.linalg.matrix_power(local_matrix(state.geometry), times)
    return SymmetricState.from_basis_coefficients(
        state.geometry, m @ state.basis_coefficients()
    )


def global_closed_form(geometry: DatabaseGeometry, j1: float) -> SymmetricState:
    """State after j1 global iterations from uniform, for real j1 >= 0.

    The target amplitude is sin((2 j1 + 1) theta1) and the remaining N - 1
    items share the per-item amplitude cos((2 j1 + 1) theta1)/sqrt(N - 1).
    Non-integer j1 parametrizes the underlying continuous rotation.
    """
    if not math.isfinite(j1) or j1 < 0:
        raise DomainError(f"j1 must be finite and >= 0, got {j1!r}")
    n = geometry.n_items
    phi = (2.0 * j1 + 1.0) * rotation_angles(geometry).theta1
    rest = math.cos(phi) / math.sqrt(n - 1) if n > 1 else 0.0
    return SymmetricState(geometry, math.sin(phi), rest, rest)


class FullSearchResult(NamedTuple):
    iterations: float
    success_probability: float


def grover_full_search(n_items: int) -> FullSearchResult:
    """Exact full-search iteration count and its nearest-integer success probability.

    Returns j_full = pi/(4 theta1) - 1/2 together with the probability
    sin^2((2 round(j_full) + 1) theta1) obtained by running the nearest
    integer number of iterations.
    """
    if n_items < 2:
        raise GeometryError(f"full search needs n_items >= 2, got {n_items}")
    theta1 = math.asin(1.0 / math.sqrt(n_items))
    j_full = math.pi / (4.0 * theta1) - 0.5
    j_int = round(j_full)
    prob = math.sin((2 * j_int + 1) * theta1) ** 2
    return FullSearchResult(j_full, prob)


class GroverOperation(enum.Enum):
    """Operator alphabet for brute-force simulation words."""

    GLOBAL = "global"
    LOCAL = "local"


@dataclass(frozen=True)
class FullState:
    """Brute-force state: the literal length-N real amplitude vector.

    Block i occupies indices [i*b, (i+1)*b).
    """

    amplitudes: np.ndarray
    target_index: int

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _apply_full_operation(
    v: np.ndarray, geometry: DatabaseGeometry, target: int, op: GroverOperation
) -> np.ndarray:
    n = geometry.n_items
    b = geometry.block_size
    out = v.copy()
    out[target] = -out[target]  # oracle I_t
    if op is GroverOperation.GLOBAL:
        out -= 2.0 * out.mean()
    elif op is GroverOperation.LOCAL:
        blocks = out.reshape(geometry.n_blocks, b)
        blocks -= 2.0 * blocks.mean(axis=1, keepdims=True)
        out = blocks.reshape(n)
    else:
        raise DomainError(f"unknown operation {op!r}")
    return -out


def full_state_simulate(
    geometry: DatabaseGeometry,
    target_index: int,
    word: Sequence[GroverOperation],
    full_vector_cap: int = DEFAULT_FULL_VECTOR_CAP,
    initial_amplitudes: np.ndarray | None = None,
) -> FullState:
    """Apply a word of global/local iterations to the literal N-vector.

    Starts from the uniform vector unless ``initial_amplitudes`` is given.
    Kept O(N) per operator, so N is capped (default 4096) to stay cheap.
    """
    n = geometry.n_items
    if n > full_vector_cap:
        raise CapacityError(
            f"n_items={n} exceeds the full-vector cap {full_vector_cap}"
        )
    if not 0 <= target_index < n:
        raise DomainError(f"target_index {target_index} out of range [0, {n})")
    if initial_amplitudes is None:
        v = np.full(n, 1.0 / math.sqrt(n))
    else:
        v = np.asarray(initial_amplitudes, dtype=float).copy()
        if v.shape != (n,):
            raise DomainError(f"initial amplitudes must have shape ({n},)")
    for op in word:
        v = _apply_full_operation(v, geometry, target_index, op)
    return FullState(amplitudes=v, target_index=target_index)


def project_to_symmetric(
    full: FullState,
    geometry: DatabaseGeometry,
    target_index: int | None = None,
    tol: float = SUBSPACE_TOL,
) -> SymmetricState:
    """Extract the three per-item amplitudes from a full state.

    The amplitudes must be constant within each symmetry class; otherwise a
    ``SubspaceViolationError`` carrying the largest deviation is raised.
    """
    if target_index is None:
        target_index = full.target_index
    n = geometry.n_items
    b = geometry.block_size
    v = full.amplitudes
    if v.shape != (n,):
        raise DomainError(f"amplitude vector has shape {v.shape}, expected ({n},)")
    tb = target_index // b
    block = v[tb * b : (tb + 1) * b]
    rest = np.delete(block, target_index - tb * b)
    outside = np.concatenate([v[: tb * b], v[(tb + 1) * b :]])

    max_dev = 0.0
    for cls in (rest, outside):
        if cls.size:
            max_dev = max(max_dev, float(np.abs(cls - cls.mean()).max()))
    if max_dev > tol:
        raise SubspaceViolationError(
            f"state deviates from the symmetric subspace by {max_dev:.3e}", max_dev
        )
    return SymmetricState(
        geometry=geometry,
        amp_target=float(v[target_index]),
        amp_target_rest=float(rest.mean()) if rest.size else 0.0,
        amp_outside=float(outside.mean()) if outside.size else 0.0,
    )


def target_block_probability(state: SymmetricState) -> float:
    """Probability that a measurement lands anywhere in the target block."""
    b = state.geometry.block_size
    return state.amp_target**2 + (b - 1) * state.amp_target_rest**2
