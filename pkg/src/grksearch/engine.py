"""The three-step GRK partial search and its cancellation condition.

A run is j1 global iterations, j2 simultaneous local iterations, and one
final operation that empties the non-target blocks.  Integer schedules
execute as operator powers; real-valued schedules execute through the
closed-form rotation composition, which is what makes the large-block
analysis and the cancellation root-solving cheap at any database size.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import (
    DatabaseGeometry,
    SymmetricState,
    global_matrix,
    local_matrix,
    rotation_angles,
    target_reflection_matrix,
    uniform_reflection_matrix,
    uniform_state,
    _require_normalized,
)
from .errors import DomainError, GeometryError, NoRootError, ScheduleModeError
from .optimum import alpha_opt, eta_opt

CANCELLATION_RESIDUAL_TOL = 1e-12


class FinalOperation(enum.Enum):
    """Variant of the last operation; all three empty the non-target blocks.

    STANDARD_G1 reuses the plain global iteration.  MINUS_IT_IS1 applies
    -I_t I_s1 and converges to the same final state as STANDARD_G1 in the
    large-block limit.  IS1_ONLY skips the oracle call, saving one query
    but leaving the target amplitude with the opposite sign relative to
    the rest of its block.
    """

    STANDARD_G1 = "g1"
    MINUS_IT_IS1 = "it-is1"
    IS1_ONLY = "is1"

    @property
    def consumes_query(self) -> bool:
        return self is not FinalOperation.IS1_ONLY


@dataclass(frozen=True)
class IterationSchedule:
    """Global count j1 and local count j2, plus the final-operation variant."""

    j1: float
    j2: float
    final_op: FinalOperation = FinalOperation.STANDARD_G1

    def __post_init__(self):
        for name, j in (("j1", self.j1), ("j2", self.j2)):
            if not math.isfinite(j) or j < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {j!r}")

    @property
    def is_integer(self) -> bool:
        """Integer schedules are executable as literal operator powers."""
        return float(self.j1).is_integer() and float(self.j2).is_integer()

    @property
    def queries(self) -> float:
        return self.j1 + self.j2 + (1 if self.final_op.consumes_query else 0)


@dataclass(frozen=True)
class GrkResult:
    final_state: SymmetricState
    leaked_probability: float
    queries_used: float


def final_operation_matrix(geometry: DatabaseGeometry, final_op: FinalOperation) -> np.ndarray:
    i_t = target_reflection_matrix(geometry)
    i_s1 = uniform_reflection_matrix(geometry)
    if final_op is FinalOperation.STANDARD_G1:
        return -i_s1 @ i_t
    if final_op is FinalOperation.MINUS_IT_IS1:
        return -i_t @ i_s1
    if final_op is FinalOperation.IS1_ONLY:
        return i_s1
    raise DomainError(f"unknown final operation {final_op!r}")


def _closed_form_coefficients(geometry: DatabaseGeometry, j1: float, j2: float) -> np.ndarray:
    """Basis coefficients of G2^j2 G1^j1 applied to uniform, for real j1, j2.

    Step one places the state on the global rotation orbit at angle
    (2 j1 + 1) theta1; step two rotates the target-block sector by
    2 j2 theta2 and leaves the outside coefficient alone.
    """
    n = geometry.n_items
    b = geometry.block_size
    k = geometry.n_blocks
    ang = rotation_angles(geometry)
    phi1 = (2.0 * j1 + 1.0) * ang.theta1
    c = np.array(
        [
            math.sin(phi1),
            math.sqrt((b - 1) / (n - 1)) * math.cos(phi1),
            math.sqrt((k - 1) * b / (n - 1)) * math.cos(phi1),
        ]
    )
    return _rotate_local(geometry, c, j2)


def _rotate_local(geometry: DatabaseGeometry, coefficients: np.ndarray, j2: float) -> np.ndarray:
    phi2 = 2.0 * j2 * rotation_angles(geometry).theta2
    c, s = math.cos(phi2), math.sin(phi2)
    out = coefficients.copy()
    out[0] = c * coefficients[0] + s * coefficients[1]
    out[1] = -s * coefficients[0] + c * coefficients[1]
    return out


def run_grk(
    geometry: DatabaseGeometry,
    schedule: IterationSchedule,
    mode: str = "auto",
    initial_state: SymmetricState | None = None,
) -> GrkResult:
    """Execute one GRK partial search.

    Args:
        geometry: database partition; needs at least two blocks.
        schedule: iteration counts and final-operation variant.
        mode: "operators" (integer schedules only), "closed-form", or
            "auto", which picks operators for integer schedules.
        initial_state: start state for operator-power execution; defaults
            to the uniform superposition.  Closed-form execution always
            starts from uniform.

    Returns:
        GrkResult with the final state, the total probability left outside
        the target block, and the number of oracle queries consumed.
    """
    geometry.require_partition()
    if mode not in ("auto", "operators", "closed-form"):
        raise DomainError(f"unknown execution mode {mode!r}")
    if mode == "auto":
        mode = "operators" if schedule.is_integer else "closed-form"

    if mode == "operators":
        if not schedule.is_integer:
            raise ScheduleModeError(
                f"operator-power execution needs integer counts, got ({schedule.j1}, {schedule.j2})"
            )
        if initial_state is None:
            initial_state = uniform_state(geometry)
        _require_normalized(initial_state)
        c = initial_state.basis_coefficients()
        c = np.linalg.matrix_power(global_matrix(geometry), int(schedule.j1)) @ c
        c = np.linalg.matrix_power(local_matrix(geometry), int(schedule.j2)) @ c
    else:
        if initial_state is not None:
            raise DomainError("closed-form execution starts from the uniform state")
        c = _closed_form_coefficients(geometry, schedule.j1, schedule.j2)

    c = final_operation_matrix(geometry, schedule.final_op) @ c
    state = SymmetricState.from_basis_coefficients(geometry, c)
    return GrkResult(
        final_state=state,
        leaked_probability=float(c[2] ** 2),
        queries_used=schedule.queries,
    )


def leaked_amplitude(geometry: DatabaseGeometry, j1: float, j2: float) -> float:
    """Per-item amplitude left in non-target blocks after the final iteration.

    Evaluated on the closed-form evolution, so j1 and j2 may be real; the
    value vanishes exactly on the cancellation condition.
    """
    geometry.require_partition()
    c = _closed_form_coefficients(geometry, j1, j2)
    c = final_operation_matrix(geometry, FinalOperation.STANDARD_G1) @ c
    return float(c[2]) / math.sqrt((geometry.n_blocks - 1) * geometry.block_size)


def _bracketed_root(f, lo: float, hi: float, points: int) -> float:
    """First root of f on [lo, hi], located by scan plus bracketed refinement."""
    xs = np.linspace(lo, hi, points)
    prev_x, prev_f = xs[0], f(xs[0])
    if prev_f == 0.0:
        return float(prev_x)
    for x in xs[1:]:
        fx = f(x)
        if fx == 0.0:
            return float(x)
        if prev_f * fx < 0.0:
            return float(brentq(f, prev_x, x, xtol=1e-10, rtol=8.9e-16))
        prev_x, prev_f = x, fx
    raise NoRootError(f"no sign change on [{lo}, {hi}] with {points} scan points")


def solve_cancellation(geometry: DatabaseGeometry, j2: float, scan_points: int = 257) -> float:
    """Global count j1 that cancels the non-target blocks at the given j2.

    Scans leaked_amplitude over j1 in [0, pi/(4 theta1)] for a sign change
    and refines it by bracketed root finding.  The residual of the returned
    root is below 1e-12; if no bracket exists the caller must adjust j2.
    """
    geometry.require_partition()
    j_max = math.pi / (4.0 * rotation_angles(geometry).theta1)
    try:
        root = _bracketed_root(lambda j1: leaked_amplitude(geometry, j1, j2), 0.0, j_max, scan_points)
    except NoRootError:
        raise NoRootError(
            f"leaked amplitude has no sign change for j1 in [0, {j_max:.3f}] at j2={j2}"
        ) from None
    residual = abs(leaked_amplitude(geometry, root, j2))
    if residual > CANCELLATION_RESIDUAL_TOL:
        raise NoRootError(f"root refinement stalled, residual {residual:.3e}")
    return root


def _leak_after_local(geometry: DatabaseGeometry, prepared: np.ndarray, j2: float) -> float:
    """Leaked per-item amplitude when the local sweep runs for real j2.

    ``prepared`` holds the basis coefficients after all global iterations;
    unlike the global count, a real local count is well defined from any
    start state because the local operator is a plain sector rotation.
    """
    c = _rotate_local(geometry, prepared, j2)
    c = final_operation_matrix(geometry, FinalOperation.STANDARD_G1) @ c
    return float(c[2]) / math.sqrt((geometry.n_blocks - 1) * geometry.block_size)


def solve_local_cancellation(
    geometry: DatabaseGeometry, prepared: SymmetricState, scan_points: int = 513
) -> float:
    """Smallest nonnegative real j2 that cancels the non-target blocks.

    Counterpart of ``solve_cancellation`` with the roles swapped: the
    global iterations are already applied (``prepared``) and the local
    count is the free variable, scanned over one full rotation period.
    """
    geometry.require_partition()
    c = prepared.basis_coefficients()
    period = math.pi / rotation_angles(geometry).theta2
    return _bracketed_root(
        lambda j2: _leak_after_local(geometry, c, j2), 0.0, period, scan_points
    )


def optimal_scaled_schedule(
    geometry: DatabaseGeometry, final_op: FinalOperation = FinalOperation.STANDARD_G1
) -> IterationSchedule:
    """Real-valued schedule from the large-block closed-form optimum."""
    geometry.require_partition()
    k = geometry.n_blocks
    n = geometry.n_items
    j1 = max(0.0, (math.pi / 4.0 - eta_opt(k) / math.sqrt(k)) * math.sqrt(n))
    j2 = alpha_opt(k) * math.sqrt(geometry.block_size)
    return IterationSchedule(j1=j1, j2=j2, final_op=final_op)


def optimal_integer_schedule(
    geometry: DatabaseGeometry,
    final_op: FinalOperation = FinalOperation.STANDARD_G1,
    search_radius: int = 2,
    initial_state: SymmetricState | None = None,
) -> IterationSchedule:
    """Best executable schedule near the rounded closed-form optimum.

    Rounds the real-valued optimum to integers and searches the
    +-search_radius neighborhood, keeping the schedule with the smallest
    leaked probability; ties go to fewer total iterations.
    """
    geometry.require_partition()
    if geometry.block_size < 4:
        raise GeometryError(
            f"integer schedule search needs block_size >= 4, got {geometry.block_size}"
        )
    scaled = optimal_scaled_schedule(geometry, final_op)
    return _refine_integer_schedule(
        geometry, scaled.j1, scaled.j2, final_op, search_radius, initial_state
    )


def _refine_integer_schedule(
    geometry: DatabaseGeometry,
    j1_real: float,
    j2_real: float,
    final_op: FinalOperation,
    search_radius: int,
    initial_state: SymmetricState | None,
) -> IterationSchedule:
    best = None
    for d1 in range(-search_radius, search_radius + 1):
        for d2 in range(-search_radius, search_radius + 1):
            j1 = max(0, round(j1_real) + d1)
            j2 = max(0, round(j2_real) + d2)
            schedule = IterationSchedule(j1=j1, j2=j2, final_op=final_op)
            result = run_grk(geometry, schedule, mode="operators", initial_state=initial_state)
            key = (result.leaked_probability, j1 + j2)
            if best is None or key < best[0]:
                best = (key, schedule)
    return best[1]


@dataclass(frozen=True)
class FinalVariantComparison:
    """Outcome of the three final-operation variants on the same prepared state.

    Target amplitudes are reported with the global sign fixed so the
    rest-of-target-block amplitude is nonnegative, which is the convention
    the closed-form final state is written in.  ``distance`` is the
    Euclidean distance between the MINUS_IT_IS1 and STANDARD_G1 states;
    it shrinks as the block size grows.
    """

    target_amplitude: dict[FinalOperation, float]
    queries_used: dict[FinalOperation, float]
    distance_minus_it_is1_to_g1: float


def compare_final_variants(
    geometry: DatabaseGeometry, j1: int, j2: int
) -> FinalVariantComparison:
    geometry.require_partition()
    schedule = IterationSchedule(j1=j1, j2=j2)
    if not schedule.is_integer:
        raise ScheduleModeError("variant comparison needs an integer schedule")
    c = uniform_state(geometry).basis_coefficients()
    c = np.linalg.matrix_power(global_matrix(geometry), int(j1)) @ c
    c = np.linalg.matrix_power(local_matrix(geometry), int(j2)) @ c

    finals = {}
    amps = {}
    queries = {}
    for op in FinalOperation:
        out = final_operation_matrix(geometry, op) @ c
        finals[op] = out
        sign = -1.0 if out[1] < 0.0 else 1.0
        amps[op] = float(sign * out[0])
        queries[op] = j1 + j2 + (1 if op.consumes_query else 0)
    distance = float(
        np.linalg.norm(
            finals[FinalOperation.MINUS_IT_IS1] - finals[FinalOperation.STANDARD_G1]
        )
    )
    return FinalVariantComparison(
        target_amplitude=amps,
        queries_used=queries,
        distance_minus_it_is1_to_g1=distance,
    )
