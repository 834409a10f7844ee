"""Sequential GRK chains: simulate them exactly and compare against direct runs.

Each stage finds the target block of the current database, then that block
(with its actual post-run state, truncated to the block and renormalized)
becomes the next, smaller database.  The chain always costs more queries
than a single GRK over the finest partition; this module both evaluates
that gap from the closed forms and measures it on simulated chains.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import DatabaseGeometry, SymmetricState, uniform_state
from .engine import (
    FinalOperation,
    GrkResult,
    IterationSchedule,
    _refine_integer_schedule,
    optimal_integer_schedule,
    run_grk,
    solve_local_cancellation,
)
from .errors import DomainError, GeometryError
from .optimum import alpha_opt, eta_opt
from .queries import (
    GapDecomposition,
    direct_coefficient,
    gap_decomposition,
    grk_coefficient,
    hierarchy_coefficient,
)


@dataclass(frozen=True)
class HierarchySpec:
    """Ordered block counts [K_1, ..., K_m], one per partition stage."""

    levels: tuple[int, ...]

    def __post_init__(self):
        if len(self.levels) < 1:
            raise DomainError("hierarchy needs at least one level")
        for k in self.levels:
            if not isinstance(k, int) or k < 2:
                raise DomainError(f"every level needs an integer block count >= 2, got {k!r}")

    @property
    def product(self) -> int:
        return math.prod(self.levels)


@dataclass(frozen=True)
class LevelRun:
    """One stage of a simulated chain.

    ``truncated_probability`` is the out-of-block probability dropped when
    the target block was promoted to the next database.  ``clamped`` marks
    stages whose scheduled global count came out negative and was clamped
    to zero, with the local count re-solved from the cancellation
    condition instead of taken from the closed form.
    """

    geometry: DatabaseGeometry
    schedule: IterationSchedule
    result: GrkResult
    truncated_probability: float
    clamped: bool


@dataclass(frozen=True)
class HierarchyRun:
    per_level: tuple[LevelRun, ...]
    total_queries: float
    direct_schedule: IterationSchedule
    direct_equivalent: GrkResult
    formula_coefficient: float
    direct_formula_coefficient: float


def _promote_to_block(state: SymmetricState, next_blocks: int) -> SymmetricState:
    """Reinterpret the target block as the new database and renormalize."""
    b = state.geometry.block_size
    inside = math.sqrt(
        state.amp_target**2 + (b - 1) * state.amp_target_rest**2
    )
    if inside == 0.0:
        raise DomainError("no probability left in the target block to promote")
    geometry = DatabaseGeometry(n_items=b, n_blocks=next_blocks)
    return SymmetricState(
        geometry=geometry,
        amp_target=state.amp_target / inside,
        amp_target_rest=state.amp_target_rest / inside,
        amp_outside=state.amp_target_rest / inside,
    )


def run_hierarchy(n_items: int, spec: HierarchySpec, search_radius: int = 2) -> HierarchyRun:
    """Simulate a GRK chain end to end.

    Stage 1 runs the integer-optimal schedule from uniform.  Every later
    stage starts from the promoted block state and uses the sequential
    closed-form schedule, which credits the head start the previous stage
    left behind; when that head start overshoots (the scheduled global
    count would be negative) the global count is clamped to zero and the
    local count is re-solved from the exact cancellation condition, so the
    stage still concentrates on its target sub-block.  Both counts are
    then refined over the +-search_radius integer neighborhood against the
    stage's actual initial state.

    Raises:
        GeometryError: if the level product does not divide n_items or any
            stage would have block size below 4.
    """
    if n_items % spec.product != 0:
        raise GeometryError(
            f"level product {spec.product} does not divide n_items={n_items}"
        )
    size = n_items
    for k in spec.levels:
        if size // k < 4:
            raise GeometryError(
                f"stage over {k} blocks of a {size}-item database has block size < 4"
            )
        size //= k

    runs = []
    total = 0.0
    state: SymmetricState | None = None
    size = n_items
    for i, k in enumerate(spec.levels):
        geometry = DatabaseGeometry(n_items=size, n_blocks=k)
        if i == 0:
            state = uniform_state(geometry)
            schedule = optimal_integer_schedule(geometry, search_radius=search_radius)
            clamped = False
        else:
            j1_real = (
                math.pi / 4.0
                - 0.5 * alpha_opt(spec.levels[i - 1])
                - eta_opt(k) / math.sqrt(k)
            ) * math.sqrt(size)
            clamped = j1_real < 0.0
            if clamped:
                j1_real = 0.0
                j2_real = solve_local_cancellation(geometry, state)
            else:
                j2_real = alpha_opt(k) * math.sqrt(geometry.block_size)
            schedule = _refine_integer_schedule(
                geometry, j1_real, j2_real, FinalOperation.STANDARD_G1,
                search_radius, state,
            )
        result = run_grk(geometry, schedule, mode="operators", initial_state=state)
        runs.append(
            LevelRun(
                geometry=geometry,
                schedule=schedule,
                result=result,
                truncated_probability=result.leaked_probability,
                clamped=clamped,
            )
        )
        total += result.queries_used
        if i + 1 < len(spec.levels):
            state = _promote_to_block(result.final_state, spec.levels[i + 1])
        size //= k

    direct_geometry = DatabaseGeometry(n_items=n_items, n_blocks=spec.product)
    direct_schedule = optimal_integer_schedule(direct_geometry, search_radius=search_radius)
    direct_result = run_grk(direct_geometry, direct_schedule, mode="operators")
    return HierarchyRun(
        per_level=tuple(runs),
        total_queries=total,
        direct_schedule=direct_schedule,
        direct_equivalent=direct_result,
        formula_coefficient=hierarchy_coefficient(spec.levels),
        direct_formula_coefficient=direct_coefficient(spec.levels),
    )


@dataclass(frozen=True)
class GapCheck:
    gap: float
    holds: bool
    lemma1_terms: tuple[float, ...]
    lemma2_term: float


def theorem_check(k1: float, k2: float) -> GapCheck:
    """Two-stage chain versus direct run over k1*k2 blocks.

    The gap is positive for every pair of block counts >= 2, and so is
    each term of its decomposition.
    """
    return corollary_check((k1, k2))


def corollary_check(levels) -> GapCheck:
    """Gap positivity for a chain of arbitrary length."""
    decomposition: GapDecomposition = gap_decomposition(levels)
    holds = (
        decomposition.gap > 0.0
        and all(t > 0.0 for t in decomposition.lemma1_terms)
        and decomposition.lemma2_term > 0.0
    )
    return GapCheck(
        gap=decomposition.gap,
        holds=holds,
        lemma1_terms=decomposition.lemma1_terms,
        lemma2_term=decomposition.lemma2_term,
    )


TABLE1_PAIRS = ((2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3))


@dataclass(frozen=True)
class Table1Row:
    k1: int
    k2: int
    direct: float
    hierarchical: float
    gap: float


def table1_reproduce() -> list[Table1Row]:
    """Recompute the six standard two-stage example rows."""
    rows = []
    for k1, k2 in TABLE1_PAIRS:
        direct = grk_coefficient(k1 * k2)
        hierarchical = hierarchy_coefficient((k1, k2))
        rows.append(
            Table1Row(
                k1=k1,
                k2=k2,
                direct=direct,
                hierarchical=hierarchical,
                gap=hierarchical - direct,
            )
        )
    return rows
