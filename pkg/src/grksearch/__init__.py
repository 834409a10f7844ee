"""Exact simulation and query-count calculus for GRK partial search.

The package simulates full Grover search and GRK partial search exactly
in the 3-dimensional symmetric subspace (with a brute-force full-vector
oracle for cross-checks), evaluates the closed-form query counts of every
partial-search strategy, and verifies numerically that one direct GRK
over the finest partition beats any sequential chain of GRK stages.
"""

from .core import (
    DEFAULT_FULL_VECTOR_CAP,
    DatabaseGeometry,
    FullSearchResult,
    FullState,
    GroverOperation,
    RotationAngles,
    SymmetricState,
    apply_global,
    apply_local,
    full_state_simulate,
    global_closed_form,
    global_matrix,
    grover_full_search,
    local_matrix,
    project_to_symmetric,
    rotation_angles,
    target_block_probability,
    uniform_state,
)
from .engine import (
    FinalOperation,
    FinalVariantComparison,
    GrkResult,
    IterationSchedule,
    compare_final_variants,
    leaked_amplitude,
    optimal_integer_schedule,
    optimal_scaled_schedule,
    run_grk,
    solve_cancellation,
    solve_local_cancellation,
)
from .errors import (
    CapacityError,
    DomainError,
    GeometryError,
    InvalidStateError,
    NoRootError,
    PartialSearchError,
    ScheduleModeError,
    SubspaceViolationError,
    ToleranceError,
)
from .hierarchy import (
    GapCheck,
    HierarchyRun,
    HierarchySpec,
    LevelRun,
    Table1Row,
    corollary_check,
    run_hierarchy,
    table1_reproduce,
    theorem_check,
)
from .minimization import (
    GapRegime,
    MinimizationReport,
    asymptotic_alpha,
    asymptotic_eta,
    asymptotic_gap,
    lemma1_aux,
    lemma1_margin,
    lemma2_slope,
    query_offset,
    query_offset_double_prime,
    query_offset_prime,
    scan_critical_points,
    verify_local_min,
)
from .optimum import alpha_opt, alpha_upper_bound, eta_of_alpha, eta_opt
from .partitions import PartitionCount, ancilla_bits, partition_count
from .queries import (
    GapDecomposition,
    NaiveQueries,
    ScaledParams,
    binary_queries,
    complement_queries,
    direct_coefficient,
    gap_decomposition,
    grk_coefficient,
    hierarchy_coefficient,
    hierarchy_gap,
    naive_queries,
    sequential_coefficient,
)

__version__ = "0.1.0"
