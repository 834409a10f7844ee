"""Closed-form oracle-query counts for every search strategy.

Coefficients are dimensionless: multiply by sqrt(N) (or sqrt of the
sub-database size where noted) to get absolute query counts.  Absolute
counts are produced only by the naive/binary/complement helpers, which
take N explicitly.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError
from .minimization import lemma1_margin
from .optimum import alpha_opt, alpha_upper_bound, eta_opt


def _require_k(k: float) -> float:
    if not math.isfinite(k) or k < 2:
        raise DomainError(f"block count must be >= 2, got {k!r}")
    return float(k)


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless (alpha, eta) pair describing a GRK schedule at block count k."""

    k: float
    alpha: float
    eta: float

    @classmethod
    def optimal(cls, k: float) -> "ScaledParams":
        return cls(k=float(k), alpha=alpha_opt(k), eta=eta_opt(k))

    @classmethod
    def from_schedule(cls, geometry, schedule) -> "ScaledParams":
        """Parameters implied by concrete iteration counts on a geometry."""
        n = geometry.n_items
        k = geometry.n_blocks
        return cls(
            k=float(k),
            alpha=schedule.j2 * math.sqrt(k / n),
            eta=(math.pi / 4.0 - schedule.j1 / math.sqrt(n)) * math.sqrt(k),
        )

    def is_physical(self, tol: float = 1e-9) -> bool:
        """Whether the pair satisfies the nonnegative-query-count bounds."""
        return (
            -tol <= self.alpha <= alpha_upper_bound(self.k) + tol
            and self.alpha <= self.eta + tol
            and self.eta <= (math.pi / 4.0) * math.sqrt(self.k) + tol
        )

    def validate(self, tol: float = 1e-9):
        if not self.is_physical(tol):
            raise DomainError(f"scaled parameters out of physical range: {self}")


def grk_coefficient(k: float) -> float:
    """Minimized GRK query count over k blocks, in units of sqrt(N).

    Always below pi/4 because the optimal alpha - eta is negative.
    """
    k = _require_k(k)
    return math.pi / 4.0 + (alpha_opt(k) - eta_opt(k)) / math.sqrt(k)


def sequential_coefficient(k_prev: float, k: float) -> float:
    """Follow-up GRK cost in units of sqrt of the new (sub-)database size.

    The previous stage over ``k_prev`` blocks leaves the new database
    partially searched, which replaces pi/4 by pi/4 - alpha(k_prev)/2.
    """
    k_prev = _require_k(k_prev)
    k = _require_k(k)
    return (
        math.pi / 4.0
        - 0.5 * alpha_opt(k_prev)
        + (alpha_opt(k) - eta_opt(k)) / math.sqrt(k)
    )


def hierarchy_coefficient(levels: Sequence[float]) -> float:
    """Total query count of a chain of GRK stages, in units of sqrt(N).

    A single level reduces to ``grk_coefficient``.
    """
    if not levels:
        raise DomainError("hierarchy needs at least one level")
    levels = [_require_k(k) for k in levels]
    total = math.pi / 4.0
    running = 1.0
    for k in levels[:-1]:
        running *= k
        total += (math.pi / 4.0 + 0.5 * alpha_opt(k) - eta_opt(k)) / math.sqrt(running)
    running *= levels[-1]
    last = levels[-1]
    total += (alpha_opt(last) - eta_opt(last)) / math.sqrt(running)
    return total


def direct_coefficient(levels: Sequence[float]) -> float:
    """Cost of one GRK straight over the finest partition, in units of sqrt(N)."""
    if not levels:
        raise DomainError("hierarchy needs at least one level")
    return grk_coefficient(math.prod(levels))


class GapDecomposition(NamedTuple):
    """Hierarchy-minus-direct gap split into its provably positive pieces."""

    gap: float
    lemma1_terms: tuple[float, ...]
    lemma2_term: float


def hierarchy_gap(levels: Sequence[float]) -> float:
    """hierarchy_coefficient minus direct_coefficient; positive for all levels >= 2."""
    return hierarchy_coefficient(levels) - direct_coefficient(levels)


def gap_decomposition(levels: Sequence[float]) -> GapDecomposition:
    """Term-by-term structure of the gap.

    One margin term per non-final level (positive by the first lemma) plus
    a final difference of query offsets (positive because alpha - eta
    decreases in the block count).
    """
    if len(levels) < 2:
        raise DomainError("gap decomposition needs at least two levels")
    levels = [_require_k(k) for k in levels]
    terms = []
    running = 1.0
    for k in levels[:-1]:
        running *= k
        terms.append(lemma1_margin(k) / math.sqrt(running))
    product = running * levels[-1]
    last = levels[-1]
    offset = lambda k: alpha_opt(k) - eta_opt(k)
    lemma2 = (offset(last) - offset(product)) / math.sqrt(product)
    return GapDecomposition(
        gap=sum(terms) + lemma2, lemma1_terms=tuple(terms), lemma2_term=lemma2
    )


class NaiveQueries(NamedTuple):
    worst: float
    average: float


def naive_queries(n_items: int, n_blocks: int) -> NaiveQueries:
    """Full searches of randomly picked blocks until the target block is hit.

    Worst case searches K - 1 blocks; the average over the target position
    is sqrt(K)/2 full block searches.  Beats one full database search only
    at K = 2.
    """
    k = _require_k(n_blocks)
    base = (math.pi / 4.0) * math.sqrt(n_items)
    return NaiveQueries(
        worst=(k - 1.0) / math.sqrt(k) * base,
        average=(math.sqrt(k) / 2.0) * base,
    )


def binary_queries(n_items: int, n_blocks: int) -> float:
    """Worst case of halving the database with a full search per half.

    Defined for K = 2^k only; slower than one full search for K > 2.
    """
    k = _require_k(n_blocks)
    exponent = round(math.log2(k))
    if 2**exponent != k:
        raise DomainError(f"binary search needs a power-of-two block count, got {k}")
    total = sum(2.0 ** (-i / 2.0) for i in range(1, exponent + 1))
    return (math.pi / 4.0) * math.sqrt(n_items) * total


def complement_queries(n_items: int, n_blocks: int) -> float:
    """One full search over everything outside a randomly picked block.

    Either finds the target or proves the picked block is the target one;
    faster than a full search for every K.
    """
    k = _require_k(n_blocks)
    return (math.pi / 4.0) * math.sqrt(n_items) * math.sqrt((k - 1.0) / k)
