"""Counting the ways to split a database into equal blocks, and the ancilla
bits needed to label them.

The count is N! / ((b!)^K K!): a multinomial over the blocks divided by
the K! orderings of indistinguishable blocks.  Exact big-integer values
are kept up to a size cap; beyond it only the base-2 logarithm is
computed, through log-gamma.
"""

import math
from dataclasses import dataclass

from .errors import DomainError

DEFAULT_EXACT_CAP = 10_000


def _log2_int(value: int) -> float:
    """log2 of a positive integer without float overflow."""
    if value <= 0:
        raise DomainError("log2 needs a positive integer")
    bits = value.bit_length()
    if bits <= 53:
        return math.log2(value)
    top = value >> (bits - 53)
    return math.log2(top) + (bits - 53)


def _log2_partition_count(n_items: int, n_blocks: int) -> float:
    b = n_items // n_blocks
    ln = (
        math.lgamma(n_items + 1)
        - n_blocks * math.lgamma(b + 1)
        - math.lgamma(n_blocks + 1)
    )
    return ln / math.log(2.0)


@dataclass(frozen=True)
class PartitionCount:
    """Number of equal-block partitions; ``exact`` is None in log-only mode."""

    exact: int | None
    log2_value: float


def partition_count(
    n_items: int, n_blocks: int, exact_cap: int = DEFAULT_EXACT_CAP
) -> PartitionCount:
    """Count the distinct ways to partition n_items into n_blocks equal blocks."""
    if n_items < 1 or n_blocks < 1 or n_items % n_blocks != 0:
        raise DomainError(
            f"n_blocks={n_blocks} must divide n_items={n_items}, both positive"
        )
    if n_items > exact_cap:
        return PartitionCount(exact=None, log2_value=_log2_partition_count(n_items, n_blocks))
    b = n_items // n_blocks
    exact = math.factorial(n_items) // (
        math.factorial(b) ** n_blocks * math.factorial(n_blocks)
    )
    return PartitionCount(exact=exact, log2_value=_log2_int(exact))


def ancilla_bits(
    n_items: int, n_blocks: int, exact_cap: int = DEFAULT_EXACT_CAP
) -> tuple[int, float]:
    """Label bits for all equal-block partitions: (exact ceiling, large-N form).

    The exact count is ceil(log2 P(N, K)); the asymptotic form is
    N log2 K - log2 K!, whose relative error vanishes as N grows at
    fixed K.
    """
    count = partition_count(n_items, n_blocks, exact_cap)
    if count.exact is not None:
        exact_bits = (count.exact - 1).bit_length()
    else:
        exact_bits = math.ceil(count.log2_value)
    asymptotic = n_items * math.log2(n_blocks) - _log2_int(math.factorial(n_blocks))
    return exact_bits, asymptotic
