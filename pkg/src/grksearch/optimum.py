"""Scaled iteration parameters of GRK partial search and their optimum.

In the large-block limit the iteration counts are written as

    j1 = (pi/4 - eta/sqrt(K)) * sqrt(N),    j2 = alpha * sqrt(b),

and the cancellation condition that empties the non-target blocks ties
``eta`` to ``alpha``.  This module evaluates that constraint, the closed
form of the query-minimizing (alpha, eta), and the physical upper bound
of alpha.  The block count ``k`` is accepted as a real number >= 2
throughout; ``math.inf`` is the explicit infinite-block sentinel.
"""

import math

from scipy.optimize import brentq

from .errors import DomainError


def _require_k(k: float, allow_inf: bool = False) -> float:
    if allow_inf and k == math.inf:
        return k
    if not math.isfinite(k) or k < 2:
        raise DomainError(f"block count must be >= 2, got {k!r}")
    return float(k)


def alpha_opt(k: float) -> float:
    """Query-minimizing scaled local-iteration parameter, (1/2) arccos((k-2)/(2(k-1)))."""
    k = _require_k(k)
    return 0.5 * math.acos((k - 2.0) / (2.0 * (k - 1.0)))


def eta_opt(k: float) -> float:
    """Query-minimizing scaled global-iteration parameter.

    Evaluates (1/2) sqrt(k) arctan(sqrt(3k-4)/(k-2)); the k = 2 singularity
    is resolved by the limit arctan(+inf) = pi/2, giving pi/(2 sqrt(2)).
    """
    k = _require_k(k)
    ang = math.atan2(math.sqrt(3.0 * k - 4.0), k - 2.0)
    return 0.5 * math.sqrt(k) * ang


def _eta_branch(alpha: float, k: float) -> float:
    """Cancellation-condition eta(alpha) on the continuous principal branch.

    atan2 extends arctan continuously through the zero of the denominator
    k - 4 sin^2(alpha); the 0/0 point (k = 4, alpha = pi/2) is filled with
    its limit pi/2.
    """
    num = 2.0 * math.sqrt(k) * math.sin(2.0 * alpha)
    den = k - 4.0 * math.sin(alpha) ** 2
    if num == 0.0 and den == 0.0:
        ang = math.pi / 2.0
    else:
        ang = math.atan2(num, den)
    return 0.5 * math.sqrt(k) * ang


def eta_of_alpha(alpha: float, k: float) -> float:
    """eta determined by the cancellation condition, for alpha in [0, alpha_B(k)]."""
    k = _require_k(k)
    bound = alpha_upper_bound(k)
    if not 0.0 <= alpha <= bound + 1e-12:
        raise DomainError(
            f"alpha={alpha!r} outside the physical range [0, {bound:.6f}] for k={k}"
        )
    return _eta_branch(alpha, k)


# Root of alpha = sin(2 alpha), the infinite-block limit of the bound.
_ALPHA_BOUND_INF = brentq(lambda a: a - math.sin(2.0 * a), 0.75, 1.2, xtol=1e-14)


def alpha_upper_bound(k: float) -> float:
    """Largest physically allowed alpha for a k-block partition.

    For k <= 4 this is the singular point sin^2(alpha) = k/4 of the
    cancellation constraint; beyond that it is the root of alpha =
    eta(alpha), which always lies between the infinite-block value and
    pi/2.  ``math.inf`` returns the root of alpha = sin(2 alpha).
    """
    k = _require_k(k, allow_inf=True)
    if k == math.inf:
        return _ALPHA_BOUND_INF
    if k <= 4.0:
        return math.asin(math.sqrt(k) / 2.0)
    return brentq(
        lambda a: _eta_branch(a, k) - a,
        _ALPHA_BOUND_INF,
        math.pi / 2.0,
        xtol=1e-14,
    )
