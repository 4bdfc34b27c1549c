from __future__ import annotations

import logging
from collections import Counter
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, model_validator

from project.errors import ContractViolationError, InvalidInputError, LimitExceededError
from project.factorize_service import Factorization, divisors_from_pairs, factorize
from project.function_catalog_service import (
    divisor_values_from_pairs,
    resolve_function,
)

logger = logging.getLogger(__name__)

LAMBDA_DP_LIMIT = 10**6

_CARMICHAEL = resolve_function("lambda-star")
_PHI = resolve_function("phi")


class BoundedWeightSystem(BaseModel):
    """
    Weights w_1 >= w_2 >= ... >= w_t with multiplicities u_i; S = sum w_i, T = sum u_i w_i.

    Equal weights may repeat (one entry per divisor when built from n).
    """

    weights: List[int]
    multiplicities: List[int]

    @model_validator(mode="after")
    def _shape(self) -> "BoundedWeightSystem":
        if len(self.weights) != len(self.multiplicities):
            raise ValueError("weights and multiplicities differ in length")
        if any(w < 1 for w in self.weights) or any(u < 1 for u in self.multiplicities):
            raise ValueError("weights and multiplicities must be positive")
        if any(a < b for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("weights must be non-increasing")
        return self

    @property
    def s(self) -> int:
        return sum(self.weights)

    @property
    def t(self) -> int:
        return sum(u * w for u, w in zip(self.multiplicities, self.weights))

    @classmethod
    def for_carmichael(cls, n: int) -> "BoundedWeightSystem":
        """λ(d) with multiplicity φ(d)/λ(d) for every divisor d of n, sorted by descending λ(d)."""
        fact = factorize(n)
        entries = sorted(
            zip(
                divisor_values_from_pairs(_CARMICHAEL, n, fact.factors),
                divisor_values_from_pairs(_PHI, n, fact.factors),
                divisors_from_pairs(fact.factors),
            ),
            key=lambda entry: (-entry[0], entry[2]),
        )
        return cls(
            weights=[lam for lam, _, _ in entries],
            multiplicities=[phi // lam for lam, phi, _ in entries],
        )


def _lambda_levels(fact: Factorization) -> Dict[int, int]:
    levels: Counter = Counter()
    for lam, phi in zip(
        divisor_values_from_pairs(_CARMICHAEL, fact.n, fact.factors),
        divisor_values_from_pairs(_PHI, fact.n, fact.factors),
    ):
        levels[lam] += phi // lam
    return dict(levels)


def lambda_gap(n: int) -> Optional[int]:
    """
    Smallest 1 <= m <= n that is not sum over d | n of λ(d) m_d with 0 <= m_d <= φ(d)/λ(d).

    Bounded-knapsack reachability over [0, n]: the bit vector is a Python integer, and each weight
    level's multiplicity is split into powers of two.

    Args:
        n (int): Positive integer, n <= 10^6.

    Returns:
        Optional[int]: The first unrepresentable target, or None when n is λ-practical.

    Raises:
        LimitExceededError: If n is above the DP bound.
    """
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    if n > LAMBDA_DP_LIMIT:
        raise LimitExceededError(
            f"λ-practical DP is bounded by n <= {LAMBDA_DP_LIMIT}, got {n}"
        )
    mask = (1 << (n + 1)) - 1
    reach = 1
    for weight, count in sorted(_lambda_levels(factorize(n)).items()):
        chunk = 1
        while count > 0:
            take = min(chunk, count)
            reach = (reach | (reach << (weight * take))) & mask
            count -= take
            chunk <<= 1
    missing = mask & ~reach
    if not missing:
        return None
    return (missing & -missing).bit_length() - 1


def is_lambda_practical(n: int) -> bool:
    """
    Decides whether n is λ-practical in the bounded-multiplicity sense.

    Example:
        is_lambda_practical(156)
        > True
    """
    return lambda_gap(n) is None


def _finish_bounded(
    weights: List[int], bounds: List[int], target: int
) -> Optional[List[int]]:
    # parent[s] = (previous sum, entry index) for the first way s was reached
    parent: Dict[int, Tuple[int, int]] = {0: (-1, -1)}
    for index, (w, u) in enumerate(zip(weights, bounds)):
        for _ in range(min(u, target // w)):
            for s in sorted(parent, reverse=True):
                nxt = s + w
                if nxt <= target and nxt not in parent:
                    parent[nxt] = (s, index)
        if target in parent:
            break
    if target not in parent:
        return None
    counts = [0] * len(weights)
    s = target
    while s:
        s, index = parent[s]
        counts[index] += 1
    return counts


def bounded_representation(sys: BoundedWeightSystem, m: int) -> List[int]:
    """
    Writes m = sum a_i w_i with 0 <= a_i <= u_i.

    Walks the weights from the largest, subtracting whole copies while the remainder is at least
    the current weight; once the remainder drops below the largest remaining weight, finishes it as
    a bounded subset sum over the remaining smaller entries. The caller is responsible for the
    hypothesis that every positive integer up to S is a subset sum of the w_i.

    Args:
        sys (BoundedWeightSystem): Weights and multiplicities.
        m (int): Target, 0 <= m <= T.

    Returns:
        List[int]: Coefficients a_i aligned with sys.weights.

    Raises:
        InvalidInputError: If m is outside [0, T].
        ContractViolationError: If no representation is found or it fails verification.

    Example:
        bounded_representation(BoundedWeightSystem(weights=[1], multiplicities=[5]), 3)
        > [3]
    """
    if m < 0 or m > sys.t:
        raise InvalidInputError(f"target {m} outside [0, {sys.t}]")
    weights, bounds = sys.weights, sys.multiplicities
    coefficients = [0] * len(weights)
    remainder = m
    stop = len(weights)
    for i, (w, u) in enumerate(zip(weights, bounds)):
        take = min(u, remainder // w)
        coefficients[i] = take
        remainder -= take * w
        if take < u or remainder == 0:
            stop = i + 1
            break
    if remainder:
        logger.debug(
            "greedy left %d of %d; finishing over %d smaller entries",
            remainder,
            m,
            len(weights) - stop,
        )
        tail = _finish_bounded(weights[stop:], bounds[stop:], remainder)
        if tail is None:
            raise ContractViolationError(
                f"remainder {remainder} of {m} is not a subset sum of the smaller weights"
            )
        for offset, count in enumerate(tail):
            coefficients[stop + offset] += count
    total = sum(a * w for a, w in zip(coefficients, weights))
    if total != m or any(a < 0 or a > u for a, u in zip(coefficients, bounds)):
        raise ContractViolationError(f"representation of {m} failed verification")
    return coefficients
