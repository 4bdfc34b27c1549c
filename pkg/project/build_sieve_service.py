from __future__ import annotations

import logging
import math
import time
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from project.errors import InvalidInputError, LimitExceededError
from project.factorize_service import PrimePower
from project.settings import get_settings

logger = logging.getLogger(__name__)


class SpfSieve(BaseModel):
    """
    Smallest-prime-factor table for 2 <= n <= limit.

    spf[n] is the least prime dividing n; spf[1] = 1 and spf[0] = 0. Immutable once built, so one
    instance can be shared read-only by every consumer in the process.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    limit: int
    spf: np.ndarray

    def smallest_prime_factor(self, n: int) -> int:
        return int(self.spf[n])

    def factor_pairs(self, n: int) -> Tuple[PrimePower, ...]:
        spf = self.spf
        pairs = []
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            pairs.append((p, e))
        return tuple(pairs)


def build_sieve(limit: int, max_limit: Optional[int] = None) -> SpfSieve:
    """
    Builds the smallest-prime-factor table up to limit.

    Args:
        limit (int): Largest integer covered (X >= 1).
        max_limit (Optional[int]): Memory guard; defaults to FPRACTICAL_MAX_SIEVE_LIMIT (10^8).

    Returns:
        SpfSieve: The exact SPF table.

    Raises:
        LimitExceededError: If limit is above the memory guard.

    Example:
        sieve = build_sieve(10)
        sieve.smallest_prime_factor(9)
        > 3
    """
    guard = max_limit if max_limit is not None else get_settings().max_sieve_limit
    if limit < 1:
        raise InvalidInputError(f"sieve limit must be positive, got {limit}")
    if limit > guard:
        raise LimitExceededError(f"sieve limit {limit} exceeds the guard {guard}")
    started = time.perf_counter()
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == 0:
            multiples = spf[i * i :: i]
            multiples[multiples == 0] = i
    unset = spf == 0
    spf[unset] = np.nonzero(unset)[0].astype(dtype)
    logger.info(
        "built SPF sieve up to %d in %.2fs", limit, time.perf_counter() - started
    )
    return SpfSieve(limit=limit, spf=spf)
