from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Iterator, List, Optional, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, model_validator

from project.errors import InvalidInputError

if TYPE_CHECKING:
    from project.build_sieve_service import SpfSieve

logger = logging.getLogger(__name__)

MAX_N = (1 << 63) - 1
# Trial division handles cofactors below this bound on its own; larger ones go to sympy.
TRIAL_DIVISION_LIMIT = 10**6

PrimePower = Tuple[int, int]


class Factorization(BaseModel):
    """
    Prime-power decomposition of a positive integer, primes in ascending order.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    factors: Tuple[PrimePower, ...] = ()

    @model_validator(mode="after")
    def _canonical(self) -> "Factorization":
        if self.n < 1:
            raise ValueError("n must be positive")
        product = 1
        previous = 1
        for p, e in self.factors:
            if p <= previous or e < 1:
                raise ValueError(
                    "primes must be strictly increasing and exponents positive"
                )
            previous = p
            product *= p**e
        if product != self.n:
            raise ValueError(f"factors multiply to {product}, not {self.n}")
        return self

    @classmethod
    def trusted(cls, n: int, factors: Tuple[PrimePower, ...]) -> "Factorization":
        """Builds a Factorization without re-validating; for sieve-produced factors."""
        return cls.model_construct(n=n, factors=factors)

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    @property
    def largest_prime(self) -> int:
        """P(n); 1 for n = 1."""
        return self.factors[-1][0] if self.factors else 1

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def divisor_count(self) -> int:
        count = 1
        for _, e in self.factors:
            count *= e + 1
        return count

    def without(self, p: int) -> "Factorization":
        """The factorization of n with the full power of p removed."""
        kept = tuple((q, e) for q, e in self.factors if q != p)
        m = 1
        for q, e in kept:
            m *= q**e
        return Factorization.trusted(m, kept)


def _trial_division(n: int) -> Iterator[PrimePower]:
    def _reduce(n: int, i: int) -> Tuple[int, int]:
        c = 0
        while n % i == 0:
            c += 1
            n //= i
        return n, c

    for small in (2, 3):
        n, c = _reduce(n, small)
        if c:
            yield small, c
    i = 5
    while i * i <= n and i <= TRIAL_DIVISION_LIMIT:
        for candidate in (i, i + 2):
            n, c = _reduce(n, candidate)
            if c:
                yield candidate, c
        i += 6
    if n == 1:
        return
    if i * i > n:
        yield n, 1
        return
    logger.debug("handing cofactor %d to sympy.factorint", n)
    yield from sorted(sympy.factorint(n).items())


def factorize(n: int, sieve: Optional["SpfSieve"] = None) -> Factorization:
    """
    Factorizes n into ascending prime powers.

    Uses the smallest-prime-factor table when n lies inside the given sieve, otherwise trial division
    (with sympy finishing any cofactor left above the trial-division bound).

    Args:
        n (int): Integer with 1 <= n < 2^63.
        sieve (Optional[SpfSieve]): Prepared sieve to use when n is within its limit.

    Returns:
        Factorization: The canonical factorization.

    Raises:
        InvalidInputError: If n is outside [1, 2^63).

    Example:
        factorize(75)
        > Factorization(n=75, factors=((3, 1), (5, 2)))
    """
    if not isinstance(n, int) or n < 1 or n > MAX_N:
        raise InvalidInputError(f"factorize expects 1 <= n < 2^63, got {n!r}")
    if sieve is not None and n <= sieve.limit:
        return Factorization.trusted(n, sieve.factor_pairs(n))
    return Factorization.trusted(n, tuple(_trial_division(n)))


def divisors_from_pairs(factors: Tuple[PrimePower, ...]) -> List[int]:
    divs = [1]
    for p, e in factors:
        divs = [d * p**k for k in range(e + 1) for d in divs]
    return divs


def divisors(fact: Factorization) -> List[int]:
    """
    Lists every divisor of fact.n in ascending order.

    Args:
        fact (Factorization): A valid factorization.

    Returns:
        List[int]: All tau(n) divisors, ascending.

    Example:
        divisors(factorize(12))
        > [1, 2, 3, 4, 6, 12]
    """
    return sorted(divisors_from_pairs(fact.factors))
