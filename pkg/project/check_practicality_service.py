from __future__ import annotations

import bisect
import logging
import math
from itertools import accumulate
from typing import Iterable, List, Optional, Tuple

import sympy
from pydantic import BaseModel

from project.errors import InvalidInputError, SfOverflowError
from project.factorize_service import Factorization, PrimePower, factorize
from project.function_catalog_service import (
    LAMBDA_DEF53,
    SF_LIMIT,
    FunctionSpec,
    divisor_values,
    divisor_values_from_pairs,
    sum_over_divisors,
)
from project.lambda_practical_service import is_lambda_practical, lambda_gap

logger = logging.getLogger(__name__)


class PracticalityVerdict(BaseModel):
    """
    Decision for one n, with the first unrepresentable target as witness when negative.

    For "lambda-def53" the targets are 1..n and each lambda(d) may repeat up to phi(d)/lambda(d) times;
    s_f then holds n.
    """

    n: int
    function: str
    is_practical: bool
    s_f: int
    witness: Optional[int] = None
    weights: Optional[List[int]] = None


class WeakStep(BaseModel):
    prime: int
    exponent: int
    f_prime: int
    prefix: int
    s_f_prefix: int
    holds: bool


class WeakChain(BaseModel):
    """
    The prefix chain used by the weakly f-practical test: primes ordered by (f(p), p), the prefixes
    m_i and the inequality f(p_(i+1)) <= S_f(m_i) + 1 at each step.
    """

    n: int
    function: str
    steps: List[WeakStep]

    @property
    def holds(self) -> bool:
        return all(step.holds for step in self.steps)


def first_gap(weights: Iterable[int]) -> Optional[int]:
    """
    Smallest positive integer that is not a subset sum of weights, if it is at most their total.

    Zero weights are ignored. Returns None when every integer in [0, sum] is a subset sum.
    """
    reach = 0
    for w in sorted(w for w in weights if w):
        if w > reach + 1:
            return reach + 1
        reach += w
        if reach >= SF_LIMIT:
            raise SfOverflowError("subset-sum total exceeds 128 bits")
    return None


def contiguous_cover(weights: Iterable[int]) -> bool:
    """
    Decides whether every integer in [0, sum(weights)] is a subset sum of weights.

    Sorts ascending and checks w_(i+1) <= 1 + w_1 + ... + w_i for every i, starting at i = 0 so
    that the smallest weight must be 1. Zero weights do not change the subset sums and are dropped.

    Args:
        weights (Iterable[int]): Multiset of nonnegative integers.

    Returns:
        bool: True iff the subset sums are contiguous; an empty multiset covers [0, 0].

    Example:
        contiguous_cover([1, 1, 2, 5])
        > True
    """
    return first_gap(weights) is None


def is_practical_pairs(
    spec: FunctionSpec, n: int, factors: Tuple[PrimePower, ...]
) -> bool:
    """Lean form of is_f_practical for census loops: no verdict object, no divisor sum."""
    if spec.catalog == LAMBDA_DEF53:
        return is_lambda_practical(n)
    return first_gap(divisor_values_from_pairs(spec, n, factors)) is None


def is_f_practical(
    n: int, f: FunctionSpec, fact: Optional[Factorization] = None
) -> PracticalityVerdict:
    """
    Decides whether n is f-practical: every 1 <= m <= S_f(n) is a sum of f(d) over distinct
    divisors d of n.

    Args:
        n (int): Positive integer.
        f (FunctionSpec): The arithmetic function.
        fact (Optional[Factorization]): Factorization of n when already known.

    Returns:
        PracticalityVerdict: The verdict, the sorted nonzero weights, and the first unrepresentable
        target (1 + the weights preceding the first violation) when negative.

    Example:
        is_f_practical(75, resolve_function("phi")).witness
        > 16
    """
    if f.catalog == LAMBDA_DEF53:
        witness = lambda_gap(n)
        return PracticalityVerdict(
            n=n, function=f.label, is_practical=witness is None, s_f=n, witness=witness
        )
    fact = fact or factorize(n)
    s_f = sum_over_divisors(f, fact)
    weights = sorted(w for w in divisor_values(f, fact) if w)
    witness = first_gap(weights)
    return PracticalityVerdict(
        n=n,
        function=f.label,
        is_practical=witness is None,
        s_f=s_f,
        witness=witness,
        weights=weights,
    )


def subset_sum_oracle(weights: Iterable[int]) -> int:
    """
    Bitset of every subset sum of weights: bit m is set iff m is a subset sum.
    """
    reach = 1
    for w in weights:
        reach |= reach << w
    return reach


def oracle_is_f_practical(n: int, f: FunctionSpec) -> bool:
    """
    Exhaustive check of f-practicality by computing the full set of subset sums of {f(d) : d | n}.
    """
    fact = factorize(n)
    values = divisor_values(f, fact)
    total = sum(values)
    reach = subset_sum_oracle(values)
    full = (1 << (total + 1)) - 1
    return reach & full == full


def _ordered_prime_powers(
    f: FunctionSpec, fact: Factorization
) -> List[Tuple[int, int, int]]:
    return sorted(
        ((f.at_prime_power(p, 1), p, e) for p, e in fact.factors),
        key=lambda item: (item[0], item[1]),
    )


def weak_prefix_chain(
    n: int, f: FunctionSpec, fact: Optional[Factorization] = None
) -> WeakChain:
    """
    Builds the weakly f-practical prefix chain for n.

    Args:
        n (int): Positive integer.
        f (FunctionSpec): The arithmetic function.
        fact (Optional[Factorization]): Factorization of n when already known.

    Returns:
        WeakChain: One step per prime of n, in (f(p), p) order.
    """
    fact = fact or factorize(n)
    steps = []
    prefix_factors: List[PrimePower] = []
    prefix = 1
    for f_p, p, e in _ordered_prime_powers(f, fact):
        prefix_fact = Factorization.trusted(prefix, tuple(sorted(prefix_factors)))
        s_f_prefix = sum_over_divisors(f, prefix_fact)
        steps.append(
            WeakStep(
                prime=p,
                exponent=e,
                f_prime=f_p,
                prefix=prefix,
                s_f_prefix=s_f_prefix,
                holds=f_p <= s_f_prefix + 1,
            )
        )
        prefix_factors.append((p, e))
        prefix *= p**e
    return WeakChain(n=n, function=f.label, steps=steps)


def is_weakly_f_practical(
    n: int, f: FunctionSpec, fact: Optional[Factorization] = None
) -> bool:
    """
    Decides whether n is weakly f-practical.

    With the primes of n ordered by ascending f(p) (ties by ascending p) and m_i the product of
    the first i full prime powers, checks f(p_(i+1)) <= S_f(m_i) + 1 for every i, m_0 = 1.

    Args:
        n (int): Positive integer.
        f (FunctionSpec): The arithmetic function.
        fact (Optional[Factorization]): Factorization of n when already known.

    Returns:
        bool: True iff every step of the chain holds.

    Example:
        is_weakly_f_practical(75, resolve_function("phi"))
        > True
    """
    fact = fact or factorize(n)
    if f.is_multiplicative:
        s_f_prefix = 1
        for f_p, p, e in _ordered_prime_powers(f, fact):
            if f_p > s_f_prefix + 1:
                return False
            s_f_prefix *= 1 + sum(f.prime_power_rule(p, k) for k in range(1, e + 1))
        return True
    return weak_prefix_chain(n, f, fact).holds


def extension_failure(n: int, p: int, k: int, f: FunctionSpec) -> Optional[int]:
    """
    First exponent i in 1..k with f(p^i) > S_f(n p^(i-1)) + 1, or None if none fails.

    Raises:
        InvalidInputError: If p is not prime, gcd(p, n) != 1, or k < 1.
    """
    if n < 1 or k < 1:
        raise InvalidInputError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if not sympy.isprime(p):
        raise InvalidInputError(f"{p} is not prime")
    if math.gcd(p, n) != 1:
        raise InvalidInputError(f"{p} divides {n}; the extension needs gcd(p, n) = 1")
    base = factorize(n)
    for i in range(1, k + 1):
        extended = Factorization.trusted(
            n * p ** (i - 1),
            tuple(sorted(base.factors + (((p, i - 1),) if i > 1 else ()))),
        )
        if f.at_prime_power(p, i) > sum_over_divisors(f, extended) + 1:
            logger.debug("extension of %d by %d^%d fails at i=%d", n, p, k, i)
            return i
    return None


def extend_by_prime_power(n: int, p: int, k: int, f: FunctionSpec) -> bool:
    """
    Decides whether n * p^k is f-practical, given that n is f-practical and p does not divide n.

    The f-practicality of n is the caller's assertion and is not re-derived.

    Args:
        n (int): An f-practical integer.
        p (int): A prime coprime to n.
        k (int): Exponent, k >= 1.
        f (FunctionSpec): The arithmetic function.

    Returns:
        bool: True iff f(p^i) <= S_f(n p^(i-1)) + 1 for all 1 <= i <= k.

    Example:
        extend_by_prime_power(3, 5, 2, resolve_function("phi"))
        > False
    """
    return extension_failure(n, p, k, f) is None


def additive_practical_check(
    n: int, f: FunctionSpec, fact: Optional[Factorization] = None
) -> bool:
    """
    Decides f-practicality of n for additive f through its prime powers alone:
    f(p_i^e) <= 1 + sum of f(d) over divisors d of n with f(d) < f(p_i^e), for all e <= e_i.

    Args:
        n (int): Positive integer.
        f (FunctionSpec): An additive function.
        fact (Optional[Factorization]): Factorization of n when already known.

    Returns:
        bool: True iff the inequality holds at every prime power dividing n.

    Raises:
        InvalidInputError: If f is not additive.

    Example:
        additive_practical_check(30, resolve_function("a1"))
        > False
    """
    if not f.is_additive:
        raise InvalidInputError(f"{f.label} is not additive")
    fact = fact or factorize(n)
    values = sorted(divisor_values(f, fact))
    prefix = [0, *accumulate(values)]
    for p, e_max in fact.factors:
        for e in range(1, e_max + 1):
            value = f.prime_power_rule(p, e)
            below = prefix[bisect.bisect_left(values, value)]
            if value > 1 + below:
                return False
    return True
