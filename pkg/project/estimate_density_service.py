from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import List, Optional, Union

import sympy
from pydantic import BaseModel

from project.build_sieve_service import build_sieve
from project.count_practicals_service import count_practicals
from project.errors import InvalidInputError, TargetNotFoundError
from project.factorize_service import factorize
from project.function_catalog_service import FunctionSpec, evaluate, resolve_function

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 10**6

Rational = Union[Fraction, int, float, str]


class DensityEstimate(BaseModel):
    function: str
    x: int
    count: int
    density: float
    # Known asymptotic density (the fn family), as a float and as an exact fraction.
    target: Optional[float] = None
    target_exact: Optional[str] = None


class DensityTarget(BaseModel):
    """
    A parameter m whose fn-practical density 1 - phi(m)/m lies within epsilon of alpha.
    """

    alpha: float
    epsilon: float
    n: int
    density: float
    density_exact: str
    primes: List[int]
    # "scan" when n is the smallest solution, "greedy" for a squarefree prime product.
    method: str


def _as_fraction(value: Rational) -> Fraction:
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    try:
        return Fraction(str(value))
    except ValueError as e:
        raise InvalidInputError(f"not a rational number: {value!r}") from e


def fn_density(m: int) -> Fraction:
    """Asymptotic density of the fn-practical numbers for parameter m: 1 - phi(m)/m."""
    fact = factorize(m)
    return 1 - Fraction(evaluate(resolve_function("phi"), fact), m)


def density_estimate(
    f: FunctionSpec, x: int, workers: Optional[int] = None
) -> DensityEstimate:
    """
    Empirical density of the f-practical numbers up to X.

    Args:
        f (FunctionSpec): The arithmetic function.
        x (int): Upper end of the range.
        workers (Optional[int]): Worker processes for the underlying census.

    Returns:
        DensityEstimate: count/X, with the exact asymptotic density attached for the fn family.

    Example:
        density_estimate(resolve_function("fn", 6), 10**5).target_exact
        > '2/3'
    """
    report = count_practicals(f, [x], workers=workers)
    count = report.count_at(x)
    estimate = DensityEstimate(function=f.label, x=x, count=count, density=count / x)
    if f.catalog == "fn":
        exact = fn_density(f.parameter)
        estimate.target = float(exact)
        estimate.target_exact = str(exact)
    logger.info("density of %s up to %d: %.6f", f.label, x, estimate.density)
    return estimate


def _within(excess: int, n: int, alpha: Fraction, epsilon: Fraction) -> bool:
    # |excess/n - alpha| < epsilon, in integers
    a, b = alpha.numerator, alpha.denominator
    c, d = epsilon.numerator, epsilon.denominator
    return abs(d * (b * excess - a * n)) < c * b * n


def _scan(alpha: Fraction, epsilon: Fraction, limit: int) -> Optional[int]:
    sieve = build_sieve(limit)
    for n in range(1, limit + 1):
        phi = n
        for p, _ in sieve.factor_pairs(n):
            phi -= phi // p
        if _within(n - phi, n, alpha, epsilon):
            return n
    return None


def _greedy(alpha: Fraction, epsilon: Fraction, bound: int) -> Optional[List[int]]:
    # Multiply in ascending primes, skipping any that would push phi(n)/n below 1 - alpha - epsilon.
    floor = 1 - alpha - epsilon
    ratio = Fraction(1)
    n = 1
    primes: List[int] = []
    p = 2
    while n * p <= bound:
        if abs(1 - ratio - alpha) < epsilon:
            return primes
        candidate = ratio * Fraction(p - 1, p)
        if candidate > floor:
            ratio = candidate
            n *= p
            primes.append(p)
        p = sympy.nextprime(p)
    return primes if abs(1 - ratio - alpha) < epsilon else None


def density_target(
    alpha: Rational, epsilon: Rational, search_bound: int
) -> DensityTarget:
    """
    Finds m <= search_bound with |1 - phi(m)/m - alpha| < epsilon.

    Every m up to min(search_bound, 10^6) is tried in order, so a hit there is the smallest
    solution. Past that, ascending primes are multiplied in while they keep 1 - phi(m)/m below
    alpha + epsilon; the result is squarefree but not necessarily minimal.

    Args:
        alpha (Rational): Target density in [0, 1]; strings such as "0.3" are read exactly.
        epsilon (Rational): Tolerance, > 0.
        search_bound (int): Largest m considered.

    Returns:
        DensityTarget: The parameter found, its exact density and its prime factors.

    Raises:
        InvalidInputError: If alpha is outside [0, 1], epsilon <= 0 or the bound is < 1.
        TargetNotFoundError: If no m within the bound meets the tolerance.

    Example:
        density_target("0.1", "0.01", 10**9).n
        > 11
    """
    alpha_q, epsilon_q = _as_fraction(alpha), _as_fraction(epsilon)
    if not 0 <= alpha_q <= 1:
        raise InvalidInputError(f"alpha must lie in [0, 1], got {alpha}")
    if epsilon_q <= 0:
        raise InvalidInputError(f"epsilon must be positive, got {epsilon}")
    if search_bound < 1:
        raise InvalidInputError(f"search bound must be positive, got {search_bound}")

    n = _scan(alpha_q, epsilon_q, min(search_bound, EXHAUSTIVE_LIMIT))
    method = "scan"
    if n is None and search_bound > EXHAUSTIVE_LIMIT:
        logger.info(
            "no m <= %d within %s of %s; trying prime products up to %d",
            EXHAUSTIVE_LIMIT,
            epsilon_q,
            alpha_q,
            search_bound,
        )
        primes = _greedy(alpha_q, epsilon_q, search_bound)
        if primes is not None:
            n = math.prod(primes)
            method = "greedy"
    if n is None:
        raise TargetNotFoundError(
            f"no m <= {search_bound} has 1 - phi(m)/m within {epsilon_q} of {alpha_q}"
        )
    density = fn_density(n) if method == "scan" else 1 - math.prod(
        Fraction(p - 1, p) for p in primes
    )
    return DensityTarget(
        alpha=float(alpha_q),
        epsilon=float(epsilon_q),
        n=n,
        density=float(density),
        density_exact=str(density),
        primes=sorted(factorize(n).primes) if method == "scan" else primes,
        method=method,
    )
