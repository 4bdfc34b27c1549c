from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional

import sympy
from pydantic import BaseModel

from project.check_practicality_service import is_f_practical
from project.errors import InvalidInputError
from project.factorize_service import factorize
from project.function_catalog_service import FunctionSpec, sum_over_divisors

logger = logging.getLogger(__name__)


class ScanCounterexample(BaseModel):
    p: int
    k: int
    lhs: int
    rhs: int
    witness_m: Optional[int] = None


class ScanReport(BaseModel):
    """
    Outcome of a bounded scan: "holds up to bounds" or the first concrete counterexample.
    """

    scan: str
    function: str
    bounds: Dict[str, int]
    holds: bool
    counterexample: Optional[ScanCounterexample] = None
    violations: List[ScanCounterexample] = []
    # Every checked inequality was an equality (the h function is extremal).
    equality_everywhere: bool = False
    checked: int = 0

    @property
    def verdict(self) -> str:
        if self.holds:
            return "holds up to bounds"
        c = self.counterexample
        return f"counterexample at p={c.p}, k={c.k}"


def _check_bounds(**bounds: int) -> None:
    for name, value in bounds.items():
        if value < 2:
            raise InvalidInputError(f"{name} must be at least 2, got {value}")


def every_integer_scan(f: FunctionSpec, p_max: int, k_max: int) -> ScanReport:
    """
    Checks the every-integer criterion f(p^k) <= S_f(p^(k-1)) + 1 for primes p <= p_max and
    1 <= k <= k_max.

    Args:
        f (FunctionSpec): The arithmetic function.
        p_max (int): Largest prime scanned.
        k_max (int): Largest exponent scanned.

    Returns:
        ScanReport: "holds up to bounds", or the first violation in ascending (p, k) order together
        with the full list of violations.

    Example:
        every_integer_scan(resolve_function("phi"), 10, 5).counterexample
        > ScanCounterexample(p=3, k=2, lhs=6, rhs=4, witness_m=None)
    """
    _check_bounds(p_max=p_max, k_max=k_max)
    violations = []
    equality = True
    checked = 0
    for p in sympy.primerange(2, p_max + 1):
        s_f_previous = f.at_prime_power(p, 0)
        for k in range(1, k_max + 1):
            value = f.at_prime_power(p, k)
            checked += 1
            if value > s_f_previous + 1:
                violations.append(
                    ScanCounterexample(p=p, k=k, lhs=value, rhs=s_f_previous + 1)
                )
            equality = equality and value == s_f_previous + 1
            s_f_previous += value
    logger.info(
        "every-integer scan of %s up to p=%d, k=%d: %d violations",
        f.label,
        p_max,
        k_max,
        len(violations),
    )
    return ScanReport(
        scan="every-integer",
        function=f.label,
        bounds={"p_max": p_max, "k_max": k_max},
        holds=not violations,
        counterexample=violations[0] if violations else None,
        violations=violations,
        equality_everywhere=equality and not violations,
        checked=checked,
    )


def additive_every_integer_scan(
    f: FunctionSpec, p_max: int, k_max: int
) -> ScanReport:
    """
    Additive form of the every-integer criterion: f(p^k) <= 1 + f(1) + f(p) + ... + f(p^(k-1))
    with f(1) = 0.

    Args:
        f (FunctionSpec): An additive function.
        p_max (int): Largest prime scanned.
        k_max (int): Largest exponent scanned.

    Returns:
        ScanReport: As every_integer_scan, tagged "additive-every-integer".

    Raises:
        InvalidInputError: If f is not additive.
    """
    if not f.is_additive:
        raise InvalidInputError(f"{f.label} is not additive")
    report = every_integer_scan(f, p_max, k_max)
    return report.model_copy(update={"scan": "additive-every-integer"})


def convenience_scan(
    f: FunctionSpec, p_max: int, k_max: int, m_max: int
) -> ScanReport:
    """
    Bounded semi-decision of convenience: for each prime p <= p_max with some coprime m <= m_max
    satisfying f(p) <= S_f(m) + 1, checks f(p^(k+1)) <= f(p) f(p^k) for 0 <= k <= k_max.

    Args:
        f (FunctionSpec): The arithmetic function.
        p_max (int): Largest prime scanned.
        k_max (int): Largest exponent k scanned.
        m_max (int): Largest coprime m searched for relevance.

    Returns:
        ScanReport: "holds up to bounds" (convenient up to bounds) or the first (p, k) with the
        smallest relevance witness m.

    Example:
        convenience_scan(resolve_function("phi"), 100, 10, 100).counterexample
        > ScanCounterexample(p=2, k=1, lhs=2, rhs=1, witness_m=1)
    """
    _check_bounds(p_max=p_max, k_max=k_max, m_max=m_max)
    s_f = [0] + [sum_over_divisors(f, factorize(m)) for m in range(1, m_max + 1)]
    violations = []
    checked = 0
    for p in sympy.primerange(2, p_max + 1):
        f_p = f.at_prime_power(p, 1)
        witness = next(
            (
                m
                for m in range(1, m_max + 1)
                if f_p <= s_f[m] + 1 and math.gcd(m, p) == 1
            ),
            None,
        )
        if witness is None:
            continue
        previous = f.at_prime_power(p, 0)
        for k in range(0, k_max + 1):
            value = f.at_prime_power(p, k + 1)
            checked += 1
            if value > f_p * previous:
                violations.append(
                    ScanCounterexample(
                        p=p, k=k, lhs=value, rhs=f_p * previous, witness_m=witness
                    )
                )
                break
            previous = value
    return ScanReport(
        scan="convenience",
        function=f.label,
        bounds={"p_max": p_max, "k_max": k_max, "m_max": m_max},
        holds=not violations,
        counterexample=violations[0] if violations else None,
        violations=violations,
        checked=checked,
    )


def practical_primes(f: FunctionSpec, p_max: int) -> List[int]:
    """
    Lists the primes p <= p_max that are f-practical, decided from the definition.

    For multiplicative f these are the primes with f(p) <= 2.
    """
    return [
        p
        for p in sympy.primerange(2, p_max + 1)
        if is_f_practical(p, f).is_practical
    ]
