from __future__ import annotations

import logging
import math
import operator
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from project.errors import (
    InvalidInputError,
    MissingParameterError,
    SfOverflowError,
    UnknownFunctionError,
)
from project.factorize_service import Factorization, PrimePower, factorize

logger = logging.getLogger(__name__)

SF_LIMIT = 1 << 128

PrimePowerRule = Callable[[int, int], int]
DirectRule = Callable[[int, Tuple[PrimePower, ...]], int]


class FunctionKind(str, Enum):
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"
    DIRECT = "direct"


class FunctionSpec(BaseModel):
    """
    A named arithmetic function f: N -> N.

    Multiplicative and additive kinds are given by their values at prime powers. Direct kinds are
    given either by prime-power values composed with `merge` (the Carmichael function composes by
    lcm) or by a `direct_rule` over (n, factors).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    kind: FunctionKind
    prime_power_rule: Optional[PrimePowerRule] = None
    direct_rule: Optional[DirectRule] = None
    merge: Optional[Callable[[int, int], int]] = None
    parameter: Optional[int] = None
    # Catalog entry this function came from; unlike name, kept when a config renames it.
    catalog: Optional[str] = None
    # False where the function deliberately leaves the monotone multiplicative setting.
    requires_monotone: bool = True
    description: str = ""

    @model_validator(mode="after")
    def _consistent_kind(self) -> "FunctionSpec":
        if self.kind is FunctionKind.DIRECT:
            if self.direct_rule is None and (
                self.prime_power_rule is None or self.merge is None
            ):
                raise ValueError(
                    "direct functions need direct_rule or prime_power_rule with merge"
                )
        elif self.prime_power_rule is None:
            raise ValueError(f"{self.kind.value} functions need a prime_power_rule")
        return self

    @property
    def label(self) -> str:
        if self.parameter is None:
            return self.name
        return f"{self.name}[{self.parameter}]"

    @property
    def is_multiplicative(self) -> bool:
        return self.kind is FunctionKind.MULTIPLICATIVE

    @property
    def is_additive(self) -> bool:
        return self.kind is FunctionKind.ADDITIVE

    def at_prime_power(self, p: int, k: int) -> int:
        """f(p^k); k = 0 gives f(1)."""
        if k == 0:
            return 0 if self.kind is FunctionKind.ADDITIVE else self._at_one()
        if self.prime_power_rule is not None:
            return self.prime_power_rule(p, k)
        return self.direct_rule(p**k, ((p, k),))

    def _at_one(self) -> int:
        if self.kind is FunctionKind.DIRECT and self.direct_rule is not None:
            return self.direct_rule(1, ())
        return 1


# Prime-power rules. Module-level so that specs pickle into worker processes.


def identity_pp(p: int, k: int) -> int:
    return p**k


def phi_pp(p: int, k: int) -> int:
    return p ** (k - 1) * (p - 1)


def phi_star_pp(p: int, k: int) -> int:
    return p**k - 1


def carmichael_pp(p: int, k: int) -> int:
    if p == 2 and k >= 3:
        return 1 << (k - 2)
    return p ** (k - 1) * (p - 1)


def tau_pp(p: int, k: int) -> int:
    return k + 1


def sigma_pp(p: int, k: int) -> int:
    return (p ** (k + 1) - 1) // (p - 1)


def omega_pp(p: int, k: int) -> int:
    return 1


def big_omega_pp(p: int, k: int) -> int:
    return k


def h_pp(p: int, k: int) -> int:
    return 1 << k


def a1_pp(p: int, k: int) -> int:
    return p


def valuation_pp(q: int, p: int, k: int) -> int:
    return k if p == q else 0


def f_family_pp(m: int, p: int, k: int) -> int:
    return 2 if m % p == 0 else 3


def aliquot_sum(n: int, factors: Tuple[PrimePower, ...]) -> int:
    sigma = 1
    for p, e in factors:
        sigma *= sigma_pp(p, e)
    return sigma - n


class TablePrimePowerRule:
    """
    Prime-power values from an explicit table, falling back to a catalog rule.
    """

    def __init__(self, table: Dict[PrimePower, int], fallback: PrimePowerRule):
        self.table = dict(table)
        self.fallback = fallback

    def __call__(self, p: int, k: int) -> int:
        value = self.table.get((p, k))
        return self.fallback(p, k) if value is None else value

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TablePrimePowerRule)
            and self.table == other.table
            and self.fallback == other.fallback
        )

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.table.items())), self.fallback))


LAMBDA_DEF53 = "lambda-def53"

_ALIASES = {
    "I": "identity",
    "lambda": "lambda-star",
    "carmichael": "lambda-star",
    "bigomega": "big-omega",
    "phistar": "phi-star",
    "v_p": "vp",
    "f_n": "fn",
}


def _identity() -> FunctionSpec:
    return FunctionSpec(
        name="identity",
        kind=FunctionKind.MULTIPLICATIVE,
        prime_power_rule=identity_pp,
        description="I(n) = n; identity-practical numbers are the practical numbers",
    )


def _phi() -> FunctionSpec:
    return FunctionSpec(
        name="phi",
        kind=FunctionKind.MULTIPLICATIVE,
        prime_power_rule=phi_pp,
        description="Euler's totient",
    )


def _phi_star() -> FunctionSpec:
    return FunctionSpec(
        name="phi-star",
        kind=FunctionKind.MULTIPLICATIVE,
        prime_power_rule=phi_star_pp,
        description="unitary totient, phi*(p^k) = p^k - 1",
    )


def _carmichael(name: str = "lambda-star") -> FunctionSpec:
    return FunctionSpec(
        name=name,
        kind=FunctionKind.DIRECT,
        prime_power_rule=carmichael_pp,
        merge=math.lcm,
        description="Carmichael lambda: lcm of the prime-power values",
    )


def _tau() -> FunctionSpec:
    return FunctionSpec(
        name="tau",
        kind=FunctionKind.MULTIPLICATIVE,
        prime_power_rule=tau_pp,
        description="number of divisors",
    )


def _sigma() -> FunctionSpec:
    return FunctionSpec(
        name="sigma",
        kind=FunctionKind.MULTIPLICATIVE,
        prime_power_rule=sigma_pp,
        description="sum of divisors",
    )


def _omega() -> FunctionSpec:
    return FunctionSpec(
        name="omega",
        kind=FunctionKind.ADDITIVE,
        prime_power_rule=omega_pp,
        requires_monotone=False,
        description="number of distinct prime factors",
    )


def _big_omega() -> FunctionSpec:
    return FunctionSpec(
        name="big-omega",
        kind=FunctionKind.ADDITIVE,
        prime_power_rule=big_omega_pp,
        requires_monotone=False,
        description="number of prime factors with multiplicity",
    )


def _valuation(p: Optional[int]) -> FunctionSpec:
    if p is None:
        raise MissingParameterError("vp needs --param <prime>")
    if not sympy.isprime(p):
        raise InvalidInputError(f"vp parameter must be prime, got {p}")
    return FunctionSpec(
        name="vp",
        kind=FunctionKind.ADDITIVE,
        prime_power_rule=partial(valuation_pp, p),
        parameter=p,
        requires_monotone=False,
        description=f"{p}-adic valuation",
    )


def _h() -> FunctionSpec:
    return FunctionSpec(
        name="h",
        kind=FunctionKind.MULTIPLICATIVE,
        prime_power_rule=h_pp,
        description="h(n) = 2^Omega(n)",
    )


def _aliquot() -> FunctionSpec:
    return FunctionSpec(
        name="s",
        kind=FunctionKind.DIRECT,
        direct_rule=aliquot_sum,
        requires_monotone=False,
        description="sum of proper divisors, sigma(n) - n",
    )


def _a1() -> FunctionSpec:
    return FunctionSpec(
        name="a1",
        kind=FunctionKind.ADDITIVE,
        prime_power_rule=a1_pp,
        requires_monotone=False,
        description="sum of the distinct primes dividing n",
    )


def _f_family(m: Optional[int]) -> FunctionSpec:
    if m is None:
        raise MissingParameterError("fn needs --param <positive integer>")
    if m < 1:
        raise InvalidInputError(f"fn parameter must be positive, got {m}")
    return FunctionSpec(
        name="fn",
        kind=FunctionKind.MULTIPLICATIVE,
        prime_power_rule=partial(f_family_pp, m),
        parameter=m,
        description=f"2 on prime powers of primes dividing {m}, 3 elsewhere",
    )


CATALOG: Dict[str, Callable[[Optional[int]], FunctionSpec]] = {
    "identity": lambda _: _identity(),
    "phi": lambda _: _phi(),
    "phi-star": lambda _: _phi_star(),
    "lambda-star": lambda _: _carmichael(),
    LAMBDA_DEF53: lambda _: _carmichael(LAMBDA_DEF53),
    "tau": lambda _: _tau(),
    "sigma": lambda _: _sigma(),
    "omega": lambda _: _omega(),
    "big-omega": lambda _: _big_omega(),
    "vp": _valuation,
    "h": lambda _: _h(),
    "s": lambda _: _aliquot(),
    "a1": lambda _: _a1(),
    "fn": _f_family,
}


def resolve_function(name: str, parameter: Optional[int] = None) -> FunctionSpec:
    """
    Resolves a catalog name (plus parameter for the vp and fn families) to a FunctionSpec.

    Args:
        name (str): Catalog name, e.g. "phi", "lambda-star", "fn".
        parameter (Optional[int]): The p of vp or the m of fn.

    Returns:
        FunctionSpec: The resolved function.

    Raises:
        UnknownFunctionError: If the name is not in the catalog.
        MissingParameterError: If a parametrised family is selected without a parameter.
    """
    key = _ALIASES.get(name, name)
    builder = CATALOG.get(key)
    if builder is None:
        raise UnknownFunctionError(
            f"Unknown function {name!r}; expected one of {', '.join(CATALOG)}"
        )
    return builder(parameter).model_copy(update={"catalog": key})


def _fold(spec: FunctionSpec) -> Optional[Tuple[int, Callable[[int, int], int]]]:
    if spec.kind is FunctionKind.MULTIPLICATIVE:
        return 1, operator.mul
    if spec.kind is FunctionKind.ADDITIVE:
        return 0, operator.add
    if spec.merge is not None:
        return 1, spec.merge
    return None


def evaluate(spec: FunctionSpec, fact: Factorization) -> int:
    """
    Evaluates f(n) exactly.

    Args:
        spec (FunctionSpec): The arithmetic function.
        fact (Factorization): Factorization of n.

    Returns:
        int: f(n) >= 0.

    Example:
        evaluate(resolve_function("phi-star"), factorize(9))
        > 8
    """
    fold = _fold(spec)
    if fold is None:
        return spec.direct_rule(fact.n, fact.factors)
    value, combine = fold
    for p, e in fact.factors:
        value = combine(value, spec.prime_power_rule(p, e))
    return value


def divisor_values_from_pairs(
    spec: FunctionSpec, n: int, factors: Tuple[PrimePower, ...]
) -> List[int]:
    fold = _fold(spec)
    if fold is None:
        entries: List[Tuple[int, Tuple[PrimePower, ...]]] = [(1, ())]
        for p, e in factors:
            entries = [
                (d * p**k, sub + ((p, k),)) if k else (d, sub)
                for k in range(e + 1)
                for d, sub in entries
            ]
        return [spec.direct_rule(d, sub) for d, sub in entries]
    unit, combine = fold
    rule = spec.prime_power_rule
    values = [unit]
    for p, e in factors:
        powers = [rule(p, k) for k in range(1, e + 1)]
        values = values + [combine(v, w) for w in powers for v in values]
    return values


def divisor_values(spec: FunctionSpec, fact: Factorization) -> List[int]:
    """
    Lists f(d) for every divisor d of n (same order as divisors_from_pairs).

    Args:
        spec (FunctionSpec): The arithmetic function.
        fact (Factorization): Factorization of n.

    Returns:
        List[int]: tau(n) values, one per divisor.
    """
    return divisor_values_from_pairs(spec, fact.n, fact.factors)


def _checked(value: int, spec: FunctionSpec, n: int) -> int:
    if value >= SF_LIMIT:
        raise SfOverflowError(f"S_{spec.label}({n}) exceeds 128 bits")
    return value


def sum_over_divisors(spec: FunctionSpec, fact: Factorization) -> int:
    """
    Computes S_f(n) = sum of f(d) over the divisors d of n.

    Multiplicative functions use the product over prime powers of (1 + f(p) + ... + f(p^e));
    every other kind sums the divisor values explicitly.

    Args:
        spec (FunctionSpec): The arithmetic function.
        fact (Factorization): Factorization of n.

    Returns:
        int: S_f(n), below 2^128.

    Raises:
        SfOverflowError: If S_f(n) does not fit in 128 bits.

    Example:
        sum_over_divisors(resolve_function("identity"), factorize(6))
        > 12
    """
    if spec.is_multiplicative:
        total = 1
        for p, e in fact.factors:
            total *= 1 + sum(spec.prime_power_rule(p, k) for k in range(1, e + 1))
        return _checked(total, spec, fact.n)
    return _checked(sum(divisor_values(spec, fact)), spec, fact.n)


class MonotonicityViolation(BaseModel):
    p: int
    k: int
    previous: int
    value: int


def check_monotone(
    spec: FunctionSpec, p_max: int = 10**3, k_max: int = 20
) -> List[MonotonicityViolation]:
    """
    Scans f(p^(k-1)) <= f(p^k) for primes p <= p_max and 1 <= k <= k_max.

    Args:
        spec (FunctionSpec): Function to scan.
        p_max (int): Largest prime scanned.
        k_max (int): Largest exponent scanned.

    Returns:
        List[MonotonicityViolation]: Every failing (p, k); empty when monotone up to the bounds.
    """
    violations = []
    for p in sympy.primerange(2, p_max + 1):
        previous = spec.at_prime_power(p, 0)
        for k in range(1, k_max + 1):
            value = spec.at_prime_power(p, k)
            if value < previous:
                violations.append(
                    MonotonicityViolation(p=p, k=k, previous=previous, value=value)
                )
            previous = value
    return violations


class FunctionConfig(BaseModel):
    """
    User-defined function document.

    Either `base` names a catalog entry, or `kind` plus `default` define a multiplicative/additive
    function whose prime-power values come from `prime_powers` ("p^k" or "p" keys) and otherwise
    from the prime-power rule of the `default` catalog entry.
    """

    name: str
    base: Optional[str] = None
    kind: Optional[FunctionKind] = None
    prime_powers: Dict[str, int] = {}
    default: Optional[str] = None
    parameter: Optional[int] = None

    @model_validator(mode="after")
    def _one_form(self) -> "FunctionConfig":
        if self.base is not None:
            if self.kind is not None or self.prime_powers or self.default is not None:
                raise ValueError("'base' cannot be combined with kind/prime_powers/default")
            return self
        if self.kind is None or self.default is None:
            raise ValueError("give either 'base' or both 'kind' and 'default'")
        if self.kind is FunctionKind.DIRECT:
            raise ValueError("table-defined functions must be multiplicative or additive")
        if any(value < 0 for value in self.prime_powers.values()):
            raise ValueError("prime_powers values must be nonnegative")
        return self

    def table(self) -> Dict[PrimePower, int]:
        parsed = {}
        for key, value in self.prime_powers.items():
            base, _, exponent = key.replace(" ", "").partition("^")
            try:
                p, k = int(base), int(exponent or 1)
            except ValueError as e:
                raise InvalidInputError(f"bad prime_powers key {key!r}") from e
            if k < 1 or not sympy.isprime(p):
                raise InvalidInputError(f"bad prime_powers key {key!r}")
            parsed[(p, k)] = value
        return parsed


def build_function(config: FunctionConfig) -> FunctionSpec:
    """
    Builds a FunctionSpec from a user-defined function document.

    Runs the bounded monotonicity scan and logs a warning for violations rather than failing.

    Args:
        config (FunctionConfig): Parsed document.

    Returns:
        FunctionSpec: The user-defined function.
    """
    if config.base is not None:
        spec = resolve_function(config.base, config.parameter).model_copy(
            update={"name": config.name}
        )
    else:
        fallback = resolve_function(config.default, config.parameter)
        if fallback.prime_power_rule is None:
            raise InvalidInputError(
                f"default {config.default!r} has no prime-power rule to fall back on"
            )
        spec = FunctionSpec(
            name=config.name,
            kind=config.kind,
            prime_power_rule=TablePrimePowerRule(
                config.table(), fallback.prime_power_rule
            ),
            parameter=config.parameter,
            requires_monotone=config.kind is FunctionKind.MULTIPLICATIVE,
            description=f"table over {config.default}",
        )
    violations = check_monotone(spec) if spec.requires_monotone else []
    if violations:
        first = violations[0]
        logger.warning(
            "function %s is not monotone on prime powers: f(%d^%d)=%d < f(%d^%d)=%d "
            "(%d violations up to p<=1000, k<=20)",
            spec.name,
            first.p,
            first.k,
            first.value,
            first.p,
            first.k - 1,
            first.previous,
            len(violations),
        )
    return spec


def load_function_config(path: Path) -> FunctionSpec:
    """
    Reads a JSON function document and builds its FunctionSpec.

    Args:
        path (Path): Location of the JSON document.

    Returns:
        FunctionSpec: The user-defined function.

    Raises:
        InvalidInputError: If the file is missing or does not validate.
    """
    try:
        config = FunctionConfig.model_validate_json(Path(path).read_text())
    except OSError as e:
        raise InvalidInputError(f"cannot read function config {path}: {e}") from e
    except ValidationError as e:
        raise InvalidInputError(f"invalid function config {path}: {e}") from e
    return build_function(config)
