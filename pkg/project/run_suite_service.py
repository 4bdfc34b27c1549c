from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, computed_field

from project.build_sieve_service import build_sieve
from project.check_practicality_service import (
    additive_practical_check,
    is_f_practical,
    is_practical_pairs,
    is_weakly_f_practical,
    oracle_is_f_practical,
)
from project.count_practicals_service import (
    compare_golden,
    count_practicals,
    load_golden,
    s_density_trend,
)
from project.errors import (
    ContractViolationError,
    InvalidInputError,
    LimitExceededError,
    TargetNotFoundError,
    UnknownSuiteError,
)
from project.estimate_density_service import density_estimate, density_target
from project.factorize_service import Factorization, factorize
from project.function_catalog_service import (
    CATALOG,
    FunctionSpec,
    check_monotone,
    evaluate,
    resolve_function,
    sum_over_divisors,
)
from project.lambda_practical_service import (
    BoundedWeightSystem,
    bounded_representation,
    is_lambda_practical,
)
from project.scan_function_service import (
    convenience_scan,
    every_integer_scan,
    practical_primes,
)
from project.settings import get_settings

logger = logging.getLogger(__name__)

NONCONSTRUCTIBLE_LIMIT = 10**5

Bounds = Dict[str, int]
Property = Callable[[Factorization], bool]

IDENTITY = resolve_function("identity")
PHI = resolve_function("phi")
PHI_STAR = resolve_function("phi-star")
CARMICHAEL = resolve_function("lambda-star")
TAU = resolve_function("tau")
SIGMA = resolve_function("sigma")
H = resolve_function("h")
OMEGA = resolve_function("omega")
BIG_OMEGA = resolve_function("big-omega")
ALIQUOT = resolve_function("s")
A1 = resolve_function("a1")
VALUATIONS = {p: resolve_function("vp", p) for p in (2, 3, 5)}
F_FAMILY = {m: resolve_function("fn", m) for m in (2, 6, 30)}
MULTIPLICATIVE = (IDENTITY, PHI, PHI_STAR, TAU, SIGMA, H, F_FAMILY[2])


class SuiteOutcome(BaseModel):
    passed: bool
    counterexample: Optional[int] = None
    detail: str = ""
    witnesses: List[int] = []


class Suite(BaseModel):
    """
    A named, bounded check of one statement about f-practical numbers.

    `recheck` decides a reported counterexample again in isolation and returns True if it still
    fails; suites without one are rerun whole and must reproduce the same counterexample.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    citation: str
    check: Callable[[Bounds], SuiteOutcome]
    default_bounds: Bounds
    recheck: Optional[Callable[[int], bool]] = None
    # Extended suites are opt-in and may use every core themselves.
    extended: bool = False


class SuiteResult(BaseModel):
    name: str
    citation: str
    bounds: Bounds
    passed: bool
    counterexample: Optional[int] = None
    detail: str = ""
    witnesses: List[int] = []
    elapsed: float


class VerificationReport(BaseModel):
    results: List[SuiteResult]

    @computed_field
    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def to_text(self) -> str:
        lines = []
        for result in self.results:
            bounds = ", ".join(f"{k}={v}" for k, v in result.bounds.items())
            status = "PASS" if result.passed else "FAIL"
            line = f"{status} {result.name} ({bounds}) {result.elapsed:.2f}s"
            if not result.passed:
                line += f"\n     counterexample: {result.counterexample}; {result.detail}"
            lines.append(line)
        failed = sum(not result.passed for result in self.results)
        lines.append(f"{len(self.results) - failed} passed, {failed} failed")
        return "\n".join(lines)


def _practical(f: FunctionSpec, fact: Factorization) -> bool:
    return is_practical_pairs(f, fact.n, fact.factors)


def _weak(f: FunctionSpec, fact: Factorization) -> bool:
    return is_weakly_f_practical(fact.n, f, fact)


def _is_prime(fact: Factorization) -> bool:
    return len(fact.factors) == 1 and fact.factors[0][1] == 1


def _times_prime(fact: Factorization, p: int) -> Factorization:
    exponents = dict(fact.factors)
    exponents[p] = exponents.get(p, 0) + 1
    return Factorization.trusted(fact.n * p, tuple(sorted(exponents.items())))


def _for_all(n_max: int, prop: Property) -> SuiteOutcome:
    sieve = build_sieve(n_max)
    for n in range(1, n_max + 1):
        if not prop(Factorization.trusted(n, sieve.factor_pairs(n))):
            return SuiteOutcome(
                passed=False, counterexample=n, detail=f"fails at n={n}"
            )
    return SuiteOutcome(passed=True)


def _unitary_splits(fact: Factorization) -> Iterator[Tuple[Factorization, Factorization]]:
    for size in range(len(fact.factors) + 1):
        for chosen in combinations(fact.factors, size):
            rest = tuple(pp for pp in fact.factors if pp not in chosen)
            a = math.prod(p**e for p, e in chosen)
            yield (
                Factorization.trusted(a, chosen),
                Factorization.trusted(fact.n // a, rest),
            )


def _coprime_pairs(a_max: int) -> Iterator[Tuple[Factorization, Factorization]]:
    facts = [factorize(a) for a in range(1, a_max + 1)]
    for i, a in enumerate(facts):
        for b in facts[i:]:
            if math.gcd(a.n, b.n) == 1:
                yield a, b


def _for_all_pairs(
    a_max: int, identity: Callable[[Factorization, Factorization], bool]
) -> SuiteOutcome:
    for a, b in _coprime_pairs(a_max):
        if not identity(a, b):
            return SuiteOutcome(
                passed=False,
                counterexample=a.n * b.n,
                detail=f"fails at a={a.n}, b={b.n}",
            )
    return SuiteOutcome(passed=True)


def _product(a: Factorization, b: Factorization) -> Factorization:
    return Factorization.trusted(a.n * b.n, tuple(sorted(a.factors + b.factors)))


# Per-n statements.


def _oracle_agrees(fact: Factorization) -> bool:
    return all(
        _practical(f, fact) == oracle_is_f_practical(fact.n, f)
        for f in (IDENTITY, PHI, PHI_STAR, CARMICHAEL, TAU)
    )


def _practical_implies_weak(fact: Factorization) -> bool:
    return all(
        not _practical(f, fact) or _weak(f, fact)
        for f in (IDENTITY, PHI, PHI_STAR, CARMICHAEL)
    )


def _identity_weak_equivalence(fact: Factorization) -> bool:
    return _practical(IDENTITY, fact) == _weak(IDENTITY, fact)


def _weak_times_small_prime(fact: Factorization) -> bool:
    for f in (IDENTITY, PHI, PHI_STAR):
        if not _weak(f, fact):
            continue
        for p in sympy.primerange(2, fact.largest_prime + 1):
            if not _weak(f, _times_prime(fact, p)):
                return False
    return True


def _squarefree_weak(fact: Factorization) -> bool:
    if not fact.is_squarefree:
        return True
    return all(
        _practical(f, fact) == _weak(f, fact) for f in (IDENTITY, PHI, PHI_STAR)
    )


def _lambda_star_in_lambda(fact: Factorization) -> bool:
    return not _practical(CARMICHAEL, fact) or is_lambda_practical(fact.n)


def _weak_lambda_weak_phi(fact: Factorization) -> bool:
    return not _weak(CARMICHAEL, fact) or _weak(PHI, fact)


def _even_weak_phi_star(fact: Factorization) -> bool:
    if fact.n % 2 or not _weak(PHI_STAR, fact):
        return True
    return _practical(IDENTITY, fact)


def _squarefree_phi_star_phi(fact: Factorization) -> bool:
    if not fact.is_squarefree:
        return True
    return _practical(PHI_STAR, fact) == _practical(PHI, fact)


def _universal(fact: Factorization) -> bool:
    return all(
        _practical(f, fact) for f in (TAU, H, OMEGA, BIG_OMEGA, VALUATIONS[2])
    )


def _a1_only_one(fact: Factorization) -> bool:
    return _practical(A1, fact) == (fact.n == 1)


def _f_family_membership(fact: Factorization) -> bool:
    return all(
        _practical(f, fact) == (fact.n == 1 or math.gcd(fact.n, m) > 1)
        for m, f in F_FAMILY.items()
    )


def _s_composite_bound(fact: Factorization) -> bool:
    if fact.n == 1 or _is_prime(fact):
        return True
    return sum_over_divisors(ALIQUOT, fact) ** 2 >= fact.n


def _s_divisor_bound(fact: Factorization) -> bool:
    tau = fact.divisor_count
    if tau > 2 ** sum(e for _, e in fact.factors):
        return False
    if not _practical(ALIQUOT, fact):
        return True
    return sum_over_divisors(ALIQUOT, fact) <= 2 ** (tau - 1)


def _vp_closed_form(fact: Factorization) -> bool:
    exponents = dict(fact.factors)
    for p, f in VALUATIONS.items():
        v = exponents.get(p, 0)
        expected = v * (v + 1) // 2 * fact.without(p).divisor_count
        if sum_over_divisors(f, fact) != expected:
            return False
    return True


def _additive_agreement(fact: Factorization) -> bool:
    return all(
        additive_practical_check(fact.n, f, fact) == _practical(f, fact)
        for f in (OMEGA, BIG_OMEGA, VALUATIONS[2], VALUATIONS[3], A1)
    )


def _lambda_divides_phi(fact: Factorization) -> bool:
    lam, phi = evaluate(CARMICHAEL, fact), evaluate(PHI, fact)
    if phi % lam:
        return False
    return lam == phi if _is_prime(fact) else True


def _bounded_representations(fact: Factorization) -> bool:
    if not _practical(CARMICHAEL, fact):
        return True
    system = BoundedWeightSystem.for_carmichael(fact.n)
    try:
        for m in range(fact.n + 1):
            bounded_representation(system, m)
    except ContractViolationError:
        return False
    return True


# Coprime-pair identities.


def _s_identity(a: Factorization, b: Factorization) -> bool:
    s_a, s_b = evaluate(ALIQUOT, a), evaluate(ALIQUOT, b)
    return evaluate(ALIQUOT, _product(a, b)) == s_a * s_b + a.n * s_b + b.n * s_a


def _sf_multiplicative(a: Factorization, b: Factorization) -> bool:
    ab = _product(a, b)
    return all(
        sum_over_divisors(f, ab) == sum_over_divisors(f, a) * sum_over_divisors(f, b)
        for f in MULTIPLICATIVE
    )


# Whole-range checks.


def _weak_phi_not_phi(bounds: Bounds) -> SuiteOutcome:
    sieve = build_sieve(bounds["n_max"])
    members = []
    for n in range(1, bounds["n_max"] + 1):
        fact = Factorization.trusted(n, sieve.factor_pairs(n))
        if _weak(PHI, fact) and not _practical(PHI, fact):
            members.append(n)
    if bounds["n_max"] >= 75 and 75 not in members:
        return SuiteOutcome(
            passed=False,
            counterexample=75,
            detail="75 is expected weakly phi-practical but not phi-practical",
            witnesses=members,
        )
    return SuiteOutcome(passed=True, witnesses=members)


def _nonconstructible_phi(bounds: Bounds) -> SuiteOutcome:
    phi_list = find_nonconstructible(PHI, bounds["x"])
    identity_list = find_nonconstructible(IDENTITY, bounds["identity_x"])
    tau_list = find_nonconstructible(TAU, bounds["tau_x"])
    if bounds["x"] >= 315 and 315 not in phi_list:
        return SuiteOutcome(
            passed=False,
            counterexample=315,
            detail="315 is expected phi-practical and not constructible",
            witnesses=phi_list,
        )
    if 45 in phi_list:
        return SuiteOutcome(
            passed=False,
            counterexample=45,
            detail="45 is not phi-practical and cannot be listed",
            witnesses=phi_list,
        )
    for name, listed in (("identity", identity_list), ("tau", tau_list)):
        if listed:
            return SuiteOutcome(
                passed=False,
                counterexample=listed[0],
                detail=f"{name}-practical numbers are all constructible",
                witnesses=listed,
            )
    return SuiteOutcome(passed=True, witnesses=phi_list)


def _lambda_156(bounds: Bounds) -> SuiteOutcome:
    lambda_practical = is_lambda_practical(156)
    star = is_f_practical(156, CARMICHAEL)
    if lambda_practical and not star.is_practical:
        return SuiteOutcome(passed=True, witnesses=[156])
    return SuiteOutcome(
        passed=False,
        counterexample=156,
        detail=f"lambda-practical={lambda_practical}, lambda-star-practical={star.is_practical}",
    )


def _every_integer_scans(bounds: Bounds) -> SuiteOutcome:
    p_max, k_max = bounds["p_max"], bounds["k_max"]
    tau = every_integer_scan(TAU, p_max, k_max)
    if not tau.holds:
        c = tau.counterexample
        return SuiteOutcome(
            passed=False, counterexample=c.p, detail=f"tau fails at p={c.p}, k={c.k}"
        )
    h = every_integer_scan(H, p_max, k_max)
    if not (h.holds and h.equality_everywhere):
        return SuiteOutcome(
            passed=False,
            counterexample=h.counterexample.p if h.counterexample else None,
            detail="h is expected to meet the bound with equality everywhere",
        )
    phi = every_integer_scan(PHI, p_max, k_max)
    c = phi.counterexample
    if p_max >= 3 and (c is None or (c.p, c.k) != (3, 2)):
        return SuiteOutcome(
            passed=False,
            counterexample=c.p if c else None,
            detail="phi is expected to fail first at p=3, k=2",
        )
    return SuiteOutcome(passed=True)


def _convenience_scans(bounds: Bounds) -> SuiteOutcome:
    args = bounds["p_max"], bounds["k_max"], bounds["m_max"]
    for f in (IDENTITY, F_FAMILY[2]):
        report = convenience_scan(f, *args)
        if not report.holds:
            c = report.counterexample
            return SuiteOutcome(
                passed=False,
                counterexample=c.p,
                detail=f"{f.label} fails at p={c.p}, k={c.k} (m={c.witness_m})",
            )
    if convenience_scan(PHI, *args).holds:
        return SuiteOutcome(passed=False, detail="phi is expected to be inconvenient")
    return SuiteOutcome(passed=True)


def _practical_primes(bounds: Bounds) -> SuiteOutcome:
    p_max = bounds["p_max"]
    primes = list(sympy.primerange(2, p_max + 1))
    for f in MULTIPLICATIVE:
        listed = set(practical_primes(f, p_max))
        for p in primes:
            if (p in listed) != (f.at_prime_power(p, 1) <= 2):
                return SuiteOutcome(
                    passed=False, counterexample=p, detail=f"{f.label} at p={p}"
                )
    missing = sorted(set(primes) - set(practical_primes(ALIQUOT, p_max)))
    if missing:
        return SuiteOutcome(
            passed=False, counterexample=missing[0], detail="prime not s-practical"
        )
    return SuiteOutcome(passed=True)


def _prime_power_monotonicity(bounds: Bounds) -> SuiteOutcome:
    for name in CATALOG:
        f = resolve_function(name, 2 if name in ("vp", "fn") else None)
        if not f.requires_monotone:
            continue
        violations = check_monotone(f, bounds["p_max"], bounds["k_max"])
        if violations:
            v = violations[0]
            return SuiteOutcome(
                passed=False,
                counterexample=v.p,
                detail=f"{f.label}({v.p}^{v.k}) = {v.value} < {v.previous}",
            )
    return SuiteOutcome(passed=True)


def _f_family_density(bounds: Bounds) -> SuiteOutcome:
    for m, f in F_FAMILY.items():
        estimate = density_estimate(f, bounds["x"], workers=1)
        if abs(estimate.density - estimate.target) >= 1e-3:
            return SuiteOutcome(
                passed=False,
                counterexample=m,
                detail=f"density {estimate.density:.6f} vs {estimate.target_exact}",
            )
    return SuiteOutcome(passed=True)


def _density_targets(bounds: Bounds) -> SuiteOutcome:
    found = []
    for alpha in ("0.1", "0.3", "0.5", "0.7", "0.9"):
        bound = bounds["extended_bound"] if alpha == "0.9" else bounds["search_bound"]
        try:
            found.append(density_target(alpha, "0.01", bound).n)
        except TargetNotFoundError as e:
            return SuiteOutcome(passed=False, detail=str(e), witnesses=found)
    return SuiteOutcome(passed=True, witnesses=found)


def _s_density_trend(bounds: Bounds) -> SuiteOutcome:
    xs = [10**k for k in range(2, len(str(bounds["x"])))]
    trend = s_density_trend(xs, workers=1)
    for before, after in zip(trend, trend[1:]):
        if after.density >= before.density:
            return SuiteOutcome(
                passed=False,
                counterexample=after.x,
                detail=f"density {after.density:.6f} at {after.x} >= {before.density:.6f}",
                witnesses=[point.count for point in trend],
            )
    return SuiteOutcome(passed=True, witnesses=[point.count for point in trend])


def _golden_check(tables: Sequence[str], x: int, workers: Optional[int]) -> SuiteOutcome:
    rows = sorted(
        (row for table in tables for row in load_golden(table) if row.x <= x),
        key=lambda row: row.x,
    )
    report = count_practicals(CARMICHAEL, [row.x for row in rows], workers=workers)
    mismatches = compare_golden(report, rows)
    counts = [checkpoint.count for checkpoint in report.checkpoints]
    if mismatches:
        first = mismatches[0]
        return SuiteOutcome(
            passed=False,
            counterexample=first.x,
            detail=(
                f"count {first.actual_count} vs {first.expected_count}, "
                f"ratio {first.actual_ratio} vs {first.expected_ratio}"
            ),
            witnesses=counts,
        )
    return SuiteOutcome(passed=True, witnesses=counts)


def _table2(bounds: Bounds) -> SuiteOutcome:
    outcome = _golden_check(("table1", "table2"), bounds["x"], workers=None)
    if not outcome.passed:
        return outcome
    # the ratio column falls across the second table's checkpoints
    ratios = [row.ratio for row in load_golden("table2") if row.x <= bounds["x"]]
    if any(float(b) >= float(a) for a, b in zip(ratios, ratios[1:])):
        return SuiteOutcome(passed=False, detail="ratios are not decreasing")
    return outcome


def _golden_differs(x: int) -> bool:
    rows = [row for table in ("table1", "table2") for row in load_golden(table)]
    row = next(row for row in rows if row.x == x)
    checkpoint = count_practicals(CARMICHAEL, [x], workers=1).checkpoints[0]
    return checkpoint.count != row.count or checkpoint.ratio_text() != row.ratio


def _pair_recheck(identity: Callable[[Factorization, Factorization], bool]):
    def recheck(n: int) -> bool:
        return any(not identity(a, b) for a, b in _unitary_splits(factorize(n)))

    return recheck


def _per_n(name: str, citation: str, prop: Property, n_max: int) -> Suite:
    return Suite(
        name=name,
        citation=citation,
        check=lambda bounds: _for_all(bounds["n_max"], prop),
        default_bounds={"n_max": n_max},
        recheck=lambda n: not prop(factorize(n)),
    )


def _pairs(name: str, citation: str, identity, a_max: int) -> Suite:
    return Suite(
        name=name,
        citation=citation,
        check=lambda bounds: _for_all_pairs(bounds["a_max"], identity),
        default_bounds={"a_max": a_max},
        recheck=_pair_recheck(identity),
    )


SUITES: Dict[str, Suite] = {
    suite.name: suite
    for suite in (
        _per_n(
            "oracle-equivalence",
            "the prefix-sum criterion agrees with exhaustive subset sums",
            _oracle_agrees,
            10**4,
        ),
        _per_n(
            "fpractical-implies-weak",
            "every f-practical number is weakly f-practical",
            _practical_implies_weak,
            10**5,
        ),
        _per_n(
            "identity-weak-equivalence",
            "practical numbers are exactly the weakly identity-practical numbers",
            _identity_weak_equivalence,
            10**5,
        ),
        _per_n(
            "weak-times-small-prime",
            "pn is weakly f-practical for weakly f-practical n and primes p <= P(n)",
            _weak_times_small_prime,
            10**4,
        ),
        _per_n(
            "squarefree-weak-equivalence",
            "a squarefree n is f-practical iff weakly f-practical",
            _squarefree_weak,
            10**5,
        ),
        _per_n(
            "lambda-star-subset-lambda",
            "every lambda-star-practical number is lambda-practical",
            _lambda_star_in_lambda,
            10**4,
        ),
        _per_n(
            "weak-lambda-implies-weak-phi",
            "every weakly lambda-practical number is weakly phi-practical",
            _weak_lambda_weak_phi,
            10**5,
        ),
        _per_n(
            "even-weak-phi-star-practical",
            "every even weakly phi*-practical number is practical",
            _even_weak_phi_star,
            10**5,
        ),
        _per_n(
            "squarefree-phi-star-phi",
            "squarefree phi*-practical numbers are the squarefree phi-practical numbers",
            _squarefree_phi_star_phi,
            10**5,
        ),
        Suite(
            name="weak-phi-not-phi-has-75",
            citation="75 is weakly phi-practical but not phi-practical",
            check=_weak_phi_not_phi,
            default_bounds={"n_max": 10**3},
        ),
        Suite(
            name="nonconstructible-phi",
            citation="some phi-practical numbers are not a phi-practical number times a prime power",
            check=_nonconstructible_phi,
            default_bounds={"x": 10**3, "identity_x": 10**4, "tau_x": 10**3},
        ),
        Suite(
            name="lambda-156",
            citation="156 is lambda-practical but not lambda-star-practical",
            check=_lambda_156,
            default_bounds={},
        ),
        _per_n(
            "bounded-representation",
            "with contiguous subset sums, every m <= T has a bounded-multiplicity representation",
            _bounded_representations,
            300,
        ),
        _per_n(
            "universal-functions",
            "every n is tau-, h-, omega-, Omega- and v_2-practical",
            _universal,
            10**5,
        ),
        _per_n(
            "a1-only-one",
            "1 is the only a1-practical number",
            _a1_only_one,
            10**5,
        ),
        _per_n(
            "fm-membership",
            "the fn-practical numbers are 1 and the n sharing a prime with m",
            _f_family_membership,
            10**5,
        ),
        Suite(
            name="fm-density",
            citation="the fn-practical numbers have density 1 - phi(m)/m",
            check=_f_family_density,
            default_bounds={"x": 10**6},
        ),
        Suite(
            name="density-target",
            citation="the densities of f-practical sets are dense in [0, 1]",
            check=_density_targets,
            default_bounds={"search_bound": 10**9, "extended_bound": 10**200},
        ),
        _pairs(
            "s-identity",
            "s(ab) = s(a)s(b) + a s(b) + b s(a) for coprime a, b",
            _s_identity,
            10**3,
        ),
        _per_n(
            "s-composite-bound",
            "S_s(n) >= sqrt(n) for composite n",
            _s_composite_bound,
            10**5,
        ),
        Suite(
            name="s-density-trend",
            citation="the s-practical numbers have density 0",
            check=_s_density_trend,
            default_bounds={"x": 10**5},
        ),
        _per_n(
            "s-practical-divisor-bound",
            "S_s(n) <= 2^(tau(n)-1) for s-practical n, and tau(n) <= 2^Omega(n)",
            _s_divisor_bound,
            10**5,
        ),
        _per_n(
            "vp-closed-form",
            "S_vp(n) = v(v+1)/2 * tau(n / p^v)",
            _vp_closed_form,
            10**5,
        ),
        _per_n(
            "additive-criterion-agreement",
            "the prime-power criterion decides f-practicality for additive f",
            _additive_agreement,
            10**4,
        ),
        _per_n(
            "lambda-divides-phi",
            "lambda(n) divides phi(n), with equality at primes",
            _lambda_divides_phi,
            10**4,
        ),
        _pairs(
            "sf-multiplicative",
            "S_f is multiplicative for multiplicative f",
            _sf_multiplicative,
            300,
        ),
        Suite(
            name="every-integer-scans",
            citation="f(p^k) <= S_f(p^(k-1)) + 1 makes every integer f-practical",
            check=_every_integer_scans,
            default_bounds={"p_max": 10**3, "k_max": 20},
        ),
        Suite(
            name="convenience-scans",
            citation="f is convenient iff f(p^(k+1)) <= f(p) f(p^k) at relevant primes",
            check=_convenience_scans,
            default_bounds={"p_max": 100, "k_max": 10, "m_max": 100},
        ),
        Suite(
            name="practical-primes",
            citation="for multiplicative f the f-practical primes are those with f(p) <= 2",
            check=_practical_primes,
            default_bounds={"p_max": 10**3},
        ),
        Suite(
            name="prime-power-monotonicity",
            citation="f(p^(k-1)) <= f(p^k) for the monotone catalog functions",
            check=_prime_power_monotonicity,
            default_bounds={"p_max": 10**3, "k_max": 20},
        ),
        Suite(
            name="table1",
            citation="lambda-star-practical counts and ratios up to 10^5",
            check=lambda bounds: _golden_check(("table1",), bounds["x"], workers=1),
            default_bounds={"x": 10**5},
            recheck=_golden_differs,
        ),
        Suite(
            name="table2",
            citation="lambda-star-practical counts from 10^6 to 10^7",
            check=_table2,
            default_bounds={"x": 10**7},
            recheck=_golden_differs,
            extended=True,
        ),
    )
}


def get_suite(name: str) -> Suite:
    suite = SUITES.get(name)
    if suite is None:
        raise UnknownSuiteError(
            f"Unknown suite {name!r}; expected one of {', '.join(SUITES)}"
        )
    return suite


def run_suite(name: str, bounds: Optional[Bounds] = None) -> SuiteResult:
    """
    Runs one verification suite exhaustively up to its bounds.

    A reported counterexample is decided again in isolation before the result is returned.

    Args:
        name (str): Suite name, e.g. "fpractical-implies-weak".
        bounds (Optional[Bounds]): Overrides for the suite's default bounds.

    Returns:
        SuiteResult: Pass, or fail with the first counterexample.

    Raises:
        UnknownSuiteError: If no suite has that name.
        InvalidInputError: If a bound is unknown to the suite or not positive.
        ContractViolationError: If a counterexample does not reproduce.

    Example:
        75 in run_suite("weak-phi-not-phi-has-75").witnesses
        > True
    """
    suite = get_suite(name)
    overrides = bounds or {}
    unknown = set(overrides) - set(suite.default_bounds)
    if unknown:
        raise InvalidInputError(
            f"suite {name} has no bound(s) {', '.join(sorted(unknown))}; "
            f"expected {', '.join(suite.default_bounds) or 'none'}"
        )
    merged = {**suite.default_bounds, **overrides}
    if any(value < 1 for value in merged.values()):
        raise InvalidInputError(f"bounds must be positive, got {merged}")

    started = time.perf_counter()
    outcome = suite.check(merged)
    if not outcome.passed and outcome.counterexample is not None:
        if suite.recheck is not None:
            reproduced = suite.recheck(outcome.counterexample)
        else:
            reproduced = suite.check(merged).counterexample == outcome.counterexample
        if not reproduced:
            raise ContractViolationError(
                f"suite {name}: counterexample {outcome.counterexample} did not reproduce"
            )
    elapsed = time.perf_counter() - started
    logger.info(
        "suite %s %s in %.2fs", name, "passed" if outcome.passed else "failed", elapsed
    )
    return SuiteResult(
        name=name,
        citation=suite.citation,
        bounds=merged,
        passed=outcome.passed,
        counterexample=outcome.counterexample,
        detail=outcome.detail,
        witnesses=outcome.witnesses,
        elapsed=elapsed,
    )


def _run_job(job: Tuple[str, Optional[Bounds]]) -> SuiteResult:
    return run_suite(*job)


def run_suites(
    names: Optional[Sequence[str]] = None,
    bounds: Optional[Dict[str, Bounds]] = None,
    include_extended: bool = False,
    workers: Optional[int] = None,
) -> VerificationReport:
    """
    Runs several suites, independent ones in parallel worker processes.

    Args:
        names (Optional[Sequence[str]]): Suites to run; all regular suites when omitted.
        bounds (Optional[Dict[str, Bounds]]): Per-suite bound overrides.
        include_extended (bool): Also run the opt-in extended suites when names is omitted.
        workers (Optional[int]): Worker processes; defaults to the core count.

    Returns:
        VerificationReport: One result per suite, in the order requested.
    """
    if names is None:
        names = [
            name
            for name, suite in SUITES.items()
            if include_extended or not suite.extended
        ]
    for name in names:
        get_suite(name)
    bounds = bounds or {}
    jobs = [(name, bounds.get(name)) for name in names]
    regular = [job for job in jobs if not SUITES[job[0]].extended]
    workers = max(1, min(workers or get_settings().worker_count, len(regular) or 1))
    logger.info("running %d suites on %d workers", len(jobs), workers)

    results: Dict[str, SuiteResult] = {}
    if workers == 1:
        results.update((job[0], _run_job(job)) for job in regular)
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for job, result in zip(regular, executor.map(_run_job, regular)):
                results[job[0]] = result
    # extended suites parallelise internally
    for job in jobs:
        if SUITES[job[0]].extended:
            results[job[0]] = _run_job(job)
    return VerificationReport(results=[results[name] for name in names])


def find_nonconstructible(f: FunctionSpec, x: int) -> List[int]:
    """
    Lists the f-practical n <= X (n > 1) that are not m * p^k for an f-practical m and a prime
    power p^k exactly dividing n.

    Args:
        f (FunctionSpec): The arithmetic function.
        x (int): Upper bound, at most 10^5.

    Returns:
        List[int]: The non-constructible f-practical numbers, ascending.

    Raises:
        LimitExceededError: If X is above 10^5.

    Example:
        315 in find_nonconstructible(resolve_function("phi"), 1000)
        > True
    """
    if x < 1:
        raise InvalidInputError(f"x must be positive, got {x}")
    if x > NONCONSTRUCTIBLE_LIMIT:
        raise LimitExceededError(
            f"find_nonconstructible is bounded by {NONCONSTRUCTIBLE_LIMIT}, got {x}"
        )
    sieve = build_sieve(x)
    factors = [()] + [sieve.factor_pairs(n) for n in range(1, x + 1)]
    practical = [False] + [is_practical_pairs(f, n, factors[n]) for n in range(1, x + 1)]
    return [
        n
        for n in range(2, x + 1)
        if practical[n] and not any(practical[n // p**e] for p, e in factors[n])
    ]
