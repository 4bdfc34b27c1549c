from fractions import Fraction

import pytest

from project.errors import InvalidInputError, TargetNotFoundError
from project.estimate_density_service import (
    density_estimate,
    density_target,
    fn_density,
)
from project.function_catalog_service import (
    FunctionConfig,
    build_function,
    resolve_function,
)


def test_fn_density():
    assert fn_density(1) == 0
    assert fn_density(2) == Fraction(1, 2)
    assert fn_density(6) == Fraction(2, 3)
    assert fn_density(30) == Fraction(11, 15)


def test_density_estimate_fn_six():
    estimate = density_estimate(resolve_function("fn", 6), 10**4, workers=1)
    assert estimate.count == 6668
    assert estimate.target_exact == "2/3"
    assert abs(estimate.density - estimate.target) < 1e-3


def test_density_estimate_without_target(phi):
    estimate = density_estimate(phi, 1000, workers=1)
    assert estimate.target is None
    assert estimate.density == estimate.count / 1000


@pytest.mark.parametrize("alpha, n", [("0", 1), ("0.1", 11), ("0.5", 2)])
def test_density_target_smallest(alpha, n):
    target = density_target(alpha, "0.01", 10**9)
    assert target.n == n
    assert target.method == "scan"


@pytest.mark.parametrize("alpha", ["0.3", "0.7"])
def test_density_target_within_tolerance(alpha):
    target = density_target(alpha, "0.01", 10**9)
    assert abs(Fraction(target.density_exact) - Fraction(alpha)) < Fraction(1, 100)
    assert target.n <= 10**6
    assert target.density_exact == str(fn_density(target.n))


def test_density_target_small_bound_not_found():
    with pytest.raises(TargetNotFoundError):
        density_target("0.9", "0.01", 1000)


@pytest.mark.slow
def test_density_target_ninety_percent():
    with pytest.raises(TargetNotFoundError):
        density_target("0.9", "0.01", 10**9)
    target = density_target("0.9", "0.01", 10**200)
    assert target.method == "greedy"
    assert abs(Fraction(target.density_exact) - Fraction(9, 10)) < Fraction(1, 100)
    assert target.n <= 10**200
    assert fn_density(target.primes[0]) == Fraction(1, 2)


@pytest.mark.parametrize(
    "alpha, epsilon, bound",
    [("1.5", "0.01", 100), ("-0.1", "0.01", 100), ("0.5", "0", 100), ("0.5", "0.01", 0), ("x", "0.01", 10)],
)
def test_density_target_rejects_bad_input(alpha, epsilon, bound):
    with pytest.raises(InvalidInputError):
        density_target(alpha, epsilon, bound)


def test_density_estimate_renamed_fn_keeps_target():
    renamed = build_function(FunctionConfig(name="f2", base="fn", parameter=2))
    estimate = density_estimate(renamed, 1000, workers=1)
    assert estimate.count == 501
    assert estimate.target_exact == "1/2"
    assert estimate.function == "f2[2]"
