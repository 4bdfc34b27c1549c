import pytest

from project.errors import InvalidInputError, LimitExceededError, UnknownSuiteError
from project.function_catalog_service import resolve_function
from project.run_suite_service import (
    SUITES,
    find_nonconstructible,
    get_suite,
    run_suite,
    run_suites,
)


@pytest.mark.parametrize(
    "name, bounds",
    [
        ("oracle-equivalence", {"n_max": 200}),
        ("fpractical-implies-weak", {"n_max": 2000}),
        ("identity-weak-equivalence", {"n_max": 2000}),
        ("weak-times-small-prime", {"n_max": 500}),
        ("squarefree-weak-equivalence", {"n_max": 2000}),
        ("lambda-star-subset-lambda", {"n_max": 1000}),
        ("weak-lambda-implies-weak-phi", {"n_max": 2000}),
        ("even-weak-phi-star-practical", {"n_max": 2000}),
        ("squarefree-phi-star-phi", {"n_max": 2000}),
        ("weak-phi-not-phi-has-75", None),
        ("nonconstructible-phi", {"identity_x": 1000}),
        ("lambda-156", None),
        ("bounded-representation", {"n_max": 100}),
        ("universal-functions", {"n_max": 1000}),
        ("a1-only-one", {"n_max": 1000}),
        ("fm-membership", {"n_max": 1000}),
        ("fm-density", {"x": 10**4}),
        ("s-identity", {"a_max": 40}),
        ("s-composite-bound", {"n_max": 2000}),
        ("s-density-trend", {"x": 10**4}),
        ("s-practical-divisor-bound", {"n_max": 2000}),
        ("vp-closed-form", {"n_max": 2000}),
        ("additive-criterion-agreement", {"n_max": 500}),
        ("lambda-divides-phi", {"n_max": 2000}),
        ("sf-multiplicative", {"a_max": 40}),
        ("every-integer-scans", {"p_max": 100, "k_max": 10}),
        ("convenience-scans", {"p_max": 30, "k_max": 5, "m_max": 30}),
        ("practical-primes", {"p_max": 100}),
        ("prime-power-monotonicity", {"p_max": 100, "k_max": 10}),
        ("table1", {"x": 10**4}),
    ],
)
def test_suite_passes_at_small_bounds(name, bounds):
    result = run_suite(name, bounds)
    assert result.passed, result.detail
    assert result.counterexample is None


def test_weak_not_practical_witnesses():
    witnesses = run_suite("weak-phi-not-phi-has-75").witnesses
    assert 75 in witnesses
    assert 45 in witnesses
    assert witnesses.index(9) < witnesses.index(45)


def test_bounds_are_merged_with_defaults():
    result = run_suite("nonconstructible-phi", {"x": 400})
    assert result.bounds == {"x": 400, "identity_x": 10**4, "tau_x": 10**3}
    assert 315 in result.witnesses


def test_run_suite_rejects_bad_requests():
    with pytest.raises(UnknownSuiteError):
        run_suite("no-such-suite")
    with pytest.raises(InvalidInputError):
        run_suite("lambda-156", {"n_max": 10})
    with pytest.raises(InvalidInputError):
        run_suite("identity-weak-equivalence", {"n_max": 0})
    with pytest.raises(UnknownSuiteError):
        get_suite("")


def test_run_suites_keeps_order():
    report = run_suites(
        ["s-identity", "lambda-156"], {"s-identity": {"a_max": 20}}, workers=1
    )
    assert [r.name for r in report.results] == ["s-identity", "lambda-156"]
    assert report.passed
    assert report.to_text().endswith("2 passed, 0 failed")
    assert '"passed": true' in report.to_json()


def test_run_suites_in_worker_processes():
    report = run_suites(
        ["lambda-156", "lambda-divides-phi", "a1-only-one"],
        {"lambda-divides-phi": {"n_max": 300}, "a1-only-one": {"n_max": 300}},
        workers=2,
    )
    assert report.passed
    assert [r.name for r in report.results] == [
        "lambda-156",
        "lambda-divides-phi",
        "a1-only-one",
    ]


def test_table2_is_extended():
    assert SUITES["table2"].extended
    assert not any(
        suite.extended for name, suite in SUITES.items() if name != "table2"
    )


def test_find_nonconstructible(phi, identity):
    found = find_nonconstructible(phi, 1000)
    assert 315 in found
    assert 45 not in found
    assert find_nonconstructible(identity, 1000) == []
    assert find_nonconstructible(resolve_function("tau"), 1000) == []


def test_find_nonconstructible_limits(phi):
    with pytest.raises(InvalidInputError):
        find_nonconstructible(phi, 0)
    with pytest.raises(LimitExceededError):
        find_nonconstructible(phi, 10**5 + 1)


@pytest.mark.slow
def test_every_regular_suite_at_default_bounds():
    assert run_suites().passed


@pytest.mark.slow
def test_table2_suite():
    assert run_suite("table2").passed
