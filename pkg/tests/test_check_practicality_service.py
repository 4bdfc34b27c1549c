import pytest

from project.check_practicality_service import (
    additive_practical_check,
    contiguous_cover,
    extend_by_prime_power,
    extension_failure,
    first_gap,
    is_f_practical,
    is_weakly_f_practical,
    oracle_is_f_practical,
    weak_prefix_chain,
)
from project.errors import InvalidInputError
from project.factorize_service import factorize
from project.function_catalog_service import (
    FunctionConfig,
    FunctionKind,
    build_function,
    resolve_function,
)


@pytest.mark.parametrize(
    "weights, expected",
    [
        ([1, 1, 2, 5], True),
        ([], True),
        ([0, 1], True),
        ([2], False),
        ([1, 2, 4, 8, 20], False),
    ],
)
def test_contiguous_cover(weights, expected):
    assert contiguous_cover(weights) is expected


def test_first_gap():
    assert first_gap([1, 2, 4, 8, 20, 40]) == 16
    assert first_gap([1, 1, 2]) is None


def test_75_is_not_phi_practical(phi):
    verdict = is_f_practical(75, phi)
    assert not verdict.is_practical
    assert verdict.witness == 16
    assert verdict.s_f == 75
    assert verdict.weights == [1, 2, 4, 8, 20, 40]


def test_45_is_not_phi_practical(phi):
    verdict = is_f_practical(45, phi)
    assert not verdict.is_practical
    assert verdict.witness == 22


def test_315_is_phi_practical(phi):
    assert is_f_practical(315, phi).is_practical
    for peel in (35, 63, 45):
        assert not is_f_practical(peel, phi).is_practical


@pytest.mark.parametrize("n, expected", [(1, True), (2, True), (10, False), (12, True), (18, True)])
def test_identity_practical(identity, n, expected):
    verdict = is_f_practical(n, identity)
    assert verdict.is_practical is expected
    assert (verdict.witness is None) is expected


def test_witness_is_unrepresentable(phi):
    for n in range(1, 400):
        verdict = is_f_practical(n, phi)
        if verdict.witness is not None:
            sums = {0}
            for w in verdict.weights:
                sums |= {s + w for s in sums}
            assert verdict.witness not in sums
            assert verdict.witness <= verdict.s_f


@pytest.mark.parametrize("name", ["identity", "phi", "phi-star", "lambda-star", "tau", "s", "a1"])
def test_criterion_agrees_with_oracle(name):
    f = resolve_function(name)
    for n in range(1, 300):
        assert is_f_practical(n, f).is_practical == oracle_is_f_practical(n, f), n


def test_lambda_def53_dispatch():
    verdict = is_f_practical(156, resolve_function("lambda-def53"))
    assert verdict.is_practical
    assert verdict.s_f == 156
    assert not is_f_practical(156, resolve_function("lambda-star")).is_practical


def test_75_is_weakly_phi_practical(phi):
    assert is_weakly_f_practical(75, phi)
    chain = weak_prefix_chain(75, phi)
    assert [(s.prime, s.f_prime, s.prefix, s.s_f_prefix) for s in chain.steps] == [
        (3, 2, 1, 1),
        (5, 4, 3, 3),
    ]
    assert chain.holds


def test_weak_fast_path_matches_chain(phi, identity):
    for f in (phi, identity, resolve_function("tau")):
        for n in range(1, 500):
            assert is_weakly_f_practical(n, f) == weak_prefix_chain(n, f).holds


def test_not_weakly_practical(identity):
    assert not is_weakly_f_practical(10, identity)
    assert not weak_prefix_chain(10, identity).holds


def test_extend_by_prime_power(phi, identity):
    assert not extend_by_prime_power(3, 5, 2, phi)
    assert extension_failure(3, 5, 2, phi) == 2
    assert extend_by_prime_power(3, 5, 1, phi)
    assert extend_by_prime_power(2, 3, 3, identity)
    assert is_f_practical(2 * 27, identity).is_practical


def test_extension_agrees_with_decision(phi):
    for m in (1, 2, 3, 6, 12):
        for p in (5, 7, 11):
            for k in (1, 2):
                if m % p:
                    assert extend_by_prime_power(m, p, k, phi) == is_f_practical(
                        m * p**k, phi
                    ).is_practical


def test_extension_rejects_bad_input(phi):
    with pytest.raises(InvalidInputError):
        extend_by_prime_power(6, 3, 1, phi)
    with pytest.raises(InvalidInputError):
        extend_by_prime_power(6, 9, 1, phi)
    with pytest.raises(InvalidInputError):
        extend_by_prime_power(6, 5, 0, phi)


def test_additive_practical_check():
    a1 = resolve_function("a1")
    assert not additive_practical_check(30, a1)
    assert additive_practical_check(1, a1)
    for name in ("omega", "big-omega", "a1"):
        f = resolve_function(name)
        for n in range(1, 400):
            assert additive_practical_check(n, f, factorize(n)) == is_f_practical(
                n, f
            ).is_practical


def test_additive_check_rejects_multiplicative(phi):
    with pytest.raises(InvalidInputError):
        additive_practical_check(6, phi)


def test_renamed_lambda_def53_keeps_its_decision():
    renamed = build_function(FunctionConfig(name="lam53", base="lambda-def53"))
    verdict = is_f_practical(156, renamed)
    assert verdict.is_practical
    assert verdict.s_f == 156
    assert verdict.function == "lam53"


def test_table_named_lambda_def53_uses_subset_sums():
    table = build_function(
        FunctionConfig(
            name="lambda-def53",
            kind=FunctionKind.MULTIPLICATIVE,
            default="phi",
        )
    )
    verdict = is_f_practical(75, table)
    assert not verdict.is_practical
    assert verdict.witness == 16


def test_extend_by_prime_power_phi_star():
    assert extend_by_prime_power(2, 3, 1, resolve_function("phi-star"))
