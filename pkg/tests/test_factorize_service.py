import pytest
import sympy

from project.build_sieve_service import build_sieve
from project.errors import InvalidInputError
from project.factorize_service import Factorization, divisors, factorize


@pytest.mark.parametrize(
    "n, factors",
    [
        (1, ()),
        (75, ((3, 1), (5, 2))),
        (2**40 * 3, ((2, 40), (3, 1))),
        (97, ((97, 1),)),
    ],
)
def test_factorize(n, factors):
    assert factorize(n).factors == factors


def test_factorize_large_cofactor_matches_sympy():
    n = sympy.nextprime(10**9) * sympy.nextprime(10**8)
    assert list(factorize(n).factors) == sorted(sympy.factorint(n).items())


@pytest.mark.parametrize("n", [0, -5, 2**63])
def test_factorize_rejects_out_of_range(n):
    with pytest.raises(InvalidInputError):
        factorize(n)


def test_factorize_uses_sieve_when_covered():
    sieve = build_sieve(1000)
    for n in (1, 360, 997, 1000):
        assert factorize(n, sieve).factors == factorize(n).factors


def test_factorization_rejects_bad_factors():
    with pytest.raises(ValueError):
        Factorization(n=12, factors=((3, 1), (2, 2)))
    with pytest.raises(ValueError):
        Factorization(n=10, factors=((2, 1), (3, 1)))


def test_factorization_properties():
    fact = factorize(360)
    assert fact.primes == [2, 3, 5]
    assert fact.largest_prime == 5
    assert fact.divisor_count == 24
    assert not fact.is_squarefree
    assert fact.without(3).n == 40
    assert factorize(1).largest_prime == 1


@pytest.mark.parametrize(
    "n, expected",
    [
        (1, [1]),
        (12, [1, 2, 3, 4, 6, 12]),
        (75, [1, 3, 5, 15, 25, 75]),
    ],
)
def test_divisors(n, expected):
    assert divisors(factorize(n)) == expected


def test_divisor_count_matches_tau():
    for n in range(1, 500):
        fact = factorize(n)
        assert len(divisors(fact)) == fact.divisor_count == sympy.divisor_count(n)
