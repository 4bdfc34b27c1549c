import pytest

from project.function_catalog_service import FunctionSpec, resolve_function


@pytest.fixture
def phi() -> FunctionSpec:
    return resolve_function("phi")


@pytest.fixture
def identity() -> FunctionSpec:
    return resolve_function("identity")


@pytest.fixture
def lambda_star() -> FunctionSpec:
    return resolve_function("lambda-star")
