import logging

import pytest

from project.errors import InvalidInputError
from project.settings import configure_logging, load_settings


def test_defaults():
    settings = load_settings({})
    assert settings.sieve_limit == 10**7
    assert settings.max_sieve_limit == 10**8
    assert settings.chunk_size == 1 << 16
    assert settings.workers is None
    assert settings.worker_count >= 1


def test_environment_overrides():
    settings = load_settings(
        {
            "FPRACTICAL_SIEVE_LIMIT": "1e6",
            "FPRACTICAL_CHUNK_SIZE": "4096",
            "FPRACTICAL_WORKERS": "3",
            "FPRACTICAL_LOG_LEVEL": "debug",
        }
    )
    assert settings.sieve_limit == 10**6
    assert settings.chunk_size == 4096
    assert settings.worker_count == 3
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize(
    "environ",
    [
        {"FPRACTICAL_WORKERS": "0"},
        {"FPRACTICAL_CHUNK_SIZE": "many"},
        {"FPRACTICAL_LOG_LEVEL": "LOUD"},
    ],
)
def test_invalid_environment(environ):
    with pytest.raises(InvalidInputError):
        load_settings(environ)


def test_configure_logging():
    configure_logging(load_settings({"FPRACTICAL_LOG_LEVEL": "WARNING"}))
    assert logging.getLogger("project").getEffectiveLevel() <= logging.WARNING
