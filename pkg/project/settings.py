import logging
import os
from functools import lru_cache
from typing import Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from project.errors import InvalidInputError


class Settings(BaseModel):
    """
    Process-wide defaults, read from FPRACTICAL_* environment variables.
    """

    sieve_limit: int = Field(default=10**7, ge=1)
    max_sieve_limit: int = Field(default=10**8, ge=1)
    chunk_size: int = Field(default=1 << 16, ge=1)
    workers: Optional[int] = Field(default=None, ge=1)
    log_level: str = "INFO"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {value!r}")
        return level

    @property
    def worker_count(self) -> int:
        return self.workers or os.cpu_count() or 1


_ENV_FIELDS = {
    "FPRACTICAL_SIEVE_LIMIT": "sieve_limit",
    "FPRACTICAL_MAX_SIEVE_LIMIT": "max_sieve_limit",
    "FPRACTICAL_CHUNK_SIZE": "chunk_size",
    "FPRACTICAL_WORKERS": "workers",
    "FPRACTICAL_LOG_LEVEL": "log_level",
}


def load_settings(environ: Optional[dict[str, str]] = None) -> Settings:
    """
    Builds Settings from the environment.

    Args:
        environ (Optional[dict[str, str]]): Mapping to read instead of os.environ.

    Returns:
        Settings: Validated settings.

    Raises:
        InvalidInputError: If a variable is present but does not validate.
    """
    source = os.environ if environ is None else environ
    values = {
        field: source[var] for var, field in _ENV_FIELDS.items() if source.get(var)
    }
    try:
        for key in ("sieve_limit", "max_sieve_limit", "chunk_size"):
            if key in values:
                values[key] = int(float(values[key]))
        return Settings(**values)
    except (ValidationError, ValueError) as e:
        raise InvalidInputError(f"Invalid FPRACTICAL_* configuration: {e}") from e


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()


def configure_logging(settings: Optional[Settings] = None) -> None:
    settings = settings or get_settings()
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
