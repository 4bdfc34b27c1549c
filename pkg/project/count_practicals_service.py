from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from decimal import ROUND_HALF_EVEN, Decimal
from importlib import resources
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

from pydantic import BaseModel, computed_field

from project.build_sieve_service import SpfSieve, build_sieve
from project.check_practicality_service import is_practical_pairs
from project.errors import InvalidInputError, LimitExceededError
from project.function_catalog_service import LAMBDA_DEF53, FunctionSpec, resolve_function
from project.lambda_practical_service import LAMBDA_DP_LIMIT
from project.settings import get_settings

logger = logging.getLogger(__name__)

RATIO_QUANTUM = Decimal("0.000001")


def format_ratio(count: int, x: int) -> Optional[Decimal]:
    """count / (x / ln x), rounded half-even to 6 decimal places; None for x < 2."""
    if x < 2:
        return None
    return Decimal(count * math.log(x) / x).quantize(RATIO_QUANTUM, ROUND_HALF_EVEN)


class CensusCheckpoint(BaseModel):
    x: int
    count: int
    elapsed: float

    @computed_field
    @property
    def ratio(self) -> Optional[float]:
        value = format_ratio(self.count, self.x)
        return None if value is None else float(value)

    def ratio_text(self) -> str:
        value = format_ratio(self.count, self.x)
        return "" if value is None else str(value)


class CensusReport(BaseModel):
    """
    Counts F_f(X) of f-practical n <= X at each checkpoint.
    """

    function: str
    checkpoints: List[CensusCheckpoint]
    chunk_size: int
    workers: int

    def count_at(self, x: int) -> int:
        for checkpoint in self.checkpoints:
            if checkpoint.x == x:
                return checkpoint.count
        raise KeyError(x)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["X", "count", "ratio"])
        for checkpoint in self.checkpoints:
            writer.writerow([checkpoint.x, checkpoint.count, checkpoint.ratio_text()])
        return out.getvalue()

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


class GoldenRow(BaseModel):
    x: int
    count: int
    ratio: str


class GoldenMismatch(BaseModel):
    x: int
    expected_count: int
    actual_count: Optional[int]
    expected_ratio: str
    actual_ratio: Optional[str]


def load_golden(name: str) -> List[GoldenRow]:
    """
    Reads an embedded golden table ("table1" or "table2").

    Raises:
        InvalidInputError: If no such table is shipped.
    """
    try:
        text = resources.files("project.golden").joinpath(f"{name}.csv").read_text()
    except FileNotFoundError as e:
        raise InvalidInputError(f"no golden table named {name!r}") from e
    return [
        GoldenRow(x=int(row["X"]), count=int(row["count"]), ratio=row["ratio"])
        for row in csv.DictReader(io.StringIO(text))
    ]


def compare_golden(
    report: CensusReport, rows: Iterable[GoldenRow]
) -> List[GoldenMismatch]:
    """
    Compares a census with golden rows at every golden X the census covered.

    Golden rows beyond the census checkpoints are ignored; a golden X inside the census range but
    not among its checkpoints is reported as a mismatch with no actual values.
    """
    by_x = {checkpoint.x: checkpoint for checkpoint in report.checkpoints}
    top = max(by_x) if by_x else 0
    mismatches = []
    for row in rows:
        if row.x > top:
            continue
        checkpoint = by_x.get(row.x)
        actual_ratio = checkpoint.ratio_text() if checkpoint else None
        if checkpoint is None or checkpoint.count != row.count or actual_ratio != row.ratio:
            mismatches.append(
                GoldenMismatch(
                    x=row.x,
                    expected_count=row.count,
                    actual_count=checkpoint.count if checkpoint else None,
                    expected_ratio=row.ratio,
                    actual_ratio=actual_ratio,
                )
            )
    return mismatches


def _scan_range(
    sieve: SpfSieve, spec: FunctionSpec, lo: int, hi: int, collect: bool
) -> Tuple[int, List[int]]:
    members = []
    count = 0
    for n in range(lo, hi + 1):
        if is_practical_pairs(spec, n, sieve.factor_pairs(n)):
            count += 1
            if collect:
                members.append(n)
    return count, members


_worker_sieve: Optional[SpfSieve] = None


def _init_worker(limit: int, max_limit: int) -> None:
    global _worker_sieve
    _worker_sieve = build_sieve(limit, max_limit)


def _scan_in_worker(
    job: Tuple[FunctionSpec, int, int, bool],
) -> Tuple[int, List[int]]:
    spec, lo, hi, collect = job
    return _scan_range(_worker_sieve, spec, lo, hi, collect)


def plan_chunks(checkpoints: List[int], chunk_size: int) -> List[Tuple[int, int]]:
    """
    Splits [1, max checkpoint] into chunks of at most chunk_size that never straddle a checkpoint.
    """
    chunks = []
    lo = 1
    for x in checkpoints:
        while lo <= x:
            hi = min(x, lo + chunk_size - 1)
            chunks.append((lo, hi))
            lo = hi + 1
    return chunks


def count_practicals(
    f: FunctionSpec,
    checkpoints: Iterable[int],
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
    sieve: Optional[SpfSieve] = None,
    membership_path: Optional[Path] = None,
) -> CensusReport:
    """
    Counts the f-practical numbers up to each checkpoint.

    [1, max checkpoint] is cut into chunks that never straddle a checkpoint; chunks are scanned in
    worker processes (each with its own read-only sieve) and merged in chunk order, so the counts
    do not depend on scheduling.

    Args:
        f (FunctionSpec): The arithmetic function ("lambda-def53" selects the bounded-multiplicity
            λ-practical test).
        checkpoints (Iterable[int]): Values of X.
        chunk_size (Optional[int]): Chunk length; defaults to FPRACTICAL_CHUNK_SIZE (2^16).
        workers (Optional[int]): Worker processes; 1 scans in-process. Defaults to the core count.
        sieve (Optional[SpfSieve]): Prepared sieve for in-process scans.
        membership_path (Optional[Path]): If given, every member is written there, one per line.

    Returns:
        CensusReport: Counts and ratios per checkpoint.

    Raises:
        LimitExceededError: If the largest checkpoint is beyond the sieve or the memory guard.

    Example:
        count_practicals(resolve_function("lambda-star"), [10, 1000], workers=1).count_at(1000)
        > 164
    """
    settings = get_settings()
    xs = sorted(set(checkpoints))
    if not xs or xs[0] < 1:
        raise InvalidInputError("checkpoints must be positive integers")
    top = xs[-1]
    if f.catalog == LAMBDA_DEF53 and top > LAMBDA_DP_LIMIT:
        raise LimitExceededError(f"λ-practical census is bounded by {LAMBDA_DP_LIMIT}")
    if sieve is not None and top > sieve.limit:
        raise LimitExceededError(
            f"checkpoint {top} is beyond the sieve limit {sieve.limit}"
        )
    chunk_size = chunk_size or settings.chunk_size
    workers = workers or settings.worker_count
    chunks = plan_chunks(xs, chunk_size)
    collect = membership_path is not None
    workers = max(1, min(workers, len(chunks)))
    logger.info(
        "census of %s up to %d: %d chunks on %d workers",
        f.label,
        top,
        len(chunks),
        workers,
    )

    started = time.perf_counter()
    if workers == 1:
        local = sieve or build_sieve(top, settings.max_sieve_limit)
        results = (_scan_range(local, f, lo, hi, collect) for lo, hi in chunks)
        executor = None
    else:
        if top > settings.max_sieve_limit:
            raise LimitExceededError(
                f"checkpoint {top} exceeds the sieve guard {settings.max_sieve_limit}"
            )
        executor = ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(top, settings.max_sieve_limit),
        )
        results = executor.map(
            _scan_in_worker, [(f, lo, hi, collect) for lo, hi in chunks]
        )

    recorded = []
    running = 0
    pending = iter(xs)
    next_x = next(pending)
    sink = None
    try:
        if collect:
            sink = open(membership_path, "w")
        for (lo, hi), (count, members) in zip(chunks, results):
            running += count
            if sink is not None:
                sink.writelines(f"{n}\n" for n in members)
            if hi == next_x:
                recorded.append(
                    CensusCheckpoint(
                        x=next_x, count=running, elapsed=time.perf_counter() - started
                    )
                )
                logger.info("F_%s(%d) = %d", f.label, next_x, running)
                next_x = next(pending, None)
    finally:
        if sink is not None:
            sink.close()
        if executor is not None:
            executor.shutdown()
    return CensusReport(
        function=f.label, checkpoints=recorded, chunk_size=chunk_size, workers=workers
    )


class TrendPoint(BaseModel):
    x: int
    count: int
    density: float


def s_density_trend(
    checkpoints: Iterable[int], workers: Optional[int] = None
) -> List[TrendPoint]:
    """
    Counts s-practical numbers (s(n) = sigma(n) - n) up to each checkpoint.

    Args:
        checkpoints (Iterable[int]): Values of X.
        workers (Optional[int]): Worker processes for the census.

    Returns:
        List[TrendPoint]: (X, count, count / X) per checkpoint.

    Example:
        s_density_trend([1])
        > [TrendPoint(x=1, count=1, density=1.0)]
    """
    report = count_practicals(resolve_function("s"), checkpoints, workers=workers)
    return [
        TrendPoint(x=c.x, count=c.count, density=c.count / c.x)
        for c in report.checkpoints
    ]
