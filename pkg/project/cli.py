from __future__ import annotations

import argparse
import json
import logging
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence

import uvicorn
from pydantic import BaseModel

from project.check_practicality_service import is_f_practical, weak_prefix_chain
from project.count_practicals_service import (
    compare_golden,
    count_practicals,
    load_golden,
)
from project.errors import (
    FPracticalError,
    InvalidInputError,
    LimitExceededError,
    TargetNotFoundError,
)
from project.estimate_density_service import density_estimate, density_target
from project.function_catalog_service import (
    CATALOG,
    FunctionSpec,
    load_function_config,
    resolve_function,
)
from project.run_suite_service import (
    SUITES,
    find_nonconstructible,
    get_suite,
    run_suites,
)
from project.scan_function_service import (
    additive_every_integer_scan,
    convenience_scan,
    every_integer_scan,
)
from project.settings import configure_logging, get_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

OutputFormat = Literal["text", "csv", "json"]


class CliConfig(BaseModel):
    """
    Parsed command line, shared by every subcommand.
    """

    command: str
    function: Optional[str] = None
    parameter: Optional[int] = None
    config: Optional[Path] = None
    bounds: Dict[str, int] = {}
    output_format: OutputFormat = "text"
    output: Optional[Path] = None
    threads: Optional[int] = None
    sieve_limit: Optional[int] = None

    def function_spec(self) -> FunctionSpec:
        if self.config is not None:
            return load_function_config(self.config)
        if self.function is None:
            raise InvalidInputError("select a function with --f <name> or --config <file>")
        return resolve_function(self.function, self.parameter)

    @property
    def effective_sieve_limit(self) -> int:
        return self.sieve_limit or get_settings().sieve_limit


def parse_count(text: str) -> int:
    """
    Reads a positive integer written plainly or as 1e5, 2.5e6 and so on.

    Example:
        parse_count("2e6")
        > 2000000
    """
    try:
        value = Decimal(text.strip())
    except InvalidOperation as e:
        raise InvalidInputError(f"not a number: {text!r}") from e
    if not value.is_finite() or value != value.to_integral_value() or value < 1:
        raise InvalidInputError(f"expected a positive integer, got {text!r}")
    return int(value)


def _power_of_ten(text: str) -> int:
    mantissa, sep, exponent = text.strip().lower().partition("e")
    if not sep or mantissa != "1" or not exponent.isdigit():
        raise InvalidInputError(f"range endpoints must look like 1eK, got {text!r}")
    return int(exponent)


def parse_checkpoints(text: str) -> List[int]:
    """
    Expands a checkpoint list: comma-separated values, where "1eA..1eB" stands for every power of
    ten from 10^A to 10^B.

    Example:
        parse_checkpoints("1e1..1e3,5000")
        > [10, 100, 1000, 5000]
    """
    values = set()
    for item in filter(None, (part.strip() for part in text.split(","))):
        if ".." in item:
            low, high = (_power_of_ten(end) for end in item.split("..", 1))
            if low > high:
                raise InvalidInputError(f"empty range {item!r}")
            values.update(10**k for k in range(low, high + 1))
        else:
            values.add(parse_count(item))
    if not values:
        raise InvalidInputError("no checkpoints given")
    return sorted(values)


def parse_bounds(
    items: Sequence[str], suites: Sequence[str]
) -> Dict[str, Dict[str, int]]:
    """
    Reads "key=value" (every selected suite with that bound) and "suite.key=value" overrides.
    """
    overrides: Dict[str, Dict[str, int]] = {}
    for item in items:
        target, sep, value = item.partition("=")
        if not sep:
            raise InvalidInputError(f"bounds look like key=value, got {item!r}")
        suite, dot, key = target.rpartition(".")
        if dot and suite not in SUITES:
            raise InvalidInputError(f"unknown suite {suite!r} in {item!r}")
        names = [suite] if dot else [s for s in suites if key in SUITES[s].default_bounds]
        if not names:
            raise InvalidInputError(f"no selected suite has a bound named {key!r}")
        for name in names:
            overrides.setdefault(name, {})[key] = parse_count(value)
    return overrides


def _emit(config: CliConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    config.output.write_text(text if text.endswith("\n") else text + "\n")
    logger.info("wrote %s", config.output)


def cmd_test(config: CliConfig, n: int, weak: bool) -> int:
    f = config.function_spec()
    verdict = is_f_practical(n, f)
    chain = weak_prefix_chain(n, f) if weak else None
    if config.output_format == "json":
        payload = verdict.model_dump(mode="json")
        if chain is not None:
            payload["weak"] = chain.model_dump(mode="json") | {"holds": chain.holds}
        _emit(config, json.dumps(payload, indent=2))
    else:
        lines = [
            f"n={n} f={verdict.function}: "
            + ("f-practical" if verdict.is_practical else "not f-practical"),
            f"S_f(n) = {verdict.s_f}",
        ]
        if verdict.weights is not None:
            lines.append("weights: " + " ".join(map(str, verdict.weights)))
        if verdict.witness is not None:
            lines.append(f"witness: {verdict.witness} is not representable")
        if chain is not None:
            lines.append(
                "weakly f-practical" if chain.holds else "not weakly f-practical"
            )
            for step in chain.steps:
                mark = "<=" if step.holds else ">"
                lines.append(
                    f"  f({step.prime}) = {step.f_prime} {mark} S_f({step.prefix}) + 1 "
                    f"= {step.s_f_prefix + 1}"
                )
        _emit(config, "\n".join(lines))
    return EXIT_OK if verdict.is_practical else EXIT_NEGATIVE


def cmd_census(
    config: CliConfig,
    checkpoints: Optional[List[int]],
    golden: Optional[str],
    chunk_size: Optional[int],
    membership: Optional[Path],
) -> int:
    f = config.function_spec()
    rows = load_golden(golden) if golden else []
    if checkpoints is None:
        if not rows:
            raise InvalidInputError("give --checkpoints or --golden")
        checkpoints = [row.x for row in rows if row.x <= config.effective_sieve_limit]
    top = max(checkpoints)
    if top > config.effective_sieve_limit:
        raise LimitExceededError(
            f"checkpoint {top} is beyond the sieve limit {config.effective_sieve_limit}"
        )
    report = count_practicals(
        f,
        checkpoints,
        chunk_size=chunk_size,
        workers=config.threads,
        membership_path=membership,
    )
    if config.output_format == "csv":
        _emit(config, report.to_csv())
    elif config.output_format == "json":
        _emit(config, report.to_json())
    else:
        lines = [f"{'X':>12} {'count':>10} {'ratio':>10} {'seconds':>9}"]
        lines += [
            f"{c.x:>12} {c.count:>10} {c.ratio_text():>10} {c.elapsed:>9.2f}"
            for c in report.checkpoints
        ]
        _emit(config, "\n".join(lines))
    if golden:
        mismatches = compare_golden(report, rows)
        for m in mismatches:
            logger.error(
                "golden %s mismatch at X=%d: count %s (expected %d), ratio %s (expected %s)",
                golden,
                m.x,
                m.actual_count,
                m.expected_count,
                m.actual_ratio,
                m.expected_ratio,
            )
        if mismatches:
            return EXIT_NEGATIVE
    return EXIT_OK


def cmd_verify(
    config: CliConfig, suites: Sequence[str], bound_items: Sequence[str], extended: bool
) -> int:
    names = None if not suites or list(suites) == ["all"] else list(suites)
    for name in names or []:
        get_suite(name)
    selected = names or [
        name for name, suite in SUITES.items() if extended or not suite.extended
    ]
    overrides = parse_bounds(bound_items, selected)
    report = run_suites(
        names, overrides, include_extended=extended, workers=config.threads
    )
    _emit(config, report.to_json() if config.output_format == "json" else report.to_text())
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_density(
    config: CliConfig,
    target: Optional[str],
    epsilon: str,
    bound: int,
    limit: Optional[int],
) -> int:
    if target is not None:
        result = density_target(target, epsilon, bound)
        text = (
            result.model_dump_json(indent=2)
            if config.output_format == "json"
            else f"n = {result.n}  (1 - phi(n)/n = {result.density_exact} ~ "
            f"{result.density:.6f}, {result.method})"
        )
        _emit(config, text)
        return EXIT_OK
    if limit is None:
        raise InvalidInputError("density needs --target or --f with --limit")
    estimate = density_estimate(config.function_spec(), limit, workers=config.threads)
    if config.output_format == "json":
        _emit(config, estimate.model_dump_json(indent=2))
    else:
        text = (
            f"{estimate.function}: {estimate.count} of {estimate.x} "
            f"(density {estimate.density:.6f})"
        )
        if estimate.target_exact is not None:
            text += f"; asymptotic density {estimate.target_exact}"
        _emit(config, text)
    return EXIT_OK


def cmd_scan(config: CliConfig, kind: str) -> int:
    f = config.function_spec()
    b = config.bounds
    if kind == "every-integer":
        report = every_integer_scan(f, b["p_max"], b["k_max"])
    elif kind == "additive":
        report = additive_every_integer_scan(f, b["p_max"], b["k_max"])
    else:
        report = convenience_scan(f, b["p_max"], b["k_max"], b["m_max"])
    if config.output_format == "json":
        _emit(config, report.model_dump_json(indent=2))
    else:
        _emit(config, f"{report.scan} scan of {report.function}: {report.verdict}")
    return EXIT_OK if report.holds else EXIT_NEGATIVE


def cmd_nonconstructible(config: CliConfig, limit: int) -> int:
    found = find_nonconstructible(config.function_spec(), limit)
    if config.output_format == "json":
        payload = {"function": config.function_spec().label, "x": limit, "found": found}
        _emit(config, json.dumps(payload, indent=2))
    else:
        _emit(config, "\n".join(map(str, found)) if found else "none")
    return EXIT_OK


def _add_function_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--f",
        dest="function",
        metavar="NAME",
        help=f"catalog function: {', '.join(CATALOG)}",
    )
    parser.add_argument(
        "--param", dest="parameter", type=int, help="the p of vp or the m of fn"
    )
    parser.add_argument(
        "--config", type=Path, help="JSON document defining the function"
    )


def _add_output_options(parser: argparse.ArgumentParser, formats: Sequence[str]) -> None:
    parser.add_argument("--format", choices=formats, default="text")
    parser.add_argument("--output", type=Path, help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpractical",
        description="Decide, count and verify f-practical numbers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    test = sub.add_parser("test", help="decide whether n is f-practical")
    test.add_argument("n", type=parse_count)
    test.add_argument("--weak", action="store_true", help="also show the weak prefix chain")
    _add_function_options(test)
    _add_output_options(test, ("text", "json"))

    census = sub.add_parser("census", help="count f-practical numbers up to checkpoints")
    _add_function_options(census)
    census.add_argument("--checkpoints", type=parse_checkpoints, help="e.g. 1e1..1e5")
    census.add_argument("--golden", choices=("table1", "table2"))
    census.add_argument("--chunk-size", type=parse_count)
    census.add_argument("--membership", type=Path, help="write every member here")
    census.add_argument("--threads", type=int)
    census.add_argument("--sieve-limit", type=parse_count)
    _add_output_options(census, ("text", "csv", "json"))

    verify = sub.add_parser("verify", help="run verification suites")
    verify.add_argument("suites", nargs="*", metavar="SUITE", help="suite names or 'all'")
    verify.add_argument(
        "--bound", action="append", default=[], help="key=value or suite.key=value"
    )
    verify.add_argument("--extended", action="store_true", help="include table2")
    verify.add_argument("--threads", type=int)
    _add_output_options(verify, ("text", "json"))

    density = sub.add_parser("density", help="density estimates and targets")
    _add_function_options(density)
    density.add_argument("--target", help="alpha in [0, 1]")
    density.add_argument("--eps", default="0.01")
    density.add_argument("--bound", type=parse_count, default=10**9)
    density.add_argument("--limit", type=parse_count, help="X for an empirical estimate")
    density.add_argument("--threads", type=int)
    _add_output_options(density, ("text", "json"))

    scan = sub.add_parser("scan", help="bounded every-integer and convenience scans")
    scan.add_argument("kind", choices=("every-integer", "additive", "convenience"))
    _add_function_options(scan)
    scan.add_argument("--p-max", type=parse_count, default=1000)
    scan.add_argument("--k-max", type=parse_count, default=20)
    scan.add_argument("--m-max", type=parse_count, default=100)
    _add_output_options(scan, ("text", "json"))

    nonconstructible = sub.add_parser(
        "nonconstructible",
        help="f-practical numbers that are no f-practical m times a prime power",
    )
    _add_function_options(nonconstructible)
    nonconstructible.add_argument("--limit", type=parse_count, default=1000)
    _add_output_options(nonconstructible, ("text", "json"))

    serve = sub.add_parser("serve", help="serve the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _config_from(args: argparse.Namespace) -> CliConfig:
    bounds = {
        key: getattr(args, key)
        for key in ("p_max", "k_max", "m_max")
        if getattr(args, key, None) is not None
    }
    return CliConfig(
        command=args.command,
        function=getattr(args, "function", None),
        parameter=getattr(args, "parameter", None),
        config=getattr(args, "config", None),
        bounds=bounds,
        output_format=getattr(args, "format", "text"),
        output=getattr(args, "output", None),
        threads=getattr(args, "threads", None),
        sieve_limit=getattr(args, "sieve_limit", None),
    )


def _dispatch(args: argparse.Namespace, config: CliConfig) -> int:
    if args.command == "test":
        return cmd_test(config, args.n, args.weak)
    if args.command == "census":
        return cmd_census(
            config, args.checkpoints, args.golden, args.chunk_size, args.membership
        )
    if args.command == "verify":
        return cmd_verify(config, args.suites, args.bound, args.extended)
    if args.command == "density":
        return cmd_density(config, args.target, args.eps, args.bound, args.limit)
    if args.command == "scan":
        return cmd_scan(config, args.kind)
    if args.command == "nonconstructible":
        return cmd_nonconstructible(config, args.limit)
    uvicorn.run("project.server:app", host=args.host, port=args.port)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging()
        config = _config_from(args)
        if config.function is not None or config.config is not None:
            config.function_spec()
        return _dispatch(args, config)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except TargetNotFoundError as e:
        logger.exception("Error processing command")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    except FPracticalError as e:
        logger.exception("Error processing command")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
