import json
import logging
from typing import List, Optional

import project.check_practicality_service
import project.count_practicals_service
import project.estimate_density_service
import project.run_suite_service
import project.scan_function_service
from fastapi import FastAPI
from fastapi.encoders import jsonable_encoder
from fastapi.responses import Response
from project.errors import FPracticalError, InvalidInputError
from project.function_catalog_service import FunctionSpec, resolve_function
from pydantic import BaseModel

logger = logging.getLogger(__name__)

app = FastAPI(
    title="f-practical numbers",
    description="Decision procedures, censuses and verification suites for f-practical numbers: "
    "n is f-practical for an arithmetic function f when every integer from 1 to the sum of f(d) "
    "over the divisors d of n is a sum of distinct f(d). Supported functions include the "
    "identity, phi, phi-star, lambda-star (Carmichael), tau, sigma, omega, big-omega, vp, h, "
    "s, a1 and the fn family.",
)


class NonconstructibleResponse(BaseModel):
    function: str
    x: int
    found: List[int]


def _error_response(e: Exception) -> Response:
    logger.exception("Error processing request")
    if isinstance(e, InvalidInputError):
        status_code = 400
    elif isinstance(e, FPracticalError):
        status_code = 422
    else:
        status_code = 500
    res = dict()
    res["error"] = str(e)
    return Response(
        content=json.dumps(jsonable_encoder(res)),
        status_code=status_code,
        media_type="application/json",
    )


def _function(f: str, param: Optional[int]) -> FunctionSpec:
    return resolve_function(f, param)


@app.get(
    "/practical/{n}",
    response_model=project.check_practicality_service.PracticalityVerdict,
)
def api_get_practical(
    n: int, f: str = "phi", param: Optional[int] = None
) -> project.check_practicality_service.PracticalityVerdict | Response:
    """
    Decides whether n is f-practical, with the first unrepresentable target when it is not.
    """
    try:
        res = project.check_practicality_service.is_f_practical(n, _function(f, param))
        return res
    except Exception as e:
        return _error_response(e)


@app.get("/weak/{n}", response_model=project.check_practicality_service.WeakChain)
def api_get_weak(
    n: int, f: str = "phi", param: Optional[int] = None
) -> project.check_practicality_service.WeakChain | Response:
    """
    Walks the prime-power prefixes of n and reports each weak-practicality step.
    """
    try:
        res = project.check_practicality_service.weak_prefix_chain(n, _function(f, param))
        return res
    except Exception as e:
        return _error_response(e)


@app.get("/census", response_model=project.count_practicals_service.CensusReport)
def api_get_census(
    x: int, f: str = "phi", param: Optional[int] = None
) -> project.count_practicals_service.CensusReport | Response:
    """
    Counts f-practical numbers up to x, scanning in-process.
    """
    try:
        res = project.count_practicals_service.count_practicals(
            _function(f, param), [x], workers=1
        )
        return res
    except Exception as e:
        return _error_response(e)


@app.get(
    "/density/estimate",
    response_model=project.estimate_density_service.DensityEstimate,
)
def api_get_density_estimate(
    x: int, f: str = "fn", param: Optional[int] = 2
) -> project.estimate_density_service.DensityEstimate | Response:
    """
    Empirical density of the f-practical numbers up to x.
    """
    try:
        res = project.estimate_density_service.density_estimate(
            _function(f, param), x, workers=1
        )
        return res
    except Exception as e:
        return _error_response(e)


@app.get(
    "/density/target",
    response_model=project.estimate_density_service.DensityTarget,
)
def api_get_density_target(
    alpha: str, epsilon: str = "0.01", search_bound: int = 10**9
) -> project.estimate_density_service.DensityTarget | Response:
    """
    Finds m whose fn-practical density 1 - phi(m)/m lies within epsilon of alpha.
    """
    try:
        res = project.estimate_density_service.density_target(alpha, epsilon, search_bound)
        return res
    except Exception as e:
        return _error_response(e)


@app.get(
    "/scan/every-integer",
    response_model=project.scan_function_service.ScanReport,
)
def api_get_every_integer_scan(
    f: str = "phi", param: Optional[int] = None, p_max: int = 1000, k_max: int = 20
) -> project.scan_function_service.ScanReport | Response:
    try:
        res = project.scan_function_service.every_integer_scan(
            _function(f, param), p_max, k_max
        )
        return res
    except Exception as e:
        return _error_response(e)


@app.get(
    "/scan/convenience",
    response_model=project.scan_function_service.ScanReport,
)
def api_get_convenience_scan(
    f: str = "phi",
    param: Optional[int] = None,
    p_max: int = 100,
    k_max: int = 10,
    m_max: int = 100,
) -> project.scan_function_service.ScanReport | Response:
    try:
        res = project.scan_function_service.convenience_scan(
            _function(f, param), p_max, k_max, m_max
        )
        return res
    except Exception as e:
        return _error_response(e)


@app.get("/verify/{suite}", response_model=project.run_suite_service.SuiteResult)
def api_get_verify(suite: str) -> project.run_suite_service.SuiteResult | Response:
    """
    Runs one verification suite at its default bounds.
    """
    try:
        res = project.run_suite_service.run_suite(suite)
        return res
    except Exception as e:
        return _error_response(e)


@app.get("/nonconstructible", response_model=NonconstructibleResponse)
def api_get_nonconstructible(
    x: int = 1000, f: str = "phi", param: Optional[int] = None
) -> NonconstructibleResponse | Response:
    """
    Lists f-practical n <= x that are not an f-practical m times a prime power.
    """
    try:
        spec = _function(f, param)
        found = project.run_suite_service.find_nonconstructible(spec, x)
        return NonconstructibleResponse(function=spec.label, x=x, found=found)
    except Exception as e:
        return _error_response(e)
