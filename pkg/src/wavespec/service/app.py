"""FastAPI wiring of the wavespec service.

Error mapping: configuration and domain problems answer 422 (client must
change the request), numerical failures answer 500 with a structured
detail. Endpoints compute synchronously; `/benchmark` can run for minutes
on large rep counts.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import ConfigurationError, DomainError, NumericalError
from . import handlers, schemas

app = FastAPI(
    title="wavespec",
    version=__version__,
    description=(
        "Fit generalized JONSWAP wave spectra to elevation records via the "
        "de-biased Whittle likelihood; simulate records, quantify estimate "
        "uncertainty, diagnose fits, and benchmark estimators."
    ),
)


@app.exception_handler(ConfigurationError)
@app.exception_handler(DomainError)
def _bad_request(_: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(NumericalError)
def _numerical_failure(_: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=500, content={"detail": str(exc)})


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/simulate", response_model=schemas.SimulateResponse)
def simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    return handlers.handle_simulate(req)


@app.post("/fit", response_model=schemas.FitResponse)
def fit(req: schemas.FitRequest) -> schemas.FitResponse:
    return handlers.handle_fit(req)


@app.post("/ci", response_model=schemas.CiResponse)
def ci(req: schemas.CiRequest) -> schemas.CiResponse:
    return handlers.handle_ci(req)


@app.post("/diagnose", response_model=schemas.DiagnoseResponse)
def diagnose(req: schemas.DiagnoseRequest) -> schemas.DiagnoseResponse:
    return handlers.handle_diagnose(req)


@app.post("/benchmark", response_model=schemas.BenchmarkResponse)
def benchmark(req: schemas.BenchmarkRequest) -> schemas.BenchmarkResponse:
    return handlers.handle_benchmark(req)
