"""FastAPI application wrapping the core package."""

from __future__ import annotations

from fastapi import FastAPI

from .. import __version__
from . import handlers
from .schemas import (
    AnalyticRequest,
    AnalyticResponse,
    HealthResponse,
    SimulateRequest,
    SimulateResponse,
    Table1Request,
    Table1Response,
)

__all__ = ["app", "create_app"]


def create_app() -> FastAPI:
    app = FastAPI(
        title="crnoma",
        version=__version__,
        description=(
            "Monte Carlo simulation and closed-form outage analysis for joint "
            "antenna selection in a two-user CR-NOMA downlink."
        ),
    )

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", tool_version=__version__)

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        return handlers.run_simulate(req)

    @app.post("/analytic", response_model=AnalyticResponse)
    def analytic(req: AnalyticRequest) -> AnalyticResponse:
        return handlers.run_analytic(req)

    @app.post("/table1", response_model=Table1Response)
    def table1(req: Table1Request) -> Table1Response:
        return handlers.run_table1(req)

    return app


app = create_app()
