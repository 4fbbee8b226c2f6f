"""Service operations: plain functions from request models to response models.

The HTTP routes in :mod:`crnoma.service.app` and the in-process mode of the
command-line client both call these, so every client sees identical results
regardless of transport.
"""

from __future__ import annotations

from .. import analytic
from ..montecarlo import ExperimentPlan, run_plan
from ..reporting import build_manifest, mean_gamma_s_db
from ..selection import SCHEME_IDS
from ..channel import transmit_snr
from .schemas import (
    TABLE1_POWER_GRID,
    AnalyticRequest,
    AnalyticResponse,
    AnalyticRow,
    EstimateRow,
    SimulateRequest,
    SimulateResponse,
    Table1Request,
    Table1Response,
    Table1Row,
)

__all__ = ["run_simulate", "run_analytic", "run_table1"]


def _plan_from(req: SimulateRequest) -> ExperimentPlan:
    return ExperimentPlan(
        config=req.config.to_core(),
        noise_dbm=req.noise_dbm,
        power_grid_dbm=tuple(req.power_grid_dbm),
        schemes=tuple(req.schemes),
        trials=req.trials,
        master_seed=req.seed,
        paired=req.paired,
        workers=req.workers,
    )


def _estimate_rows(plan: ExperimentPlan) -> list[EstimateRow]:
    return [
        EstimateRow(
            scheme=e.scheme,
            power_dbm=e.power_dbm,
            rho=e.rho,
            p_outage=e.p_hat,
            ci95=e.ci95_halfwidth,
            mean_gamma_s_db=mean_gamma_s_db(e.mean_gamma_s),
            mean_b=e.mean_b,
            trials=e.trials,
        )
        for e in run_plan(plan)
    ]


def run_simulate(req: SimulateRequest) -> SimulateResponse:
    plan = _plan_from(req)
    rows = _estimate_rows(plan)
    manifest = build_manifest(
        "simulate",
        config_echo=req.config.model_dump(),
        master_seed=req.seed,
        noise_dbm=req.noise_dbm,
        power_grid_dbm=list(req.power_grid_dbm),
        schemes=list(req.schemes),
        trials=req.trials,
        paired=req.paired,
        workers=req.workers,
    )
    return SimulateResponse(manifest=manifest, rows=rows)


def run_analytic(req: AnalyticRequest) -> AnalyticResponse:
    config = req.config.to_core()
    rho_grid = [transmit_snr(p, req.noise_dbm) for p in req.power_grid_dbm]
    curve = analytic.evaluate_curve(config, rho_grid)
    rows = [
        AnalyticRow(
            power_dbm=power,
            rho=rho,
            p_outage_asymptotic=clamped,
            p_outage_asymptotic_raw=raw,
            p_outage_highsnr=high,
            regime_flag=flag,
            diversity=curve.diversity,
        )
        for power, rho, clamped, raw, high, flag in zip(
            req.power_grid_dbm,
            curve.rho_grid,
            curve.p_outage,
            curve.p_outage_raw,
            curve.p_highsnr,
            curve.regime_violated,
        )
    ]
    manifest = build_manifest(
        "analytic",
        config_echo=req.config.model_dump(),
        noise_dbm=req.noise_dbm,
        power_grid_dbm=list(req.power_grid_dbm),
    )
    return AnalyticResponse(manifest=manifest, rows=rows)


def run_table1(req: Table1Request) -> Table1Response:
    plan = ExperimentPlan(
        config=req.config.to_core(),
        noise_dbm=req.noise_dbm,
        power_grid_dbm=TABLE1_POWER_GRID,
        schemes=SCHEME_IDS,
        trials=req.trials,
        master_seed=req.seed,
        paired=True,
        workers=req.workers,
    )
    estimates = run_plan(plan)
    by_scheme: dict[str, list[float]] = {s: [] for s in SCHEME_IDS}
    for e in estimates:
        by_scheme[e.scheme].append(e.mean_b)
    rows = [Table1Row(scheme=s, mean_b=by_scheme[s]) for s in SCHEME_IDS]
    manifest = build_manifest(
        "table1",
        config_echo=req.config.model_dump(),
        master_seed=req.seed,
        noise_dbm=req.noise_dbm,
        power_grid_dbm=list(TABLE1_POWER_GRID),
        schemes=list(SCHEME_IDS),
        trials=req.trials,
        paired=True,
        workers=req.workers,
    )
    return Table1Response(
        manifest=manifest, power_grid_dbm=list(TABLE1_POWER_GRID), rows=rows
    )
