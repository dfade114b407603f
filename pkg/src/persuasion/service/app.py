"""FastAPI service exposing the simulator, oracle, solver, and sweeps.

Run standalone with `uvicorn persuasion.service:app`. The bundled CLI mounts
this app in-process, so the same handlers back both entry points.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..model import Scenario, ScenarioError
from ..oracle import BudgetExceededError, enumerate_adoption
from ..scenario_io import (
    ScenarioFileError,
    format_exact12,
    rational_scenario_from_document,
    scenario_from_document,
    structure_from_document,
    to_fraction,
)
from ..simulate import SimConfig, run_simulation, sweep_alpha, sweep_epsilon
from ..solver import bp_optimal, classify_persistence
from . import schemas


def _simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    doc = req.scenario.document()
    scenario = scenario_from_document(doc)
    P = structure_from_document(doc, scenario)
    config = SimConfig(
        alpha=req.alpha,
        delta=req.delta,
        horizon=req.horizon,
        replications=req.replications,
        seed=req.seed,
        comparison_mode=req.mode,
    )
    stats = run_simulation(scenario, P, config, workers=req.workers)
    rows = [
        schemas.SimRow(
            t=t + 1,
            adoption_estimate=float(stats.adoption[t]),
            adoption_stderr=float(stats.adoption_stderr[t]),
            period_sender_utility_estimate=float(stats.period_v[t]),
        )
        for t in range(req.horizon)
    ]
    lifetime = schemas.LifetimeInfo(
        delta=req.delta,
        plugin=stats.lifetime.plugin,
        plugin_stderr=stats.lifetime.plugin_stderr,
        pathwise=stats.lifetime.pathwise,
        pathwise_stderr=stats.lifetime.pathwise_stderr,
        truncation_bound=stats.lifetime.truncation_bound,
        tail_tolerance_met=stats.lifetime.tail_tolerance_met,
    )
    return schemas.SimulateResponse(rows=rows, lifetime=lifetime)


def _oracle(req: schemas.OracleRequest) -> schemas.OracleResponse:
    doc = req.scenario.document()
    scenario = rational_scenario_from_document(doc)
    P = structure_from_document(doc, scenario, exact=True)
    result = enumerate_adoption(
        scenario,
        P,
        to_fraction(req.alpha),
        req.horizon,
        mode=req.mode,
        node_budget=req.node_budget,
    )
    rows = [
        schemas.OracleRow(
            t=t + 1,
            adoption_exact=format_exact12(result.adoption[t]),
            sender_utility_exact=format_exact12(result.sender_utility[t]),
        )
        for t in range(req.horizon)
    ]
    return schemas.OracleResponse(rows=rows)


def _solve(req: schemas.SolveRequest) -> schemas.SolveResponse:
    doc = req.scenario.document()
    scenario = rational_scenario_from_document(doc)
    bp = bp_optimal(scenario)
    # Verdicts are threshold-independent; 2 is a nominal in-range value.
    verdict = classify_persistence(scenario, bp.structure, 2)
    return schemas.SolveResponse(
        signals=list(bp.structure.signals),
        matrix=[[float(x) for x in row] for row in bp.structure.matrix],
        matrix_exact=[[str(x) for x in row] for row in bp.structure.matrix],
        kind=bp.kind,
        value=float(bp.value),
        value_exact=str(bp.value),
        mu_star=float(bp.threshold_mu_star),
        mu_star_exact=str(bp.threshold_mu_star),
        x=None if bp.x is None else float(bp.x),
        x_exact=None if bp.x is None else str(bp.x),
        e=None if bp.e is None else float(bp.e),
        e_exact=None if bp.e is None else str(bp.e),
        posterior_support=[[float(b), float(p)] for b, p in bp.posterior_support],
        verdict=schemas.VerdictInfo(
            classification=verdict.classification,
            reason=verdict.reason,
            alpha_hat=None if verdict.alpha_hat is None else float(verdict.alpha_hat),
            alpha_hat_exact=None if verdict.alpha_hat is None else str(verdict.alpha_hat),
            adoption_bound=None if verdict.adoption_bound is None else float(verdict.adoption_bound),
            adoption_bound_exact=None if verdict.adoption_bound is None else str(verdict.adoption_bound),
        ),
    )


def _sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    doc = req.scenario.document()
    scenario = scenario_from_document(doc)
    if req.param == "alpha":
        P = structure_from_document(doc, scenario)
        config = SimConfig(
            alpha=max(req.grid) if req.grid else 2.0,
            delta=req.delta,
            horizon=req.horizon,
            replications=req.replications,
            seed=req.seed,
            comparison_mode=req.mode,
        )
        result = sweep_alpha(scenario, P, req.grid, config, workers=req.workers)
    else:
        if req.alpha is None:
            raise ScenarioError("epsilon sweeps need a switching threshold (alpha)")
        config = SimConfig(
            alpha=req.alpha,
            delta=req.delta,
            horizon=req.horizon,
            replications=req.replications,
            seed=req.seed,
            comparison_mode=req.mode,
        )
        result = sweep_epsilon(scenario, req.grid, config, workers=req.workers)
    rows = [
        schemas.SweepRow(
            param_value=result.grid[i],
            terminal_adoption=result.terminal_adoption[i],
            terminal_adoption_stderr=result.terminal_adoption_stderr[i],
            period_sender_utility=result.period_sender_utility[i],
            period_sender_utility_stderr=result.period_sender_utility_stderr[i],
        )
        for i in range(len(result.grid))
    ]
    return schemas.SweepResponse(rows=rows)


def create_app() -> FastAPI:
    app = FastAPI(
        title="persuasion",
        description="Long-run Bayesian persuasion: Monte Carlo simulation, exact enumeration, and structure design",
        version="0.1.0",
    )

    @app.exception_handler(ScenarioFileError)
    async def _parse_error(request: Request, exc: ScenarioFileError):
        return JSONResponse(status_code=400, content={"category": "parse-error", "message": str(exc)})

    @app.exception_handler(ScenarioError)
    async def _scenario_error(request: Request, exc: ScenarioError):
        return JSONResponse(status_code=400, content={"category": "invalid-scenario", "message": str(exc)})

    @app.exception_handler(BudgetExceededError)
    async def _budget_error(request: Request, exc: BudgetExceededError):
        return JSONResponse(status_code=400, content={"category": "budget-exceeded", "message": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"category": "invalid-argument", "message": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate(req: schemas.SimulateRequest):
        return _simulate(req)

    @app.post("/oracle", response_model=schemas.OracleResponse)
    def oracle(req: schemas.OracleRequest):
        return _oracle(req)

    @app.post("/solve", response_model=schemas.SolveResponse)
    def solve(req: schemas.SolveRequest):
        return _solve(req)

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest):
        return _sweep(req)

    return app


app = create_app()
