"""Request/response models for the persuasion service.

Numeric scenario fields accept JSON numbers or strings; strings may be
rationals like "3/7" or decimals and are what keep the exact-oracle path
exact across the wire. The CLI always sends strings for file-sourced values.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field

Number = Union[int, float, str]


class StructureSpec(BaseModel):
    signals: List[str]
    matrix: List[List[Number]]


class ScenarioPayload(BaseModel):
    states: List[str]
    actions: List[str]
    prior: List[Number]
    receiver_utility: List[List[Number]]
    sender_utility: List[List[Number]]
    structure: Optional[StructureSpec] = None
    structure_kind: Optional[str] = None

    def document(self) -> dict:
        return self.model_dump(exclude_none=True)


class SimulateRequest(BaseModel):
    scenario: ScenarioPayload
    alpha: float
    delta: float = 0.9
    horizon: int = 200
    replications: int = 100_000
    seed: int = 0
    mode: Literal["strict", "weak"] = "strict"
    workers: int = Field(default=1, ge=1)


class SimRow(BaseModel):
    t: int
    adoption_estimate: float
    adoption_stderr: float
    period_sender_utility_estimate: float


class LifetimeInfo(BaseModel):
    delta: float
    plugin: float
    plugin_stderr: float
    pathwise: float
    pathwise_stderr: float
    truncation_bound: float
    tail_tolerance_met: bool


class SimulateResponse(BaseModel):
    rows: List[SimRow]
    lifetime: LifetimeInfo


class OracleRequest(BaseModel):
    scenario: ScenarioPayload
    alpha: Number
    horizon: int = 12
    mode: Literal["strict", "weak"] = "strict"
    node_budget: int = 10_000_000


class OracleRow(BaseModel):
    t: int
    adoption_exact: str
    sender_utility_exact: str


class OracleResponse(BaseModel):
    rows: List[OracleRow]


class SolveRequest(BaseModel):
    scenario: ScenarioPayload


class VerdictInfo(BaseModel):
    classification: str
    reason: str
    alpha_hat: Optional[float] = None
    alpha_hat_exact: Optional[str] = None
    adoption_bound: Optional[float] = None
    adoption_bound_exact: Optional[str] = None


class SolveResponse(BaseModel):
    signals: List[str]
    matrix: List[List[float]]
    matrix_exact: List[List[str]]
    kind: str
    value: float
    value_exact: str
    mu_star: float
    mu_star_exact: str
    x: Optional[float] = None
    x_exact: Optional[str] = None
    e: Optional[float] = None
    e_exact: Optional[str] = None
    posterior_support: List[List[float]]
    verdict: VerdictInfo


class SweepRequest(BaseModel):
    scenario: ScenarioPayload
    param: Literal["alpha", "epsilon"]
    grid: List[float] = Field(min_length=1)
    alpha: Optional[float] = None  # threshold for epsilon sweeps
    delta: float = 0.9
    horizon: int = 200
    replications: int = 100_000
    seed: int = 0
    mode: Literal["strict", "weak"] = "strict"
    workers: int = Field(default=1, ge=1)


class SweepRow(BaseModel):
    param_value: float
    terminal_adoption: float
    terminal_adoption_stderr: float
    period_sender_utility: float
    period_sender_utility_stderr: float


class SweepResponse(BaseModel):
    rows: List[SweepRow]


class ErrorBody(BaseModel):
    category: str
    message: str
