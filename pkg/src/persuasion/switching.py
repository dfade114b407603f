"""Bayes-factor model switching: observation likelihoods and the threshold state machine.

The cumulative log Bayes factor is always oriented alternative-over-announced.
A Receiver currently on the announced structure abandons it when the factor
exceeds the threshold; one on the alternative returns when the reciprocal
does, i.e. when the log factor falls below the negated log threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .model import (
    InformationStructure,
    Scenario,
    UtilityOutcome,
    is_revealing,
    optimal_action,
    posterior,
)

# Absolute slack on log-threshold comparisons; products of small rationals
# accumulated in log space can land within float noise of the threshold.
THRESHOLD_SLACK = 1e-12


class Perceived(str, Enum):
    ANNOUNCED = "announced"
    ALTERNATIVE = "alternative"


@dataclass(frozen=True)
class SwitchRule:
    """Switching threshold and comparison mode.

    strict mode switches on factor > alpha, weak mode on factor >= alpha.
    They differ only on lattice points where the factor lands exactly on
    alpha.
    """

    alpha: float
    mode: str = "strict"

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError(
                "switching threshold must exceed 1; alpha = 1 leaves no hysteresis band"
            )
        if self.mode not in ("strict", "weak"):
            raise ValueError(f"comparison mode must be 'strict' or 'weak', got {self.mode!r}")

    @property
    def log_alpha(self) -> float:
        return math.log(self.alpha)

    def crosses_to_alternative(self, log_lambda: float) -> bool:
        if self.mode == "strict":
            return log_lambda > self.log_alpha + THRESHOLD_SLACK
        return log_lambda > self.log_alpha - THRESHOLD_SLACK

    def crosses_to_announced(self, log_lambda: float) -> bool:
        # reciprocal factor exceeding alpha, in log space
        if self.mode == "strict":
            return log_lambda < -self.log_alpha - THRESHOLD_SLACK
        return log_lambda < -self.log_alpha + THRESHOLD_SLACK


@dataclass(frozen=True)
class Observation:
    """One period's (signal, action, utility) record, reduced by revelation.

    revealed_state is present exactly when the taken action was revealing.
    """

    signal: object
    action: object
    revealed_state: Optional[object]
    receiver_utility: object


@dataclass(frozen=True)
class SwitchState:
    """Perceived structure plus the cumulative log Bayes factor."""

    perceived: Perceived = Perceived.ANNOUNCED
    log_lambda: float = 0.0
    switches: int = 0
    absorbed: bool = False

    @classmethod
    def initial(cls) -> "SwitchState":
        return cls()


@dataclass(frozen=True)
class TraceRow:
    period: int
    perceived: Perceived
    signal: object
    action: object
    realized_state: object
    revealed: bool
    sender_utility: object
    receiver_utility: object
    log_lambda: float


@dataclass(frozen=True)
class HistoryTrace:
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def observations(self) -> tuple:
        return tuple(
            Observation(r.signal, r.action, r.realized_state if r.revealed else None, r.receiver_utility)
            for r in self.rows
        )


def observation_likelihood(o: Observation, Q: InformationStructure, scenario: Scenario):
    """Likelihood of a single observation under structure Q.

    Revealed: prior(state) * q(state, signal). Non-revealed: the signal's
    marginal under Q and the prior.
    """
    j = Q.signal_index(o.signal)
    if o.revealed_state is not None:
        i = scenario.state_index(o.revealed_state)
        return scenario.prior[i] * Q.matrix[i][j]
    mu = scenario.mu0
    return mu * Q.matrix[0][j] + (1 - mu) * Q.matrix[1][j]


def history_log_likelihood(trace, Q: InformationStructure, scenario: Scenario) -> float:
    """Sum of log observation likelihoods; -inf when any factor is zero."""
    observations = trace.observations() if isinstance(trace, HistoryTrace) else trace
    total = 0.0
    for o in observations:
        lik = observation_likelihood(o, Q, scenario)
        if lik == 0:
            return float("-inf")
        total += math.log(lik)
    return total


def bayes_factor(state: SwitchState) -> float:
    """Cumulative likelihood ratio, alternative over announced, regardless of
    which structure is currently perceived."""
    return math.exp(state.log_lambda)


def check_switch(state: SwitchState, rule: SwitchRule) -> SwitchState:
    """Start-of-period threshold check against the history so far."""
    if state.absorbed:
        return state
    if state.perceived is Perceived.ANNOUNCED and rule.crosses_to_alternative(state.log_lambda):
        return replace(state, perceived=Perceived.ALTERNATIVE, switches=state.switches + 1)
    if state.perceived is Perceived.ALTERNATIVE and rule.crosses_to_announced(state.log_lambda):
        return replace(state, perceived=Perceived.ANNOUNCED, switches=state.switches + 1)
    return state


def step(
    state: SwitchState,
    scenario: Scenario,
    P: InformationStructure,
    P_hat: InformationStructure,
    realized_state,
    signal,
    rule: SwitchRule,
):
    """One period: switch check, belief update, action, observation, factor update.

    The check uses the history through the previous period, so a factor pushed
    over the threshold by this period's observation only takes effect at the
    start of the next period.
    """
    state = check_switch(state, rule)
    structure = P if state.perceived is Perceived.ANNOUNCED else P_hat
    belief = posterior(scenario.mu0, structure, signal)
    action = optimal_action(belief, scenario)
    revealed = is_revealing(action, scenario)

    i = scenario.state_index(realized_state)
    j = scenario.action_index(action)
    u_t = scenario.receiver_utility[i][j]
    v_t = scenario.sender_utility[i][j]
    obs = Observation(signal, action, realized_state if revealed else None, u_t)

    if not revealed or state.absorbed:
        # Identical signal marginals: the observation moves nothing, so the
        # increment is a literal zero and the factor stays bit-identical.
        new_log_lambda = state.log_lambda
    else:
        # ln l(o|P_hat) - ln l(o|P); the realized state's prior weight cancels,
        # leaving the conditional entries themselves.
        sj = P.signal_index(signal)
        q_hat = P_hat.matrix[i][sj]
        q_true = P.matrix[i][sj]
        if q_hat == 0:
            new_log_lambda = float("-inf")
        elif q_true == 0:
            new_log_lambda = float("inf")
        else:
            new_log_lambda = state.log_lambda + (math.log(q_hat) - math.log(q_true))

    absorbed = (
        state.absorbed
        or (state.perceived is Perceived.ALTERNATIVE and not revealed)
        or new_log_lambda == float("-inf")
    )
    new_state = SwitchState(state.perceived, new_log_lambda, state.switches, absorbed)
    outcome = UtilityOutcome(action, u_t, v_t, realized_state)
    return new_state, outcome, obs
