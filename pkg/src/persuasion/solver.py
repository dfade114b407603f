"""Information-structure construction and persistence classification.

Builds the one-shot-optimal structure by concavifying the Sender's indirect
value over beliefs (piecewise linear with a single breakpoint at the
Receiver's indifference belief, so the optimal posterior support lives in
{0, threshold, 1}), the extreme structures, and the one-parameter family
that interpolates between the one-shot optimum and full disclosure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .model import (
    InformationStructure,
    Scenario,
    ScenarioError,
    TIE_TOL,
    is_revealing,
    optimal_action,
    posterior,
    signal_marginals,
    vhat,
)

PERSISTS = "persists"
EVENTUALLY_PERSISTS = "eventually_persists"
SWITCH_RISK = "switch_risk"


@dataclass(frozen=True)
class ThresholdResult:
    """Receiver indifference belief and the actions on each side of it.

    high_action is optimal at belief 1, low_action at belief 0. degenerate
    means the same action is optimal on all of [0, 1] (parallel or
    non-crossing utility lines); mu_star is then 0.
    """

    mu_star: object
    degenerate: bool
    high_action: object
    low_action: object


@dataclass(frozen=True)
class BPSolution:
    """One-shot optimal structure plus the concavification bookkeeping."""

    structure: InformationStructure
    value: object
    posterior_support: tuple
    threshold_mu_star: object
    x: Optional[object]
    e: Optional[object]
    kind: str  # "no_disclosure" | "full_disclosure" | "interior"


@dataclass(frozen=True)
class PersistenceVerdict:
    classification: str
    reason: str
    alpha_hat: Optional[object] = None
    adoption_bound: Optional[object] = None


def _require_binary(scenario: Scenario):
    if len(scenario.actions) != 2:
        raise ScenarioError("non-binary scenario: this solver handles exactly two actions")


def receiver_threshold(scenario: Scenario) -> ThresholdResult:
    """Belief at which the Receiver is exactly indifferent between the actions.

    Solved in closed form from the linear expected-utility crossing. Ties at
    the threshold go to the Sender via optimal_action's tie-breaking.
    """
    _require_binary(scenario)
    high = optimal_action(1, scenario)
    low = optimal_action(0, scenario)
    if high == low:
        return ThresholdResult(0.0, True, high, low)
    u = scenario.receiver_utility
    hi = scenario.action_index(high)
    lo = scenario.action_index(low)
    # f(mu) = E_mu[u(high)] - E_mu[u(low)] = c + mu * d, nonnegative at mu = 1
    c = u[1][hi] - u[1][lo]
    d = (u[0][hi] - u[0][lo]) - (u[1][hi] - u[1][lo])
    if d == 0:
        return ThresholdResult(0.0, True, high, low)
    mu_star = -c / d
    if not (0 < mu_star < 1):
        return ThresholdResult(0.0 if mu_star <= 0 else 1.0, True, high, low)
    return ThresholdResult(mu_star, False, high, low)


def no_disclosure(scenario: Scenario) -> InformationStructure:
    """Single uninformative signal."""
    return InformationStructure(("s",), ((1,), (1,)))


def full_disclosure(scenario: Scenario) -> InformationStructure:
    """One signal per state, named after the state it reveals."""
    return InformationStructure(tuple(scenario.states), ((1, 0), (0, 1)))


def bp_optimal(scenario: Scenario) -> BPSolution:
    """One-shot optimal structure via concavification at the prior.

    Candidate posterior supports are {prior}, {0, threshold}, {threshold, 1}
    and {0, 1}; the winner with the highest Sender value is returned, with
    ties resolved toward less disclosure.
    """
    _require_binary(scenario)
    mu0 = scenario.mu0
    threshold = receiver_threshold(scenario)
    mu_star = threshold.mu_star

    v0 = vhat(scenario, 0)
    v1 = vhat(scenario, 1)
    v_prior = vhat(scenario, mu0)

    candidates = [("no_disclosure", v_prior)]
    if not threshold.degenerate:
        if mu0 < mu_star:
            e = mu0 / mu_star
            candidates.append(("pool_low", e * vhat(scenario, mu_star) + (1 - e) * v0))
        elif mu0 > mu_star:
            w = (mu0 - mu_star) / (1 - mu_star)
            candidates.append(("pool_high", w * v1 + (1 - w) * vhat(scenario, mu_star)))
    candidates.append(("full_disclosure", mu0 * v1 + (1 - mu0) * v0))

    best_kind, best_value = candidates[0]
    for kind, value in candidates[1:]:
        if value > best_value + TIE_TOL:
            best_kind, best_value = kind, value

    if best_kind == "no_disclosure":
        return BPSolution(
            structure=no_disclosure(scenario),
            value=v_prior,
            posterior_support=((mu0, 1),),
            threshold_mu_star=mu_star,
            x=None,
            e=None,
            kind="no_disclosure",
        )
    if best_kind == "full_disclosure":
        return BPSolution(
            structure=full_disclosure(scenario),
            value=best_value,
            posterior_support=((1, mu0), (0, 1 - mu0)),
            threshold_mu_star=mu_star,
            x=None,
            e=None,
            kind="full_disclosure",
        )
    if best_kind == "pool_low":
        # pooled signal lands at mu_star, the other reveals the second state
        x = (mu0 * (1 - mu_star)) / ((1 - mu0) * mu_star)
        e = mu0 + (1 - mu0) * x
        structure = InformationStructure(("s1", "s2"), ((1, 0), (x, 1 - x)))
        support = ((mu_star, e), (0, 1 - e))
    else:
        # mirror: pooled signal lands at mu_star, the other reveals the first state
        x = (mu_star * (1 - mu0)) / (mu0 * (1 - mu_star))
        e = mu0 * x + (1 - mu0)
        structure = InformationStructure(("s1", "s2"), ((x, 1 - x), (1, 0)))
        support = ((mu_star, e), (1, 1 - e))
    return BPSolution(
        structure=structure,
        value=best_value,
        posterior_support=support,
        threshold_mu_star=mu_star,
        x=x,
        e=e,
        kind="interior",
    )


def _prop3_shape(scenario: Scenario):
    """Check the bounded-switching-risk preconditions.

    Requires one revealing and one non-revealing action, the non-revealing
    one taken at the prior, and a state-independent Sender payoff for the
    revealing action that strictly dominates the non-revealing one. Returns
    (revealing_action, non_revealing_action) or None.
    """
    if len(scenario.actions) != 2:
        return None
    revealing = [a for a in scenario.actions if is_revealing(a, scenario)]
    if len(revealing) != 1:
        return None
    a_rev = revealing[0]
    a_non = next(a for a in scenario.actions if a != a_rev)
    if optimal_action(scenario.mu0, scenario) != a_non:
        return None
    v = scenario.sender_utility
    r = scenario.action_index(a_rev)
    n = scenario.action_index(a_non)
    if abs(v[0][r] - v[1][r]) > TIE_TOL:
        return None
    if not (v[0][r] > v[0][n] + TIE_TOL and v[1][r] > v[1][n] + TIE_TOL):
        return None
    return a_rev, a_non


def epsilon_structure(scenario: Scenario, eps) -> InformationStructure:
    """Three-signal interpolation between the one-shot optimum and full disclosure.

    At eps = 0 the sure signal has zero marginal and stripping reproduces the
    one-shot-optimal matrix; at eps = 1 the pooled signal vanishes and the
    result is full disclosure up to signal relabeling.
    """
    if not (0 <= eps <= 1):
        raise ScenarioError("epsilon must lie in [0, 1]")
    if _prop3_shape(scenario) is None:
        raise ScenarioError(
            "epsilon family requires one revealing action preferred by the Sender "
            "and a non-revealing action taken at the prior"
        )
    bp = bp_optimal(scenario)
    if bp.kind != "interior":
        raise ScenarioError("epsilon family requires an interior one-shot optimum")
    x = bp.x
    row_sure = (eps, 1 - eps, 0)
    row_rest = (0, x * (1 - eps), (1 - x) + x * eps)
    if bp.structure.matrix[0][0] == 1:
        matrix = (row_sure, row_rest)
    else:
        matrix = (row_rest, row_sure)
    return InformationStructure(("s0", "s1", "s2"), matrix)


def _is_full_disclosure(P: InformationStructure) -> bool:
    for j in range(len(P.signals)):
        if P.matrix[0][j] > TIE_TOL and P.matrix[1][j] > TIE_TOL:
            return False
    return True


def _is_no_disclosure(P: InformationStructure) -> bool:
    return all(abs(P.matrix[0][j] - P.matrix[1][j]) <= TIE_TOL for j in range(len(P.signals)))


def _same_structure(P: InformationStructure, Q: InformationStructure, tol=1e-9) -> bool:
    if len(P.signals) != len(Q.signals):
        return False
    cols = range(len(P.signals))
    for perm in itertools.permutations(cols):
        if all(
            abs(P.matrix[i][perm[j]] - Q.matrix[i][j]) <= tol for i in (0, 1) for j in cols
        ):
            return True
    return False


def classify_persistence(scenario: Scenario, P: InformationStructure, alpha) -> PersistenceVerdict:
    """Analytic persistence classification of a structure at a threshold.

    Extreme structures always persist. If the Sender's strictly dominant
    action is non-revealing and P is the one-shot optimum, no history raises
    the Bayes factor above one, so P persists. If every action is revealing,
    the factor decays almost surely and P eventually persists. In the
    bounded-risk shape the analytic threshold e/x and the limiting adoption
    bound prior/e are attached.
    """
    _require_binary(scenario)
    if not alpha > 1:
        raise ValueError("switching threshold must exceed 1")

    if _is_full_disclosure(P) or _is_no_disclosure(P):
        return PersistenceVerdict(PERSISTS, "extreme-structure")

    bp = bp_optimal(scenario)

    v = scenario.sender_utility
    for a_hat in scenario.actions:
        if is_revealing(a_hat, scenario):
            continue
        k = scenario.action_index(a_hat)
        others = [scenario.action_index(a) for a in scenario.actions if a != a_hat]
        if all(v[i][k] > v[i][j] + TIE_TOL for i in (0, 1) for j in others):
            if _same_structure(P, bp.structure):
                return PersistenceVerdict(PERSISTS, "preferred-action-non-revealing")

    if all(is_revealing(a, scenario) for a in scenario.actions):
        return PersistenceVerdict(EVENTUALLY_PERSISTS, "all-actions-revealing")

    if _prop3_shape(scenario) is not None and bp.kind == "interior" and _same_structure(P, bp.structure):
        return PersistenceVerdict(
            SWITCH_RISK,
            "preferred-action-revealing",
            alpha_hat=bp.e / bp.x,
            adoption_bound=scenario.mu0 / bp.e,
        )

    return PersistenceVerdict(SWITCH_RISK, "unclassified")


def bayes_plausible(scenario: Scenario, P: InformationStructure, tol=1e-12) -> bool:
    """Posterior mean equals the prior (holds for every valid structure)."""
    marginals = signal_marginals(P, scenario)
    mean = 0
    for j, s in enumerate(P.signals):
        mean += marginals[j] * posterior(scenario.mu0, P, s)
    return abs(mean - scenario.mu0) <= tol
