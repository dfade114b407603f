"""Exact adoption probabilities by exhaustive history enumeration in rationals.

Histories with equal cumulative Bayes factors are interchangeable for all
future behavior, so the enumeration merges branches keyed on (perceived
structure, exact factor). Per-period factor multipliers form a small finite
set, which turns the history tree into a lattice and keeps horizons in the
hundreds tractable. Subtrees that can never switch again collapse into a
single absorbing bucket.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    InformationStructure,
    Scenario,
    alternative_structure,
    is_revealing,
    optimal_action,
    period_expected_utility,
    posterior,
    signal_marginals,
)


class BudgetExceededError(RuntimeError):
    """Enumeration outgrew the node budget; try a smaller horizon."""


class RationalScenario(Scenario):
    """Scenario whose every numeric entry is an exact rational.

    Construct from explicit rational literals (Fraction("3/7"), integers);
    float entries are rejected rather than approximated.
    """

    def __post_init__(self):
        for value in (*self.prior, *_flat(self.receiver_utility), *_flat(self.sender_utility)):
            if not isinstance(value, (Fraction, int)) or isinstance(value, bool):
                raise TypeError(
                    f"rational scenarios require Fraction or int entries, got {value!r}"
                )
        # Normalize ints to Fraction so downstream divisions stay exact.
        object.__setattr__(self, "prior", tuple(Fraction(x) for x in self.prior))
        object.__setattr__(
            self, "receiver_utility", tuple(tuple(Fraction(x) for x in row) for row in self.receiver_utility)
        )
        object.__setattr__(
            self, "sender_utility", tuple(tuple(Fraction(x) for x in row) for row in self.sender_utility)
        )
        super().__post_init__()


def _flat(table):
    return [x for row in table for x in row]


def require_rational_structure(P: InformationStructure) -> InformationStructure:
    for row in P.matrix:
        for value in row:
            if not isinstance(value, (Fraction, int)):
                raise TypeError(f"exact enumeration requires rational entries, got {value!r}")
    return P


@dataclass(frozen=True)
class OracleResult:
    """Exact per-period adoption probabilities and Sender expected utilities."""

    adoption: tuple  # Fraction per period, t = 1..T
    sender_utility: tuple  # Fraction per period
    nodes: int


def _exceeds(lam: Fraction, alpha: Fraction, mode: str) -> bool:
    return lam > alpha if mode == "strict" else lam >= alpha


def _grouped_outcomes(scenario, P, marginals, perceived_announced: bool):
    """Per-period (factor multiplier -> probability under the truth) map.

    Returns None when the perceived-alternative action is non-revealing: the
    factor is then frozen above the threshold forever and the node is
    absorbed.
    """
    groups: dict = {}

    def add(mult, prob):
        if prob != 0:
            groups[mult] = groups.get(mult, Fraction(0)) + prob

    mu0 = scenario.mu0
    one = Fraction(1)
    if perceived_announced:
        for j, s in enumerate(P.signals):
            action = optimal_action(posterior(mu0, P, s), scenario)
            if is_revealing(action, scenario):
                for i in (0, 1):
                    p = P.matrix[i][j]
                    if p != 0:
                        add(marginals[j] / p, scenario.prior[i] * p)
            else:
                add(one, marginals[j])
        return groups

    action = optimal_action(mu0, scenario)
    if not is_revealing(action, scenario):
        return None
    for j in range(len(P.signals)):
        for i in (0, 1):
            p = P.matrix[i][j]
            if p != 0:
                add(marginals[j] / p, scenario.prior[i] * p)
    return groups


def enumerate_adoption(
    scenario: RationalScenario,
    P: InformationStructure,
    alpha: Fraction,
    horizon: int,
    mode: str = "strict",
    node_budget: int = 10_000_000,
) -> OracleResult:
    """Exact adoption curve and per-period Sender expected utility to a horizon."""
    require_rational_structure(P)
    alpha = Fraction(alpha)
    if not alpha > 1:
        raise ValueError("switching threshold must exceed 1")
    if mode not in ("strict", "weak"):
        raise ValueError(f"comparison mode must be 'strict' or 'weak', got {mode!r}")
    if horizon < 1:
        raise ValueError("horizon must be at least 1")

    marginals = signal_marginals(P, scenario)
    announced_outcomes = _grouped_outcomes(scenario, P, marginals, True)
    alt_outcomes = _grouped_outcomes(scenario, P, marginals, False)

    P_hat = alternative_structure(P, scenario)
    v_announced = period_expected_utility(scenario, P, P)
    v_alt = period_expected_utility(scenario, P_hat, P)

    # states: (announced?, exact factor) -> probability; plus one absorbing
    # bucket for alternative-perceiving histories that can never switch back
    states = {(True, Fraction(1)): Fraction(1)}
    absorbed_alt = Fraction(0)
    adoption = []
    sender_utility = []
    expansions = 0

    for t in range(1, horizon + 1):
        flipped: dict = {}
        for (announced, lam), prob in states.items():
            if announced and _exceeds(lam, alpha, mode):
                key = (False, lam)
            elif not announced and _exceeds(1 / lam, alpha, mode):
                key = (True, lam)
            else:
                key = (announced, lam)
            flipped[key] = flipped.get(key, Fraction(0)) + prob
        states = flipped

        announced_mass = sum(
            (prob for (announced, _), prob in states.items() if announced), Fraction(0)
        )
        adoption.append(announced_mass)
        sender_utility.append(announced_mass * v_announced + (1 - announced_mass) * v_alt)

        if t == horizon:
            break

        expanded: dict = {}
        for (announced, lam), prob in states.items():
            outcomes = announced_outcomes if announced else alt_outcomes
            if outcomes is None:
                absorbed_alt += prob
                continue
            for mult, q in outcomes.items():
                key = (announced, lam * mult)
                expanded[key] = expanded.get(key, Fraction(0)) + prob * q
                expansions += 1
                if expansions > node_budget:
                    raise BudgetExceededError(
                        f"enumeration exceeded {node_budget} node expansions at period {t}; "
                        "try a smaller horizon"
                    )
        states = expanded

    return OracleResult(tuple(adoption), tuple(sender_utility), expansions)


def one_step_lambda_expectation(scenario: RationalScenario, P: InformationStructure) -> Fraction:
    """Exact E[factor multiplier] over one period from the announced structure.

    Equals 1 when the structure is strictly positive and every taken action
    is revealing; strictly below 1 as soon as some (state, signal) cell is
    zero, which is what drives the almost-sure decay of the factor.
    """
    require_rational_structure(P)
    marginals = signal_marginals(P, scenario)
    outcomes = _grouped_outcomes(scenario, P, marginals, True)
    return sum((prob * mult for mult, prob in outcomes.items()), Fraction(0))
