"""Domain types and stateless primitives for binary-state persuasion games.

Everything here is a pure function over immutable values. Numeric fields are
duck-typed: the same code runs on floats and on fractions.Fraction, which is
how the exact-oracle layer reuses these primitives without a parallel
implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

# Tie band for action indifference. Indifference at the receiver threshold is
# load-bearing for BP optimality, so exact ties must resolve in the Sender's
# favor even under float round-off.
TIE_TOL = 1e-12

# Row-stochasticity tolerance for information structures.
ROW_TOL = 1e-12


class ScenarioError(ValueError):
    """Raised when a scenario or structure violates a construction invariant."""


@dataclass(frozen=True)
class Scenario:
    """A binary-state persuasion game: states, actions, prior, utility tables.

    Utility tables are row-major over (state, action). The prior is a
    probability vector over states; its first entry is the belief coordinate
    used everywhere else.
    """

    states: tuple
    actions: tuple
    prior: tuple
    receiver_utility: tuple
    sender_utility: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "prior", tuple(self.prior))
        object.__setattr__(
            self, "receiver_utility", tuple(tuple(row) for row in self.receiver_utility)
        )
        object.__setattr__(
            self, "sender_utility", tuple(tuple(row) for row in self.sender_utility)
        )
        if len(self.states) != 2:
            raise ScenarioError("exactly two states are supported")
        if len(set(self.states)) != 2:
            raise ScenarioError("state labels must be unique")
        if len(self.actions) < 2 or len(set(self.actions)) != len(self.actions):
            raise ScenarioError("need at least two uniquely labeled actions")
        if len(self.prior) != 2:
            raise ScenarioError("prior must have one entry per state")
        if abs(self.prior[0] + self.prior[1] - 1) > 1e-9:
            raise ScenarioError("prior must sum to 1")
        if not (0 < self.prior[0] < 1):
            raise ScenarioError("degenerate priors are rejected; prior must be interior")
        for name, table in (("receiver", self.receiver_utility), ("sender", self.sender_utility)):
            if len(table) != 2 or any(len(row) != len(self.actions) for row in table):
                raise ScenarioError(f"{name} utility table must be 2 x {len(self.actions)}")
        if not any(is_revealing(a, self) for a in self.actions):
            raise ScenarioError("at least one action must be revealing")

    @property
    def mu0(self):
        """Prior probability of the first state."""
        return self.prior[0]

    def state_index(self, state) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise ScenarioError(f"unknown state label {state!r}") from None

    def action_index(self, action) -> int:
        try:
            return self.actions.index(action)
        except ValueError:
            raise ScenarioError(f"unknown action label {action!r}") from None

    def receiver_u(self, state, action):
        return self.receiver_utility[self.state_index(state)][self.action_index(action)]

    def sender_v(self, state, action):
        return self.sender_utility[self.state_index(state)][self.action_index(action)]

    def expected_receiver(self, belief, action):
        j = self.action_index(action)
        return belief * self.receiver_utility[0][j] + (1 - belief) * self.receiver_utility[1][j]

    def expected_sender(self, belief, action):
        j = self.action_index(action)
        return belief * self.sender_utility[0][j] + (1 - belief) * self.sender_utility[1][j]

    def sender_preference_order(self, belief) -> tuple:
        """Actions ranked by Sender expected utility at a belief (ties keep declaration order)."""
        return tuple(
            sorted(self.actions, key=lambda a: (-self.expected_sender(belief, a), self.action_index(a)))
        )


@dataclass(frozen=True)
class InformationStructure:
    """Row-stochastic signal likelihoods, one row per state.

    Signals whose column is identically zero can never be realized under an
    interior prior and would break Bayes-factor ratios, so they are stripped
    at construction.
    """

    signals: tuple
    matrix: tuple

    def __post_init__(self):
        signals = tuple(self.signals)
        matrix = tuple(tuple(row) for row in self.matrix)
        if not signals:
            raise ScenarioError("structure needs at least one signal")
        if len(set(signals)) != len(signals):
            raise ScenarioError("signal labels must be unique")
        if any(len(row) != len(signals) for row in matrix):
            raise ScenarioError("matrix rows must match the signal count")
        for row in matrix:
            if any(p < 0 for p in row):
                raise ScenarioError("signal probabilities must be nonnegative")
            if abs(sum(row) - 1) > ROW_TOL:
                raise ScenarioError("each state row must sum to 1")
        keep = [j for j in range(len(signals)) if any(row[j] > 0 for row in matrix)]
        if len(keep) < len(signals):
            signals = tuple(signals[j] for j in keep)
            matrix = tuple(tuple(row[j] for j in keep) for row in matrix)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "matrix", matrix)

    def signal_index(self, signal) -> int:
        try:
            return self.signals.index(signal)
        except ValueError:
            raise ScenarioError(f"unknown signal label {signal!r}") from None

    def likelihood(self, state_index: int, signal) -> float:
        return self.matrix[state_index][self.signal_index(signal)]


@dataclass(frozen=True)
class UtilityOutcome:
    """Realized per-period payoffs for the taken action."""

    action: object
    receiver_utility: object
    sender_utility: object
    realized_state: object


def alternative_structure(P: InformationStructure, scenario: Scenario) -> InformationStructure:
    """Uninformative twin of P: every row equals P's prior-weighted signal marginal.

    The marginal is computed once and used for both rows, so the rows compare
    equal bitwise and the twin's marginals equal P's exactly.
    """
    if len(P.matrix) != len(scenario.states):
        raise ScenarioError("structure row count must match the state count")
    mu = scenario.mu0
    marginal = tuple(mu * P.matrix[0][j] + (1 - mu) * P.matrix[1][j] for j in range(len(P.signals)))
    return InformationStructure(P.signals, (marginal, marginal))


def signal_marginals(P: InformationStructure, scenario: Scenario) -> tuple:
    """Unconditional signal probabilities under the scenario prior."""
    mu = scenario.mu0
    return tuple(mu * P.matrix[0][j] + (1 - mu) * P.matrix[1][j] for j in range(len(P.signals)))


def posterior(prior, Q: InformationStructure, signal):
    """Bayes update of the first-state belief after observing a signal under Q.

    When both states assign the signal the same likelihood the belief is
    returned unchanged, which keeps "posterior equals prior under the
    uninformative twin" exact in floating point.
    """
    j = Q.signal_index(signal)
    q1 = Q.matrix[0][j]
    q2 = Q.matrix[1][j]
    if q1 == q2:
        if q1 == 0:
            raise ScenarioError(f"unreachable signal {signal!r}")
        return prior
    num = prior * q1
    den = num + (1 - prior) * q2
    if den <= 0:
        raise ScenarioError(f"unreachable signal {signal!r}")
    b = num / den
    if b < 0:
        return 0.0
    if b > 1:
        return 1.0
    return b


def optimal_action(belief, scenario: Scenario):
    """Receiver-optimal action at a belief; ties go to the Sender, then declaration order."""
    if belief < 0:
        belief = 0
    elif belief > 1:
        belief = 1
    scores = [scenario.expected_receiver(belief, a) for a in scenario.actions]
    best = max(scores)
    tied = [a for a, sc in zip(scenario.actions, scores) if sc >= best - TIE_TOL]
    if len(tied) == 1:
        return tied[0]
    sender_scores = [scenario.expected_sender(belief, a) for a in tied]
    best_sender = max(sender_scores)
    for a, sc in zip(tied, sender_scores):
        if sc >= best_sender - TIE_TOL:
            return a
    return tied[0]


def is_revealing(action, scenario: Scenario) -> bool:
    """True when the action's receiver utility differs across states."""
    j = scenario.action_index(action)
    diff = scenario.receiver_utility[0][j] - scenario.receiver_utility[1][j]
    return diff > TIE_TOL or diff < -TIE_TOL


def vhat(scenario: Scenario, belief):
    """Sender expected utility when both parties act on a shared belief."""
    a = optimal_action(belief, scenario)
    return scenario.expected_sender(belief, a)


def period_expected_utility(
    scenario: Scenario,
    perceived: InformationStructure,
    true_structure: InformationStructure,
):
    """Sender's one-period expected utility when the Receiver updates under
    `perceived` while signals and states are drawn under `true_structure`."""
    if perceived.signals != true_structure.signals:
        raise ScenarioError("signal-set mismatch between perceived and true structures")
    mu = scenario.mu0
    total = 0
    for j, s in enumerate(true_structure.signals):
        a = optimal_action(posterior(mu, perceived, s), scenario)
        k = scenario.action_index(a)
        total += mu * true_structure.matrix[0][j] * scenario.sender_utility[0][k]
        total += (1 - mu) * true_structure.matrix[1][j] * scenario.sender_utility[1][k]
    return total


def sender_value(scenario: Scenario, P: InformationStructure):
    """V(prior | P) computed through the induced posterior distribution.

    Independent of period_expected_utility's state-sum path; the two must
    agree to 1e-12 on any scenario.
    """
    marginals = signal_marginals(P, scenario)
    mu = scenario.mu0
    total = 0
    for j, s in enumerate(P.signals):
        total += marginals[j] * vhat(scenario, posterior(mu, P, s))
    return total
