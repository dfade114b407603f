"""Long-run Bayesian persuasion: simulation, exact enumeration, and design."""

from .model import (
    InformationStructure,
    Scenario,
    ScenarioError,
    UtilityOutcome,
    alternative_structure,
    is_revealing,
    optimal_action,
    period_expected_utility,
    posterior,
    sender_value,
    signal_marginals,
    vhat,
)
from .switching import (
    HistoryTrace,
    Observation,
    Perceived,
    SwitchRule,
    SwitchState,
    bayes_factor,
    history_log_likelihood,
    observation_likelihood,
    step,
)
from .simulate import (
    AdoptionCurve,
    LifetimeUtility,
    SimConfig,
    SweepResult,
    adoption_curve,
    lifetime_utility,
    run_simulation,
    simulate_replication,
    sweep_alpha,
    sweep_epsilon,
)
from .oracle import (
    BudgetExceededError,
    OracleResult,
    RationalScenario,
    enumerate_adoption,
    one_step_lambda_expectation,
)
from .solver import (
    BPSolution,
    PersistenceVerdict,
    ThresholdResult,
    bp_optimal,
    classify_persistence,
    epsilon_structure,
    full_disclosure,
    no_disclosure,
    receiver_threshold,
)

__version__ = "0.1.0"
