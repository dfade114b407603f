"""Batched Monte Carlo estimation of adoption curves and lifetime utility.

Replications are vectorized with numpy and processed in fixed-size chunks.
Chunking is independent of the worker count and chunk partials are reduced
in index order, so results are byte-identical for any parallelism level.
Draws come from the counter-based RNG keyed by (seed, replication, period),
which also makes the scalar trace path in simulate_replication reproduce the
vectorized engine exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import rng
from .model import (
    InformationStructure,
    Scenario,
    alternative_structure,
    is_revealing,
    optimal_action,
    period_expected_utility,
    posterior,
)
from .switching import (
    HistoryTrace,
    SwitchRule,
    SwitchState,
    TraceRow,
    step,
)
from .solver import epsilon_structure

# Replications per work unit. Fixed so that float reduction order does not
# depend on the worker count.
CHUNK_SIZE = 16384

_STATE_STREAM = 0
_SIGNAL_STREAM = 1


@dataclass(frozen=True)
class SimConfig:
    alpha: float
    delta: float
    horizon: int
    replications: int
    seed: int
    comparison_mode: str = "strict"
    tail_tolerance: float = 1e-6

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError(
                "switching threshold must exceed 1; alpha = 1 leaves no hysteresis band"
            )
        if not (0 < self.delta < 1):
            raise ValueError("discount factor must lie strictly between 0 and 1")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if self.comparison_mode not in ("strict", "weak"):
            raise ValueError(f"comparison mode must be 'strict' or 'weak', got {self.comparison_mode!r}")

    def rule(self) -> SwitchRule:
        return SwitchRule(self.alpha, self.comparison_mode)


@dataclass(frozen=True)
class AdoptionCurve:
    """Per-period estimates of the probability the announced structure is in use."""

    estimates: tuple
    stderrs: tuple
    replications: int


@dataclass(frozen=True)
class LifetimeUtility:
    """Discounted Sender utility by two estimators plus the horizon tail bound.

    tail_tolerance_met reports whether the analytic truncation bound stayed
    within the configured tolerance; a False value means the horizon is too
    short for the requested discounting.
    """

    plugin: float
    plugin_stderr: float
    pathwise: float
    pathwise_stderr: float
    truncation_bound: float
    tail_tolerance_met: bool


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    grid: tuple
    terminal_adoption: tuple
    terminal_adoption_stderr: tuple
    period_sender_utility: tuple
    period_sender_utility_stderr: tuple


@dataclass(frozen=True)
class SimStats:
    """Full reduction of one simulation run; public wrappers slice it."""

    adoption: np.ndarray
    adoption_stderr: np.ndarray
    period_v: np.ndarray
    period_v_stderr: np.ndarray
    lifetime: LifetimeUtility
    replications: int


def _tables(scenario: Scenario, P: InformationStructure) -> dict:
    """Flatten scenario + structure into plain arrays for the chunk kernel."""
    mu0 = float(scenario.mu0)
    p = np.array([[float(x) for x in row] for row in P.matrix])
    marginal = mu0 * p[0] + (1 - mu0) * p[1]
    cum = np.cumsum(p, axis=1)
    cum[:, -1] = 1.0
    act_by_signal = np.array(
        [
            scenario.action_index(optimal_action(posterior(scenario.mu0, P, s), scenario))
            for s in P.signals
        ],
        dtype=np.intp,
    )
    revealing = np.array([is_revealing(a, scenario) for a in scenario.actions])
    # Log factor increment for a revealed (state, signal). Built with math.log
    # so the scalar trace path accumulates bit-identical values; inf cells are
    # unreachable under the true structure.
    llr = np.array(
        [
            [
                math.log(marginal[j]) - math.log(p[i, j]) if p[i, j] > 0 else math.inf
                for j in range(p.shape[1])
            ]
            for i in (0, 1)
        ]
    )
    prior_action = scenario.action_index(optimal_action(scenario.mu0, scenario))
    v = np.array([[float(x) for x in row] for row in scenario.sender_utility])

    P_hat = alternative_structure(P, scenario)
    v_announced = float(period_expected_utility(scenario, P, P))
    v_alt = float(period_expected_utility(scenario, P_hat, P))
    return {
        "mu0": mu0,
        "cum0": cum[0],
        "cum1": cum[1],
        "act_by_signal": act_by_signal,
        "revealing": revealing,
        "llr": llr,
        "prior_action": prior_action,
        "v": v,
        "v_announced": v_announced,
        "v_alt": v_alt,
    }


def _run_chunk(
    tables: dict,
    alpha: float,
    mode: str,
    horizon: int,
    delta: float,
    seed: int,
    rep_start: int,
    count: int,
    collect_paths: bool = False,
) -> dict:
    """Simulate one block of replications and return its partial sums."""
    slack = 1e-12
    ln_a = math.log(alpha)
    up_cut = ln_a + slack if mode == "strict" else ln_a - slack
    down_cut = -ln_a - slack if mode == "strict" else -ln_a + slack

    mu0 = tables["mu0"]
    cum0 = tables["cum0"]
    cum1 = tables["cum1"]
    act_by_signal = tables["act_by_signal"]
    revealing = tables["revealing"]
    llr = tables["llr"]
    prior_action = tables["prior_action"]
    v = tables["v"]
    v_announced = tables["v_announced"]
    v_alt = tables["v_alt"]

    reps = np.arange(rep_start, rep_start + count, dtype=np.uint64)
    announced = np.ones(count, dtype=bool)
    log_lambda = np.zeros(count)
    adoption_count = np.zeros(horizon, dtype=np.int64)
    v_sum = np.zeros(horizon)
    v_sumsq = np.zeros(horizon)
    plugin_path = np.zeros(count)
    pathwise = np.zeros(count)
    paths = [] if collect_paths else None

    for t in range(1, horizon + 1):
        to_alt = announced & (log_lambda > up_cut)
        to_ann = ~announced & (log_lambda < down_cut)
        announced = announced ^ (to_alt | to_ann)
        adoption_count[t - 1] = int(announced.sum())

        discount = delta ** (t - 1)
        plugin_path += discount * np.where(announced, v_announced, v_alt)

        u_state = rng.uniform_vec(seed, reps, t, _STATE_STREAM)
        u_signal = rng.uniform_vec(seed, reps, t, _SIGNAL_STREAM)
        state = (u_state >= mu0).astype(np.intp)
        sig = np.where(
            state == 0,
            np.searchsorted(cum0, u_signal, side="right"),
            np.searchsorted(cum1, u_signal, side="right"),
        )
        action = np.where(announced, act_by_signal[sig], prior_action)
        revealed = revealing[action]
        log_lambda = log_lambda + np.where(revealed, llr[state, sig], 0.0)

        v_t = v[state, action]
        v_sum[t - 1] = v_t.sum()
        v_sumsq[t - 1] = (v_t * v_t).sum()
        pathwise += discount * v_t

        if collect_paths:
            paths.append((announced.copy(), state.copy(), sig.copy(), action.copy(), log_lambda.copy()))

    return {
        "count": count,
        "adoption_count": adoption_count,
        "v_sum": v_sum,
        "v_sumsq": v_sumsq,
        "plugin_sum": float(plugin_path.sum()),
        "plugin_sumsq": float((plugin_path * plugin_path).sum()),
        "pathwise_sum": float(pathwise.sum()),
        "pathwise_sumsq": float((pathwise * pathwise).sum()),
        "paths": paths,
    }


def _chunk_args(scenario, P, config):
    tables = _tables(scenario, P)
    chunks = []
    start = 0
    while start < config.replications:
        count = min(CHUNK_SIZE, config.replications - start)
        chunks.append(
            (
                tables,
                config.alpha,
                config.comparison_mode,
                config.horizon,
                config.delta,
                config.seed,
                start,
                count,
            )
        )
        start += count
    return chunks


def _mean_se(total: float, total_sq: float, n: int):
    mean = total / n
    if n < 2:
        return mean, 0.0
    var = max((total_sq - n * mean * mean) / (n - 1), 0.0)
    return mean, math.sqrt(var / n)


def run_simulation(
    scenario: Scenario,
    P: InformationStructure,
    config: SimConfig,
    workers: int = 1,
) -> SimStats:
    """Run all replications and reduce to curve, per-period and lifetime stats."""
    chunks = _chunk_args(scenario, P, config)
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk_star, chunks))
    else:
        results = [_run_chunk(*args) for args in chunks]

    n = config.replications
    horizon = config.horizon
    adoption_count = np.zeros(horizon, dtype=np.int64)
    v_sum = np.zeros(horizon)
    v_sumsq = np.zeros(horizon)
    plugin_sum = plugin_sumsq = pathwise_sum = pathwise_sumsq = 0.0
    for r in results:  # fixed chunk order keeps float reduction deterministic
        adoption_count += r["adoption_count"]
        v_sum += r["v_sum"]
        v_sumsq += r["v_sumsq"]
        plugin_sum += r["plugin_sum"]
        plugin_sumsq += r["plugin_sumsq"]
        pathwise_sum += r["pathwise_sum"]
        pathwise_sumsq += r["pathwise_sumsq"]

    adoption = adoption_count / n
    adoption_se = np.sqrt(adoption * (1 - adoption) / n)
    period_v = v_sum / n
    if n > 1:
        period_var = np.maximum((v_sumsq - n * period_v * period_v) / (n - 1), 0.0)
        period_se = np.sqrt(period_var / n)
    else:
        period_se = np.zeros(horizon)

    plugin_mean, plugin_se = _mean_se(plugin_sum, plugin_sumsq, n)
    pathwise_mean, pathwise_se = _mean_se(pathwise_sum, pathwise_sumsq, n)
    max_v = max(abs(float(x)) for row in scenario.sender_utility for x in row)
    bound = (config.delta**config.horizon) * max_v / (1 - config.delta)
    lifetime = LifetimeUtility(
        plugin_mean, plugin_se, pathwise_mean, pathwise_se, bound, bound <= config.tail_tolerance
    )
    return SimStats(adoption, adoption_se, period_v, period_se, lifetime, n)


def _run_chunk_star(args):
    return _run_chunk(*args)


def simulate_replication(
    scenario: Scenario,
    P: InformationStructure,
    config: SimConfig,
    replication_index: int,
) -> HistoryTrace:
    """Scalar trace of one replication, bit-identical to the batched engine."""
    rule = config.rule()
    P_hat = alternative_structure(P, scenario)
    cum = []
    for row in P.matrix:
        acc, out = 0.0, []
        for x in row:
            acc += float(x)
            out.append(acc)
        out[-1] = 1.0
        cum.append(np.asarray(out))

    state = SwitchState.initial()
    rows = []
    for t in range(1, config.horizon + 1):
        u_state = rng.uniform(config.seed, replication_index, t, _STATE_STREAM)
        u_signal = rng.uniform(config.seed, replication_index, t, _SIGNAL_STREAM)
        i = 0 if u_state < float(scenario.mu0) else 1
        j = int(np.searchsorted(cum[i], u_signal, side="right"))
        realized = scenario.states[i]
        signal = P.signals[j]
        state, outcome, obs = step(state, scenario, P, P_hat, realized, signal, rule)
        rows.append(
            TraceRow(
                period=t,
                perceived=state.perceived,
                signal=signal,
                action=outcome.action,
                realized_state=realized,
                revealed=obs.revealed_state is not None,
                sender_utility=outcome.sender_utility,
                receiver_utility=outcome.receiver_utility,
                log_lambda=state.log_lambda,
            )
        )
    return HistoryTrace(tuple(rows))


def adoption_curve(
    scenario: Scenario,
    P: InformationStructure,
    config: SimConfig,
    workers: int = 1,
) -> AdoptionCurve:
    stats = run_simulation(scenario, P, config, workers)
    return AdoptionCurve(tuple(stats.adoption), tuple(stats.adoption_stderr), stats.replications)


def lifetime_utility(
    scenario: Scenario,
    P: InformationStructure,
    config: SimConfig,
    workers: int = 1,
) -> LifetimeUtility:
    return run_simulation(scenario, P, config, workers).lifetime


def sweep_alpha(
    scenario: Scenario,
    P: InformationStructure,
    alphas: Sequence[float],
    config: SimConfig,
    workers: int = 1,
) -> SweepResult:
    """Terminal adoption and horizon-period utility across thresholds.

    The same seed is reused at every grid point, which couples the paths and
    makes terminal adoption weakly increasing in the threshold up to noise.
    """
    if any(not a > 1 for a in alphas):
        raise ValueError("every threshold in the sweep must exceed 1")
    grid = tuple(sorted(alphas))
    terminal, terminal_se, utility, utility_se = [], [], [], []
    for a in grid:
        stats = run_simulation(scenario, P, replace(config, alpha=a), workers)
        terminal.append(float(stats.adoption[-1]))
        terminal_se.append(float(stats.adoption_stderr[-1]))
        utility.append(float(stats.period_v[-1]))
        utility_se.append(float(stats.period_v_stderr[-1]))
    return SweepResult("alpha", grid, tuple(terminal), tuple(terminal_se), tuple(utility), tuple(utility_se))


def sweep_epsilon(
    scenario: Scenario,
    epsilons: Sequence[float],
    config: SimConfig,
    workers: int = 1,
) -> SweepResult:
    """Simulate the interpolation family at config.alpha across epsilon values."""
    if any(not (0 <= e <= 1) for e in epsilons):
        raise ValueError("epsilon values must lie in [0, 1]")
    grid = tuple(sorted(epsilons))
    structures = [epsilon_structure(scenario, e) for e in grid]
    terminal, terminal_se, utility, utility_se = [], [], [], []
    for P in structures:
        stats = run_simulation(scenario, P, config, workers)
        terminal.append(float(stats.adoption[-1]))
        terminal_se.append(float(stats.adoption_stderr[-1]))
        utility.append(float(stats.period_v[-1]))
        utility_se.append(float(stats.period_v_stderr[-1]))
    return SweepResult(
        "epsilon", grid, tuple(terminal), tuple(terminal_se), tuple(utility), tuple(utility_se)
    )
