"""End-to-end acceptance suite.

Each test prints one [PASS]/[FAIL] line (run with -s to see them), checks its
numeric claims at the stated tolerance, and enforces its runtime budget.
Budgets are generous for correctness checks and tight for the hot paths.
"""

import json
import math
import time
from fractions import Fraction as F

import pytest

from persuasion import (
    Scenario,
    SimConfig,
    adoption_curve,
    alternative_structure,
    bp_optimal,
    enumerate_adoption,
    full_disclosure,
    lifetime_utility,
    no_disclosure,
    one_step_lambda_expectation,
    run_simulation,
    sweep_alpha,
    sweep_epsilon,
)
from persuasion.cli import main
from persuasion.oracle import RationalScenario
from persuasion.switching import Observation, observation_likelihood
from persuasion.solver import epsilon_structure
from tests.conftest import SCENARIO_DIR

REPS = 100_000


def _report(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _seller_buyer_exact():
    return RationalScenario(
        ("H", "L"), ("B", "NB"), (F(3, 10), F(7, 10)), ((1, 0), (-1, 0)), ((1, 0), (1, 0))
    )


def _seller_buyer_float():
    return Scenario(("H", "L"), ("B", "NB"), (0.3, 0.7), ((1, 0), (-1, 0)), ((1, 0), (1, 0)))


def _speed_limit_exact():
    return RationalScenario(
        ("E", "NE"), ("S", "NS"), (F(3, 10), F(7, 10)), ((-1, 0), (1, 0)), ((0, 1), (0, 1))
    )


def test_golden_matrices():
    exact = _seller_buyer_exact()
    flt = _seller_buyer_float()
    bp_optimal(exact)  # warm
    elapsed = math.inf
    for _ in range(3):
        t0 = time.perf_counter()
        bp = bp_optimal(exact)
        elapsed = min(elapsed, time.perf_counter() - t0)

    ok = (
        bp.structure.matrix == ((1, 0), (F(3, 7), F(4, 7)))
        and bp.value == F(3, 5)
        and elapsed < 1e-3
    )
    bpf = bp_optimal(flt)
    ok = ok and abs(bpf.structure.matrix[1][0] - 3 / 7) <= 1e-12
    ok = ok and abs(bpf.structure.matrix[1][1] - 4 / 7) <= 1e-12
    ok = ok and abs(bpf.value - 0.6) <= 1e-12
    _report(
        "golden-matrices",
        ok,
        f"exact [[1,0],[3/7,4/7]] value 3/5, float within 1e-12, {elapsed*1e6:.0f}us",
    )


def test_golden_tables():
    sb = _seller_buyer_exact()
    sl = _speed_limit_exact()
    P_sb = bp_optimal(sb).structure
    Ph_sb = alternative_structure(P_sb, sb)
    P_sl = bp_optimal(sl).structure
    Ph_sl = alternative_structure(P_sl, sl)

    def check_all():
        cells = []
        # seller-buyer observation likelihoods
        for o, p, ph in (
            (Observation("s1", "B", "H", 1), F(3, 10), F(9, 50)),
            (Observation("s1", "B", "L", -1), F(3, 10), F(21, 50)),
            (Observation("s2", "NB", None, 0), F(2, 5), F(2, 5)),
        ):
            cells.append(observation_likelihood(o, P_sb, sb) == p)
            cells.append(observation_likelihood(o, Ph_sb, sb) == ph)
        # speed-limit observation likelihoods
        for o, p, ph in (
            (Observation("s1", "NS", None, 0), F(3, 5), F(3, 5)),
            (Observation("s2", "S", "NE", 1), F(2, 5), F(7, 25)),
            (Observation("s2", "S", "E", -1), F(0), F(3, 25)),
        ):
            cells.append(observation_likelihood(o, P_sl, sl) == p)
            cells.append(observation_likelihood(o, Ph_sl, sl) == ph)
        # interpolation-family likelihoods at two interior parameter values
        for eps in (F(1, 4), F(2, 5)):
            Pe = epsilon_structure(sb, eps)
            Pe_hat = alternative_structure(Pe, sb)
            rows = (
                (Observation("s0", "B", "H", 1), F(3, 10) * eps, F(9, 100) * eps),
                (Observation("s1", "B", "H", 1), F(3, 10) * (1 - eps), F(9, 50) * (1 - eps)),
                (Observation("s1", "B", "L", -1), F(3, 10) * (1 - eps), F(21, 50) * (1 - eps)),
                (Observation("s2", "NB", None, 0), F(2, 5) + F(3, 10) * eps, F(2, 5) + F(3, 10) * eps),
            )
            for o, p, ph in rows:
                cells.append(observation_likelihood(o, Pe, sb) == p)
                cells.append(observation_likelihood(o, Pe_hat, sb) == ph)
            # the cell that can never be realized under the true process
            dead = Observation("s0", "B", "L", -1)
            cells.append(observation_likelihood(dead, Pe, sb) == 0)
            cells.append(observation_likelihood(dead, Pe_hat, sb) == F(21, 100) * eps)
        return cells

    check_all()  # warm
    elapsed = math.inf
    for _ in range(3):
        t0 = time.perf_counter()
        cells = check_all()
        elapsed = min(elapsed, time.perf_counter() - t0)
    ok = all(cells) and elapsed < 1e-3
    _report("golden-tables", ok, f"{len(cells)} cells exact, {elapsed*1e6:.0f}us")


def test_persistence_suite():
    sb = _seller_buyer_exact()
    sl = _speed_limit_exact()
    cases = [
        ("full-disclosure", sb, full_disclosure(sb)),
        ("no-disclosure", sb, no_disclosure(sb)),
        ("speed-limit-optimal", sl, bp_optimal(sl).structure),
    ]
    t0 = time.perf_counter()
    ok = True
    for alpha in (F(101, 100), F(7, 5), F(3)):
        for name, scenario, P in cases:
            res = enumerate_adoption(scenario, P, alpha, 12)
            ok = ok and all(a == 1 for a in res.adoption)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 5.0
    _report("persistence-suite", ok, f"adoption exactly 1 at depths<=12, {elapsed:.2f}s")


def test_martingale_suite():
    import random

    from persuasion import InformationStructure

    rng = random.Random(20240811)

    def random_all_revealing():
        while True:
            u = [[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)]
            if u[0][0] != u[1][0] and u[0][1] != u[1][1]:
                break
        v = [[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)]
        k = rng.randint(1, 9)
        return RationalScenario(
            ("A", "B"), ("x", "y"), (F(k, 10), F(10 - k, 10)),
            tuple(map(tuple, u)), tuple(map(tuple, v)),
        )

    def random_structure(signals):
        rows = []
        for _ in range(2):
            cells = [F(rng.randint(1, 9)) for _ in range(signals)]
            total = sum(cells)
            rows.append(tuple(c / total for c in cells))
        return InformationStructure(tuple(f"s{i}" for i in range(signals)), tuple(rows))

    t0 = time.perf_counter()
    ok = True
    for _ in range(100):
        scenario = random_all_revealing()
        signals = rng.randint(2, 4)
        P = random_structure(signals)
        ok = ok and one_step_lambda_expectation(scenario, P) == 1
        # inject a zero cell and renormalize: the mean ratio drops below one
        row = list(P.matrix[0])
        row[rng.randrange(signals)] = F(0)
        total = sum(row)
        P_zero = InformationStructure(P.signals, (tuple(c / total for c in row), P.matrix[1]))
        ok = ok and one_step_lambda_expectation(scenario, P_zero) < 1
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 1.0
    _report("martingale-suite", ok, f"100 scenarios exact, zero-cell strictly below 1, {elapsed:.2f}s")


def test_oracle_mc_agreement():
    sb_exact = _seller_buyer_exact()
    sb = _seller_buyer_float()
    P_exact = bp_optimal(sb_exact).structure
    P = bp_optimal(sb).structure
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for alpha_f, alpha_x in ((1.2, F(6, 5)), (1.39, F(139, 100)), (1.6, F(8, 5)), (2.0, F(2))):
        exact = enumerate_adoption(sb_exact, P_exact, alpha_x, 12).adoption
        cfg = SimConfig(alpha=alpha_f, delta=0.9, horizon=12, replications=REPS, seed=424242)
        curve = adoption_curve(sb, P, cfg)
        for t in range(12):
            diff = abs(curve.estimates[t] - float(exact[t]))
            se = curve.stderrs[t]
            if se == 0:
                ok = ok and diff == 0
            else:
                worst = max(worst, diff / se)
    elapsed = time.perf_counter() - t0
    ok = ok and worst <= 4.0 and elapsed < 30.0
    _report("oracle-mc-agreement", ok, f"worst deviation {worst:.2f} se (limit 4), {elapsed:.1f}s")


def test_figure_b1_replication():
    sb = _seller_buyer_float()
    P = bp_optimal(sb).structure
    cfg = SimConfig(alpha=1.39, delta=0.9, horizon=200, replications=REPS, seed=20240811)
    t0 = time.perf_counter()
    curve = adoption_curve(sb, P, cfg)
    elapsed = time.perf_counter() - t0
    terminal = curve.estimates[-1]
    ok = 0.30 <= terminal <= 0.34 and elapsed < 10.0
    _report("figure-b1", ok, f"terminal adoption {terminal:.4f} in [0.30, 0.34], {elapsed:.1f}s")


def test_figure_b2_replication():
    sb = _seller_buyer_float()
    P = bp_optimal(sb).structure
    alphas = [1.01 + 0.05 * k for k in range(40)]
    cfg = SimConfig(alpha=2.0, delta=0.9, horizon=200, replications=REPS, seed=20240811)
    t0 = time.perf_counter()
    sweep = sweep_alpha(sb, P, alphas, cfg)
    elapsed = time.perf_counter() - t0

    crossing = None
    for a, v in zip(sweep.grid, sweep.terminal_adoption):
        if v >= 0.5:
            crossing = a
            break
    monotone = all(
        sweep.terminal_adoption[i + 1]
        >= sweep.terminal_adoption[i]
        - 2 * math.hypot(sweep.terminal_adoption_stderr[i], sweep.terminal_adoption_stderr[i + 1])
        for i in range(len(sweep.grid) - 1)
    )
    ok = crossing is not None and 1.55 <= crossing <= 1.75 and monotone and elapsed < 300.0
    _report(
        "figure-b2",
        ok,
        f"0.5 crossing at alpha={crossing}, monotone within 2se: {monotone}, {elapsed:.0f}s",
    )


def test_prop3_bound():
    sb_exact = _seller_buyer_exact()
    sb = _seller_buyer_float()
    P_exact = bp_optimal(sb_exact).structure
    P = bp_optimal(sb).structure
    t0 = time.perf_counter()
    ok = True
    details = []
    for alpha_x in (F(11, 10), F(6, 5), F(13, 10), F(139, 100)):
        res = enumerate_adoption(sb_exact, P_exact, alpha_x, 50)
        ok = ok and res.adoption[-1] < F(1, 2)
        details.append(f"{alpha_x}:{float(res.adoption[-1]):.3f}")
    full_value = 0.3 / (1 - 0.95)
    for alpha in (1.1, 1.2, 1.3, 1.39):
        cfg = SimConfig(alpha=alpha, delta=0.95, horizon=200, replications=REPS, seed=31415)
        lt = lifetime_utility(sb, P, cfg)
        ok = ok and lt.plugin < full_value
        details.append(f"plugin({alpha})={lt.plugin:.3f}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    _report("prop3-bound", ok, f"oracle@50 " + " ".join(details) + f" < 6.0, {elapsed:.1f}s")


def test_epsilon_sweep_qualitative():
    sb = _seller_buyer_float()
    grid = [k / 10 for k in range(11)]
    t0 = time.perf_counter()

    cfg_low = SimConfig(alpha=1.2, delta=0.9, horizon=200, replications=REPS, seed=27182)
    low = sweep_epsilon(sb, grid, cfg_low)
    best_low = max(range(11), key=lambda i: low.period_sender_utility[i])
    gap_low = low.period_sender_utility[best_low] - low.period_sender_utility[0]
    comb_low = 3 * math.hypot(
        low.period_sender_utility_stderr[best_low], low.period_sender_utility_stderr[0]
    )
    ok = gap_low > comb_low

    cfg_high = SimConfig(alpha=2.0, delta=0.9, horizon=200, replications=REPS, seed=27182)
    high = sweep_epsilon(sb, grid, cfg_high)
    best_high = max(range(11), key=lambda i: high.period_sender_utility[i])
    gap_high = high.period_sender_utility[best_high] - high.period_sender_utility[0]
    comb_high = 3 * math.hypot(
        high.period_sender_utility_stderr[best_high], high.period_sender_utility_stderr[0]
    )
    # with a loose threshold, either nothing beats the one-shot optimum or the
    # winner sits at small epsilon (the optimum drifts back toward it)
    ok = ok and (gap_high <= comb_high or high.grid[best_high] <= 0.5)
    ok = ok and high.grid[best_high] < low.grid[best_low]
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 600.0
    _report(
        "epsilon-sweep",
        ok,
        f"alpha=1.2 best eps={low.grid[best_low]} gap={gap_low:.4f}>{comb_low:.4f}; "
        f"alpha=2 best eps={high.grid[best_high]}, {elapsed:.0f}s",
    )


def test_determinism_cli(tmp_path):
    scenario = str(SCENARIO_DIR / "seller_buyer.json")
    base = ["simulate", scenario, "--alpha", "1.39", "--horizon", "20", "--reps", "40000", "--seed", "77"]
    paths = [tmp_path / f"det{i}.csv" for i in range(3)]
    assert main(base + ["--workers", "1", "--out", str(paths[0])]) == 0
    assert main(base + ["--workers", "1", "--out", str(paths[1])]) == 0
    assert main(base + ["--workers", "2", "--out", str(paths[2])]) == 0
    same_rerun = paths[0].read_bytes() == paths[1].read_bytes()
    same_workers = paths[0].read_bytes() == paths[2].read_bytes()
    sidecars = [p.with_suffix(".json").read_bytes() for p in paths]
    same_sidecar = sidecars[0] == sidecars[1] == sidecars[2]

    sweep_base = [
        "sweep", scenario, "--param", "alpha", "--grid", "1.2:2.0:0.4",
        "--horizon", "10", "--reps", "20000", "--seed", "78",
    ]
    s1, s2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
    assert main(sweep_base + ["--workers", "1", "--out", str(s1)]) == 0
    assert main(sweep_base + ["--workers", "2", "--out", str(s2)]) == 0
    same_sweep = s1.read_bytes() == s2.read_bytes()

    ok = same_rerun and same_workers and same_sidecar and same_sweep
    _report(
        "determinism",
        ok,
        f"rerun={same_rerun} workers={same_workers} sidecar={same_sidecar} sweep={same_sweep}",
    )
