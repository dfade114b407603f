"""Command-line client for the persuasion service.

The CLI parses scenario files, forwards requests to the FastAPI app through
an in-process ASGI transport (no network), and writes the CSV/JSON result
files. Every numeric read from a scenario file is forwarded as a string so
the exact-oracle path never sees float round-off.

Exit codes: 0 success, 2 parse/argument/io errors, 3 enumeration budget
exceeded, 1 anything else. Errors print a single machine-parsable line
"category: message" on stderr.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path

import httpx

from .scenario_io import (
    ScenarioFileError,
    format_sig12,
    load_document,
    write_csv,
    write_json,
)
from .service.app import app

_EXIT_CODES = {
    "parse-error": 2,
    "invalid-scenario": 2,
    "invalid-argument": 2,
    "io-error": 2,
    "budget-exceeded": 3,
    "internal": 1,
}


def _emit_error(category: str, message: str) -> int:
    sys.stderr.write(f"{category}: {message}\n")
    return _EXIT_CODES.get(category, 1)


async def _post_async(path: str, payload: dict) -> httpx.Response:
    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://persuasion.internal", timeout=None
    ) as client:
        return await client.post(path, json=payload)


def _post(path: str, payload: dict) -> httpx.Response:
    return asyncio.run(_post_async(path, payload))


def _failure(resp: httpx.Response) -> int:
    try:
        body = resp.json()
    except json.JSONDecodeError:
        return _emit_error("internal", f"service returned status {resp.status_code}")
    if "category" in body:
        return _emit_error(body["category"], body["message"])
    # pydantic validation errors arrive as {"detail": [...]}
    detail = body.get("detail")
    if isinstance(detail, list) and detail:
        first = detail[0]
        loc = ".".join(str(p) for p in first.get("loc", []))
        return _emit_error("invalid-argument", f"{loc}: {first.get('msg', 'invalid value')}")
    return _emit_error("internal", f"service returned status {resp.status_code}")


def _resolve_workers(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("PERSUASION_WORKERS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"PERSUASION_WORKERS must be an integer, got {env!r}") from None
    return 1


def _parse_grid(text: str) -> list:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("grid must be start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"grid bounds must be numbers, got {text!r}") from None
    if step <= 0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("grid stop must not precede start")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-9:
            break
        values.append(v)
        k += 1
    return values


def _sidecar_path(out: str) -> Path:
    return Path(out).with_suffix(".json")


def cmd_simulate(args) -> int:
    doc = load_document(args.scenario)
    payload = {
        "scenario": doc,
        "alpha": args.alpha,
        "delta": args.delta,
        "horizon": args.horizon,
        "replications": args.reps,
        "seed": args.seed,
        "mode": args.mode,
        "workers": _resolve_workers(args.workers),
    }
    resp = _post("/simulate", payload)
    if resp.status_code != 200:
        return _failure(resp)
    body = resp.json()
    rows = [
        (
            str(r["t"]),
            format_sig12(r["adoption_estimate"]),
            format_sig12(r["adoption_stderr"]),
            format_sig12(r["period_sender_utility_estimate"]),
        )
        for r in body["rows"]
    ]
    write_csv(
        args.out,
        ("t", "adoption_estimate", "adoption_stderr", "period_sender_utility_estimate"),
        rows,
    )
    sidecar = {
        "alpha": args.alpha,
        "delta": args.delta,
        "horizon": args.horizon,
        "replications": args.reps,
        "seed": args.seed,
        "mode": args.mode,
        "lifetime_utility": body["lifetime"],
    }
    write_json(_sidecar_path(args.out), sidecar)
    return 0


def cmd_oracle(args) -> int:
    doc = load_document(args.scenario)
    payload = {
        "scenario": doc,
        "alpha": args.alpha,
        "horizon": args.horizon,
        "mode": args.mode,
        "node_budget": args.budget,
    }
    resp = _post("/oracle", payload)
    if resp.status_code != 200:
        return _failure(resp)
    rows = [
        (str(r["t"]), r["adoption_exact"], r["sender_utility_exact"])
        for r in resp.json()["rows"]
    ]
    write_csv(args.out, ("t", "adoption_exact", "sender_utility_exact"), rows)
    return 0


def cmd_solve(args) -> int:
    doc = load_document(args.scenario)
    resp = _post("/solve", {"scenario": doc})
    if resp.status_code != 200:
        return _failure(resp)
    report = resp.json()
    if args.out:
        write_json(args.out, report)
    else:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


def cmd_sweep(args) -> int:
    doc = load_document(args.scenario)
    payload = {
        "scenario": doc,
        "param": args.param,
        "grid": _parse_grid(args.grid),
        "alpha": args.alpha,
        "delta": args.delta,
        "horizon": args.horizon,
        "replications": args.reps,
        "seed": args.seed,
        "mode": args.mode,
        "workers": _resolve_workers(args.workers),
    }
    resp = _post("/sweep", payload)
    if resp.status_code != 200:
        return _failure(resp)
    rows = [
        (
            format_sig12(r["param_value"]),
            format_sig12(r["terminal_adoption"]),
            format_sig12(r["terminal_adoption_stderr"]),
            format_sig12(r["period_sender_utility"]),
            format_sig12(r["period_sender_utility_stderr"]),
        )
        for r in resp.json()["rows"]
    ]
    write_csv(
        args.out,
        (
            "param_value",
            "terminal_adoption",
            "terminal_adoption_stderr",
            "period_sender_utility",
            "period_sender_utility_stderr",
        ),
        rows,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="persuasion",
        description="Simulate, enumerate, and design long-run persuasion structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo adoption curve and lifetime utility")
    sim.add_argument("scenario")
    sim.add_argument("--alpha", type=float, required=True, help="switching threshold (> 1)")
    sim.add_argument("--delta", type=float, default=0.9, help="discount factor in (0,1)")
    sim.add_argument("--horizon", type=int, default=200)
    sim.add_argument("--reps", type=int, default=100_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--mode", choices=("strict", "weak"), default="strict")
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument("--out", required=True, help="CSV output path (JSON sidecar written next to it)")
    sim.set_defaults(func=cmd_simulate)

    orc = sub.add_parser("oracle", help="exact adoption probabilities by enumeration")
    orc.add_argument("scenario")
    orc.add_argument("--alpha", required=True, help="threshold; rationals like 139/100 stay exact")
    orc.add_argument("--horizon", type=int, default=12)
    orc.add_argument("--mode", choices=("strict", "weak"), default="strict")
    orc.add_argument("--budget", type=int, default=10_000_000, help="node expansion budget")
    orc.add_argument("--out", required=True)
    orc.set_defaults(func=cmd_oracle)

    sol = sub.add_parser("solve", help="one-shot optimal structure and persistence verdict")
    sol.add_argument("scenario")
    sol.add_argument("--out", default=None, help="JSON report path (stdout when omitted)")
    sol.set_defaults(func=cmd_solve)

    swp = sub.add_parser("sweep", help="threshold or epsilon parameter sweep")
    swp.add_argument("scenario")
    swp.add_argument("--param", choices=("alpha", "epsilon"), required=True)
    swp.add_argument("--grid", required=True, help="start:stop:step, inclusive endpoints")
    swp.add_argument("--alpha", type=float, default=None, help="threshold for epsilon sweeps")
    swp.add_argument("--delta", type=float, default=0.9)
    swp.add_argument("--horizon", type=int, default=200)
    swp.add_argument("--reps", type=int, default=100_000)
    swp.add_argument("--seed", type=int, default=0)
    swp.add_argument("--mode", choices=("strict", "weak"), default="strict")
    swp.add_argument("--workers", type=int, default=None)
    swp.add_argument("--out", required=True)
    swp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioFileError as exc:
        return _emit_error("parse-error", str(exc))
    except ValueError as exc:
        return _emit_error("invalid-argument", str(exc))
    except OSError as exc:
        return _emit_error("io-error", str(exc))


if __name__ == "__main__":
    sys.exit(main())
