"""Scenario file parsing and result serialization.

Scenario documents are UTF-8 JSON. Numeric fields accept plain numbers,
decimal strings, or rational strings like "3/7"; files are loaded with
parse_float=str so decimal literals survive as exact rationals for the
enumeration oracle. Result files are CSV with a header row, LF line endings
and 12-significant-digit decimals.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .model import InformationStructure, Scenario, ScenarioError
from .oracle import RationalScenario
from .solver import bp_optimal, epsilon_structure, full_disclosure, no_disclosure


class ScenarioFileError(ValueError):
    """A scenario document failed to parse or validate."""


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ScenarioFileError(f"boolean is not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ScenarioFileError(f"cannot parse rational {value!r}: {exc}") from None
    if isinstance(value, float):
        # Round-trip through the shortest decimal repr; exact for values that
        # were written as short decimals, documented as approximate otherwise.
        return Fraction(repr(value))
    raise ScenarioFileError(f"cannot interpret {value!r} as a number")


def load_document(path) -> dict:
    """Read a scenario JSON file, keeping decimal literals exact."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ScenarioFileError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ScenarioFileError(f"{path}: top level must be a JSON object")
    return doc


def _require(doc: dict, key: str):
    if key not in doc:
        raise ScenarioFileError(f"missing required key {key!r}")
    return doc[key]


def rational_scenario_from_document(doc: dict) -> RationalScenario:
    states = tuple(_require(doc, "states"))
    actions = tuple(_require(doc, "actions"))
    prior = tuple(to_fraction(x) for x in _require(doc, "prior"))
    receiver = tuple(tuple(to_fraction(x) for x in row) for row in _require(doc, "receiver_utility"))
    sender = tuple(tuple(to_fraction(x) for x in row) for row in _require(doc, "sender_utility"))
    try:
        return RationalScenario(states, actions, prior, receiver, sender)
    except ScenarioError as exc:
        raise ScenarioFileError(str(exc)) from None


def scenario_from_document(doc: dict) -> Scenario:
    rational = rational_scenario_from_document(doc)
    return Scenario(
        rational.states,
        rational.actions,
        tuple(float(x) for x in rational.prior),
        tuple(tuple(float(x) for x in row) for row in rational.receiver_utility),
        tuple(tuple(float(x) for x in row) for row in rational.sender_utility),
    )


def structure_from_document(doc: dict, scenario, exact: bool = False) -> InformationStructure:
    """Resolve the structure block / structure_kind of a scenario document.

    Defaults to the explicit structure when one is present, otherwise to the
    one-shot optimal structure for the scenario.
    """
    kind = doc.get("structure_kind")
    block = doc.get("structure")
    if kind is None:
        kind = "explicit" if block is not None else "bp_optimal"

    if kind == "explicit":
        if block is None:
            raise ScenarioFileError("structure_kind 'explicit' requires a structure block")
        signals = tuple(_require(block, "signals"))
        raw = _require(block, "matrix")
        if exact:
            matrix = tuple(tuple(to_fraction(x) for x in row) for row in raw)
        else:
            matrix = tuple(tuple(float(to_fraction(x)) for x in row) for row in raw)
        try:
            return InformationStructure(signals, matrix)
        except ScenarioError as exc:
            raise ScenarioFileError(str(exc)) from None
    if kind == "bp_optimal":
        return bp_optimal(scenario).structure
    if kind == "full":
        return full_disclosure(scenario)
    if kind == "none":
        return no_disclosure(scenario)
    if isinstance(kind, str) and kind.startswith("epsilon:"):
        eps_text = kind.split(":", 1)[1]
        eps = to_fraction(eps_text) if exact else float(to_fraction(eps_text))
        try:
            return epsilon_structure(scenario, eps)
        except ScenarioError as exc:
            raise ScenarioFileError(str(exc)) from None
    raise ScenarioFileError(f"unknown structure_kind {kind!r}")


def format_sig12(x: float) -> str:
    """12 significant digits, the CSV number format."""
    return f"{float(x):.12g}"


def format_exact12(x: Fraction) -> str:
    """Exact rational rendered to 12 decimal places (round half to even)."""
    scaled = Fraction(x) * 10**12
    n = round(scaled)
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // 10**12}.{n % 10**12:012d}"


def write_csv(path, header, rows) -> None:
    """Write rows of already-formatted strings as CSV with LF endings."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_json(path, payload) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
