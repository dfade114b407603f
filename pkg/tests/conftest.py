import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from persuasion import Scenario
from persuasion.oracle import RationalScenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def seller_buyer() -> Scenario:
    # product seller vs. buyer: buying pays the seller either way, the buyer
    # only in the good state; not buying reveals nothing
    return Scenario(
        states=("H", "L"),
        actions=("B", "NB"),
        prior=(0.3, 0.7),
        receiver_utility=((1, 0), (-1, 0)),
        sender_utility=((1, 0), (1, 0)),
    )


@pytest.fixture
def seller_buyer_exact() -> RationalScenario:
    return RationalScenario(
        states=("H", "L"),
        actions=("B", "NB"),
        prior=(F(3, 10), F(7, 10)),
        receiver_utility=((1, 0), (-1, 0)),
        sender_utility=((1, 0), (1, 0)),
    )


@pytest.fixture
def speed_limit() -> Scenario:
    # enforcement authority vs. driver: the authority wants no speeding in
    # both states; speeding is the revealing action
    return Scenario(
        states=("E", "NE"),
        actions=("S", "NS"),
        prior=(0.3, 0.7),
        receiver_utility=((-1, 0), (1, 0)),
        sender_utility=((0, 1), (0, 1)),
    )


@pytest.fixture
def speed_limit_exact() -> RationalScenario:
    return RationalScenario(
        states=("E", "NE"),
        actions=("S", "NS"),
        prior=(F(3, 10), F(7, 10)),
        receiver_utility=((-1, 0), (1, 0)),
        sender_utility=((0, 1), (0, 1)),
    )


@pytest.fixture
def all_revealing_exact() -> RationalScenario:
    # both actions pay state-dependently, so every observation reveals the state
    return RationalScenario(
        states=("H", "L"),
        actions=("B", "NB"),
        prior=(F(3, 10), F(7, 10)),
        receiver_utility=((1, 0), (-1, 2)),
        sender_utility=((1, 0), (1, 0)),
    )
