"""Shared fixtures: the two reference coverings and their frozen matrices."""

from __future__ import annotations

import pytest

import covrough as cr

FOUR_TEXT = """\
universe: x1 x2 x3 x4
block C1: x1 x4
block C2: x1 x2 x4
block C3: x3 x4
"""

SIX_TEXT = """\
universe: x1 x2 x3 x4 x5 x6
block C1: x1 x2
block C2: x3 x4 x5 x6
block C3: x1 x2 x5 x6
"""

GAMMA4 = [
    [1, 1, 0, 1],
    [1, 1, 0, 1],
    [0, 0, 1, 1],
    [1, 1, 1, 1],
]

PI4 = [
    [1, 0, 0, 1],
    [1, 1, 0, 1],
    [0, 0, 1, 1],
    [0, 0, 0, 1],
]

GAMMA6 = [
    [1, 1, 0, 0, 1, 1],
    [1, 1, 0, 0, 1, 1],
    [0, 0, 1, 1, 1, 1],
    [0, 0, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1],
]


@pytest.fixture
def four_family() -> cr.BlockFamily:
    return cr.parse_family(FOUR_TEXT)[1]


@pytest.fixture
def four_cache(four_family) -> cr.CharCache:
    return cr.build_cache(four_family)


@pytest.fixture
def six_family() -> cr.BlockFamily:
    return cr.parse_family(SIX_TEXT)[1]


@pytest.fixture
def six_cache(six_family) -> cr.CharCache:
    return cr.build_cache(six_family)


def labels(objset: cr.ObjectSet) -> tuple[str, ...]:
    return objset.labels()


def oset(family: cr.BlockFamily, *names: str) -> cr.ObjectSet:
    return cr.ObjectSet.from_labels(family.universe, names)
