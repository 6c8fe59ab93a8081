from __future__ import annotations

import math

import pytest
from hypothesis import settings

from alphadim.symbolic import IncidenceMatrix

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

GOLDEN_LOG = math.log((1 + math.sqrt(5)) / 2)
LOG2 = math.log(2.0)
E1 = math.exp(-1.0)


@pytest.fixture
def full2() -> IncidenceMatrix:
    return IncidenceMatrix.full(2)


@pytest.fixture
def golden() -> IncidenceMatrix:
    return IncidenceMatrix.golden_mean()
