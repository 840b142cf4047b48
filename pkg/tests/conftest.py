"""Shared fixtures: the standard piecewise functions and small helpers."""

import random

import mpmath
import pytest

from constants import FUNCTIONS_DIR
from exactnum import PiPoly
from expression import parse_pipoly
from piecewise import load_function


@pytest.fixture
def load():
    """Load a function file from resources/functions by stem."""
    def _load(name: str):
        return load_function(FUNCTIONS_DIR / f"{name}.json")
    return _load


@pytest.fixture
def pipoly():
    return parse_pipoly


@pytest.fixture
def pi() -> PiPoly:
    return PiPoly.pi()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)


@pytest.fixture(autouse=True)
def _mp_precision():
    with mpmath.workdps(30):
        yield
