import numpy as np
import pytest

from unireg import PlantParams


@pytest.fixture
def bench_plant() -> PlantParams:
    """The benchmark actuator constants used across the simulation studies."""
    return PlantParams(a=0.98195, b=0.00042345, c=1.0, f=0.98195, T=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


class ScriptedRng:
    """Generator stub yielding a fixed sequence of uniform draws."""

    def __init__(self, values):
        self.values = list(values)

    def random(self) -> float:
        return self.values.pop(0)


@pytest.fixture
def scripted():
    return ScriptedRng
