"""First-order passive unidirectional plant.

The plant is a scalar discrete-time system with two regimes: a driven
branch that applies while the input is positive, and a dissipative branch
that applies while the input is zero.  Inputs are one-way; the state can
only return toward zero through internal dissipation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PlantParams:
    """Constants of the two-branch state update.

    a and f are the state coefficients of the driven and undriven branch;
    both must lie strictly inside the unit interval in magnitude
    (passivity).  b is the input gain (strictly positive), c the output
    gain, T the sampling period in seconds.
    """

    a: float
    b: float
    c: float = 1.0
    f: float = 0.98195
    T: float = 0.1

    def __post_init__(self):
        for name in ("a", "b", "c", "f", "T"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"plant parameter {name} must be finite")
        if abs(self.a) >= 1.0:
            raise ValueError(f"|a| must be < 1 for passivity, got a={self.a}")
        if abs(self.f) >= 1.0:
            raise ValueError(f"|f| must be < 1 for passivity, got f={self.f}")
        if self.b <= 0.0:
            raise ValueError(f"input gain b must be > 0, got {self.b}")
        if self.T <= 0.0:
            raise ValueError(f"sampling period T must be > 0, got {self.T}")


@dataclass(frozen=True)
class PlantState:
    """Scalar plant state x at step index k."""

    x: float = 0.0
    k: int = 0


@dataclass(frozen=True)
class DriftSchedule:
    """Linear per-step ramp on a and b, emulating slow plant aging.

    Ramped values must stay inside the passive region; stepping outside it
    raises rather than producing a silently invalid plant.
    """

    da_per_step: float = 0.0
    db_per_step: float = 0.0
    active: bool = False


def plant_step(params: PlantParams, state: PlantState, u: float) -> PlantState:
    """Advance the plant one step under input u >= 0.

    The driven branch x' = a*x + b*u applies when u > 0; the dissipative
    branch x' = f*x applies when u == 0.  Negative or non-finite inputs are
    rejected (unidirectionality), as is a non-finite successor state.
    """
    if not math.isfinite(u):
        raise ValueError(f"plant input must be finite, got {u}")
    if u < 0.0:
        raise ValueError(f"plant input must be nonnegative, got {u}")
    if not math.isfinite(state.x):
        raise ValueError(f"plant state must be finite, got {state.x}")
    if u > 0.0:
        x_next = params.a * state.x + params.b * u
    else:
        x_next = params.f * state.x
    if not math.isfinite(x_next):
        raise ValueError(f"plant state overflowed at step {state.k}")
    return PlantState(x=x_next, k=state.k + 1)


def plant_output(params: PlantParams, state: PlantState) -> float:
    """Measured output y = c*x."""
    return params.c * state.x


def apply_drift(params: PlantParams, schedule: DriftSchedule, k: int) -> PlantParams:
    """Plant parameters at step k under a linear drift schedule.

    Returns params unchanged for an inactive schedule.  An active schedule
    ramps a and b by k times their per-step rates; the result must still be
    a valid passive plant or a ValueError is raised.
    """
    if not schedule.active:
        return params
    a = params.a + k * schedule.da_per_step
    b = params.b + k * schedule.db_per_step
    try:
        return PlantParams(a=a, b=b, c=params.c, f=params.f, T=params.T)
    except ValueError as exc:
        raise ValueError(f"drift left the passive region at step {k}: {exc}") from exc
