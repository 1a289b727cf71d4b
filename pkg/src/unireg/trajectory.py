"""Deterministic reference-signal generators.

Five families: rectangular pulse, versine wave, random steps, random-
amplitude versine, and arbitrary sample lists.  Every generator is a pure
function of (spec, k); the random kinds derive each segment amplitude from
the seed and segment index alone, so a sequence never depends on how many
samples were drawn before it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

KINDS = ("rectangular", "versine", "random-steps", "random-versine", "arbitrary")


@dataclass(frozen=True)
class TrajectorySpec:
    """Description of one reference signal.

    period is the cycle (or segment) duration in seconds, sample_period the
    sampling interval, amplitude the scale of the signal.  seed drives the
    random kinds; samples holds the data for the arbitrary kind.  With
    normalize=True the versine forms peak at amplitude instead of the raw
    1 - cos peak of twice the amplitude.
    """

    kind: str
    period: float = 100.0
    amplitude: float = 1.0
    sample_period: float = 0.1
    seed: int = 0
    samples: tuple = ()
    normalize: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        if self.period <= 0.0 or self.sample_period <= 0.0:
            raise ValueError("period and sample_period must be > 0")
        if self.amplitude < 0.0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        object.__setattr__(self, "samples", tuple(float(s) for s in self.samples))
        if self.kind == "arbitrary":
            if len(self.samples) == 0:
                raise ValueError("arbitrary trajectory needs at least one sample")
            if not all(math.isfinite(s) for s in self.samples):
                raise ValueError("arbitrary trajectory samples must be finite")


def period_steps(spec: TrajectorySpec) -> int:
    """Number of samples per period (or per segment for the random kinds)."""
    if spec.kind == "arbitrary":
        return len(spec.samples)
    return max(1, round(spec.period / spec.sample_period))


def peak_reference(spec: TrajectorySpec) -> float:
    """Upper bound on |r(k)| over all k, used to scale divergence guards."""
    if spec.kind == "arbitrary":
        return max(abs(s) for s in spec.samples)
    if spec.kind in ("versine", "random-versine") and not spec.normalize:
        return 2.0 * spec.amplitude
    return spec.amplitude


def _cycle_frac(spec: TrajectorySpec, k: int) -> float:
    # Exact modular arithmetic when the period is an integer number of
    # samples, so periodicity holds bit-for-bit.
    steps = spec.period / spec.sample_period
    n = round(steps)
    if n > 0 and abs(steps - n) < 1e-9 * steps:
        return (k % n) / n
    return math.fmod(k * spec.sample_period / spec.period, 1.0)


def _segment_index(spec: TrajectorySpec, k: int) -> int:
    steps = spec.period / spec.sample_period
    n = round(steps)
    if n > 0 and abs(steps - n) < 1e-9 * steps:
        return k // n
    return int(k * spec.sample_period // spec.period)


@lru_cache(maxsize=8192)
def _segment_unit(seed: int, n: int) -> float:
    # Pure function of (seed, segment); uniform on [0, 1).
    return float(np.random.default_rng([seed, n]).random())


def rectangular(spec: TrajectorySpec, k: int) -> float:
    """Rectangular pulse: amplitude while sin(2*pi*k*T/period) > 0, else 0.

    Implemented on the cycle fraction directly, which is the exact step
    semantics with the convention that the step function is 0 at 0: the
    signal is high for fractions strictly inside (0, 1/2).
    """
    if spec.kind != "rectangular":
        raise ValueError(f"spec kind is {spec.kind!r}, not rectangular")
    frac = _cycle_frac(spec, k)
    return spec.amplitude if 0.0 < frac < 0.5 else 0.0


def versine(spec: TrajectorySpec, k: int) -> float:
    """Versine wave amplitude*(1 - cos(2*pi*k*T/period)), halved if normalized."""
    if spec.kind != "versine":
        raise ValueError(f"spec kind is {spec.kind!r}, not versine")
    v = 1.0 - math.cos(2.0 * math.pi * _cycle_frac(spec, k))
    return spec.amplitude * v * (0.5 if spec.normalize else 1.0)


def random_steps(spec: TrajectorySpec, k: int) -> float:
    """Piecewise-constant signal; segment n holds a seeded uniform draw.

    The value switches to the new segment's draw exactly at the boundary
    step k = n*period/T.
    """
    if spec.kind != "random-steps":
        raise ValueError(f"spec kind is {spec.kind!r}, not random-steps")
    n = _segment_index(spec, k)
    return spec.amplitude * _segment_unit(spec.seed, n)


def random_versine(spec: TrajectorySpec, k: int) -> float:
    """Versine with a fresh seeded amplitude each segment; zero at boundaries."""
    if spec.kind != "random-versine":
        raise ValueError(f"spec kind is {spec.kind!r}, not random-versine")
    n = _segment_index(spec, k)
    rho = spec.amplitude * _segment_unit(spec.seed, n)
    v = 1.0 - math.cos(2.0 * math.pi * _cycle_frac(spec, k))
    return rho * v * (0.5 if spec.normalize else 1.0)


def arbitrary(spec: TrajectorySpec, k: int) -> float:
    """Sample-list lookup, holding the final value past the end."""
    if spec.kind != "arbitrary":
        raise ValueError(f"spec kind is {spec.kind!r}, not arbitrary")
    if k < 0:
        raise ValueError(f"step index must be nonnegative, got {k}")
    return spec.samples[min(k, len(spec.samples) - 1)]


_SAMPLERS = {
    "rectangular": rectangular,
    "versine": versine,
    "random-steps": random_steps,
    "random-versine": random_versine,
    "arbitrary": arbitrary,
}


def sample(spec: TrajectorySpec, k: int) -> float:
    """Reference value at step k for any trajectory kind."""
    return _SAMPLERS[spec.kind](spec, k)


def series(spec: TrajectorySpec, n: int) -> list:
    """The first n reference samples as a list."""
    fn = _SAMPLERS[spec.kind]
    return [fn(spec, k) for k in range(n)]
