"""Derivative-free tuners: golden-section search and stochastic hill-climbing.

The golden-section routines shrink a bracket by the reciprocal golden
ratio each pass; the 2-D variant alternates coordinate-wise shrinks, each
coordinate probed against the other's current best.  Stochastic
hill-climbing evaluates the fixed-step neighborhood of the current point
and moves a random fraction of the way toward the best neighbor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0
_INV_PHI = 1.0 / GOLDEN_RATIO

GSS_MAX_ITER = 1_000_000
SHC_MAX_ITER = 100_000


class CostOracle:
    """Counting wrapper around a cost callable.

    Every invocation increments ``calls`` by exactly one and the returned
    cost must be finite.
    """

    def __init__(self, fn: Callable):
        self.fn = fn
        self.calls = 0

    def __call__(self, point) -> float:
        self.calls += 1
        value = float(self.fn(point))
        if not math.isfinite(value):
            raise ValueError(f"cost oracle returned non-finite value {value} at {point!r}")
        return value


@dataclass(frozen=True)
class SearchInterval:
    """Bracket [lo, hi] with a positive width tolerance."""

    lo: float
    hi: float
    tol: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.lo, self.hi, self.tol)):
            raise ValueError("interval endpoints and tolerance must be finite")
        if self.lo >= self.hi:
            raise ValueError(f"interval must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.tol <= 0.0:
            raise ValueError(f"tolerance must be > 0, got {self.tol}")


@dataclass
class HillClimbConfig:
    """Stochastic hill-climbing settings.

    step is the fixed neighborhood radius; threshold the improvement level
    below which the offline variant stops.  draw maps a generator to a
    random scale factor and defaults to uniform on [0, 1), which has the
    required positive expected value.
    """

    step: float
    threshold: float = 0.0
    max_iter: int = SHC_MAX_ITER
    draw: Optional[Callable] = None

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError(f"step size must be > 0, got {self.step}")
        if self.threshold < 0.0:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")

    def draw_scale(self, rng) -> float:
        if self.draw is not None:
            return float(self.draw(rng))
        return float(rng.random())


def golden_section_1d(
    oracle: Callable,
    interval: SearchInterval,
    *,
    max_iter: int = GSS_MAX_ITER,
    on_shrink: Optional[Callable] = None,
) -> float:
    """Minimize a unimodal scalar function over the interval.

    Returns the midpoint of the final bracket, whose width is at most the
    interval tolerance.  Each pass probes the two interior golden points
    and keeps the half bracket containing the better one (two oracle calls
    per pass; the bracket width shrinks by exactly 1/phi).  on_shrink, if
    given, receives (lo, hi) after every pass.
    """
    a, b = interval.lo, interval.hi
    delta = b - a
    iterations = 0
    while delta > interval.tol:
        iterations += 1
        if iterations > max_iter:
            raise RuntimeError(f"golden-section search exceeded {max_iter} iterations")
        low_probe = b - _INV_PHI * delta
        high_probe = a + _INV_PHI * delta
        if oracle(low_probe) < oracle(high_probe):
            b = high_probe
        else:
            a = low_probe
        delta = b - a
        if on_shrink is not None:
            on_shrink(a, b)
    return (a + b) / 2.0


def golden_section_2d(
    oracle: Callable,
    x_interval: SearchInterval,
    y_interval: SearchInterval,
    *,
    max_iter: int = GSS_MAX_ITER,
    on_shrink: Optional[Callable] = None,
) -> tuple:
    """Minimize a 2-D function by alternating coordinate-wise golden shrinks.

    The x bracket is probed against the current best y and vice versa; the
    better probe of each pair becomes the coordinate's current best.  Both
    current bests start at the bracket midpoints, so an already-converged
    bracket returns the midpoints without any oracle call.  Stops once both
    bracket widths are within their tolerances and returns (x_best, y_best).
    """
    xa, xb = x_interval.lo, x_interval.hi
    ya, yb = y_interval.lo, y_interval.hi
    x_best = (xa + xb) / 2.0
    y_best = (ya + yb) / 2.0
    dx = xb - xa
    dy = yb - ya
    iterations = 0
    while dx > x_interval.tol or dy > y_interval.tol:
        iterations += 1
        if iterations > max_iter:
            raise RuntimeError(f"golden-section search exceeded {max_iter} iterations")
        if dx > x_interval.tol:
            low_probe = xb - _INV_PHI * dx
            high_probe = xa + _INV_PHI * dx
            if oracle((low_probe, y_best)) < oracle((high_probe, y_best)):
                xb, x_best = high_probe, low_probe
            else:
                xa, x_best = low_probe, high_probe
        if dy > y_interval.tol:
            low_probe = yb - _INV_PHI * dy
            high_probe = ya + _INV_PHI * dy
            if oracle((x_best, low_probe)) < oracle((x_best, high_probe)):
                yb, y_best = high_probe, low_probe
            else:
                ya, y_best = low_probe, high_probe
        dx = xb - xa
        dy = yb - ya
        if on_shrink is not None:
            on_shrink((xa, xb), (ya, yb))
    return (x_best, y_best)


def shc_neighbors(point, step: float) -> list:
    """The 2n fixed-step neighbors of an n-dimensional point.

    Scalar points get [x + s, x - s]; sequences get one +/- step along each
    axis, ordered (+e1, -e1, +e2, -e2, ...).
    """
    if step <= 0.0:
        raise ValueError(f"step size must be > 0, got {step}")
    if isinstance(point, (int, float)):
        return [point + step, point - step]
    coords = tuple(float(v) for v in point)
    neighbors = []
    for i in range(len(coords)):
        for sign in (+1.0, -1.0):
            shifted = list(coords)
            shifted[i] += sign * step
            neighbors.append(tuple(shifted))
    return neighbors


def _as_coords(point) -> tuple:
    if isinstance(point, (int, float)):
        return (float(point),)
    return tuple(float(v) for v in point)


def _like(point, coords: tuple):
    if isinstance(point, (int, float)):
        return coords[0]
    return coords


def shc_offline(
    oracle: Callable,
    start,
    cfg: HillClimbConfig,
    rng,
    *,
    maximize: bool = False,
) -> object:
    """Iterated stochastic hill-climbing until no neighbor improves enough.

    Each iteration scores the current point and its 2n neighbors, takes the
    improvement of the best over the current as the stopping measure, and
    moves a random fraction of the way toward the best.  Minimizes by
    default; pass maximize=True for the ascent form.
    """
    sign = 1.0 if maximize else -1.0
    x = start
    delta = math.inf
    iterations = 0
    while delta > cfg.threshold:
        iterations += 1
        if iterations > cfg.max_iter:
            raise RuntimeError(f"hill-climbing exceeded {cfg.max_iter} iterations")
        current_value = sign * oracle(x)
        best, best_value = x, current_value
        for neighbor in shc_neighbors(x, cfg.step):
            value = sign * oracle(neighbor)
            if value > best_value:
                best, best_value = neighbor, value
        delta = best_value - current_value
        scale = cfg.draw_scale(rng)
        xc = _as_coords(x)
        bc = _as_coords(best)
        x = _like(x, tuple(xi + scale * (bi - xi) for xi, bi in zip(xc, bc)))
    return x


def shc_online_step(
    oracle: Callable,
    current,
    cfg: HillClimbConfig,
    rng,
    *,
    maximize: bool = False,
) -> object:
    """One online hill-climbing update from fresh evaluations.

    Scores the current point and all 2n neighbors (exactly 2n + 1 oracle
    calls), then returns current plus a random fraction of the step toward
    the best of them.  If the current point is already best the step is
    zero and the point is returned unchanged.
    """
    sign = 1.0 if maximize else -1.0
    best, best_value = current, sign * oracle(current)
    for neighbor in shc_neighbors(current, cfg.step):
        value = sign * oracle(neighbor)
        if value > best_value:
            best, best_value = neighbor, value
    scale = cfg.draw_scale(rng)
    cc = _as_coords(current)
    bc = _as_coords(best)
    return _like(current, tuple(ci + scale * (bi - ci) for ci, bi in zip(cc, bc)))
