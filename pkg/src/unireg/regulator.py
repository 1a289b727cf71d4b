"""Clamped state-feedback regulating law and its stability region.

The law is u = K*e + (N - K)*r while the error is positive and zero
otherwise, with both gains nonnegative.  The feedforward offset N - K
controls the steady state; setting it to (1 - a)/b cancels the regulation
error for a known plant.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass

from .plant import PlantParams


@dataclass(frozen=True)
class RegulatorGains:
    """Feedback gain K and feedforward gain N, both nonnegative.

    N >= K is required by default (passive regulator).  Search procedures
    that probe the full nonnegative quadrant construct candidates through
    :meth:`from_point`, which skips the ordering requirement; the clamped
    control law remains well defined either way.
    """

    K: float
    N: float
    require_order: InitVar[bool] = True

    def __post_init__(self, require_order: bool):
        if not (math.isfinite(self.K) and math.isfinite(self.N)):
            raise ValueError(f"gains must be finite, got K={self.K}, N={self.N}")
        if self.K < 0.0 or self.N < 0.0:
            raise ValueError(f"gains must be nonnegative, got K={self.K}, N={self.N}")
        if require_order and self.N < self.K:
            raise ValueError(f"expected N >= K, got K={self.K}, N={self.N}")

    @classmethod
    def from_point(cls, point) -> "RegulatorGains":
        """Gains from a raw 2-D search point, clamped to the admissible domain."""
        k, n = point
        return cls(max(float(k), 0.0), max(float(n), 0.0), require_order=False)


@dataclass(frozen=True)
class GainBounds:
    """Per-gain search intervals [k_lo, k_hi] and [n_lo, n_hi]."""

    k_lo: float
    k_hi: float
    n_lo: float
    n_hi: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.k_lo, self.k_hi, self.n_lo, self.n_hi)):
            raise ValueError("gain bounds must be finite")
        if min(self.k_lo, self.n_lo) < 0.0:
            raise ValueError("gain bounds must be nonnegative")
        if self.k_lo > self.k_hi or self.n_lo > self.n_hi:
            raise ValueError("gain bounds must be ordered lo <= hi")


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of the closed-loop stability region check.

    contraction_ok:  |a - b*K| < 1
    gain_in_region:  0 < K < (1 + a)/b
    ordered:         0 < K <= N < inf
    """

    contraction_ok: bool
    gain_in_region: bool
    ordered: bool
    contraction: float
    k_limit: float

    @property
    def passed(self) -> bool:
        return self.contraction_ok and self.gain_in_region and self.ordered


def control_output(gains: RegulatorGains, e: float, r: float) -> float:
    """Regulator output for error e and reference r.

    Returns K*e + (N - K)*r when e > 0 and zero otherwise.  The result is
    clamped at zero from below: the plant only accepts one-way commands, so
    a negative value (possible when r < 0) is never emitted.
    """
    if not (math.isfinite(e) and math.isfinite(r)):
        raise ValueError(f"error and reference must be finite, got e={e}, r={r}")
    if e <= 0.0:
        return 0.0
    u = gains.K * e + (gains.N - gains.K) * r
    return u if u > 0.0 else 0.0


def feedforward_offset(params: PlantParams) -> float:
    """The N - K offset (1 - a)/b that cancels steady-state error."""
    if params.b <= 0.0:
        raise ValueError(f"input gain b must be > 0, got {params.b}")
    return (1.0 - params.a) / params.b


def stability_check(params: PlantParams, gains: RegulatorGains) -> StabilityVerdict:
    """Check the gains against the closed-loop stability region."""
    contraction = params.a - params.b * gains.K
    k_limit = (1.0 + params.a) / params.b
    return StabilityVerdict(
        contraction_ok=abs(contraction) < 1.0,
        gain_in_region=0.0 < gains.K < k_limit,
        ordered=0.0 < gains.K <= gains.N < math.inf,
        contraction=contraction,
        k_limit=k_limit,
    )


def bounds_from_uncertainty(a_lo: float, a_hi: float, b_lo: float, b_hi: float) -> GainBounds:
    """Worst-case gain intervals from interval estimates of a and b.

    The K interval is [0, (1 + a_lo)/b_hi], the tightest stability bound
    over the parameter box.  The N interval is the K interval shifted up by
    the extreme feedforward offsets [(1 - a_hi)/b_hi, (1 - a_lo)/b_lo].
    """
    if not all(math.isfinite(v) for v in (a_lo, a_hi, b_lo, b_hi)):
        raise ValueError("parameter intervals must be finite")
    if a_lo > a_hi or b_lo > b_hi:
        raise ValueError("parameter intervals must be ordered lo <= hi")
    if not (-1.0 < a_lo and a_hi < 1.0):
        raise ValueError(f"a interval must lie in (-1, 1), got [{a_lo}, {a_hi}]")
    if b_lo <= 0.0:
        raise ValueError(f"b interval must be positive, got [{b_lo}, {b_hi}]")
    k_hi = (1.0 + a_lo) / b_hi
    off_lo = (1.0 - a_hi) / b_hi
    off_hi = (1.0 - a_lo) / b_lo
    return GainBounds(k_lo=0.0, k_hi=k_hi, n_lo=off_lo, n_hi=k_hi + off_hi)
