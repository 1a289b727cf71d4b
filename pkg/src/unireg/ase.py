"""Buffer-gated stochastic gain adaptation.

Two FIFO buffers slide over the recent (reference, error) samples of the
closed loop.  Once full, an eligibility cascade either rejects the window
(sliding one sample) or authorizes a stochastic update of exactly one gain
with a branch-specific direction and step size, flushing both buffers.
The cascade only ever raises a gain when every buffered error sits above
the threshold and the reconstructed input profile is not peaky, which is
what keeps the adapted gains inside the stable region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .regulator import RegulatorGains

# Branch tags, in cascade order.  Reject branches drop the oldest sample
# from each buffer; decision branches flush both and carry one eligibility.
BRANCH_NOT_FULL = "not-full"
BRANCH_REJECT_NEGATIVE_REFERENCE = "reject-negative-reference"
BRANCH_REJECT_NOT_ASCENDING = "reject-reference-not-ascending"
BRANCH_REJECT_HALF_ZERO = "reject-reference-half-zero"
BRANCH_REJECT_INPUT_NEGATIVE = "reject-first-input-negative"
BRANCH_REJECT_ERROR_HEAD = "reject-error-head-nonpositive"
BRANCH_REJECT_ERROR_SMALL = "reject-error-below-threshold"
BRANCH_LOWER_N_ALL_NEGATIVE = "lower-n-all-errors-negative"
BRANCH_LOWER_K_SIGN_FLIP = "lower-k-error-turned-negative"
BRANCH_LOWER_K_PEAKY = "lower-k-peaky-input"
BRANCH_RAISE_K = "raise-k-priority"
BRANCH_RAISE_N = "raise-n-priority"

REJECT_BRANCHES = (
    BRANCH_REJECT_NEGATIVE_REFERENCE,
    BRANCH_REJECT_NOT_ASCENDING,
    BRANCH_REJECT_HALF_ZERO,
    BRANCH_REJECT_INPUT_NEGATIVE,
    BRANCH_REJECT_ERROR_HEAD,
    BRANCH_REJECT_ERROR_SMALL,
)
DECISION_BRANCHES = (
    BRANCH_LOWER_N_ALL_NEGATIVE,
    BRANCH_LOWER_K_SIGN_FLIP,
    BRANCH_LOWER_K_PEAKY,
    BRANCH_RAISE_K,
    BRANCH_RAISE_N,
)

OMEGA_VARIANTS = ("mean-diff", "max-diff")


@dataclass(frozen=True)
class AseConfig:
    """Gate hyperparameters.

    beta1..beta3 size the corrective (downward) gain steps, beta4/beta5 the
    exploratory (upward) ones.  gamma bounds the peak-to-mean ratio of the
    reconstructed input window, epsilon is the error threshold below which
    nothing is learned, rho weights the priority draw that arbitrates
    between raising K and raising N.  capacity is the buffer length.
    """

    beta1: float = 2.0
    beta2: float = 2.0
    beta3: float = 2.0
    beta4: float = 5.0
    beta5: float = 10.0
    gamma: float = 1.1
    epsilon: float = 0.01
    rho: float = 0.02
    capacity: int = 10
    omega_variant: str = "mean-diff"

    def __post_init__(self):
        for name in ("beta1", "beta2", "beta3", "beta4", "beta5"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0")
        if self.gamma <= 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.rho <= 0.0:
            raise ValueError(f"rho must be > 0, got {self.rho}")
        if self.capacity < 4:
            raise ValueError(f"buffer capacity must be >= 4, got {self.capacity}")
        if self.omega_variant not in OMEGA_VARIANTS:
            raise ValueError(f"unknown omega variant {self.omega_variant!r}")


@dataclass(frozen=True)
class AseBuffers:
    """Paired FIFO windows of reference and error samples, oldest first."""

    references: tuple = ()
    errors: tuple = ()
    capacity: int = 10

    def __post_init__(self):
        if len(self.references) != len(self.errors):
            raise ValueError("reference and error buffers must stay paired")
        if len(self.references) > self.capacity:
            raise ValueError("buffers exceed capacity")

    @property
    def size(self) -> int:
        return len(self.references)

    @property
    def is_full(self) -> bool:
        return len(self.references) == self.capacity


@dataclass(frozen=True)
class AseDecision:
    """Gate outcome: at most one eligible gain, with direction and step.

    branch names the cascade exit taken; omega and xi record the priority
    measure and its uniform draw when the cascade reached them.
    """

    eligible_k: int = 0
    eligible_n: int = 0
    direction_k: int = 0
    direction_n: int = 0
    step_k: float = 0.0
    step_n: float = 0.0
    branch: str = BRANCH_NOT_FULL
    omega: Optional[float] = None
    xi: Optional[float] = None

    def __post_init__(self):
        if self.eligible_k + self.eligible_n > 1:
            raise ValueError("at most one gain may be eligible per decision")
        if not self.eligible_k and (self.direction_k != 0 or self.step_k != 0.0):
            raise ValueError("ineligible K must carry zero direction and step")
        if not self.eligible_n and (self.direction_n != 0 or self.step_n != 0.0):
            raise ValueError("ineligible N must carry zero direction and step")
        if self.step_k < 0.0 or self.step_n < 0.0:
            raise ValueError("step sizes must be nonnegative")

    @property
    def any_eligible(self) -> bool:
        return bool(self.eligible_k or self.eligible_n)


class OmegaResult(NamedTuple):
    value: float
    mean_zero: bool


class GainUpdate(NamedTuple):
    gains: RegulatorGains
    draw: Optional[float]


def push_sample(buffers: AseBuffers, r: float, e: float) -> AseBuffers:
    """Append one (reference, error) pair; the buffers must not be full."""
    if buffers.is_full:
        raise ValueError("buffers are full; evaluate before pushing more samples")
    if not (math.isfinite(r) and math.isfinite(e)):
        raise ValueError(f"buffer samples must be finite, got r={r}, e={e}")
    return AseBuffers(
        references=buffers.references + (r,),
        errors=buffers.errors + (e,),
        capacity=buffers.capacity,
    )


def omega(errors, variant: str = "mean-diff") -> OmegaResult:
    """Steady-state proximity measure of an error window.

    The mean-diff variant is -mean(consecutive differences)/mean(errors);
    the max-diff variant replaces the mean difference with the maximum one.
    Positive while the error is shrinking, zero at steady state, negative
    while it grows.  A zero-mean window yields 0 with the mean_zero flag.
    """
    if variant not in OMEGA_VARIANTS:
        raise ValueError(f"unknown omega variant {variant!r}")
    e = [float(v) for v in errors]
    if len(e) < 2:
        raise ValueError("omega needs at least two error samples")
    mean_e = sum(e) / len(e)
    if mean_e == 0.0:
        return OmegaResult(0.0, True)
    diffs = [e[i + 1] - e[i] for i in range(len(e) - 1)]
    if variant == "mean-diff":
        num = sum(diffs) / len(diffs)
    else:
        num = max(diffs)
    return OmegaResult(-num / mean_e, False)


def _zero(branch: str) -> AseDecision:
    return AseDecision(branch=branch)


def _dequeued(buffers: AseBuffers) -> AseBuffers:
    return AseBuffers(
        references=buffers.references[1:],
        errors=buffers.errors[1:],
        capacity=buffers.capacity,
    )


def _flushed(buffers: AseBuffers) -> AseBuffers:
    return AseBuffers(capacity=buffers.capacity)


def ase_evaluate(
    buffers: AseBuffers,
    gains: RegulatorGains,
    cfg: AseConfig,
    rng,
) -> tuple:
    """Run the eligibility cascade over full buffers.

    Returns (decision, buffers).  Reject branches return the zero decision
    with the oldest sample dropped from each buffer; decision branches
    return one eligible gain and empty buffers.  Buffers that are not yet
    full pass through untouched with the zero decision.

    Cascade order: negative reference, non-ascending reference, all-zero
    leading half of the reference window, negative first reconstructed
    input, all errors negative (lower N), nonpositive error head, some
    error negative (lower K), any error at or below the threshold, peaky
    input window (lower K), and finally the priority draw between raising
    K and raising N.
    """
    if not buffers.is_full:
        return _zero(BRANCH_NOT_FULL), buffers

    refs = buffers.references
    errs = buffers.errors
    if not all(math.isfinite(v) for v in refs) or not all(math.isfinite(v) for v in errs):
        raise ValueError("buffers contain non-finite samples")

    if any(r < 0.0 for r in refs):
        return _zero(BRANCH_REJECT_NEGATIVE_REFERENCE), _dequeued(buffers)
    if any(refs[i + 1] < refs[i] for i in range(len(refs) - 1)):
        return _zero(BRANCH_REJECT_NOT_ASCENDING), _dequeued(buffers)
    half = (len(refs) + 1) // 2
    if all(r == 0.0 for r in refs[:half]):
        return _zero(BRANCH_REJECT_HALF_ZERO), _dequeued(buffers)

    offset = gains.N - gains.K
    inputs = [gains.K * e + offset * r for e, r in zip(errs, refs)]
    # A zero first input must pass: with zero-initialized gains the whole
    # window reconstructs to zero and rejecting it would block adaptation
    # permanently.  Only a genuinely negative value is meaningless here.
    if inputs[0] < 0.0:
        return _zero(BRANCH_REJECT_INPUT_NEGATIVE), _dequeued(buffers)

    if all(e < 0.0 for e in errs):
        decision = AseDecision(
            eligible_n=1, direction_n=-1, step_n=cfg.beta1,
            branch=BRANCH_LOWER_N_ALL_NEGATIVE,
        )
        return decision, _flushed(buffers)
    if errs[0] <= 0.0 or errs[1] <= 0.0:
        return _zero(BRANCH_REJECT_ERROR_HEAD), _dequeued(buffers)
    if any(e < 0.0 for e in errs):
        decision = AseDecision(
            eligible_k=1, direction_k=-1, step_k=cfg.beta2,
            branch=BRANCH_LOWER_K_SIGN_FLIP,
        )
        return decision, _flushed(buffers)
    # Raising a gain is only ever allowed when every error in the window
    # clears the threshold; a window with any small error teaches nothing.
    if not all(e > cfg.epsilon for e in errs):
        return _zero(BRANCH_REJECT_ERROR_SMALL), _dequeued(buffers)

    mean_input = sum(inputs) / len(inputs)
    if max(inputs) > cfg.gamma * mean_input:
        decision = AseDecision(
            eligible_k=1, direction_k=-1, step_k=cfg.beta3,
            branch=BRANCH_LOWER_K_PEAKY,
        )
        return decision, _flushed(buffers)

    om = omega(errs, cfg.omega_variant).value
    xi = float(rng.random())
    if om > cfg.rho * xi:
        decision = AseDecision(
            eligible_k=1, direction_k=+1, step_k=cfg.beta4,
            branch=BRANCH_RAISE_K, omega=om, xi=xi,
        )
    else:
        decision = AseDecision(
            eligible_n=1, direction_n=+1, step_n=cfg.beta5,
            branch=BRANCH_RAISE_N, omega=om, xi=xi,
        )
    return decision, _flushed(buffers)


def shc_update(value: float, direction: int, step: float, eligible: int, rng) -> float:
    """Stochastic single-gain update.

    Returns the value unchanged (and draws nothing) when ineligible.
    Otherwise scales the step by a uniform draw and moves in the given
    direction, clamping the result at zero from below.
    """
    if step < 0.0:
        raise ValueError(f"step must be nonnegative, got {step}")
    if not eligible:
        return value
    delta = float(rng.random()) * step
    updated = value + delta if direction > 0 else value - delta
    return updated if updated > 0.0 else 0.0


class _RecordingRng:
    """Forwards random() to the underlying generator, remembering the draw."""

    def __init__(self, rng):
        self._rng = rng
        self.last: Optional[float] = None

    def random(self) -> float:
        self.last = float(self._rng.random())
        return self.last


def adapt_gains(gains: RegulatorGains, decision: AseDecision, rng) -> GainUpdate:
    """Apply a gate decision to the gain pair.

    At most one gain moves through the stochastic update; the uniform draw
    it consumed is returned for audit logging.  If the move breaks the
    N >= K ordering, the moved gain is pinned back to the other one.
    """
    recorder = _RecordingRng(rng)
    k = shc_update(gains.K, decision.direction_k, decision.step_k, decision.eligible_k, recorder)
    n = shc_update(gains.N, decision.direction_n, decision.step_n, decision.eligible_n, recorder)
    if n < k:
        if decision.eligible_k:
            k = n
        else:
            n = k
    return GainUpdate(RegulatorGains(k, n), recorder.last)
