"""Closed-loop episode execution, costs, and feasibility checks.

One episode runs the plant under the clamped law for a fixed number of
steps, recording (k, t, r, x, u, e, K, N) per step.  An optional step hook
observes each (r, e) pair before the control is computed and may swap the
gains mid-episode, which is how the buffer-gated adaptation taps the loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .plant import DriftSchedule, PlantParams, PlantState, apply_drift, plant_step
from .regulator import RegulatorGains, control_output


class DivergenceError(RuntimeError):
    """Raised when the plant state leaves the finite admissible range.

    Carries the partial episode log (whose last row is the last valid
    record) and, once a session has annotated it, the completed episode
    logs that preceded the abort.
    """

    def __init__(self, message: str, log: "EpisodeLog"):
        super().__init__(message)
        self.log = log
        self.session_logs: list = []


@dataclass
class EpisodeLog:
    """Per-step record of one episode, stored as parallel columns."""

    episode: int = 1
    steps: list = field(default_factory=list)
    times: list = field(default_factory=list)
    references: list = field(default_factory=list)
    states: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    gains_k: list = field(default_factory=list)
    gains_n: list = field(default_factory=list)
    branches: list = field(default_factory=list)
    omegas: list = field(default_factory=list)
    xis: list = field(default_factory=list)
    draws: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def extend(self, other: "EpisodeLog") -> None:
        """Append another log's rows, keeping this log's episode index."""
        self.steps += other.steps
        self.times += other.times
        self.references += other.references
        self.states += other.states
        self.inputs += other.inputs
        self.errors += other.errors
        self.gains_k += other.gains_k
        self.gains_n += other.gains_n
        self.branches += other.branches
        self.omegas += other.omegas
        self.xis += other.xis
        self.draws += other.draws


def run_episode(
    params: PlantParams,
    state: PlantState,
    gains: RegulatorGains,
    trajectory: Callable,
    length: int,
    *,
    episode: int = 1,
    step_hook: Optional[Callable] = None,
    drift: Optional[DriftSchedule] = None,
    divergence_limit: float = math.inf,
) -> tuple:
    """Run one closed-loop episode; returns (log, final_state, final_gains).

    Per step: sample r, form e = r - x, let the hook observe (and possibly
    replace the gains), compute u through the clamped law, record, advance
    the plant.  The hook receives (k, r, e, gains) and returns
    (new_gains_or_None, diagnostics_or_None) with diagnostics as a
    (branch, omega, xi, draw) tuple.  A non-finite or out-of-range state
    aborts with a DivergenceError carrying the partial log.
    """
    if length < 1:
        raise ValueError(f"episode length must be >= 1, got {length}")
    log = EpisodeLog(episode=episode)
    for _ in range(length):
        k = state.k
        stepped = apply_drift(params, drift, k) if drift is not None else params
        r = trajectory(k)
        e = r - state.x
        branch, om, xi, draw = "", math.nan, math.nan, math.nan
        if step_hook is not None:
            new_gains, diag = step_hook(k, r, e, gains)
            if new_gains is not None:
                gains = new_gains
            if diag is not None:
                branch, om, xi, draw = diag
        u = control_output(gains, e, r)
        log.steps.append(k)
        log.times.append(k * params.T)
        log.references.append(r)
        log.states.append(state.x)
        log.inputs.append(u)
        log.errors.append(e)
        log.gains_k.append(gains.K)
        log.gains_n.append(gains.N)
        log.branches.append(branch)
        log.omegas.append(om)
        log.xis.append(xi)
        log.draws.append(draw)
        try:
            state = plant_step(stepped, state, u)
        except ValueError as exc:
            raise DivergenceError(f"plant diverged at step {k}: {exc}", log) from exc
        if abs(state.x) > divergence_limit:
            raise DivergenceError(
                f"plant state {state.x} exceeded divergence limit {divergence_limit} at step {k}",
                log,
            )
    return log, state, gains


def cost_J(log: EpisodeLog) -> float:
    """Sum of absolute errors over the episode."""
    if len(log) == 0:
        raise ValueError("cannot cost an empty episode")
    return sum(abs(e) for e in log.errors)


def cost_Jprime(log: EpisodeLog, alpha: float) -> float:
    """Sum of |e| + alpha*u over the episode; reduces to cost_J at alpha=0."""
    if len(log) == 0:
        raise ValueError("cannot cost an empty episode")
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return sum(abs(e) + alpha * u for e, u in zip(log.errors, log.inputs))


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Input-profile checks: hard peak limit and peak-to-mean concentration.

    peak_ok reports max(u) < limit.  ratio is max(u)/sum(u) compared
    against gamma/length; a window with no input at all satisfies the
    ratio constraint vacuously (flagged).
    """

    peak: float
    limit: float
    peak_ok: bool
    ratio: float
    ratio_limit: float
    ratio_ok: bool
    ratio_vacuous: bool


def feasibility_check(log: EpisodeLog, u_max: float, gamma: float) -> FeasibilityVerdict:
    """Check an episode's input record against the output constraints."""
    if len(log) == 0:
        raise ValueError("cannot check an empty episode")
    peak = max(log.inputs)
    total = sum(abs(u) for u in log.inputs)
    ratio_limit = gamma / len(log)
    if total == 0.0:
        return FeasibilityVerdict(
            peak=peak, limit=u_max, peak_ok=peak < u_max,
            ratio=0.0, ratio_limit=ratio_limit, ratio_ok=True, ratio_vacuous=True,
        )
    ratio = peak / total
    return FeasibilityVerdict(
        peak=peak, limit=u_max, peak_ok=peak < u_max,
        ratio=ratio, ratio_limit=ratio_limit, ratio_ok=ratio < ratio_limit,
        ratio_vacuous=False,
    )
