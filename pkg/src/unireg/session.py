"""Adaptive-session orchestration for all tuning methods.

A session runs a configured number of episodes against one plant and one
reference signal, with the chosen method deciding how the gains evolve:

fixed     constant gains throughout;
gss       one-dimensional golden-section over K with the feedforward
          offset tied to the configured plant (prior-knowledge variant);
gss2d     alternating golden-section over the (K, N) box;
shc       online stochastic hill-climbing, one logged episode per cost
          evaluation (five per update for the 2-D gain point);
shc-ase   buffer-gated stochastic adaptation running inside the loop,
          adapting whenever the gate's buffers fill.

The offline searches (gss, gss2d) score every candidate on one full
episode-length window; all search windows are logged as episode 1 and the
tuned gains hold for the remaining episodes.  Time and plant state are
continuous across episodes and the whole session is reproducible from the
master seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np

from .ase import AseBuffers, AseConfig, adapt_gains, ase_evaluate, push_sample
from .episode import DivergenceError, EpisodeLog, cost_Jprime, run_episode
from .plant import DriftSchedule, PlantParams, PlantState
from .regulator import GainBounds, RegulatorGains, feedforward_offset
from .trajectory import TrajectorySpec, peak_reference, period_steps, sample
from .tuners import (
    HillClimbConfig,
    SearchInterval,
    golden_section_1d,
    golden_section_2d,
    shc_neighbors,
)

METHODS = ("fixed", "gss", "gss2d", "shc", "shc-ase")

DIVERGENCE_FACTOR = 1e6
DEFAULT_GAIN_BOUNDS = GainBounds(k_lo=0.0, k_hi=600.0, n_lo=0.0, n_hi=600.0)

# Convergence rule: an episode counts as converged when the mean |e| over
# its final quarter is below twice the gate's error threshold and neither
# gain moved by beta4 or more within the episode.
CONVERGENCE_TAIL_FRACTION = 0.25


@dataclass(frozen=True)
class SessionConfig:
    plant: PlantParams
    trajectory: TrajectorySpec
    method: str = "fixed"
    initial: RegulatorGains = field(default_factory=lambda: RegulatorGains(0.0, 0.0))
    episodes: int = 6
    episode_length: Optional[int] = None
    alpha: float = 1e-3
    u_max: float = 1000.0
    seed: int = 0
    x0: float = 0.0
    ase: AseConfig = field(default_factory=AseConfig)
    drift: Optional[DriftSchedule] = None
    hill_step: float = 10.0
    gain_bounds: GainBounds = DEFAULT_GAIN_BOUNDS
    gss_tol: float = 1.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.episodes < 1:
            raise ValueError(f"episode count must be >= 1, got {self.episodes}")
        if self.episode_length is not None and self.episode_length < 1:
            raise ValueError(f"episode length must be >= 1, got {self.episode_length}")
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.u_max <= 0.0:
            raise ValueError(f"u_max must be > 0, got {self.u_max}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.hill_step <= 0.0:
            raise ValueError(f"hill_step must be > 0, got {self.hill_step}")
        if self.gss_tol <= 0.0:
            raise ValueError(f"gss_tol must be > 0, got {self.gss_tol}")
        if not math.isclose(self.trajectory.sample_period, self.plant.T):
            raise ValueError(
                f"trajectory sample period {self.trajectory.sample_period} must equal "
                f"the plant sampling period {self.plant.T}"
            )

    def resolved_length(self) -> int:
        if self.episode_length is not None:
            return self.episode_length
        return period_steps(self.trajectory)


@dataclass(frozen=True)
class MetricsSummary:
    """Aggregate metrics over a sequence of episode logs."""

    mean_abs_error: float
    rmse: float
    max_input: float
    mean_input: float
    episodes_to_convergence: Optional[int]
    episodes: int


class AseTap:
    """Step hook feeding (r, e) into the gate and adapting gains in place."""

    def __init__(self, cfg: AseConfig, rng):
        self.cfg = cfg
        self.rng = rng
        self.buffers = AseBuffers(capacity=cfg.capacity)

    def __call__(self, k, r, e, gains):
        self.buffers = push_sample(self.buffers, r, e)
        if not self.buffers.is_full:
            return None, None
        decision, self.buffers = ase_evaluate(self.buffers, gains, self.cfg, self.rng)
        draw = math.nan
        new_gains = None
        if decision.any_eligible:
            new_gains, draw = adapt_gains(gains, decision, self.rng)
        om = decision.omega if decision.omega is not None else math.nan
        xi = decision.xi if decision.xi is not None else math.nan
        return new_gains, (decision.branch, om, xi, draw if draw is not None else math.nan)


def episode_converged(log: EpisodeLog, ase_cfg: AseConfig) -> bool:
    """Apply the convergence rule to one episode log."""
    n = len(log)
    if n == 0:
        return False
    tail = max(1, int(n * CONVERGENCE_TAIL_FRACTION))
    tail_mae = sum(abs(e) for e in log.errors[-tail:]) / tail
    dk = abs(log.gains_k[-1] - log.gains_k[0])
    dn = abs(log.gains_n[-1] - log.gains_n[0])
    return tail_mae < 2.0 * ase_cfg.epsilon and dk < ase_cfg.beta4 and dn < ase_cfg.beta4


def episodes_to_convergence(logs, ase_cfg: AseConfig) -> Optional[int]:
    """First episode index after which every remaining episode is converged."""
    flags = [episode_converged(log, ase_cfg) for log in logs]
    for i, _ in enumerate(flags):
        if all(flags[i:]):
            return logs[i].episode
    return None


def summarize_metrics(logs, ase_cfg: AseConfig = AseConfig()) -> MetricsSummary:
    """Aggregate MAE, RMSE, and input statistics over all logged records."""
    logs = list(logs)
    if not logs or all(len(log) == 0 for log in logs):
        raise ValueError("cannot summarize an empty log sequence")
    errors = np.concatenate([np.asarray(log.errors) for log in logs])
    inputs = np.concatenate([np.asarray(log.inputs) for log in logs])
    return MetricsSummary(
        mean_abs_error=float(np.mean(np.abs(errors))),
        rmse=float(np.sqrt(np.mean(errors**2))),
        max_input=float(np.max(inputs)),
        mean_input=float(np.mean(inputs)),
        episodes_to_convergence=episodes_to_convergence(logs, ase_cfg),
        episodes=len(logs),
    )


class _Loop:
    """Mutable carrier for the continuous plant state across episodes."""

    def __init__(self, cfg: SessionConfig):
        self.cfg = cfg
        self.state = PlantState(x=cfg.x0, k=0)
        self.gains = cfg.initial
        self.trajectory = partial(sample, cfg.trajectory)
        peak = peak_reference(cfg.trajectory)
        self.limit = DIVERGENCE_FACTOR * peak if peak > 0.0 else math.inf

    def episode(self, length: int, episode: int, *, gains=None, hook=None) -> EpisodeLog:
        if gains is not None:
            self.gains = gains
        log, self.state, self.gains = run_episode(
            self.cfg.plant,
            self.state,
            self.gains,
            self.trajectory,
            length,
            episode=episode,
            step_hook=hook,
            drift=self.cfg.drift,
            divergence_limit=self.limit,
        )
        return log


def _run_fixed(cfg: SessionConfig, loop: _Loop, length: int, logs: list) -> None:
    for ep in range(1, cfg.episodes + 1):
        logs.append(loop.episode(length, ep))


def _run_shc_ase(cfg: SessionConfig, loop: _Loop, length: int, rng, logs: list) -> None:
    tap = AseTap(cfg.ase, rng)
    for ep in range(1, cfg.episodes + 1):
        logs.append(loop.episode(length, ep, hook=tap))


def _run_golden(cfg: SessionConfig, loop: _Loop, length: int, logs: list) -> None:
    bounds = cfg.gain_bounds
    search_log = EpisodeLog(episode=1)
    logs.append(search_log)

    def probe(point) -> float:
        window = loop.episode(length, 1, gains=RegulatorGains.from_point(point))
        search_log.extend(window)
        return cost_Jprime(window, cfg.alpha)

    if cfg.method == "gss":
        offset = feedforward_offset(cfg.plant)
        k_best = golden_section_1d(
            lambda k: probe((k, k + offset)),
            SearchInterval(bounds.k_lo, bounds.k_hi, cfg.gss_tol),
        )
        tuned = RegulatorGains(k_best, k_best + offset)
    else:
        point = golden_section_2d(
            probe,
            SearchInterval(bounds.k_lo, bounds.k_hi, cfg.gss_tol),
            SearchInterval(bounds.n_lo, bounds.n_hi, cfg.gss_tol),
        )
        tuned = RegulatorGains.from_point(point)

    if len(search_log) == 0:
        # Degenerate bounds: no probe ran; hold the midpoint gains.
        search_log.extend(loop.episode(length, 1, gains=tuned))
    loop.gains = tuned
    for ep in range(2, cfg.episodes + 1):
        logs.append(loop.episode(length, ep, gains=tuned))


def _run_shc(cfg: SessionConfig, loop: _Loop, length: int, rng, logs: list) -> None:
    hc = HillClimbConfig(step=cfg.hill_step)
    current = (cfg.initial.K, cfg.initial.N)
    ep = 1
    while ep <= cfg.episodes:
        candidates = [current] + shc_neighbors(current, hc.step)
        remaining = cfg.episodes - ep + 1
        costs = []
        for point in candidates[: min(len(candidates), remaining)]:
            log = loop.episode(length, ep, gains=RegulatorGains.from_point(point))
            logs.append(log)
            costs.append(cost_Jprime(log, cfg.alpha))
            ep += 1
        if len(costs) < len(candidates):
            break  # partial batch at the session tail: no update possible
        best = min(range(len(candidates)), key=lambda i: costs[i])
        scale = hc.draw_scale(rng)
        target = candidates[best]
        current = tuple(c + scale * (t - c) for c, t in zip(current, target))
    loop.gains = RegulatorGains.from_point(current)


def run_adaptive_session(cfg: SessionConfig) -> tuple:
    """Run a full session; returns (metrics, episode_logs).

    On divergence the raised DivergenceError carries the completed episode
    logs plus the partial one, so callers can persist what was recorded.
    """
    rng = np.random.default_rng(cfg.seed)
    loop = _Loop(cfg)
    length = cfg.resolved_length()
    logs: list = []
    try:
        if cfg.method == "fixed":
            _run_fixed(cfg, loop, length, logs)
        elif cfg.method == "shc-ase":
            _run_shc_ase(cfg, loop, length, rng, logs)
        elif cfg.method in ("gss", "gss2d"):
            _run_golden(cfg, loop, length, logs)
        else:
            _run_shc(cfg, loop, length, rng, logs)
    except DivergenceError as exc:
        exc.session_logs = logs + [exc.log]
        raise
    return summarize_metrics(logs, cfg.ase), logs


def derive_method_seed(master_seed: int, index: int) -> int:
    """Stable per-method seed for side-by-side comparisons."""
    return master_seed + 1000 * (index + 1)
