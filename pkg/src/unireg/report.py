"""Delimited output and figure rendering for session results.

CSV rows carry one step each with numbers at 17 significant digits, so a
re-run from the same seed reproduces the file byte for byte.  Figures are
rendered straight to SVG files next to the delimited output: the response
overlay, the control output, and the gain evolution across episodes.
"""

from __future__ import annotations

import math
from pathlib import Path

from matplotlib.figure import Figure

from .trajectory import TrajectorySpec, sample

CSV_COLUMNS = ("episode", "k", "t", "r", "x", "u", "e", "K", "N")
ASE_COLUMNS = ("branch_tag", "omega", "xi", "omega_draw")


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _fmt_diag(value: float) -> str:
    return "" if math.isnan(value) else format(value, ".17g")


def write_episode_csv(logs, path, *, include_ase: bool = False) -> Path:
    """Write session logs as CSV, one row per step; returns the path."""
    path = Path(path)
    columns = CSV_COLUMNS + ASE_COLUMNS if include_ase else CSV_COLUMNS
    lines = [",".join(columns)]
    for log in logs:
        rows = zip(
            log.steps, log.times, log.references, log.states,
            log.inputs, log.errors, log.gains_k, log.gains_n,
            log.branches, log.omegas, log.xis, log.draws,
        )
        for k, t, r, x, u, e, gk, gn, branch, om, xi, draw in rows:
            cells = [
                str(log.episode), str(k), _fmt(t), _fmt(r), _fmt(x),
                _fmt(u), _fmt(e), _fmt(gk), _fmt(gn),
            ]
            if include_ase:
                cells += [branch, _fmt_diag(om), _fmt_diag(xi), _fmt_diag(draw)]
            lines.append(",".join(cells))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_trajectory_csv(spec: TrajectorySpec, steps: int, path) -> Path:
    """Emit a trajectory as CSV with columns k, t, r."""
    path = Path(path)
    lines = ["k,t,r"]
    for k in range(steps):
        lines.append(f"{k},{_fmt(k * spec.sample_period)},{_fmt(sample(spec, k))}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _concat(logs, attr):
    out = []
    for log in logs:
        out.extend(getattr(log, attr))
    return out


def render_session_figures(logs, out_dir, stem: str) -> list:
    """Render the three session figures as SVG files; returns their paths.

    Response overlay (reference and state against time), control output
    against time, and episode-end gains against episode index.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    times = _concat(logs, "times")
    paths = []

    fig = Figure(figsize=(8, 3))
    ax = fig.add_subplot(111)
    ax.plot(times, _concat(logs, "references"), label="reference", lw=1.0)
    ax.plot(times, _concat(logs, "states"), label="state", lw=1.0)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("state")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    response = out_dir / f"{stem}_response.svg"
    fig.savefig(response)
    paths.append(response)

    fig = Figure(figsize=(8, 3))
    ax = fig.add_subplot(111)
    ax.plot(times, _concat(logs, "inputs"), lw=1.0, color="tab:red")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("control output")
    fig.tight_layout()
    control = out_dir / f"{stem}_control.svg"
    fig.savefig(control)
    paths.append(control)

    episodes = [log.episode for log in logs]
    fig = Figure(figsize=(8, 3))
    ax = fig.add_subplot(111)
    ax.step(episodes, [log.gains_k[-1] for log in logs], where="post", label="K")
    ax.step(episodes, [log.gains_n[-1] for log in logs], where="post", label="N")
    ax.set_xlabel("episode")
    ax.set_ylabel("gain")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    gains = out_dir / f"{stem}_gains.svg"
    fig.savefig(gains)
    paths.append(gains)

    return paths
