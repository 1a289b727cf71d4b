"""Command-line interface.

Subcommands: simulate (fixed gains), tune (gss | gss2d | shc | shc-ase),
traj (emit a trajectory as CSV), compare (all methods side by side).
An optional JSON config file supplies defaults; explicit flags override
it.  Exit codes: 0 success, 1 divergence abort, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ase import AseConfig
from .episode import DivergenceError
from .plant import DriftSchedule, PlantParams
from .regulator import GainBounds, RegulatorGains
from .report import render_session_figures, write_episode_csv, write_trajectory_csv
from .session import METHODS, SessionConfig, derive_method_seed, run_adaptive_session
from .trajectory import KINDS, TrajectorySpec

DEFAULTS = {
    "a": 0.98195,
    "b": 0.00042345,
    "c": 1.0,
    "f": 0.98195,
    "sample_time": 0.1,
    "traj": "rectangular",
    "period": 100.0,
    "amplitude": 1.0,
    "traj_seed": 0,
    "samples": None,
    "normalize": False,
    "k0": 0.0,
    "n0": 0.0,
    "x0": 0.0,
    "episodes": 6,
    "episode_length": None,
    "alpha": 1e-3,
    "u_max": 1000.0,
    "seed": 0,
    "hill_step": 10.0,
    "gss_tol": 1.0,
    "k_min": 0.0,
    "k_max": 600.0,
    "n_min": 0.0,
    "n_max": 600.0,
    "betas": None,
    "ase_gamma": 1.1,
    "ase_epsilon": 0.01,
    "ase_rho": 0.02,
    "ase_capacity": 10,
    "omega_variant": "mean-diff",
    "drift_da": 0.0,
    "drift_db": 0.0,
    "drift": False,
}


def _add_session_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("plant")
    g.add_argument("--a", type=float, help="driven-branch state coefficient")
    g.add_argument("--b", type=float, help="input gain")
    g.add_argument("--c", type=float, help="output gain")
    g.add_argument("--f", type=float, help="dissipation coefficient")
    g.add_argument("--sample-time", type=float, dest="sample_time", help="sampling period (s)")
    g.add_argument("--drift", action="store_const", const=True, help="enable parameter drift")
    g.add_argument("--drift-da", type=float, dest="drift_da", help="per-step drift of a")
    g.add_argument("--drift-db", type=float, dest="drift_db", help="per-step drift of b")

    g = parser.add_argument_group("trajectory")
    g.add_argument("--traj", choices=KINDS, help="reference kind")
    g.add_argument("--period", type=float, help="trajectory period or segment length (s)")
    g.add_argument("--amplitude", type=float, help="trajectory amplitude")
    g.add_argument("--traj-seed", type=int, dest="traj_seed", help="seed for random trajectories")
    g.add_argument("--samples", help="comma-separated samples or @file for the arbitrary kind")
    g.add_argument("--normalize", action="store_const", const=True,
                   help="normalize versine peaks to the amplitude")

    g = parser.add_argument_group("session")
    g.add_argument("--k0", type=float, help="initial feedback gain K")
    g.add_argument("--n0", type=float, help="initial feedforward gain N")
    g.add_argument("--x0", type=float, help="initial plant state")
    g.add_argument("--episodes", type=int, help="number of episodes")
    g.add_argument("--episode-length", type=int, dest="episode_length",
                   help="steps per episode (default: one trajectory period)")
    g.add_argument("--alpha", type=float, help="input weight in the episode cost")
    g.add_argument("--u-max", type=float, dest="u_max", help="regulator output limit")
    g.add_argument("--seed", type=int, help="master seed")

    g = parser.add_argument_group("tuning")
    g.add_argument("--hill-step", type=float, dest="hill_step", help="hill-climbing step size")
    g.add_argument("--gss-tol", type=float, dest="gss_tol", help="golden-section tolerance")
    g.add_argument("--k-min", type=float, dest="k_min", help="K search lower bound")
    g.add_argument("--k-max", type=float, dest="k_max", help="K search upper bound")
    g.add_argument("--n-min", type=float, dest="n_min", help="N search lower bound")
    g.add_argument("--n-max", type=float, dest="n_max", help="N search upper bound")
    g.add_argument("--betas", help="five comma-separated gate step sizes")
    g.add_argument("--ase-gamma", type=float, dest="ase_gamma", help="peak-to-mean bound")
    g.add_argument("--ase-epsilon", type=float, dest="ase_epsilon", help="error threshold")
    g.add_argument("--ase-rho", type=float, dest="ase_rho", help="priority weight")
    g.add_argument("--ase-capacity", type=int, dest="ase_capacity", help="gate buffer length")
    g.add_argument("--omega-variant", dest="omega_variant", choices=("mean-diff", "max-diff"),
                   help="steady-state measure variant")

    parser.add_argument("--config", help="JSON file supplying defaults for any flag")
    parser.add_argument("--plots", action="store_true", help="render SVG figures next to the CSV")


def _parse_samples(raw) -> tuple:
    if raw is None:
        return ()
    if isinstance(raw, (list, tuple)):
        return tuple(float(v) for v in raw)
    text = raw
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    return tuple(float(v) for v in text.replace("\n", ",").split(",") if v.strip())


def _merge_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        settings.update(loaded)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _build_session(settings: dict, method: str) -> SessionConfig:
    plant = PlantParams(
        a=settings["a"], b=settings["b"], c=settings["c"],
        f=settings["f"], T=settings["sample_time"],
    )
    trajectory = TrajectorySpec(
        kind=settings["traj"],
        period=settings["period"],
        amplitude=settings["amplitude"],
        sample_period=settings["sample_time"],
        seed=settings["traj_seed"],
        samples=_parse_samples(settings["samples"]),
        normalize=bool(settings["normalize"]),
    )
    if settings["betas"] is None:
        betas = (2.0, 2.0, 2.0, 5.0, 10.0)
    else:
        betas = _parse_samples(settings["betas"])
        if len(betas) != 5:
            raise ValueError(f"expected five gate step sizes, got {len(betas)}")
    ase = AseConfig(
        beta1=betas[0], beta2=betas[1], beta3=betas[2], beta4=betas[3], beta5=betas[4],
        gamma=settings["ase_gamma"], epsilon=settings["ase_epsilon"],
        rho=settings["ase_rho"], capacity=settings["ase_capacity"],
        omega_variant=settings["omega_variant"],
    )
    drift = None
    if settings["drift"]:
        drift = DriftSchedule(
            da_per_step=settings["drift_da"],
            db_per_step=settings["drift_db"],
            active=True,
        )
    return SessionConfig(
        plant=plant,
        trajectory=trajectory,
        method=method,
        initial=RegulatorGains(settings["k0"], settings["n0"], require_order=False),
        episodes=settings["episodes"],
        episode_length=settings["episode_length"],
        alpha=settings["alpha"],
        u_max=settings["u_max"],
        seed=settings["seed"],
        x0=settings["x0"],
        ase=ase,
        drift=drift,
        gain_bounds=GainBounds(
            k_lo=settings["k_min"], k_hi=settings["k_max"],
            n_lo=settings["n_min"], n_hi=settings["n_max"],
        ),
        hill_step=settings["hill_step"],
        gss_tol=settings["gss_tol"],
    )


def _run_and_write(cfg: SessionConfig, out: Path, plots: bool) -> int:
    include_ase = cfg.method == "shc-ase"
    try:
        metrics, logs = run_adaptive_session(cfg)
    except DivergenceError as exc:
        write_episode_csv(exc.session_logs, out, include_ase=include_ase)
        print(f"divergence abort: {exc}; partial log written to {out}", file=sys.stderr)
        return 1
    write_episode_csv(logs, out, include_ase=include_ase)
    if plots:
        render_session_figures(logs, out.parent, out.stem)
    etc = metrics.episodes_to_convergence
    print(
        f"{cfg.method}: episodes={metrics.episodes} "
        f"mae={metrics.mean_abs_error:.6g} rmse={metrics.rmse:.6g} "
        f"max_u={metrics.max_input:.6g} mean_u={metrics.mean_input:.6g} "
        f"converged={'not-converged' if etc is None else etc}"
    )
    return 0


def _cmd_simulate(args) -> int:
    settings = _merge_settings(args)
    cfg = _build_session(settings, "fixed")
    return _run_and_write(cfg, Path(args.out), args.plots)


def _cmd_tune(args) -> int:
    settings = _merge_settings(args)
    cfg = _build_session(settings, args.method)
    return _run_and_write(cfg, Path(args.out), args.plots)


def _cmd_compare(args) -> int:
    settings = _merge_settings(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for i, method in enumerate(methods):
        per_method = dict(settings)
        per_method["seed"] = derive_method_seed(settings["seed"], i)
        cfg = _build_session(per_method, method)
        code = _run_and_write(cfg, out_dir / f"{method}.csv", args.plots)
        worst = max(worst, code)
    return worst


def _cmd_traj(args) -> int:
    spec = TrajectorySpec(
        kind=args.kind,
        period=args.period,
        amplitude=args.amplitude,
        sample_period=args.sample_time,
        seed=args.traj_seed,
        samples=_parse_samples(args.samples),
        normalize=bool(args.normalize),
    )
    write_trajectory_csv(spec, args.steps, Path(args.out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unireg",
        description="Simulate and tune clamped state-feedback regulators "
                    "on first-order passive unidirectional plants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run fixed-gain episodes")
    _add_session_flags(p)
    p.add_argument("--out", default="session.csv", help="output CSV path")
    p.set_defaults(run=_cmd_simulate)

    p = sub.add_parser("tune", help="run an adaptive session")
    p.add_argument("--method", required=True, choices=[m for m in METHODS if m != "fixed"])
    _add_session_flags(p)
    p.add_argument("--out", default="session.csv", help="output CSV path")
    p.set_defaults(run=_cmd_tune)

    p = sub.add_parser("compare", help="run several methods side by side")
    p.add_argument("--methods", default=",".join(METHODS), help="comma-separated method list")
    _add_session_flags(p)
    p.add_argument("--out-dir", default="compare", dest="out_dir", help="output directory")
    p.set_defaults(run=_cmd_compare)

    p = sub.add_parser("traj", help="emit a trajectory as CSV")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--period", type=float, default=100.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--sample-time", type=float, default=0.1, dest="sample_time")
    p.add_argument("--traj-seed", type=int, default=0, dest="traj_seed")
    p.add_argument("--samples", help="comma-separated samples or @file")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--steps", type=int, default=1000, help="number of samples to emit")
    p.add_argument("--out", default="trajectory.csv", help="output CSV path")
    p.set_defaults(run=_cmd_traj)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
