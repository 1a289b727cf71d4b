import math

import pytest

from unireg import DriftSchedule, PlantParams, PlantState, apply_drift, plant_output, plant_step


def test_driven_step_from_rest(bench_plant):
    state = plant_step(bench_plant, PlantState(x=0.0, k=0), u=100.0)
    assert state.x == pytest.approx(0.042345, abs=1e-15)
    assert state.k == 1


def test_zero_input_zero_state(bench_plant):
    state = plant_step(bench_plant, PlantState(x=0.0, k=7), u=0.0)
    assert state.x == 0.0
    assert state.k == 8


def test_dissipation_branch(bench_plant):
    state = plant_step(bench_plant, PlantState(x=1.0, k=0), u=0.0)
    assert state.x == pytest.approx(0.98195, abs=1e-15)


def test_rejects_negative_input(bench_plant):
    with pytest.raises(ValueError, match="nonnegative"):
        plant_step(bench_plant, PlantState(), u=-1e-9)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_rejects_non_finite_input(bench_plant, bad):
    with pytest.raises(ValueError, match="finite"):
        plant_step(bench_plant, PlantState(), u=bad)


def test_rejects_overflowing_state():
    params = PlantParams(a=0.9, b=1.0)
    with pytest.raises(ValueError, match="overflow"):
        plant_step(params, PlantState(x=1e308), u=1e308)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(a=1.0, b=1.0),
        dict(a=-1.0, b=1.0),
        dict(a=0.5, b=0.0),
        dict(a=0.5, b=-1.0),
        dict(a=0.5, b=1.0, f=1.0),
        dict(a=0.5, b=1.0, T=0.0),
        dict(a=math.nan, b=1.0),
    ],
)
def test_param_validation(kwargs):
    with pytest.raises(ValueError):
        PlantParams(**kwargs)


def test_output_gain(bench_plant):
    assert plant_output(bench_plant, PlantState(x=0.5)) == 0.5
    doubled = PlantParams(a=0.5, b=1.0, c=2.0)
    assert plant_output(doubled, PlantState(x=0.5)) == 1.0
    assert plant_output(bench_plant, PlantState(x=0.0)) == 0.0


def test_dissipation_decay_bound(bench_plant):
    # Unforced state must decay geometrically: |x(k)| <= |f|^k |x(0)|.
    state = PlantState(x=1.0)
    for k in range(1, 10_001):
        state = plant_step(bench_plant, state, u=0.0)
        assert abs(state.x) <= abs(bench_plant.f) ** k * 1.0 + 1e-12


def test_driven_fixed_point(bench_plant):
    # Constant input drives the state to b*u/(1 - a).
    u = 100.0
    target = bench_plant.b * u / (1.0 - bench_plant.a)
    state = PlantState(x=0.0)
    for _ in range(2000):
        state = plant_step(bench_plant, state, u=u)
    assert state.x == pytest.approx(target, abs=1e-9)


def test_determinism_bit_identical(bench_plant, rng):
    inputs = [float(v) for v in rng.uniform(0.0, 50.0, size=500)]
    runs = []
    for _ in range(2):
        state = PlantState(x=0.25)
        trace = []
        for u in inputs:
            state = plant_step(bench_plant, state, u)
            trace.append(state.x)
        runs.append(trace)
    assert runs[0] == runs[1]


def test_drift_inactive_noop(bench_plant):
    schedule = DriftSchedule(da_per_step=-1e-6, db_per_step=1e-9, active=False)
    assert apply_drift(bench_plant, schedule, 1000) == bench_plant


def test_drift_linear_ramp(bench_plant):
    schedule = DriftSchedule(da_per_step=-1e-6, active=True)
    drifted = apply_drift(bench_plant, schedule, 1000)
    assert drifted.a == pytest.approx(0.98095, abs=1e-12)
    assert drifted.b == bench_plant.b


def test_drift_leaving_passive_region_errors(bench_plant):
    schedule = DriftSchedule(da_per_step=1e-4, active=True)
    with pytest.raises(ValueError, match="passive"):
        apply_drift(bench_plant, schedule, 200)


def test_drift_killing_input_gain_errors(bench_plant):
    schedule = DriftSchedule(db_per_step=-1e-3, active=True)
    with pytest.raises(ValueError, match="passive"):
        apply_drift(bench_plant, schedule, 10)
