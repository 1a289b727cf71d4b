import math

import numpy as np
import pytest

from unireg import (
    CostOracle,
    HillClimbConfig,
    SearchInterval,
    golden_section_1d,
    golden_section_2d,
    shc_neighbors,
    shc_offline,
    shc_online_step,
)
from unireg.tuners import GOLDEN_RATIO


def grid_minimizer(fn, lo, hi, resolution):
    """Brute-force reference minimizer on a uniform grid (vectorized fn)."""
    xs = np.linspace(lo, hi, int((hi - lo) / resolution) + 1)
    return float(xs[np.argmin(fn(xs))])


class TestGolden1d:
    def test_quadratic_minimum(self):
        oracle = CostOracle(lambda x: (x - 2.0) ** 2)
        result = golden_section_1d(oracle, SearchInterval(0.0, 5.0, 1e-4))
        reference = grid_minimizer(lambda x: (x - 2.0) ** 2, 0.0, 5.0, 1e-6)
        assert abs(result - reference) <= 1e-4

    def test_degenerate_interval_returns_midpoint_without_calls(self):
        delta = 1e-4
        oracle = CostOracle(lambda x: x**2)
        result = golden_section_1d(oracle, SearchInterval(1.0, 1.0 + delta / 2, delta))
        assert result == pytest.approx(1.0 + delta / 4)
        assert oracle.calls == 0

    def test_monotone_function_finds_boundary(self):
        oracle = CostOracle(lambda x: x)
        result = golden_section_1d(oracle, SearchInterval(0.0, 1.0, 1e-4))
        reference = grid_minimizer(lambda x: x, 0.0, 1.0, 1e-6)
        assert abs(result - reference) <= 1e-4

    def test_width_shrinks_by_inverse_golden_ratio(self):
        widths = []
        golden_section_1d(
            lambda x: (x - 3.0) ** 2,
            SearchInterval(0.0, 10.0, 1e-5),
            on_shrink=lambda a, b: widths.append(b - a),
        )
        for m, width in enumerate(widths, start=1):
            assert abs(width - 10.0 * GOLDEN_RATIO ** (-m)) <= 1e-12

    def test_never_evaluates_outside_interval(self):
        def guarded(x):
            assert 0.0 <= x <= 5.0
            return math.cos(x)

        golden_section_1d(CostOracle(guarded), SearchInterval(0.0, 5.0, 1e-6))

    def test_two_calls_per_iteration(self):
        iterations = []
        oracle = CostOracle(lambda x: (x - 1.0) ** 2)
        golden_section_1d(
            oracle,
            SearchInterval(0.0, 4.0, 1e-3),
            on_shrink=lambda a, b: iterations.append(1),
        )
        assert oracle.calls == 2 * len(iterations)

    def test_iteration_cap(self):
        with pytest.raises(RuntimeError, match="exceeded"):
            golden_section_1d(lambda x: x**2, SearchInterval(0.0, 1.0, 1e-9), max_iter=3)

    def test_oracle_rejects_non_finite_cost(self):
        oracle = CostOracle(lambda x: math.inf)
        with pytest.raises(ValueError, match="non-finite"):
            oracle(1.0)


class TestGolden2d:
    def test_separable_quadratic(self):
        oracle = CostOracle(lambda p: (p[0] - 1.0) ** 2 + (p[1] - 3.0) ** 2)
        x, y = golden_section_2d(
            oracle,
            SearchInterval(0.0, 5.0, 1e-4),
            SearchInterval(0.0, 5.0, 1e-4),
        )
        assert abs(x - 1.0) <= 2e-4
        assert abs(y - 3.0) <= 2e-4

    def test_converged_brackets_return_midpoints_without_calls(self):
        oracle = CostOracle(lambda p: p[0] + p[1])
        x, y = golden_section_2d(
            oracle,
            SearchInterval(1.0, 1.5, 1.0),
            SearchInterval(2.0, 2.5, 1.0),
        )
        assert (x, y) == (1.25, 2.25)
        assert oracle.calls == 0

    def test_separable_matches_independent_1d_searches(self):
        gx = lambda x: (x - 1.7) ** 2
        gy = lambda y: abs(y - 3.3)
        tol = 1e-4
        x2, y2 = golden_section_2d(
            lambda p: gx(p[0]) + gy(p[1]),
            SearchInterval(0.0, 5.0, tol),
            SearchInterval(0.0, 5.0, tol),
        )
        x1 = golden_section_1d(gx, SearchInterval(0.0, 5.0, tol))
        y1 = golden_section_1d(gy, SearchInterval(0.0, 5.0, tol))
        assert abs(x2 - x1) <= tol + 1e-12
        assert abs(y2 - y1) <= tol + 1e-12

    def test_iteration_cap(self):
        with pytest.raises(RuntimeError, match="exceeded"):
            golden_section_2d(
                lambda p: p[0] ** 2 + p[1] ** 2,
                SearchInterval(0.0, 1.0, 1e-9),
                SearchInterval(0.0, 1.0, 1e-9),
                max_iter=3,
            )


class TestNeighbors:
    def test_two_dimensional(self):
        assert shc_neighbors((0.0, 0.0), 1.0) == [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]

    def test_scalar(self):
        assert shc_neighbors(5.0, 0.5) == [5.5, 4.5]

    @pytest.mark.parametrize("dim", [1, 2, 3, 5])
    def test_cardinality(self, dim, rng):
        point = tuple(rng.uniform(-5, 5, size=dim))
        assert len(shc_neighbors(point, 0.3)) == 2 * dim

    def test_step_must_be_positive(self):
        with pytest.raises(ValueError):
            shc_neighbors(1.0, 0.0)


class TestOfflineHillClimb:
    def test_converges_to_maximum_within_one_step(self, rng):
        cfg = HillClimbConfig(step=0.1)
        result = shc_offline(lambda x: -(x**2), 3.0, cfg, rng, maximize=True)
        assert abs(result) <= 0.1 + 1e-9

    def test_no_improving_neighbor_returns_start(self, rng):
        # Symmetric concave peak probed from its apex: both neighbors tie.
        cfg = HillClimbConfig(step=1.0)
        result = shc_offline(lambda x: -abs(x), 0.0, cfg, rng, maximize=True)
        assert result == 0.0

    def test_seeded_determinism(self):
        cfg = HillClimbConfig(step=0.25)
        runs = [
            shc_offline(lambda x: -((x - 1.0) ** 2), 4.0, cfg,
                        np.random.default_rng(11), maximize=True)
            for _ in range(2)
        ]
        assert runs[0] == runs[1]

    def test_minimization_is_default(self, rng):
        cfg = HillClimbConfig(step=0.1)
        result = shc_offline(lambda x: (x - 2.0) ** 2, 0.0, cfg, rng)
        assert abs(result - 2.0) <= 0.1 + 1e-9

    def test_iteration_cap(self):
        cfg = HillClimbConfig(step=1.0, max_iter=3, draw=lambda rng: 0.0)
        # Zero draws never move the point, so improvement never shrinks.
        with pytest.raises(RuntimeError, match="exceeded"):
            shc_offline(lambda x: -(x**2), 10.0, cfg, np.random.default_rng(0), maximize=True)


class TestOnlineHillClimb:
    def test_exactly_five_evaluations_for_gain_pairs(self, rng):
        oracle = CostOracle(lambda p: -(p[0] ** 2 + p[1] ** 2))
        cfg = HillClimbConfig(step=1.0)
        shc_online_step(oracle, (3.0, 4.0), cfg, rng, maximize=True)
        assert oracle.calls == 5

    def test_current_best_point_unchanged(self, rng):
        cfg = HillClimbConfig(step=1.0)
        result = shc_online_step(lambda p: -(p[0] ** 2 + p[1] ** 2), (0.0, 0.0), cfg, rng,
                                 maximize=True)
        assert result == (0.0, 0.0)

    def test_full_draw_lands_on_best_neighbor(self, scripted):
        cfg = HillClimbConfig(step=0.5)
        result = shc_online_step(lambda x: -abs(x), 1.0, cfg, scripted([1.0]), maximize=True)
        assert result == pytest.approx(0.5)

    def test_unit_interval_draw_never_overshoots(self, rng):
        cfg = HillClimbConfig(step=0.7)
        for _ in range(200):
            current = float(rng.uniform(-4.0, 4.0))
            result = shc_online_step(lambda x: -(x**2), current, cfg, rng, maximize=True)
            neighbors = shc_neighbors(current, cfg.step)
            best = min([current] + neighbors, key=lambda x: x**2)
            lo, hi = sorted((current, best))
            assert lo - 1e-12 <= result <= hi + 1e-12


def test_hill_climb_config_validation():
    with pytest.raises(ValueError):
        HillClimbConfig(step=0.0)
    with pytest.raises(ValueError):
        HillClimbConfig(step=1.0, threshold=-1.0)


def test_search_interval_validation():
    with pytest.raises(ValueError):
        SearchInterval(1.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        SearchInterval(0.0, 1.0, 0.0)
