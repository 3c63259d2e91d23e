"""Tests for the level-n slit combs and the continuation solver."""

import math

import numpy as np
import pytest

from src.errors import (
    AdmissibilityError,
    DegenerateConfigurationError,
    NoConvergenceError,
    PoleOutsideRangeError,
)
from src.geometry import compute_angles
from src.schemas import Discretization, ProblemSpec
from src.solver import (
    SlitComb,
    continuation_levels,
    fold_start,
    residuals,
    richardson,
    solve,
    solve_level,
    tip_positions,
    warm_start,
)


@pytest.fixture(scope="module")
def golden_spec():
    return ProblemSpec(a=0.25)


@pytest.fixture(scope="module")
def inner_spec():
    return ProblemSpec(a=0.6, inner_poles=(0.3,), k=(1,))


@pytest.fixture(scope="module")
def golden_level(golden_spec):
    angles = compute_angles(golden_spec)
    return solve_level(golden_spec, angles, 8), angles


@pytest.fixture(scope="module")
def golden_result(golden_spec):
    return solve(golden_spec, schedule=(8, 16, 32), tol_B0=1e-4, strict=False)


class TestSlitComb:
    def test_partition(self, golden_spec):
        angles = compute_angles(golden_spec)
        comb = SlitComb(golden_spec, angles, 4)
        assert comb.edges[0] == pytest.approx(angles.alpha_inf)
        assert comb.edges[-1] == pytest.approx(math.pi / 2)
        assert len(comb.beta) == 4
        assert np.allclose(np.diff(comb.edges), (math.pi / 2 - angles.alpha_inf) / 5)

    def test_level_must_be_at_least_two(self, golden_spec):
        with pytest.raises(ValueError):
            SlitComb(golden_spec, compute_angles(golden_spec), 1)

    def test_scale_from_normalizes_mass(self, inner_spec):
        comb = SlitComb(inner_spec, compute_angles(inner_spec), 5)
        w = np.array([0.3, 0.1, 0.2, 0.25, 0.15])
        c, mu = comb.scale_from(w)
        assert 2 * c * comb.atom_sum + 2 * np.sum(mu) == pytest.approx(1.0, abs=1e-14)
        assert comb.contributions(mu, c) == pytest.approx(w)

    def test_feasibility(self, golden_spec):
        comb = SlitComb(golden_spec, compute_angles(golden_spec), 3)
        assert comb.is_feasible(np.array([0.3, 0.3, 0.4]))
        assert comb.is_feasible(np.array([0.3, 0.3, 0.9]))
        assert not comb.is_feasible(np.array([0.6, 0.5, 0.4]))
        assert not comb.is_feasible(np.array([0.5, -0.1, 0.6]))
        assert not comb.is_feasible(np.array([0.5, 0.3, 0.0]))

    def test_abscissas(self, golden_spec):
        comb = SlitComb(golden_spec, compute_angles(golden_spec), 3)
        cumulative, positions = comb.abscissas(np.array([0.25, 0.25, 0.5]))
        assert cumulative == pytest.approx([0.0, 0.25, 0.5, 1.0])
        assert positions[0] == pytest.approx(comb.u_c + math.pi / 2)
        assert positions[-1] == pytest.approx(comb.u_c - math.pi / 2)
        assert positions[1:-1] == pytest.approx([comb.u_c + math.pi / 4, comb.u_c])

    def test_exact_jacobian_matches_differences(self, inner_spec):
        comb = SlitComb(inner_spec, compute_angles(inner_spec), 6)
        n = comb.n
        w = np.array([0.12, 0.18, 0.15, 0.2, 0.16, 0.19])
        B0 = 6.0
        multipliers, nu = comb.multipliers(comb.evaluate(w, B0))
        state = comb.evaluate(w, B0, multipliers, nu)
        assert np.any(np.abs(state.multipliers) > 1e-3)
        J = comb.jacobian(state)

        z = np.concatenate([w, [B0], multipliers, [nu]])

        def system(point):
            return comb.evaluate(point[:n], point[n], point[n + 1:2 * n], point[2 * n]).system

        h = 1e-5
        numeric = np.zeros_like(J)
        for j in range(2 * n + 1):
            shift = np.zeros(2 * n + 1)
            shift[j] = h
            numeric[:, j] = (system(z + shift) - system(z - shift)) / (2 * h)
        assert J.shape == (2 * n + 1, 2 * n + 1)
        assert np.allclose(J, numeric, rtol=1e-4, atol=1e-5)

    def test_degenerate_curve_parameter(self):
        with pytest.raises(DegenerateConfigurationError):
            SlitComb._check_degenerate(1e-9)
        with pytest.raises(DegenerateConfigurationError):
            SlitComb._check_degenerate(1e3)


class TestStrategies:
    def test_sweep_then_newton_reaches_fold(self, golden_level, golden_spec):
        disc, angles = golden_level
        comb = SlitComb(golden_spec, angles, 16)
        solved = comb._run_strategy("sweep", warm_start(disc, comb), 1e-8)
        assert solved.strategy == "sweep"
        assert solved.max_residual < 1e-8
        assert solved.B0 == pytest.approx(2.8930768, abs=1e-6)

    def test_sweep_raises_when_no_tip_reaches_curve(self, golden_level, golden_spec):
        disc, angles = golden_level
        comb = SlitComb(golden_spec, angles, 16)
        start = warm_start(disc, comb).model_copy(update={"B0": 10.0})
        with pytest.raises(NoConvergenceError):
            comb._run_strategy("sweep", start, 1e-8)

    def test_unknown_strategy(self, golden_level, golden_spec):
        disc, angles = golden_level
        comb = SlitComb(golden_spec, angles, disc.n)
        with pytest.raises(ValueError):
            comb._run_strategy("bisection", disc, 1e-8)

    def test_newton_agrees_with_sweep(self, golden_level, golden_spec):
        disc, angles = golden_level
        comb = SlitComb(golden_spec, angles, 16)
        solved = comb._run_strategy("newton", warm_start(disc, comb), 1e-8)
        assert solved.strategy == "newton"
        assert solved.B0 == pytest.approx(2.8930768, abs=1e-6)


class TestSolveLevel:
    def test_residuals_below_tolerance(self, golden_level, golden_spec):
        disc, angles = golden_level
        values = residuals(disc, angles, golden_spec)
        assert len(values) == disc.n + 1
        assert np.max(np.abs(values[:-2])) < 1e-8
        assert abs(values[-2]) < 1e-10
        assert abs(values[-1]) < 1e-10
        assert disc.stationarity < 1e-9
        assert disc.strategy in ("newton", "sweep")

    def test_level_value(self, golden_level):
        disc, _ = golden_level
        assert disc.B0 == pytest.approx(2.9376895, abs=1e-5)

    def test_fold_multipliers_are_positive(self, golden_level, golden_spec):
        disc, angles = golden_level
        comb = SlitComb(golden_spec, angles, disc.n)
        state = comb.evaluate(np.asarray(disc.contributions), disc.B0)
        multipliers, _ = comb.multipliers(state)
        assert np.all(multipliers > 0)

    def test_tips_lie_on_curve(self, golden_level, golden_spec):
        disc, angles = golden_level
        tips = tip_positions(disc, angles, golden_spec)
        assert len(tips.real) == disc.n - 1
        assert np.all(np.diff(tips.real) < 0)
        assert max(abs(r) for r in tips.curve_residuals) < 1e-8
        assert tips.free_tips[0][0] == pytest.approx(math.pi * 1.5)
        assert tips.free_tips[1][0] == pytest.approx(math.pi * 0.5)
        for (lo, hi), phi in zip(disc.cells[1:-1], tips.argmins):
            assert lo < phi < hi

    def test_curve_parameter_close_to_limit(self, golden_level):
        disc, _ = golden_level
        assert 1.0 / math.cosh(disc.B0) == pytest.approx(1.0 / 9.0, rel=0.35)

    def test_fold_start_is_polished_by_newton(self, golden_level, golden_spec):
        disc, angles = golden_level
        comb = SlitComb(golden_spec, angles, 2)
        start = fold_start(comb)
        solved = solve_level(golden_spec, angles, 2)
        assert abs(residuals(start, angles, golden_spec)[0]) < 1e-8
        assert solved.B0 == pytest.approx(start.B0, abs=1e-6)

    def test_fold_start_needs_level_two(self, golden_spec):
        with pytest.raises(ValueError):
            fold_start(SlitComb(golden_spec, compute_angles(golden_spec), 3))

    def test_warm_start_is_admissible(self, golden_level, golden_spec):
        disc, angles = golden_level
        comb = SlitComb(golden_spec, angles, 16)
        start = warm_start(disc, comb)
        assert start.n == 16
        assert comb.is_feasible(np.asarray(start.contributions))
        assert sum(start.contributions) == pytest.approx(1.0)
        assert start.B0 == disc.B0

    def test_inadmissible_init(self, golden_level, golden_spec):
        disc, angles = golden_level
        bad = Discretization(
            n=disc.n, arc=disc.arc, beta=disc.beta, mu=tuple(10 * m for m in disc.mu), B0=disc.B0, c=disc.c
        )
        with pytest.raises(AdmissibilityError):
            solve_level(golden_spec, angles, disc.n, init=bad)

    def test_inner_pole_level(self, inner_spec):
        disc = solve_level(inner_spec, compute_angles(inner_spec), 8)
        assert disc.max_residual < 1e-8
        assert disc.B0 == pytest.approx(6.5958214, abs=1e-5)


class TestContinuation:
    def test_continuation_levels(self):
        assert continuation_levels(2, 8) == [3, 4, 6, 8]
        assert continuation_levels(8, 16) == [12, 16]
        assert continuation_levels(8, 8) == []

    def test_richardson(self):
        assert richardson([8, 16], [1.0, 1.5]) == pytest.approx([2.0])
        assert richardson([8, 16, 32], [1.0, 1.5, 1.75]) == pytest.approx([2.0, 2.0])

    def test_golden_result(self, golden_result):
        assert [record.n for record in golden_result.level_history] == [8, 16, 32]
        assert not golden_result.extrapolated
        assert golden_result.B0_extrapolated is None
        assert golden_result.B0_star == golden_result.discretization.B0
        assert golden_result.B0_star == pytest.approx(2.8811658, abs=1e-5)
        L = 1.0 / math.cosh(golden_result.B0_star)
        assert L == pytest.approx(1.0 / 9.0, rel=0.01)
        assert golden_result.origin_only
        assert golden_result.ray_heights == ()

    def test_estimates_are_level_values_by_default(self, golden_result):
        assert list(golden_result.estimates) == [record.B0 for record in golden_result.level_history]

    def test_extrapolated_value_reported_separately(self, golden_spec):
        result = solve(golden_spec, schedule=(8, 16), tol_B0=1e-300, extrapolate=True, strict=False)
        b8, b16 = (record.B0 for record in result.level_history)
        assert result.extrapolated
        assert result.B0_star == b16
        assert result.B0_extrapolated == pytest.approx(2 * b16 - b8)
        assert list(result.estimates) == pytest.approx([2 * b16 - b8])

    def test_result_normalizations(self, golden_result):
        assert abs(golden_result.measure.mass_defect) < 1e-10
        assert max(abs(r) for r in golden_result.residuals[:-2]) < 1e-8
        assert golden_result.scale.C1 == pytest.approx(1.0 / golden_result.discretization.c)

    def test_increments_recorded(self, golden_result):
        history = golden_result.level_history
        assert len(golden_result.increments) == len(history) - 1
        assert golden_result.increments[0] > golden_result.increments[1]

    def test_round_trip(self, golden_result):
        restored = type(golden_result).model_validate_json(golden_result.model_dump_json())
        assert restored.B0_star == golden_result.B0_star
        assert restored == golden_result

    def test_unsettled_schedule_raises_with_history(self, golden_spec):
        with pytest.raises(NoConvergenceError) as info:
            solve(golden_spec, schedule=(4, 8), tol_B0=1e-300)
        assert [record.n for record in info.value.history] == [4, 8]

    def test_unsettled_schedule_non_strict(self, golden_spec):
        result = solve(golden_spec, schedule=(4, 8), tol_B0=1e-300, strict=False)
        assert not result.converged
        assert result.discretization.n == 8

    def test_invalid_problem(self):
        with pytest.raises(PoleOutsideRangeError):
            solve(ProblemSpec(a=0.25, inner_poles=(0.3,), k=(1,)), schedule=(4,))

    def test_ray_heights_for_inner_pole(self, inner_spec):
        result = solve(inner_spec, schedule=(8, 16), tol_B0=1e-2, strict=False)
        assert len(result.ray_heights) == 1
        assert result.ray_heights[0] > 0
