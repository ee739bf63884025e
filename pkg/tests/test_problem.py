import logging

import numpy as np
import pytest

from epsilon_consensus.core.exceptions import AssumptionViolation, ValidationError
from epsilon_consensus.problem import (CallableOracle, Interval, LassoOracle, QuadraticOracle,
                                       lasso_eps_subgradient, lasso_instance, project,
                                       quadratic_instance, validate_eps_subgradient)


class TestProjection:
    def test_inside_is_unchanged(self):
        assert project(Interval(-7, 4), 1.5) == 1.5

    def test_clips_to_nearest_end(self):
        assert project(Interval(-7, 4), 10.0) == 4.0
        assert project(Interval(-7, 4), -10.0) == -7.0

    def test_unbounded(self):
        assert project(Interval(), -1e300) == -1e300
        assert project(Interval(0.0), -3.0) == 0.0

    def test_empty_interval_rejected(self):
        with pytest.raises(ValidationError):
            Interval(2.0, 1.0)

    def test_nonexpansive_and_variational_inequality(self):
        rng = np.random.default_rng(11)
        count = 10_000
        ends = np.sort(rng.uniform(-50, 50, size=(2, count)), axis=0)
        box = Interval(ends[0], ends[1])
        x = rng.uniform(-100, 100, size=count)
        y = rng.uniform(-100, 100, size=count)
        px, py = box.project(x), box.project(y)

        assert np.all(np.abs(px - py) <= np.abs(x - y) + 1e-12)
        # (x - P x)(z - P x) <= 0 for every z in the set, z = P y included
        assert np.all((x - px) * (py - px) <= 1e-12)

    def test_intersection(self):
        assert Interval(-10, 7).intersect(Interval(-7, 4)) == Interval(-7, 4)
        assert Interval(0, 1).intersect(Interval(2, 3)) is None


class TestLassoSubgradient:
    def test_exact_subgradient_when_eps_is_zero(self):
        assert lasso_eps_subgradient(3.0, 2.0, 0.1, 0.0) == pytest.approx(1.1)
        assert lasso_eps_subgradient(-3.0, 2.0, 0.1, 0.0) == pytest.approx(-5.1)
        assert lasso_eps_subgradient(0.0, 2.0, 0.1, 0.0) == pytest.approx(-1.9)

    def test_case_split(self):
        # eps = 1.5: |x| <= 0.75 is the middle case
        assert lasso_eps_subgradient(1.0, 2.0, 0.1, 1.5) == pytest.approx(-1.05)
        assert lasso_eps_subgradient(0.0, 4.0, 0.1, 1.5) == pytest.approx(-3.9)
        assert lasso_eps_subgradient(0.75, 4.0, 0.1, 1.5) == pytest.approx(0.75 - 4.0 + 0.1)
        assert lasso_eps_subgradient(-1.0, 8.0, 0.1, 1.5) == pytest.approx(-8.95)

    def test_scalar_in_scalar_out(self):
        assert isinstance(lasso_eps_subgradient(1.0, 2.0, 0.1, 0.5), float)
        assert lasso_eps_subgradient(np.array([1.0, -1.0]), 2.0, 0.1, 0.5).shape == (2,)

    def test_negative_eps_rejected(self):
        with pytest.raises(ValidationError):
            lasso_eps_subgradient(1.0, 2.0, 0.1, -0.1)

    @pytest.mark.parametrize("eps", [0.0, 0.01, 0.1, 1.0])
    def test_definition_holds_on_grid(self, eps):
        oracle = LassoOracle(2.0, 0.1)
        grid = np.round(np.arange(-100, 101) * 0.1, 10)
        for x in grid:
            assert validate_eps_subgradient(oracle, x, eps, grid), f"x={x}, eps={eps}"

    @pytest.mark.parametrize("eps", [0.0, 0.01, 0.1])
    def test_selection_stays_valid_for_larger_eps(self, eps):
        oracle = LassoOracle(2.0, 0.1)
        grid = np.round(np.arange(-50, 51) * 0.2, 10)
        for x in grid[::5]:
            frozen = CallableOracle(oracle.value, lambda y, _, g=oracle.eps_subgradient(x, eps): g)
            for larger in (eps, eps + 0.05, 0.5, 2.0):
                assert validate_eps_subgradient(frozen, x, larger, grid), f"x={x}, eps={eps}, eps'={larger}"

    @pytest.mark.parametrize("x, eps", [(-0.1, 0.01), (0.1, 0.01), (-0.4, 0.1)])
    def test_selection_breaks_for_lambda_above_one(self, x, eps):
        oracle = LassoOracle([2.0], 2.0)
        grid = np.round(np.arange(-100, 101) * 0.1, 10)
        assert not validate_eps_subgradient(oracle, x, eps, grid)

    def test_validator_refutes_a_wrong_selection(self):
        wrong = CallableOracle(lambda x: float(0.5 * np.sum(x ** 2)),
                               lambda x, eps: np.atleast_1d(x) + 5.0)
        assert not validate_eps_subgradient(wrong, 0.0, 0.1, [-1.0, 0.0, 1.0])

    def test_multi_dimensional_split_keeps_total_slack(self):
        oracle = LassoOracle([1.0, -2.0, 0.5], 0.3)
        rng = np.random.default_rng(5)
        probes = rng.uniform(-4, 4, size=(200, 3))
        for x in rng.uniform(-2, 2, size=(20, 3)):
            assert validate_eps_subgradient(oracle, x, 0.6, probes)


class TestOracles:
    def test_value_broadcasts_over_stacks(self):
        oracle = LassoOracle(2.0, 0.1)
        values = oracle.value(np.array([[1.0], [0.0], [-1.0]]))
        assert np.allclose(values, [0.6, 2.0, 4.6])

    def test_quadratic_returns_exact_gradient(self):
        oracle = QuadraticOracle([1.0, 2.0])
        assert np.array_equal(oracle.eps_subgradient(np.array([3.0, 3.0]), 0.5), [2.0, 1.0])

    def test_negative_lambda_rejected(self):
        with pytest.raises(ValidationError):
            LassoOracle(1.0, -0.1)


class TestProblemInstance:
    def test_four_agent_instance(self, lasso_problem):
        assert lasso_problem.node_count == 4
        assert lasso_problem.feasible_set == Interval(-7, 4)
        assert lasso_problem.has_interior

    def test_objective(self, lasso_problem):
        assert lasso_problem.objective(4.0) == pytest.approx(13.6)

    def test_batched_subgradients_match_per_agent(self, lasso_problem, x_init):
        stacked = lasso_problem.subgradients(x_init, 1.5)
        for i, oracle in enumerate(lasso_problem.oracles):
            assert np.array_equal(stacked[i], oracle.eps_subgradient(x_init[i], 1.5))
        assert np.allclose(stacked[:, 0], [-1.05, -3.9, -0.93, -8.95])

    def test_empty_intersection_is_assumption_1(self):
        with pytest.raises(AssumptionViolation) as info:
            quadratic_instance(2, [0.0, 1.0], [Interval(0, 1), Interval(2, 3)])
        assert info.value.assumption == 1
        assert "Assumption 1" in str(info.value)

    def test_single_point_intersection_has_no_interior(self):
        prob = quadratic_instance(2, [0.0, 1.0], [Interval(0, 1), Interval(1, 3)])
        assert prob.feasible_set == Interval(1, 1)
        assert not prob.has_interior

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            lasso_instance(3, 0.1, [1.0, 2.0], [Interval()] * 3)

    def test_project_and_feasibility(self, lasso_problem):
        x = np.array([[20.0], [0.0], [-20.0], [5.0]])
        projected = lasso_problem.project(x)
        assert np.array_equal(projected[:, 0], [7.0, 0.0, -8.0, 4.0])
        assert lasso_problem.is_feasible(projected)
        assert not lasso_problem.is_feasible(x)

    def test_large_lambda_is_logged(self, caplog):
        with caplog.at_level(logging.WARNING, logger='epsilon_consensus'):
            prob = lasso_instance(2, 2.0, [1.0, 2.0], [Interval(-1, 1)] * 2)
        assert prob.node_count == 2
        assert "ORACLE_WARNING" in caplog.text

    def test_small_lambda_is_quiet(self, caplog):
        with caplog.at_level(logging.WARNING, logger='epsilon_consensus'):
            lasso_instance(2, 1.0, [1.0, 2.0], [Interval(-1, 1)] * 2)
        assert "ORACLE_WARNING" not in caplog.text
