"""End-to-end runs of the four-agent LASSO example"""
import numpy as np
import pytest

from epsilon_consensus import EpsilonConsensus
from epsilon_consensus.core import dynamics
from epsilon_consensus.core.reference import convergence_report, gap_bound_check, solve_saddle
from epsilon_consensus.core.schedule import Schedule
from epsilon_consensus.core.trace import first_crossing, overshoot, tail_min_delta
from epsilon_consensus.problem import quadratic_instance

from conftest import CONFIG_DIR, EXAMPLE_X0, example_sets

LONG_RUN = 100_000


def _experiment(name, **overrides):
    overrides.setdefault('logging.enabled', False)
    return EpsilonConsensus(str(CONFIG_DIR / name), env_file=None, **overrides)


def _max_deviation(record, x_star):
    return float(np.max(np.abs(record.x - x_star)))


@pytest.fixture(scope="module")
def plain_run():
    return _experiment("lasso_plain.conf").run(iters=LONG_RUN)


@pytest.fixture(scope="module")
def normalized_run():
    return _experiment("lasso_normalized.conf").run(iters=LONG_RUN)


@pytest.mark.slow
class TestPlainVariant:
    def test_reaches_the_optimum(self, plain_run):
        # first observed crossing was k = 29
        assert 27 <= plain_run.crossing(0.1) <= 31
        assert plain_run.converged

    def test_stays_feasible(self, plain_run):
        lower = np.array([-10.0, -9.0, -8.0, -7.0])[:, None]
        upper = np.array([7.0, 6.0, 5.0, 4.0])[:, None]
        for record in plain_run.trace[::97]:
            assert np.all(record.x >= lower) and np.all(record.x <= upper)

    def test_residual_after_ten_thousand_steps(self, plain_run):
        assert plain_run.trace[10_000].residual < 0.1

    def test_runtime(self, plain_run):
        assert plain_run.wall_time < 5.0

    def test_gap_bound_along_the_run(self, plain_run):
        holds, fitted = gap_bound_check(plain_run.trace, plain_run.saddle,
                                        Schedule.power(3, 1, 1), Schedule.power(3, 1, 1))
        assert holds
        assert np.isfinite(fitted)

    def test_distance_to_saddle_settles(self, plain_run):
        report = convergence_report(plain_run.trace, plain_run.saddle, tail_fraction=0.1)
        assert report['tail_oscillation'] <= 1e-2


@pytest.mark.slow
class TestNormalizedVariant:
    def test_smaller_early_overshoot(self, plain_run, normalized_run):
        assert overshoot(normalized_run.trace) <= overshoot(plain_run.trace)

    def test_reaches_the_optimum(self, normalized_run):
        assert normalized_run.crossing(0.1) is not None
        final = normalized_run.final
        assert _max_deviation(final, normalized_run.saddle.x_star) <= 0.1
        assert final.consensus_error <= 0.1

    def test_step_never_exceeds_alpha_over_c(self, normalized_run):
        steps = np.array([r.step_used for r in normalized_run.trace])
        ks = np.arange(1, len(steps) + 1)
        assert np.all(steps <= 3.0 / (ks + 1) / 0.1 * (1 + 1e-12))


@pytest.mark.slow
@pytest.mark.parametrize("eps0", [0.1, 0.5, 1.0])
def test_constant_accuracy_bounds_the_gap(eps0):
    result = _experiment("lasso_constant_eps.conf", **{'eps.const': eps0}).run(iters=LONG_RUN)
    assert tail_min_delta(result.trace, 0.2) <= 4 * eps0


def test_exact_gradients_reach_the_central_optimum(example_graph):
    prob = quadratic_instance(4, [2.0, 4.0, 6.0, 8.0], example_sets())
    saddle = solve_saddle(example_graph, prob)
    trace = dynamics.run(example_graph, prob, Schedule.power(10.0, 10.0, 1.0), Schedule.constant(0.0),
                         EXAMPLE_X0, iters=10_000, reference=saddle)
    assert saddle.point[0] == 4.0
    assert _max_deviation(trace[-1], saddle.x_star) <= 1e-3
    assert first_crossing(trace, saddle.x_star, 1e-3) is not None


def test_gap_bound_on_a_thousand_steps():
    experiment = _experiment("lasso_plain.conf")
    result = experiment.run(iters=1_000)
    holds, fitted = gap_bound_check(result.trace, result.saddle,
                                    experiment.config.alpha, experiment.config.eps)
    assert holds and np.isfinite(fitted)
