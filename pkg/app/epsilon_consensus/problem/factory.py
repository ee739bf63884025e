from typing import Callable, Dict, List, Optional, TYPE_CHECKING

import numpy as np

from .instance import ProblemInstance, lasso_instance, quadratic_instance
from .sets import Interval
from ..core.exceptions import ValidationError
from ..core.types import ProblemType
from ..models.registry import ProblemRegistry
from ..utils.logging import SimulationLogger

if TYPE_CHECKING:
    from ..core.config import ExperimentConfig


def _interval_sets(config: 'ExperimentConfig') -> List[Interval]:
    """X_i = [lower_i, upper_i]; missing bounds are infinite"""
    n, d = config.node_count, config.dimension
    lower = config.bounds_for('lower') or [-np.inf] * (n * d)
    upper = config.bounds_for('upper') or [np.inf] * (n * d)
    return [Interval(lower[i * d:(i + 1) * d], upper[i * d:(i + 1) * d]) for i in range(n)]


def _targets(config: 'ExperimentConfig') -> List[np.ndarray]:
    n, d = config.node_count, config.dimension
    if config.p is None:
        raise ValidationError(f"Problem '{config.problem}' needs the key 'p'")
    if len(config.p) == n:
        return [np.full(d, value) for value in config.p]
    if len(config.p) == n * d:
        return [np.array(config.p[i * d:(i + 1) * d]) for i in range(n)]
    raise ValidationError(f"'p' has {len(config.p)} values, expected {n} or {n * d}")


def _build_lasso(config: 'ExperimentConfig', logger: Optional[SimulationLogger] = None) -> ProblemInstance:
    return lasso_instance(config.node_count, config.lam, _targets(config),
                          _interval_sets(config), config.dimension, logger)


def _build_quadratic(config: 'ExperimentConfig', logger: Optional[SimulationLogger] = None) -> ProblemInstance:
    return quadratic_instance(config.node_count, _targets(config),
                              _interval_sets(config), config.dimension)


class ProblemFactory:
    """Factory for creating problem instances from experiment configs"""

    _builders: Dict[ProblemType, Callable[..., ProblemInstance]] = {
        ProblemType.LASSO: _build_lasso,
        ProblemType.QUADRATIC: _build_quadratic,
    }

    @classmethod
    def create_problem(cls, config: 'ExperimentConfig',
                       logger: Optional[SimulationLogger] = None) -> ProblemInstance:
        """Built-in problems by type; any other name is looked up in ProblemRegistry"""
        try:
            problem_type = ProblemType(config.problem)
        except ValueError:
            problem_type = ProblemType.CUSTOM

        if problem_type in cls._builders:
            return cls._builders[problem_type](config, logger)
        return ProblemRegistry.create_instance(config.problem, config)
