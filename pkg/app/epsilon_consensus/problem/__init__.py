from .base import ConvexSet, EpsSubgradOracle
from .sets import ConvexSetInterval, Interval, project
from .oracles import CallableOracle, LassoOracle, QuadraticOracle, lasso_eps_subgradient
from .instance import ProblemInstance, lasso_instance, quadratic_instance, validate_eps_subgradient

__all__ = [
    'ConvexSet', 'EpsSubgradOracle', 'ConvexSetInterval', 'Interval', 'project',
    'CallableOracle', 'LassoOracle', 'QuadraticOracle', 'lasso_eps_subgradient',
    'ProblemInstance', 'lasso_instance', 'quadratic_instance', 'validate_eps_subgradient',
]
