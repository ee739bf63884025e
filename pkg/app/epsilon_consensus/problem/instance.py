from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .base import ConvexSet, EpsSubgradOracle
from .sets import Interval
from .oracles import LassoOracle, QuadraticOracle
from ..core.defaults import SUBGRADIENT_TOL
from ..core.exceptions import AssumptionViolation, ValidationError
from ..utils.logging import SimulationLogger


class ProblemInstance:
    """
    Per-agent objective oracles and constraint sets of

        min_x  f(x) = sum_i f_i(x)   subject to  x in X = X_1 ∩ ... ∩ X_N

    Agent i only sees (f_i, X_i).
    """

    def __init__(self, oracles: Sequence[EpsSubgradOracle], sets: Sequence[ConvexSet],
                 dimension: int = 1, name: str = 'custom'):
        if len(oracles) < 1:
            raise ValidationError("A problem needs at least one agent")
        if len(oracles) != len(sets):
            raise ValidationError(
                f"Got {len(oracles)} oracles but {len(sets)} constraint sets"
            )
        if dimension < 1:
            raise ValidationError(f"dimension must be positive, got {dimension}")

        self.dimension = int(dimension)
        self.name = name
        self.oracles: List[EpsSubgradOracle] = list(oracles)
        self.sets: List[ConvexSet] = [
            s.broadcast_to(self.dimension) if isinstance(s, Interval) else s for s in sets
        ]

        self.feasible_set: Optional[Interval] = None
        self._lower: Optional[np.ndarray] = None
        self._upper: Optional[np.ndarray] = None
        if all(isinstance(s, Interval) for s in self.sets):
            self._lower = np.stack([s.lower for s in self.sets])
            self._upper = np.stack([s.upper for s in self.sets])
            self.feasible_set = self._intersect_intervals()

        self._batch_subgradient = self._batched(lambda cls: cls.batched(self.oracles))
        self._batch_value = self._batched(lambda cls: cls.batched_value(self.oracles))

    def _intersect_intervals(self) -> Interval:
        feasible = self.sets[0]
        for i, s in enumerate(self.sets[1:], start=2):
            feasible = feasible.intersect(s)
            if feasible is None:
                raise AssumptionViolation(
                    1, f"the constraint sets X_1..X_{i} have an empty intersection"
                )
        return feasible

    def _batched(self, make: Callable) -> Optional[Callable]:
        kinds = {type(o) for o in self.oracles}
        if len(kinds) != 1:
            return None
        return make(kinds.pop())

    @property
    def node_count(self) -> int:
        return len(self.oracles)

    @property
    def has_interior(self) -> bool:
        """Slater-type check: the intersection has a nonempty interior"""
        if self.feasible_set is None:
            return True
        return self.feasible_set.has_interior()

    @property
    def bounds(self) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """Stacked (N, d) lower/upper bounds when every X_i is an interval"""
        if self._lower is None:
            return None
        return self._lower, self._upper

    def subgradients(self, x: np.ndarray, eps: float) -> np.ndarray:
        """Stacked g(k): row i is agent i's eps-subgradient at x_i"""
        if self._batch_subgradient is not None:
            return self._batch_subgradient(x, eps)
        return np.stack([o.eps_subgradient(x[i], eps) for i, o in enumerate(self.oracles)])

    def agent_values(self, x: np.ndarray) -> np.ndarray:
        """f_i(x_i) for every agent; x is (..., N, d), result (..., N)"""
        x = np.asarray(x, dtype=float)
        if self._batch_value is not None:
            return self._batch_value(x)
        return np.stack([o.value(x[..., i, :]) for i, o in enumerate(self.oracles)], axis=-1)

    def total_value(self, x: np.ndarray) -> np.ndarray:
        """f~(x) = sum_i f_i(x_i)"""
        return np.sum(self.agent_values(x), axis=-1)

    def objective(self, point: np.ndarray) -> float:
        """f(x) = sum_i f_i(x) at a single consensus point"""
        point = np.atleast_1d(np.asarray(point, dtype=float))
        blocks = np.tile(point, (self.node_count, 1))
        return float(self.total_value(blocks))

    def project(self, x: np.ndarray) -> np.ndarray:
        """Blockwise projection onto X~ = X_1 x ... x X_N"""
        if self._lower is not None:
            return np.minimum(np.maximum(x, self._lower), self._upper)
        return np.stack([s.project(x[i]) for i, s in enumerate(self.sets)])

    def is_feasible(self, x: np.ndarray, tol: float = 0.0) -> bool:
        return all(s.contains(x[i], tol) for i, s in enumerate(self.sets))

    def __repr__(self) -> str:
        return (f"ProblemInstance(name={self.name!r}, agents={self.node_count}, "
                f"dimension={self.dimension}, feasible_set={self.feasible_set})")


def lasso_instance(n: int, lam: float, p: Sequence, sets: Sequence[ConvexSet],
                   dimension: int = 1, logger: Optional[SimulationLogger] = None) -> ProblemInstance:
    """
    LASSO instance with f_i(x) = 1/2 ||x - p_i||^2 + lam ||x||_1

    The case-split selection is only an eps-subgradient for lam <= 1; a larger
    lam is accepted and logged as an ORACLE_WARNING.

    Example:
        lasso_instance(4, 0.1, [2, 4, 6, 8],
                       [Interval(-11 + i, 8 - i) for i in range(1, 5)])
    """
    if len(p) != n or len(sets) != n:
        raise ValidationError(f"Expected {n} targets and sets, got {len(p)} and {len(sets)}")
    oracles = [LassoOracle(np.broadcast_to(np.asarray(pi, dtype=float), (dimension,)), lam)
               for pi in p]
    if lam > 1:
        (logger or SimulationLogger()).log_oracle_warning(
            'lasso', f"lambda = {lam} > 1: the selection can violate f(y) >= f(x) + g(y - x) - eps",
            {'lambda': lam},
        )
    return ProblemInstance(oracles, sets, dimension, name='lasso')


def quadratic_instance(n: int, p: Sequence, sets: Sequence[ConvexSet],
                       dimension: int = 1) -> ProblemInstance:
    """Smooth instance f_i(x) = 1/2 ||x - p_i||^2 with exact gradients"""
    if len(p) != n or len(sets) != n:
        raise ValidationError(f"Expected {n} targets and sets, got {len(p)} and {len(sets)}")
    oracles = [QuadraticOracle(np.broadcast_to(np.asarray(pi, dtype=float), (dimension,)))
               for pi in p]
    return ProblemInstance(oracles, sets, dimension, name='quadratic')


def validate_eps_subgradient(oracle: EpsSubgradOracle, x, eps: float,
                             probe_points: Sequence, tol: float = SUBGRADIENT_TOL) -> bool:
    """
    Check f(y) >= f(x) + g^T (y - x) - eps at every probe y

    g is the oracle's selection at (x, eps). A finite probe set can only
    refute a selection, never prove it.
    """
    if eps < 0:
        raise ValidationError(f"eps must be nonnegative, got {eps}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    g = oracle.eps_subgradient(x, eps)
    fx = float(oracle.value(x))

    for y in probe_points:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if float(oracle.value(y)) < fx + float(np.dot(g, y - x)) - eps - tol:
            return False
    return True
