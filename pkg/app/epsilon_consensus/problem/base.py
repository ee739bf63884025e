from abc import ABC, abstractmethod
from typing import Callable, Optional, Sequence

import numpy as np

# library: epsilon_consensus.problem.base
# This module defines the interfaces an agent's local data must implement:
# an objective oracle returning epsilon-subgradients and a closed convex set.
class ConvexSet(ABC):
    """Closed convex constraint set X_i with Euclidean projection"""

    @abstractmethod
    def project(self, x: np.ndarray) -> np.ndarray:
        """Closest point of the set to x"""
        pass

    @abstractmethod
    def contains(self, x: np.ndarray, tol: float = 0.0) -> bool:
        """Membership test with absolute tolerance"""
        pass


class EpsSubgradOracle(ABC):
    """Local objective f_i with an epsilon-subgradient selection"""

    @abstractmethod
    def value(self, x: np.ndarray) -> np.ndarray:
        """
        f_i(x)

        x carries the decision variable on its last axis; any leading axes
        are broadcast, so a stack of points returns a stack of values.
        """
        pass

    @abstractmethod
    def eps_subgradient(self, x: np.ndarray, eps: float) -> np.ndarray:
        """A deterministic selection g from the eps-subdifferential at x"""
        pass

    @classmethod
    def batched(cls, oracles: Sequence['EpsSubgradOracle']) -> Optional[Callable[[np.ndarray, float], np.ndarray]]:
        """
        Optional vectorized evaluator for a stack of oracles of this class

        Returns a callable (x_blocks, eps) -> g_blocks whose row i is bitwise
        equal to oracles[i].eps_subgradient(x_blocks[i], eps), or None when
        the class has no vectorized form.
        """
        return None

    @classmethod
    def batched_value(cls, oracles: Sequence['EpsSubgradOracle']) -> Optional[Callable[[np.ndarray], np.ndarray]]:
        """Optional vectorized value evaluator over (..., N, d) stacks"""
        return None
