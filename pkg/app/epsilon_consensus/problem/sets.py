from typing import Optional, Sequence, Union

import numpy as np

from .base import ConvexSet
from ..core.exceptions import ValidationError

Bound = Union[float, Sequence[float], np.ndarray]


class Interval(ConvexSet):
    """
    Closed interval [lower, upper], or a box when the bounds are vectors

    Infinite bounds are allowed, so (-inf, inf) is the whole space.
    """

    def __init__(self, lower: Bound = -np.inf, upper: Bound = np.inf):
        lower_arr = np.atleast_1d(np.array(lower, dtype=float))
        upper_arr = np.atleast_1d(np.array(upper, dtype=float))
        try:
            lower_arr, upper_arr = np.broadcast_arrays(lower_arr, upper_arr)
        except ValueError:
            raise ValidationError(
                f"Interval bounds have incompatible shapes {lower_arr.shape} and {upper_arr.shape}"
            )

        if np.any(np.isnan(lower_arr)) or np.any(np.isnan(upper_arr)):
            raise ValidationError("Interval bounds must not be NaN")
        if np.any(lower_arr > upper_arr):
            raise ValidationError(f"Empty interval: lower {lower_arr} > upper {upper_arr}")

        self.lower = lower_arr.copy()
        self.upper = upper_arr.copy()
        self.lower.setflags(write=False)
        self.upper.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    def project(self, x: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=float), self.lower, self.upper)

    def contains(self, x: np.ndarray, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def intersect(self, other: 'Interval') -> Optional['Interval']:
        """Intersection, or None when it is empty"""
        lower = np.maximum(self.lower, other.lower)
        upper = np.minimum(self.upper, other.upper)
        if np.any(lower > upper):
            return None
        return Interval(lower, upper)

    def has_interior(self) -> bool:
        return bool(np.all(self.lower < self.upper))

    def broadcast_to(self, dimension: int) -> 'Interval':
        """Repeat scalar bounds over `dimension` coordinates"""
        if self.dimension == dimension:
            return self
        if self.dimension != 1:
            raise ValidationError(
                f"Cannot broadcast a {self.dimension}-dimensional interval to dimension {dimension}"
            )
        return Interval(np.repeat(self.lower, dimension), np.repeat(self.upper, dimension))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def __repr__(self) -> str:
        if self.dimension == 1:
            return f"Interval([{self.lower[0]:g}, {self.upper[0]:g}])"
        return f"Interval(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


# alias kept for callers that name X_i by its shape
ConvexSetInterval = Interval


def project(convex_set: ConvexSet, x: np.ndarray) -> np.ndarray:
    """P_X[x] = argmin_{y in X} ||y - x||"""
    return convex_set.project(x)
