from typing import Callable, Optional, Sequence, Union

import numpy as np

from .base import EpsSubgradOracle
from ..core.exceptions import ValidationError

ArrayLike = Union[float, Sequence[float], np.ndarray]


def lasso_eps_subgradient(x: ArrayLike, p: ArrayLike, lam: ArrayLike, eps: float) -> Union[float, np.ndarray]:
    """
    Epsilon-subgradient selection for f(x) = 1/2 (x - p)^2 + lam |x|

    Case split on x (elementwise):
        x < -eps/2          ->  x - p - lam - lam*eps/x
        -eps/2 <= x <= eps/2 ->  x - p + lam
        x > eps/2           ->  x - p + lam - lam*eps/x

    Division by x only happens where |x| > eps/2 >= 0, and with eps = 0 the
    selection is the exact subgradient. Scalar inputs give a float back.
    """
    if eps < 0:
        raise ValidationError(f"eps must be nonnegative, got {eps}")

    x_arr = np.asarray(x, dtype=float)
    half = eps / 2
    outer = np.abs(x_arr) > half
    # only divide where |x| > eps/2
    correction = np.where(outer, np.multiply(lam, eps) / np.where(outer, x_arr, 1.0), 0.0)
    sign = np.where(x_arr < -half, -1.0, 1.0)
    g = ((x_arr - p) + np.multiply(lam, sign)) - correction
    if np.ndim(g) == 0:
        return float(g)
    return g


class LassoOracle(EpsSubgradOracle):
    """f_i(x) = 1/2 ||x - p_i||^2 + lam ||x||_1"""

    def __init__(self, p: ArrayLike, lam: float):
        if lam < 0:
            raise ValidationError(f"lambda must be nonnegative, got {lam}")
        self.p = np.atleast_1d(np.array(p, dtype=float))
        self.lam = float(lam)

    @property
    def dimension(self) -> int:
        return self.p.shape[0]

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return 0.5 * np.sum((x - self.p) ** 2, axis=-1) + self.lam * np.sum(np.abs(x), axis=-1)

    def eps_subgradient(self, x: np.ndarray, eps: float) -> np.ndarray:
        # the l1 term is separable: eps/d per coordinate keeps the total slack at eps
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.asarray(lasso_eps_subgradient(x, self.p, self.lam, eps / self.dimension))

    @classmethod
    def batched(cls, oracles):
        dims = {o.dimension for o in oracles}
        if len(dims) != 1:
            return None
        d = dims.pop()
        p = np.stack([o.p for o in oracles])
        lam = np.array([[o.lam] for o in oracles])

        def evaluate(x: np.ndarray, eps: float) -> np.ndarray:
            return np.asarray(lasso_eps_subgradient(x, p, lam, eps / d))
        return evaluate

    @classmethod
    def batched_value(cls, oracles):
        p = np.stack([o.p for o in oracles])
        lam = np.array([o.lam for o in oracles])

        def evaluate(x: np.ndarray) -> np.ndarray:
            x = np.asarray(x, dtype=float)
            return 0.5 * np.sum((x - p) ** 2, axis=-1) + lam * np.sum(np.abs(x), axis=-1)
        return evaluate

    def __repr__(self) -> str:
        return f"LassoOracle(p={self.p.tolist()}, lam={self.lam})"


class QuadraticOracle(EpsSubgradOracle):
    """f_i(x) = 1/2 ||x - p_i||^2; the exact gradient is returned for every eps"""

    def __init__(self, p: ArrayLike):
        self.p = np.atleast_1d(np.array(p, dtype=float))

    @property
    def dimension(self) -> int:
        return self.p.shape[0]

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return 0.5 * np.sum((x - self.p) ** 2, axis=-1)

    def eps_subgradient(self, x: np.ndarray, eps: float) -> np.ndarray:
        if eps < 0:
            raise ValidationError(f"eps must be nonnegative, got {eps}")
        return np.atleast_1d(np.asarray(x, dtype=float)) - self.p

    @classmethod
    def batched(cls, oracles):
        p = np.stack([o.p for o in oracles])

        def evaluate(x: np.ndarray, eps: float) -> np.ndarray:
            if eps < 0:
                raise ValidationError(f"eps must be nonnegative, got {eps}")
            return np.asarray(x, dtype=float) - p
        return evaluate

    @classmethod
    def batched_value(cls, oracles):
        p = np.stack([o.p for o in oracles])

        def evaluate(x: np.ndarray) -> np.ndarray:
            return 0.5 * np.sum((np.asarray(x, dtype=float) - p) ** 2, axis=-1)
        return evaluate

    def __repr__(self) -> str:
        return f"QuadraticOracle(p={self.p.tolist()})"


class CallableOracle(EpsSubgradOracle):
    """Wrap user-supplied value and eps-subgradient functions"""

    def __init__(self, value_fn: Callable[[np.ndarray], float],
                 eps_subgrad_fn: Callable[[np.ndarray, float], np.ndarray],
                 name: Optional[str] = None):
        self.value_fn = value_fn
        self.eps_subgrad_fn = eps_subgrad_fn
        self.name = name or getattr(value_fn, '__name__', 'custom')

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim <= 1:
            return np.asarray(float(self.value_fn(x)))
        flat = x.reshape(-1, x.shape[-1])
        return np.array([float(self.value_fn(row)) for row in flat]).reshape(x.shape[:-1])

    def eps_subgradient(self, x: np.ndarray, eps: float) -> np.ndarray:
        if eps < 0:
            raise ValidationError(f"eps must be nonnegative, got {eps}")
        return np.atleast_1d(np.asarray(self.eps_subgrad_fn(np.atleast_1d(x), eps), dtype=float))

    def __repr__(self) -> str:
        return f"CallableOracle({self.name})"
