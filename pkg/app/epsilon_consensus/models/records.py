from dataclasses import dataclass
from typing import Optional

import numpy as np

from .base import BaseModel
from ..core.types import CheckMode, Verdict


@dataclass
class TraceRecord(BaseModel):
    """Diagnostics of one iterate z(k) = (x(k), v(k))"""
    k: int
    x: np.ndarray
    v: np.ndarray
    consensus_error: float
    objective_gap: Optional[float] = None
    delta: Optional[float] = None
    residual: Optional[float] = None
    # alpha_k / eps_k of the step that leaves this state
    step_used: float = float('nan')
    eps_used: float = float('nan')

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TraceRecord):
            return NotImplemented
        scalars = ('k', 'consensus_error', 'objective_gap', 'delta',
                   'residual', 'step_used', 'eps_used')
        return (np.array_equal(self.x, other.x) and np.array_equal(self.v, other.v)
                and all(_same(getattr(self, s), getattr(other, s)) for s in scalars))


def _same(a, b) -> bool:
    if a is None or b is None:
        return a is b
    return a == b or (np.isnan(a) and np.isnan(b))


@dataclass
class SaddlePoint(BaseModel):
    """Saddle point (x*, v*) of the augmented Lagrangian, plus f* and multipliers"""
    x_star: np.ndarray
    v_star: np.ndarray
    f_star: float
    # normal-cone multipliers n_i and exact subgradients g_i* at x*
    multipliers: Optional[np.ndarray] = None
    subgradients: Optional[np.ndarray] = None

    @property
    def point(self) -> np.ndarray:
        """The common optimum x* (one d-block)"""
        return self.x_star[0]

    def stacked(self) -> np.ndarray:
        """z* = col(x*, v*)"""
        return np.concatenate([self.x_star.ravel(), self.v_star.ravel()])


@dataclass
class ScheduleVerdict(BaseModel):
    """Outcome of a symbolic step-size check"""
    mode: CheckMode
    verdict: Verdict
    reason: str = ''

    @property
    def is_valid(self) -> bool:
        return self.verdict == Verdict.VALID

    def __str__(self) -> str:
        if self.reason and self.verdict != Verdict.VALID:
            return f"{self.mode.value}: {self.verdict.value} ({self.reason})"
        return f"{self.mode.value}: {self.verdict.value}"

