from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import ValidationError
from .types import CheckMode, ScheduleFamily, Verdict
from ..models.base import BaseModel
from ..models.records import ScheduleVerdict


@dataclass
class Schedule(BaseModel):
    """
    Parametric sequence used for alpha_k and eps_k

        power:     a / (k + b)^p
        constant:  a

    A family name that is not recognized is kept as a plain string so that
    check_schedule() can report it as undecidable; such a schedule cannot be
    evaluated.
    """
    family: Union[ScheduleFamily, str] = ScheduleFamily.POWER
    a: float = 1.0
    b: float = 0.0
    p: float = 1.0

    def __post_init__(self):
        if isinstance(self.family, str):
            try:
                self.family = ScheduleFamily(self.family)
            except ValueError:
                pass
        self.a = float(self.a)
        self.b = float(self.b)
        self.p = float(self.p)
        if self.a < 0:
            raise ValidationError(f"Schedule coefficient a must be nonnegative, got {self.a}")
        if self.b < 0:
            raise ValidationError(f"Schedule offset b must be nonnegative, got {self.b}")

    @classmethod
    def power(cls, a: float, b: float = 0.0, p: float = 1.0) -> 'Schedule':
        return cls(ScheduleFamily.POWER, a, b, p)

    @classmethod
    def constant(cls, a: float) -> 'Schedule':
        return cls(ScheduleFamily.CONSTANT, a, 0.0, 0.0)

    @property
    def is_evaluable(self) -> bool:
        return isinstance(self.family, ScheduleFamily)

    @property
    def is_constant(self) -> bool:
        """Constant sequence, including the degenerate power family with p = 0"""
        return (self.family == ScheduleFamily.CONSTANT
                or (self.family == ScheduleFamily.POWER and self.p == 0))

    @property
    def decay(self) -> float:
        """Exponent q with value ~ a / k^q as k grows"""
        return 0.0 if self.is_constant else self.p

    def __call__(self, k: int) -> float:
        if not self.is_evaluable:
            raise ValidationError(f"Unknown schedule family '{self.family}'")
        if k < 1:
            raise ValidationError(f"Schedules are indexed from k = 1, got {k}")
        if self.family == ScheduleFamily.CONSTANT:
            return self.a
        return self.a / (k + self.b) ** self.p

    def values(self, k: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over an array of indices"""
        k = np.asarray(k, dtype=float)
        if not self.is_evaluable:
            raise ValidationError(f"Unknown schedule family '{self.family}'")
        if self.family == ScheduleFamily.CONSTANT:
            return np.full(k.shape, self.a)
        return self.a / (k + self.b) ** self.p

    def describe(self) -> str:
        if not self.is_evaluable:
            return f"{self.family}(a={self.a:g}, b={self.b:g}, p={self.p:g})"
        if self.family == ScheduleFamily.CONSTANT:
            return f"{self.a:g}"
        return f"{self.a:g}/(k+{self.b:g})^{self.p:g}"


def _step_conditions(alpha: Schedule) -> str:
    """Empty string when sum alpha = inf and sum alpha^2 < inf, else the reason"""
    if alpha.a == 0:
        return "Σα converges (α ≡ 0)"
    q = alpha.decay
    if q > 1:
        return "Σα converges"
    if 2 * q <= 1:
        return "Σα² diverges"
    return ''


def check_schedule(alpha: Schedule, eps: Schedule, mode: Union[CheckMode, str]) -> ScheduleVerdict:
    """
    Decide the step-size conditions symbolically on the parametric families

    theorem1: sum alpha_k = inf, sum alpha_k^2 < inf, eps_k a constant eps0 > 0.
    theorem2: the same two conditions on alpha plus sum alpha_k eps_k < inf.

    For a / (k + b)^p the offset b does not change summability, so the tests
    reduce to conditions on the exponents.
    """
    mode = CheckMode(mode)
    if not (alpha.is_evaluable and eps.is_evaluable):
        unknown = alpha.family if not alpha.is_evaluable else eps.family
        return ScheduleVerdict(mode, Verdict.UNDECIDABLE, f"unknown family '{unknown}'")

    reason = _step_conditions(alpha)
    if reason:
        return ScheduleVerdict(mode, Verdict.INVALID, reason)

    if mode == CheckMode.THEOREM1:
        if not eps.is_constant:
            return ScheduleVerdict(mode, Verdict.INVALID, "ε must be a constant ε₀")
        if eps.a <= 0:
            return ScheduleVerdict(mode, Verdict.INVALID, "ε₀ must be positive")
        return ScheduleVerdict(mode, Verdict.VALID)

    # an identically zero eps is the exact-subgradient case
    if eps.a > 0 and alpha.decay + eps.decay <= 1:
        return ScheduleVerdict(mode, Verdict.INVALID, "Σαε diverges")
    return ScheduleVerdict(mode, Verdict.VALID)


def run_mode(eps: Schedule) -> CheckMode:
    """theorem1 for a constant positive eps, theorem2 otherwise"""
    if eps.is_evaluable and eps.is_constant and eps.a > 0:
        return CheckMode.THEOREM1
    return CheckMode.THEOREM2
