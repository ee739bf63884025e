from typing import Any, Dict, List, Optional

from .base import BaseModel
from .records import SaddlePoint, ScheduleVerdict, TraceRecord


class RunResult(BaseModel):
    """Outcome of one simulation run"""

    def __init__(self, trace: List[TraceRecord], variant: str, wall_time: float,
                 run_id: str, saddle: Optional[SaddlePoint] = None,
                 verdict: Optional[ScheduleVerdict] = None,
                 output: Optional[str] = None):
        self.trace = trace
        self.variant = variant
        self.wall_time = wall_time
        self.run_id = run_id
        self.saddle = saddle
        self.verdict = verdict
        self.output = output

    @property
    def iterations(self) -> int:
        return len(self.trace) - 1

    @property
    def final(self) -> TraceRecord:
        return self.trace[-1]

    @property
    def final_residual(self) -> Optional[float]:
        return self.final.residual

    @property
    def final_consensus_error(self) -> float:
        return self.final.consensus_error

    @property
    def converged(self) -> bool:
        """Consensus reached on x* to within 0.1, when a reference exists"""
        return self.crossing(0.1) is not None

    def crossing(self, tol: float) -> Optional[int]:
        from ..core.trace import first_crossing

        if self.saddle is None:
            return None
        return first_crossing(self.trace, self.saddle.x_star, tol)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'run_id': self.run_id,
            'variant': self.variant,
            'iterations': self.iterations,
            'final_residual': self.final_residual,
            'final_consensus_error': self.final_consensus_error,
            'wall_time': self.wall_time,
            'verdict': self.verdict.to_dict() if self.verdict else None,
            'output': self.output,
        }
