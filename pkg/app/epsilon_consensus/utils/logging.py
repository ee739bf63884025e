import logging
import json
import time
from typing import Optional, Dict, Any
from datetime import datetime

import numpy as np


class SimulationLogger:
    """Structured JSON event logging for simulation runs"""

    def __init__(self, logger: Optional[logging.Logger] = None,
                 log_level: int = logging.INFO,
                 enabled: bool = True):

        self.logger = logger or logging.getLogger('epsilon_consensus')
        self.log_level = log_level
        self.enabled = enabled

        if not self.logger.handlers:
            handler = logging.StreamHandler()
            formatter = logging.Formatter(
                '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
            )
            handler.setFormatter(formatter)
            self.logger.addHandler(handler)
            self.logger.setLevel(log_level)

    @classmethod
    def from_config(cls, logging_config: Dict[str, Any]) -> 'SimulationLogger':
        """Build from the `logging.*` config keys"""
        level = getattr(logging, str(logging_config.get('level', 'INFO')).upper(), logging.INFO)
        return cls(log_level=level, enabled=bool(logging_config.get('enabled', True)))

    def _emit(self, level: int, log_data: Dict[str, Any]) -> None:
        if not self.enabled:
            return
        log_data['timestamp'] = datetime.utcnow().isoformat()
        self.logger.log(level, json.dumps(log_data, indent=2, default=_jsonable))

    def log_run_start(self, variant: str, iterations: int, agents: int,
                      dimension: int, run_id: Optional[str] = None) -> str:
        """Log the start of a run and return its id"""
        run_id = run_id or self._generate_run_id()
        self._emit(self.log_level, {
            'type': 'RUN_START',
            'run_id': run_id,
            'variant': variant,
            'iterations': iterations,
            'agents': agents,
            'dimension': dimension,
        })
        return run_id

    def log_schedule_verdict(self, verdict, alpha=None, eps=None) -> None:
        """Log a schedule check; invalid or undecidable verdicts are warnings"""
        log_data = {
            'type': 'SCHEDULE_VERDICT',
            'mode': verdict.mode.value,
            'verdict': verdict.verdict.value,
            'reason': verdict.reason,
        }
        if alpha is not None:
            log_data['alpha'] = alpha.describe()
        if eps is not None:
            log_data['eps'] = eps.describe()

        level = self.log_level if verdict.is_valid else logging.WARNING
        self._emit(level, log_data)

    def log_assumption_check(self, assumption: int, passed: bool,
                             details: Optional[Dict] = None, warning: bool = False) -> None:
        """Log an assumption check; failures and warnings go out at WARNING"""
        log_data = {
            'type': 'ASSUMPTION_CHECK',
            'assumption': assumption,
            'passed': passed,
        }
        if details:
            log_data['details'] = details

        level = self.log_level if passed and not warning else logging.WARNING
        self._emit(level, log_data)

    def log_projection_warning(self, original: np.ndarray, projected: np.ndarray) -> None:
        """Log that an infeasible initial state was projected onto the constraint sets"""
        moved = np.flatnonzero(np.any(original != projected, axis=-1)) + 1
        self._emit(logging.WARNING, {
            'type': 'PROJECTION_WARNING',
            'agents': moved.tolist(),
            'original': original,
            'projected': projected,
        })

    def log_oracle_warning(self, problem: str, reason: str, details: Optional[Dict[str, Any]] = None) -> None:
        """Log a problem whose oracle selection is not a valid eps-subgradient everywhere"""
        log_data = {
            'type': 'ORACLE_WARNING',
            'problem': problem,
            'reason': reason,
        }
        if details:
            log_data['details'] = details
        self._emit(logging.WARNING, log_data)

    def log_progress(self, k: int, consensus_error: float) -> None:
        self._emit(self.log_level, {
            'type': 'PROGRESS',
            'k': k,
            'consensus_error': consensus_error,
        })

    def log_run_summary(self, run_id: str, iterations: int, residual: Optional[float],
                        consensus_error: float, wall_time: float) -> None:
        """Log the end-of-run summary"""
        self._emit(self.log_level, {
            'type': 'RUN_SUMMARY',
            'run_id': run_id,
            'iterations': iterations,
            'final_residual': residual,
            'final_consensus_error': consensus_error,
            'wall_time_ms': round(wall_time * 1000, 2),
        })

    def _generate_run_id(self) -> str:
        """Generate unique run ID"""
        return f"run_{int(time.time() * 1000000)}"


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return str(value)
