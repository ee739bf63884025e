from typing import Any, Dict, Optional

from . import dynamics
from .config import ExperimentConfig
from .exceptions import AssumptionViolation, SaddlePointError, ValidationError
from .graph import CommGraph
from .reference import solve_saddle
from .schedule import check_schedule, run_mode
from .trace import write_csv
from .types import CheckMode
from ..models.records import SaddlePoint
from ..models.result import RunResult
from ..problem.factory import ProblemFactory
from ..problem.instance import ProblemInstance
from ..utils.decorators import timed
from ..utils.logging import SimulationLogger


class Simulator:
    """Sets up graph and problem from a config and drives runs and checks"""

    def __init__(self, config: ExperimentConfig, logger: Optional[SimulationLogger] = None):
        self.config = config
        self.logger = logger or SimulationLogger.from_config(config.logging)

        self.graph = self._build_graph()
        self.problem = self._build_problem()
        self._saddle: Optional[SaddlePoint] = None

    def _build_graph(self) -> CommGraph:
        """Graph from the edge list; refuses a disconnected graph"""
        graph = self.config.build_graph()
        connected = graph.is_connected()
        self.logger.log_assumption_check(2, connected, graph.describe())
        if not connected:
            raise AssumptionViolation(
                2, f"the communication graph is disconnected (components "
                   f"{[[i + 1 for i in c] for c in graph.components()]})"
            )
        return graph

    def _build_problem(self) -> ProblemInstance:
        """Problem from the factory; refuses an empty feasible intersection"""
        try:
            problem = ProblemFactory.create_problem(self.config, self.logger)
        except AssumptionViolation as e:
            self.logger.log_assumption_check(e.assumption, False, {'reason': e.detail})
            raise

        if problem.node_count != self.graph.node_count:
            raise ValidationError(
                f"Problem has {problem.node_count} agents but the graph has {self.graph.node_count} nodes"
            )
        details = {'feasible_set': repr(problem.feasible_set)}
        if problem.has_interior:
            self.logger.log_assumption_check(1, True, details)
        else:
            details['interior'] = 'empty'
            self.logger.log_assumption_check(1, True, details, warning=True)
        return problem

    @property
    def supports_reference(self) -> bool:
        return self.problem.dimension == 1 and self.problem.bounds is not None

    def reference(self) -> SaddlePoint:
        """Saddle point of the configured problem (computed once)"""
        if self._saddle is None:
            self._saddle = solve_saddle(self.graph, self.problem, seed=self.config.seed)
        return self._saddle

    def _optional_reference(self) -> Optional[SaddlePoint]:
        if not self.supports_reference:
            return None
        try:
            return self.reference()
        except SaddlePointError as e:
            self.logger.logger.warning(f"Running without reference diagnostics: {e}")
            return None

    def run(self, iters: Optional[int] = None, output: Optional[str] = None) -> RunResult:
        """Run the configured variant and optionally write the trace"""
        cfg = self.config
        iters = cfg.iters if iters is None else iters
        saddle = self._optional_reference()
        run_id = self.logger.log_run_start(cfg.variant.value, iters,
                                           self.problem.node_count, self.problem.dimension)

        trace, wall_time = timed(dynamics.run)(
            self.graph, self.problem, cfg.alpha, cfg.eps,
            x0=cfg.x0, v0=cfg.v0, iters=iters, variant=cfg.variant,
            norm=cfg.norm, reference=saddle, logger=self.logger,
            progress_every=cfg.logging.get('progress_every', 0),
        )
        result = RunResult(trace, cfg.variant.value, wall_time, run_id, saddle,
                           verdict=check_schedule(cfg.alpha, cfg.eps, run_mode(cfg.eps)),
                           output=output)
        if output:
            write_csv(trace, output)

        self.logger.log_run_summary(run_id, result.iterations, result.final_residual,
                                    result.final_consensus_error, wall_time)
        return result

    def check(self) -> Dict[str, Any]:
        """Schedule verdicts for both modes plus the graph and feasible-set facts"""
        feasible = self.problem.feasible_set
        diameter = self.graph.diameter()
        return {
            'verdicts': [check_schedule(self.config.alpha, self.config.eps, mode) for mode in CheckMode],
            'connected': True,
            'diameter': diameter,
            'min_rounds': diameter + 1,
            'feasible_set': feasible,
            'interior': self.problem.has_interior,
        }

