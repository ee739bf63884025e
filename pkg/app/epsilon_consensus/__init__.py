from typing import Any, Dict, Optional, List
from .core.config import ConfigParser, ExperimentConfig
from .core.exceptions import *
from .core.graph import CommGraph
from .core.schedule import Schedule, check_schedule
from .core.simulator import Simulator
from .core.trace import overshoot, read_csv, write_csv, write_residual_comparison
from .models.records import SaddlePoint, ScheduleVerdict, TraceRecord
from .models.registry import ProblemBuilder, ProblemRegistry
from .models.result import RunResult
from .utils.logging import SimulationLogger

__version__ = "1.0.0"


class EpsilonConsensus:
    """Main library interface"""

    _global_logger: Optional[SimulationLogger] = None

    def __init__(self, config_path: Optional[str] = None,
                 config_dict: Optional[Dict] = None,
                 env_file: Optional[str] = '.env',
                 logger: Optional[SimulationLogger] = None,
                 **overrides: Any):
        """
        Set up an experiment

        Args:
            config_path: Path to a `key = value` experiment file
            config_dict: Configuration dictionary (alternative to file)
            env_file: Path to .env file for environment variables
            logger: Custom logger instance
            overrides: Config keys replacing the file's values (e.g. iters=100)
        """

        # Initialize configuration parser
        self.config_parser = ConfigParser(config_path, config_dict, env_file).override(**overrides)
        self.config: ExperimentConfig = self.config_parser.build()

        # Set global logger
        self.logger = logger or SimulationLogger.from_config(self.config.logging)
        EpsilonConsensus._global_logger = self.logger

        self.simulator = Simulator(self.config, self.logger)

    @property
    def graph(self) -> CommGraph:
        return self.simulator.graph

    @property
    def problem(self):
        return self.simulator.problem

    def run(self, iters: Optional[int] = None, output: Optional[str] = None) -> RunResult:
        """
        Run the configured experiment

        Args:
            iters: Override the configured number of steps
            output: Trace CSV path; nothing is written when omitted

        Returns:
            RunResult with the full trace
        """
        return self.simulator.run(iters, output)

    def check(self) -> Dict[str, Any]:
        """Schedule verdicts, connectivity, diameter, minimum D and feasible set"""
        return self.simulator.check()

    def reference(self) -> SaddlePoint:
        """Centralized saddle point (x*, v*) with f* and multipliers"""
        return self.simulator.reference()

    def compare(self, other: 'EpsilonConsensus', iters: Optional[int] = None,
                output: Optional[str] = None) -> Dict[str, Any]:
        """
        Run this experiment and `other` on the same setup

        Args:
            other: Second experiment; graph, problem and initial state must match
            iters: Override the number of steps of both runs
            output: Joined residual CSV path; the two traces go next to it
                as <stem>_a.csv and <stem>_b.csv

        Returns:
            {'a': RunResult, 'b': RunResult, 'overshoot_a': ..., 'overshoot_b': ...}
        """
        if not self.config.same_setup(other.config):
            raise ConfigurationError(
                f"{self.config.source} and {other.config.source} do not share graph, problem and initial state"
            )

        trace_paths = _comparison_paths(output)
        result_a = self.run(iters, trace_paths[0])
        result_b = other.run(iters, trace_paths[1])
        if output:
            write_residual_comparison(result_a.trace, result_b.trace, output)

        return {
            'a': result_a,
            'b': result_b,
            'overshoot_a': overshoot(result_a.trace),
            'overshoot_b': overshoot(result_b.trace),
        }

    @classmethod
    def register_problem(cls, name: str, builder: ProblemBuilder) -> None:
        """
        Register a builder for a custom problem

        Args:
            name: Value of the `problem` config key that selects the builder
            builder: Callable taking the ExperimentConfig and returning a ProblemInstance

        Example:
            def ring_quadratic(config):
                sets = [Interval(-1, 1)] * config.node_count
                return quadratic_instance(config.node_count, config.p, sets)

            EpsilonConsensus.register_problem('ring_quadratic', ring_quadratic)
        """
        ProblemRegistry.register_problem(name, builder)

        if cls._global_logger:
            cls._global_logger.logger.info(f"Registered problem: {name}")

    @staticmethod
    def list_problems() -> List[str]:
        """Names of the registered custom problems"""
        return sorted(ProblemRegistry.list_problems())


def _comparison_paths(output: Optional[str]):
    if not output:
        return None, None
    stem = output[:-4] if output.endswith('.csv') else output
    return f"{stem}_a.csv", f"{stem}_b.csv"
