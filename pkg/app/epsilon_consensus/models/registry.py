from typing import Callable, Dict, Optional, TYPE_CHECKING

from ..core.exceptions import ConfigurationError

if TYPE_CHECKING:
    from ..core.config import ExperimentConfig
    from ..problem.instance import ProblemInstance

ProblemBuilder = Callable[['ExperimentConfig'], 'ProblemInstance']


class ProblemRegistry:
    """Registry of named builders for custom problem instances"""

    _builders: Dict[str, ProblemBuilder] = {}

    @classmethod
    def register_problem(cls, name: str, builder: ProblemBuilder) -> None:
        """Register a builder; configs select it with `problem = <name>`"""
        if not callable(builder):
            raise ConfigurationError(f"Builder for problem '{name}' must be callable")
        cls._builders[name] = builder

    @classmethod
    def get_builder(cls, name: str) -> Optional[ProblemBuilder]:
        """Get a registered builder"""
        return cls._builders.get(name)

    @classmethod
    def unregister_problem(cls, name: str) -> None:
        cls._builders.pop(name, None)

    @classmethod
    def create_instance(cls, name: str, config: 'ExperimentConfig') -> 'ProblemInstance':
        """Build the instance registered under `name`"""
        builder = cls.get_builder(name)
        if builder is None:
            raise ConfigurationError(
                f"Unknown problem '{name}'; register it with EpsilonConsensus.register_problem()"
            )
        return builder(config)

    @classmethod
    def list_problems(cls) -> Dict[str, ProblemBuilder]:
        """List all registered builders"""
        return cls._builders.copy()
