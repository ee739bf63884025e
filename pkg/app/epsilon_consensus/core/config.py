from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from .defaults import DEFAULT_CONFIG, OPTIONAL_KEYS, REPEATED_KEYS
from .dynamics import NormalizationConfig
from .exceptions import ConfigurationError, ValidationError
from .graph import CommGraph
from .schedule import Schedule
from .types import ConfigDict, EdgeList, Variant
from ..utils.env_parser import EnvParser
from ..utils.validation import Validator

KNOWN_KEYS = set(DEFAULT_CONFIG) | OPTIONAL_KEYS | REPEATED_KEYS
SCHEDULE_FIELDS = ('family', 'a', 'b', 'p')


class ConfigParser:
    """Parse and validate flat `key = value` experiment configs with environment variable support"""

    def __init__(self, config_path: Optional[str] = None,
                 config_dict: Optional[ConfigDict] = None,
                 env_file: Optional[str] = '.env'):

        # Load environment variables
        if env_file:
            EnvParser.load_env_file(env_file)

        if config_path:
            self.source = str(config_path)
            raw = self._load_from_file(config_path)
        elif config_dict is not None:
            self.source = '<dict>'
            raw = dict(config_dict)
        else:
            raise ConfigurationError("Either config_path or config_dict must be provided")

        # Parse environment variables in config
        self.raw: ConfigDict = EnvParser.parse_config(raw)
        self._validate_keys()
        self.config: ConfigDict = self._apply_defaults(self.raw)

    def _load_from_file(self, config_path: str) -> ConfigDict:
        """Read `key = value` lines; `#` starts a comment, `edge` may repeat"""
        try:
            text = Path(config_path).read_text(encoding='utf-8')
        except FileNotFoundError:
            raise ConfigurationError(f"Configuration file not found: {config_path}")
        except OSError as e:
            raise ConfigurationError(f"Cannot read configuration file {config_path}: {e}")

        config: ConfigDict = {}
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                raise ConfigurationError(f"{config_path}:{number}: expected 'key = value', got {line!r}")

            key, value = (part.strip() for part in line.split('=', 1))
            if not key:
                raise ConfigurationError(f"{config_path}:{number}: missing key")
            if key in REPEATED_KEYS:
                config.setdefault(key, []).append(value)
            elif key in config:
                raise ConfigurationError(f"{config_path}:{number}: duplicate key '{key}'")
            else:
                config[key] = value
        return config

    def _validate_keys(self) -> None:
        unknown = sorted(set(self.raw) - KNOWN_KEYS)
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {', '.join(unknown)}")
        if 'eps.const' in self.raw:
            clash = [f"eps.{name}" for name in SCHEDULE_FIELDS if f"eps.{name}" in self.raw]
            if clash:
                raise ConfigurationError(f"eps.const cannot be combined with {', '.join(clash)}")

    @staticmethod
    def _apply_defaults(raw: ConfigDict) -> ConfigDict:
        """Apply default configurations"""
        config = dict(DEFAULT_CONFIG)
        config.update(raw)
        return config

    def override(self, **values: Any) -> 'ConfigParser':
        """Apply command-line overrides (None values are ignored)"""
        for key, value in values.items():
            if value is not None:
                self.config[key] = value
        return self

    def build(self) -> 'ExperimentConfig':
        """Typed experiment config; malformed values raise ConfigurationError"""
        try:
            return ExperimentConfig.from_dict(self.config, self.source)
        except ValidationError as e:
            raise ConfigurationError(f"{self.source}: {e}") from e


@dataclass
class ExperimentConfig:
    """Everything needed to set up and run one experiment"""
    problem: str
    lam: float
    dimension: int
    p: Optional[List[float]]
    lower: Optional[List[float]]
    upper: Optional[List[float]]
    node_count: int
    edges: EdgeList
    variant: Variant
    iters: int
    alpha: Schedule
    eps: Schedule
    norm: NormalizationConfig
    x0: List[float]
    v0: Optional[List[float]] = None
    seed: int = 0
    output: str = 'trace.csv'
    logging: Dict[str, Any] = field(default_factory=dict)
    source: str = '<dict>'
    # every key as written, for custom problem builders
    raw: ConfigDict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, config: ConfigDict, source: str = '<dict>') -> 'ExperimentConfig':
        dimension = Validator.parse_int('dimension', config['dimension'], minimum=1)

        if 'x0' not in config:
            raise ValidationError("Missing required key 'x0'")
        x0 = Validator.parse_float_list('x0', config['x0'])
        v0 = Validator.parse_float_list('v0', config['v0']) if 'v0' in config else None
        p = Validator.parse_float_list('p', config['p']) if 'p' in config else None
        lower = Validator.parse_float_list('lower', config['lower'], allow_inf=True) if 'lower' in config else None
        upper = Validator.parse_float_list('upper', config['upper'], allow_inf=True) if 'upper' in config else None

        if 'nodes' in config:
            node_count = Validator.parse_int('nodes', config['nodes'], minimum=1)
        else:
            node_count = len(x0) // dimension
        if len(x0) != node_count * dimension:
            raise ValidationError(f"x0 has {len(x0)} values, expected {node_count * dimension}")
        if v0 is not None and len(v0) != len(x0):
            raise ValidationError(f"v0 has {len(v0)} values, expected {len(x0)}")

        try:
            variant = Variant(str(config['variant']).strip().lower())
        except ValueError:
            raise ValidationError(f"variant must be 'plain' or 'normalized', got {config['variant']!r}")

        rounds = config.get('norm.rounds')
        norm = NormalizationConfig(
            c=Validator.parse_float('norm.c', config['norm.c']),
            rounds=None if rounds is None else Validator.parse_int('norm.rounds', rounds, minimum=1),
        )

        return cls(
            problem=str(config['problem']).strip(),
            lam=Validator.parse_float('lambda', config['lambda']),
            dimension=dimension,
            p=p,
            lower=lower,
            upper=upper,
            node_count=node_count,
            edges=[Validator.parse_edge(edge) for edge in config.get('edge', [])],
            variant=variant,
            iters=Validator.parse_int('iters', config['iters'], minimum=0),
            alpha=_schedule(config, 'alpha'),
            eps=_schedule(config, 'eps'),
            norm=norm,
            x0=x0,
            v0=v0,
            seed=Validator.parse_int('seed', config['seed']),
            output=str(config['output']),
            logging={
                'enabled': Validator.parse_bool('logging.enabled', config['logging.enabled']),
                'level': str(config['logging.level']),
                'progress_every': Validator.parse_int(
                    'logging.progress_every', config['logging.progress_every'], minimum=0),
            },
            source=source,
            raw=dict(config),
        )

    def build_graph(self) -> CommGraph:
        """Communication graph from the `edge` lines"""
        return CommGraph.from_edges(self.node_count, self.edges)

    def bounds_for(self, name: str) -> Optional[List[float]]:
        """Per-agent interval bounds expanded to N * d values"""
        values = getattr(self, name)
        if values is None:
            return None
        if len(values) == self.node_count:
            return [v for v in values for _ in range(self.dimension)]
        if len(values) == self.node_count * self.dimension:
            return values
        raise ValidationError(
            f"'{name}' has {len(values)} values, expected {self.node_count} "
            f"or {self.node_count * self.dimension}"
        )

    def same_setup(self, other: 'ExperimentConfig') -> bool:
        """True when both configs share graph, problem and initial state"""
        return (self.problem == other.problem and self.lam == other.lam
                and self.dimension == other.dimension and self.p == other.p
                and self.lower == other.lower and self.upper == other.upper
                and self.node_count == other.node_count
                and sorted(self.edges) == sorted(other.edges)
                and self.x0 == other.x0 and self.v0 == other.v0)


def _schedule(config: ConfigDict, prefix: str) -> Schedule:
    if prefix == 'eps' and 'eps.const' in config:
        return Schedule.constant(Validator.parse_float('eps.const', config['eps.const']))

    family = str(config[f'{prefix}.family']).strip().lower()
    return Schedule(
        family=family,
        a=Validator.parse_float(f'{prefix}.a', config[f'{prefix}.a']),
        b=Validator.parse_float(f'{prefix}.b', config[f'{prefix}.b']),
        p=Validator.parse_float(f'{prefix}.p', config[f'{prefix}.p']),
    )


def load_config(config_path: str, env_file: Optional[str] = '.env', **overrides: Any) -> ExperimentConfig:
    """Parse a config file, apply overrides and build the typed config"""
    return ConfigParser(config_path, env_file=env_file).override(**overrides).build()
