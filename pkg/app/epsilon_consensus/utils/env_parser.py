import os
import re
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv

from ..core.exceptions import ConfigurationError


# library: epsilon_consensus.utils.env_parser
# Expands ${VAR} / ${VAR:default} references inside experiment file values,
# e.g. `output = ${TRACE_DIR:.}/run.csv`.
class EnvParser:
    """Environment variable expansion for experiment configs"""

    ENV_PATTERN = re.compile(r'\$\{([A-Za-z_][A-Za-z0-9_]*)(?::([^}]*))?\}')

    @classmethod
    def load_env_file(cls, env_path: Optional[str] = '.env') -> bool:
        """Load a .env file; variables already set in the environment win"""
        if not env_path or not Path(env_path).is_file():
            return False
        return load_dotenv(env_path, override=False)

    @classmethod
    def expand(cls, text: str, key: Optional[str] = None) -> str:
        """
        Substitute every ${VAR} / ${VAR:default} in text

        An unset variable without a default is a ConfigurationError naming
        the config key it appeared in.
        """
        def substitute(match: re.Match) -> str:
            name, default = match.group(1), match.group(2)
            value = os.getenv(name)
            if value is not None:
                return value
            if default is not None:
                return default
            where = f" in '{key}'" if key else ''
            raise ConfigurationError(f"Environment variable {name} is not set{where}")

        return cls.ENV_PATTERN.sub(substitute, text)

    @classmethod
    def parse_value(cls, value: Any, key: Optional[str] = None) -> Any:
        """Expand a single value; non-strings pass through"""
        if isinstance(value, str):
            return cls.expand(value, key)
        if isinstance(value, list):
            # repeated keys such as `edge`
            return [cls.parse_value(item, key) for item in value]
        return value

    @classmethod
    def parse_config(cls, config: dict) -> dict:
        """Expand every value of a flat config dictionary"""
        return {key: cls.parse_value(value, key) for key, value in config.items()}
