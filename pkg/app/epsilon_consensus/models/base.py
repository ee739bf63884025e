import json
from abc import ABC
from dataclasses import fields, is_dataclass
from enum import Enum
from typing import Any, Dict

import numpy as np


class BaseModel(ABC):
    """Base class for result objects (records, verdicts, saddle points)"""

    def to_dict(self) -> Dict[str, Any]:
        """Convert model to a JSON-friendly dictionary"""
        if is_dataclass(self):
            items = ((f.name, getattr(self, f.name)) for f in fields(self))
        else:
            items = ((k, v) for k, v in self.__dict__.items() if not k.startswith('_'))
        return {key: self._plain(value) for key, value in items}

    @classmethod
    def _plain(cls, value: Any) -> Any:
        if hasattr(value, 'to_dict'):
            return value.to_dict()
        if isinstance(value, np.ndarray):
            return value.tolist()
        if isinstance(value, np.generic):
            return value.item()
        if isinstance(value, Enum):
            return value.value
        if isinstance(value, (list, tuple)):
            return [cls._plain(v) for v in value]
        if isinstance(value, dict):
            return {k: cls._plain(v) for k, v in value.items()}
        return value

    def to_json(self) -> str:
        """Convert model to JSON string"""
        return json.dumps(self.to_dict())

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.to_dict()})"
