import math
from typing import Any, List, Tuple

from ..core.exceptions import ValidationError


class Validator:
    """Typed parsing of raw config values"""

    _TRUE = {'true', 'yes', 'on', '1'}
    _FALSE = {'false', 'no', 'off', '0'}

    @staticmethod
    def parse_float(name: str, value: Any, allow_inf: bool = False) -> float:
        """Parse a real number; NaN is always rejected"""
        try:
            result = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"'{name}' must be a number, got {value!r}")
        if math.isnan(result) or (math.isinf(result) and not allow_inf):
            raise ValidationError(f"'{name}' must be finite, got {value!r}")
        return result

    @staticmethod
    def parse_int(name: str, value: Any, minimum: int = None) -> int:
        if isinstance(value, bool):
            raise ValidationError(f"'{name}' must be an integer, got {value!r}")
        try:
            result = int(str(value).strip())
        except (TypeError, ValueError):
            raise ValidationError(f"'{name}' must be an integer, got {value!r}")
        if minimum is not None and result < minimum:
            raise ValidationError(f"'{name}' must be >= {minimum}, got {result}")
        return result

    @staticmethod
    def parse_bool(name: str, value: Any) -> bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in Validator._TRUE:
            return True
        if text in Validator._FALSE:
            return False
        raise ValidationError(f"'{name}' must be a boolean, got {value!r}")

    @staticmethod
    def parse_float_list(name: str, value: Any, allow_inf: bool = False) -> List[float]:
        """Comma separated reals, e.g. `x0 = 1, 0, 5, -1`"""
        if isinstance(value, (list, tuple)):
            items = list(value)
        else:
            items = [item for item in str(value).split(',')]
        if not items or any(str(item).strip() == '' for item in items):
            raise ValidationError(f"'{name}' must be a comma separated list of numbers")
        return [Validator.parse_float(name, str(item).strip(), allow_inf) for item in items]

    @staticmethod
    def parse_edge(value: Any) -> Tuple[int, int, float]:
        """`i,j,w` with 1-indexed node ids; the weight defaults to 1"""
        parts = [part.strip() for part in str(value).split(',')]
        if len(parts) not in (2, 3):
            raise ValidationError(f"edge must be 'i,j' or 'i,j,w', got {value!r}")
        i = Validator.parse_int('edge', parts[0])
        j = Validator.parse_int('edge', parts[1])
        w = Validator.parse_float('edge', parts[2]) if len(parts) == 3 else 1.0
        return i, j, w
