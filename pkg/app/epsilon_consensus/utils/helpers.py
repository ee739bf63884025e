import math
from typing import Optional

from ..core.defaults import STDOUT_DIGITS


def format_sig(value: Optional[float], digits: int = STDOUT_DIGITS) -> str:
    """Format a number with `digits` significant digits; None prints as '-'"""
    if value is None:
        return '-'
    value = float(value)
    if math.isnan(value):
        return 'nan'
    return f"{value:.{digits}g}"


def format_vector(values, digits: int = STDOUT_DIGITS) -> str:
    return '[' + ', '.join(format_sig(v, digits) for v in values) + ']'


def format_interval(lower: float, upper: float, digits: int = STDOUT_DIGITS) -> str:
    return f"[{format_sig(lower, digits)}, {format_sig(upper, digits)}]"
