from typing import Dict, Any, List, Tuple
from enum import Enum

# Type of enums
class Variant(Enum):
    PLAIN = "plain"
    NORMALIZED = "normalized"

class ScheduleFamily(Enum):
    POWER = "power"
    CONSTANT = "constant"

class CheckMode(Enum):
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"

class Verdict(Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNDECIDABLE = "undecidable"

class ProblemType(Enum):
    LASSO = "lasso"
    QUADRATIC = "quadratic"
    # anything else is looked up in ProblemRegistry
    CUSTOM = "custom"

ConfigDict = Dict[str, Any]
Edge = Tuple[int, int, float]
EdgeList = List[Edge]
