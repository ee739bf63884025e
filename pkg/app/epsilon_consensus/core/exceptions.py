class EpsilonConsensusException(Exception):
    """Base exception for the epsilon-consensus library"""
    pass

class ConfigurationError(EpsilonConsensusException):
    """Configuration related errors"""
    pass

class ValidationError(EpsilonConsensusException):
    """Invalid arguments passed to a library operation"""
    pass

class GraphError(EpsilonConsensusException):
    """Malformed or unsuitable communication graph"""
    pass

class AssumptionViolation(EpsilonConsensusException):
    """A standing assumption of the algorithm does not hold"""
    def __init__(self, assumption: int, message: str):
        super().__init__(f"Assumption {assumption} violated: {message}")
        self.assumption = assumption
        self.detail = message

class SaddlePointError(EpsilonConsensusException):
    """Saddle point construction failed"""
    pass

class TraceFormatError(EpsilonConsensusException):
    """Trace file could not be read"""
    pass
