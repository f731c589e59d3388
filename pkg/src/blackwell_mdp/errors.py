"""Error hierarchy for the Blackwell toolkit.

Every error carries the CLI exit code of its family so that commands can
map failures to process status without inspecting concrete types.
"""


class BlackwellError(Exception):
    """Base class for all toolkit errors."""
    exit_code = 1


class InstanceParseError(BlackwellError):
    """Raised when an instance file cannot be read or decoded."""
    exit_code = 2


class InstanceFormatError(InstanceParseError):
    """Raised when instance data does not match the expected structure."""
    pass


class FloatInputRejected(InstanceParseError):
    """Raised when a float is given where an exact rational is required."""
    pass


class DomainError(BlackwellError):
    """Raised when inputs are well-formed but mathematically invalid."""
    exit_code = 3


class NonStochasticRow(DomainError):
    pass


class NegativeProbability(DomainError):
    pass


class DenominatorMismatch(DomainError):
    pass


class GammaOutOfRange(DomainError):
    pass


class NonIntegralCoefficient(DomainError):
    """Scaled difference polynomial has a non-integer coefficient."""
    pass


class ZeroPolynomial(DomainError):
    pass


class NonOddN(DomainError):
    pass


class NonMonotoneBreakpoints(DomainError):
    pass


class NonConvergence(DomainError):
    pass


class InvalidUncertaintySet(DomainError):
    pass


class AnalysisInconsistency(DomainError):
    """Two independent computations of the same quantity disagree."""
    pass


class ResourceGuardError(BlackwellError):
    """Raised when an enumeration would exceed a configured guard."""
    exit_code = 4


class PolicySpaceTooLarge(ResourceGuardError):
    pass


class VertexSpaceTooLarge(ResourceGuardError):
    pass
