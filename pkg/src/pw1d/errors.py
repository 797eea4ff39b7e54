"""Exception hierarchy shared by all modules.

The three base classes map onto the CLI exit codes: parse/usage problems,
validation of mathematical input, and exceeded resource bounds.
"""


class Pw1dError(Exception):
    """Base class for every error raised by this package."""


class ParseError(Pw1dError, ValueError):
    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class ValidationError(Pw1dError, ValueError):
    """Input is syntactically fine but mathematically invalid."""


class ResourceError(Pw1dError):
    """A configured bound was exceeded."""


# scalar / projective line
class ZeroVector(ValidationError):
    pass


class DegenerateTriple(ValidationError):
    pass


class SurdMismatch(ValidationError):
    pass


# homographies
class PoleAtPoint(ValidationError):
    pass


# piecewise maps
class NotCircularlyOrdered(ValidationError):
    pass


class NotInjective(ValidationError):
    pass


class NotSurjective(ValidationError):
    pass


class NonAffinePieceInCircModel(ValidationError):
    pass


class ModelMismatch(ValidationError):
    pass


class MixedModel(ModelMismatch):
    """Group elements given in different models."""


class NotSupportedOnComplement(ValidationError):
    pass


# partial actions
class UnknownGenerator(ValidationError):
    pass


class RadiusZeroWithEmptySeeds(ValidationError):
    pass


class BallTooSmall(ResourceError):
    pass


class NotClosed(ResourceError):
    pass


class AxiomViolation(ValidationError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


# regularization
class TooLarge(ResourceError):
    pass


class NotAGroup(ValidationError):
    pass


class NotACircle(ValidationError):
    pass


class NotHausdorff(ValidationError):
    pass


class TargetNotRepresentable(ValidationError):
    def __init__(self, message, classification=None):
        self.classification = classification
        super().__init__(message)
