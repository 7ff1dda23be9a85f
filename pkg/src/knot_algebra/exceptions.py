"""
Every failure the library can signal on purpose. The CLI catches `KnotforgeError` and turns it
into a logged message and a nonzero exit status; anything else is a bug.
"""


class KnotforgeError(Exception):
    """
    Base class for all errors raised deliberately by knotforge.
    """
    def __init__(self, message):
        super().__init__(message)


class StructuralError(KnotforgeError):
    """
    Raised when a diagram's incidence data is malformed: wrong valence, a broken Wilson cycle,
    vertex orientations that do not match the incident half-edges, or a disconnected graph.
    """
    def __init__(self, message):
        super().__init__(message)


class ArgumentError(KnotforgeError):
    """
    Raised when an operation receives arguments outside its domain (wrong degree, a non-chord
    diagram where chords are required, a non-nullhomotopic Wilson loop, ...).
    """
    def __init__(self, message):
        super().__init__(message)


class AmbiguityError(KnotforgeError):
    """
    Raised when a result would depend on an arbitrary choice the caller did not make, e.g. the
    splicing arc of a connected sum with a non-nullhomotopic first summand.
    """
    def __init__(self, message):
        super().__init__(message)


class WindowError(KnotforgeError):
    """
    Raised when a diagram lies outside the exponent window of a quotient space. The caller must
    rebuild the quotient with a larger window.
    """
    def __init__(self, message):
        super().__init__(message)


class ResourceError(KnotforgeError):
    """
    Raised before starting a computation whose matrix dimensions exceed the configured cap
    (see KNOTFORGE_RESOURCE_CAP), or whose degree is beyond the supported range.
    """
    def __init__(self, message):
        super().__init__(message)


class CoefficientArithmeticError(KnotforgeError, ArithmeticError):
    """
    Raised on arithmetic that has no exact answer, such as a zero denominator.
    """
    def __init__(self, message):
        super().__init__(message)


class InvariantViolation(KnotforgeError):
    """
    Raised when input data breaks a mathematical invariant the model relies on: a singular
    monodromy, a wrong Euler characteristic, a series whose denominator escapes (1-t)^2 Delta(t).
    """
    def __init__(self, message):
        super().__init__(message)


class ConsistencyError(KnotforgeError):
    """
    Raised when two independent computations of the same quantity disagree. This always points
    at a bookkeeping bug rather than bad input.
    """
    def __init__(self, message):
        super().__init__(message)


class ConstraintError(KnotforgeError):
    """
    Raised when a forest scheme violates its tagging constraint (more than one M-null clasper).
    """
    def __init__(self, message):
        super().__init__(message)


class IngestionError(KnotforgeError):
    """
    Raised when a JSON or YAML input does not match its schema. The message names the file and
    the offending field path.
    """
    def __init__(self, message, source: str = "<input>", field: str = ""):
        self.source = source
        self.field = field
        location = f"{source}: {field}" if field else source
        super().__init__(f"{location}: {message}")
