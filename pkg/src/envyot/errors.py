"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems
(:class:`InvalidSpec`, :class:`InvalidConfig`, :class:`NegativeEpsilon`)
exit with code 2, data problems (:class:`DataError` subclasses) with 3.
"""


class EnvyOTError(Exception):
    """Base class for all errors raised by this package."""


# --- problem-specification errors ---------------------------------------

class InvalidSpec(EnvyOTError):
    """A ProblemSpec violates one of its invariants."""


class NonSimplexTarget(InvalidSpec):
    """Target distribution has a nonpositive entry or does not sum to 1."""


class DimensionMismatch(InvalidSpec):
    """Vectors/matrices in a spec or file do not agree on the recipient count."""


class NonpositiveBound(InvalidSpec):
    """The declared valuation upper bound is not strictly positive."""


class NegativeEpsilon(EnvyOTError):
    """A uniform envy budget was requested with epsilon < 0."""


class IndexOutOfRange(EnvyOTError):
    """A recipient index lies outside [0, n)."""


# --- data / ingestion errors ---------------------------------------------

class DataError(EnvyOTError):
    """Base class for input-file problems."""


class EmptyFile(DataError):
    pass


class MissingHeader(DataError):
    pass


class RaggedRow(DataError):
    def __init__(self, line: int, message: str = ""):
        self.line = line
        super().__init__(message or f"row at line {line} has the wrong number of fields")


class NonNumericField(DataError):
    def __init__(self, line: int, column: int, message: str = ""):
        self.line = line
        self.column = column
        super().__init__(message or f"non-numeric field at line {line}, column {column}")


class SizesExceedRows(DataError):
    """Requested split sizes sum to more rows than the sample set has."""


class SourceExhausted(DataError):
    """A sample source cannot produce the requested number of samples."""


class ExhaustedCsvSource(SourceExhausted):
    """A csv-backed source with replay disabled ran out of rows."""


class MalformedDualFile(DataError):
    """A dual-solution file violates the format or the dual invariants."""


class VersionMismatch(MalformedDualFile):
    """A dual-solution file declares an unsupported format version."""


# --- solver / experiment errors -------------------------------------------

class NonpositiveBaseline(EnvyOTError):
    """Welfare gap requested against a baseline welfare <= 0."""


class InvalidConfig(EnvyOTError):
    """An experiment configuration violates its invariants."""


class MaxIterationsExceeded(EnvyOTError):
    """An iterative solver hit its safeguard before reaching tolerance.

    Carries the best iterate found so far in ``best``.
    """

    def __init__(self, message: str, best=None):
        self.best = best
        super().__init__(message)
