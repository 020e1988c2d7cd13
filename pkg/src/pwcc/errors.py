"""Exception hierarchy.

Everything a caller can trigger with bad domain input derives from
:class:`PWCCError`; configuration problems derive from :class:`ConfigError`
so the command line can map them to a distinct exit status.
"""


class PWCCError(Exception):
    """Base class for domain errors."""


class DimensionMismatch(PWCCError, ValueError):
    pass


class QuadratureFailure(PWCCError, ArithmeticError):
    pass


class DegeneratePotential(PWCCError, ValueError):
    pass


class InvalidK(PWCCError, ValueError):
    pass


class KindNormMismatch(PWCCError, ValueError):
    pass


class EmptyInput(PWCCError, ValueError):
    pass


class BracketFailure(PWCCError, ArithmeticError):
    pass


class AcceptanceTooLow(PWCCError, RuntimeError):
    pass


class ZeroAcceptance(PWCCError, ValueError):
    pass


class EmptyBatch(PWCCError, ValueError):
    pass


class DegenerateWeights(PWCCError, ArithmeticError):
    pass


class NoResults(PWCCError, FileNotFoundError):
    pass


class ConfigError(ValueError):
    """Invalid configuration; ``field`` and ``line`` locate the problem when known."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
