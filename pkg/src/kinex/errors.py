"""Exception hierarchy shared by all modules."""


class KinexError(Exception):
    """Base class for all package errors."""


class DomainError(KinexError, ValueError):
    """Input outside the physical domain of an operation."""


class DepairingExceededError(DomainError):
    """Bias current at or beyond the depairing limit of a closure."""


class LatchedStateError(DomainError):
    """Bias at or above the weakest-link switching current."""


class ConfigError(KinexError, ValueError):
    """Invalid configuration (tables, schema, device description)."""


class RangeError(KinexError, ValueError):
    """Query outside the representable range of a table or curve."""


class NumericsError(KinexError, ArithmeticError):
    """A quadrature or linear-algebra step failed to converge."""


class FitError(KinexError, RuntimeError):
    """Nonlinear fit failed; carries solver diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ParseError(KinexError, ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
