"""Exception types shared across the package."""


class BitAliasError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BitAliasError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PerfectEntropyError(DomainError):
    """One full bit of entropy per position maps to the degenerate limit pair
    (0.5, 0.5), which no finite experiment can verify."""


class CapacityError(BitAliasError, RuntimeError):
    """A planning target is unreachable below the hard device-count cap."""


class ConvergenceError(BitAliasError, RuntimeError):
    """An internal iteration cap was exhausted; indicates a bug or a pathological
    parameter combination, never a silent approximation."""


class FormatError(BitAliasError, ValueError):
    """A measurement file violates its format; the message names the offending
    line or byte offset."""
