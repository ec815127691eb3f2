"""Exception hierarchy shared across the library.

The CLI maps these onto exit codes: ValidationError -> 1, ParseError -> 2,
RuleGuardError -> 3.
"""


class EvidenceError(Exception):
    """Base class for all errors raised by this library."""


class ValidationError(EvidenceError):
    """A frame, range, or mass function violates its construction contract."""


class ParseError(EvidenceError):
    """Text input (focal expression or scenario document) could not be parsed."""


class RuleGuardError(EvidenceError):
    """A combination rule was applied to masses outside its domain."""
