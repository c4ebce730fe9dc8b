"""Exception hierarchy shared across the package.

Every failure raised by the library belongs to one of four categories
(input, format, capability, numeric) so that the command line layer can
emit a single machine-parsable error line.
"""

__all__ = [
    "BandgenError",
    "InputError",
    "FormatError",
    "CapabilityError",
    "NumericError",
    "BandOverflowError",
    "DegeneracyError",
]


class BandgenError(Exception):
    """Base class for all package errors."""

    category = "error"


class InputError(BandgenError):
    """Caller supplied values outside an operation's contract."""

    category = "input"


class FormatError(BandgenError):
    """On-disk artifact (JSONL, TOML, checkpoint) failed to parse or validate."""

    category = "format"


class CapabilityError(BandgenError):
    """Request exceeds a documented size or feature limit."""

    category = "capability"


class NumericError(BandgenError):
    """A numeric routine left its domain of reliability."""

    category = "numeric"


class BandOverflowError(InputError):
    """An edge stretches beyond the admissible band width.

    Carries the offending endpoints in the caller's labeling so the
    message points at a concrete edge rather than a matrix cell.
    """

    def __init__(self, u: int, v: int, stretch: int, width: int):
        self.u = u
        self.v = v
        self.stretch = stretch
        self.width = width
        super().__init__(
            f"edge ({u}, {v}) has stretch {stretch}, which exceeds band width {width}"
        )


class DegeneracyError(NumericError):
    """A geometric predicate landed inside its tolerance band."""
