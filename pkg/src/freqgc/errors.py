class FreqgcError(Exception):
    """Base class for package errors."""


class InputError(FreqgcError, ValueError):
    """Bad or insufficient input data (CLI exit code 1)."""


class NumericalError(FreqgcError, RuntimeError):
    """A numerical procedure failed (CLI exit code 2)."""
