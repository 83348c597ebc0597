"""Exceptions shared across the package."""


class HolonomyError(Exception):
    """Base class for all package errors."""


class ValidationError(HolonomyError):
    """Malformed input: bad complex data, bad map, bad parameters."""


class SizeLimitError(HolonomyError):
    """An operation refused to run because the instance exceeds its size guard."""
