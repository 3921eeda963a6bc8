"""Exception types shared across the package.

The CLI maps these onto its exit codes: ``ValidationError`` -> 1,
``FormatError`` -> 2.
"""


class FtleError(Exception):
    pass


class ValidationError(FtleError, ValueError):
    """Data is well-formed but violates a mesh/field invariant."""


class FormatError(FtleError, ValueError):
    """File cannot be parsed: bad magic, truncated payload, malformed header."""
