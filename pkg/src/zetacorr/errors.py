"""Exception taxonomy shared by the library and the command line tool.

Every error carries the process exit code the CLI maps it to, so the
dispatch there stays a one-liner.
"""


class ZetaLabError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigError(ZetaLabError):
    """Malformed or inconsistent run configuration."""

    exit_code = 2


class CacheFormatError(ZetaLabError):
    """A cache file is truncated, corrupt, or has the wrong version."""

    exit_code = 3


class DomainError(ZetaLabError):
    """Arguments lie outside the documented domain of an operation."""

    exit_code = 4


class ResourceError(ZetaLabError):
    """A computation would exceed its configured size or time budget."""

    exit_code = 5


class InsufficientSieveError(DomainError):
    """A prime table does not cover the requested range."""


class CoverageError(DomainError):
    """A sample grid does not cover the requested integration window."""
