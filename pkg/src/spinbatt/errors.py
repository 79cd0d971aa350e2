"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: UsageError -> 2, CapacityError -> 3,
RegimeError -> 4.
"""


class SpinbattError(Exception):
    """Base class for all spinbatt errors."""


class UsageError(SpinbattError):
    """Invalid parameter combination or malformed configuration."""


class CapacityError(SpinbattError):
    """Requested system size exceeds what dense linear algebra supports."""


class RegimeError(SpinbattError):
    """A numerical procedure was invoked outside its validity regime."""
