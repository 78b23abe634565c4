"""Exception hierarchy shared by all perco modules."""


class PercoError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(PercoError, ValueError):
    """Invalid parameters: bad window, tau <= 1, malformed config file, ..."""


class ResourceError(PercoError, RuntimeError):
    """A run would exceed a point or pair budget; message reports the required count."""


class WindowCoverageError(PercoError, ValueError):
    """The simulation window is too small to decide the requested event."""


class ContractError(PercoError, TypeError):
    """An operation was called with a model variant it does not support."""


class InternalConsistencyError(PercoError, RuntimeError):
    """An invariant the implementation guarantees was observed to fail (a bug)."""
