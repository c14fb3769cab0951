"""Exception types shared across the package."""


class PandoraError(Exception):
    """Base class for all package errors."""


class DomainError(PandoraError, ValueError):
    """An argument lies outside the domain an operation supports."""


class ValidationError(PandoraError, ValueError):
    """A structurally invalid object or document."""


class StateError(PandoraError, ValueError):
    """An operation is incompatible with the given search state."""


class TableMissError(PandoraError, KeyError):
    """An explicit utility table has no entry for the argument vector."""


class ConstructionError(PandoraError, ValueError):
    """A case builder's preconditions do not hold for the given parameters."""


class ResourceLimitError(PandoraError, RuntimeError):
    """The outcome-tree node cap was exceeded; raised instead of truncating."""


class VerificationError(PandoraError, RuntimeError):
    """An internal consistency check failed while verifying a result."""
