"""Exception types shared across the package."""


class GrpdError(Exception):
    """Base class for all errors raised by grpd."""


class InvalidInputError(GrpdError, ValueError):
    """Structurally malformed input (dangling endpoints, bad maps, ...)."""


class PreconditionError(GrpdError, ValueError):
    """Input is well formed but outside the operation's domain."""


class GuardExceededError(GrpdError):
    """An enumeration would exceed its size guard."""

    def __init__(self, what, size, bound):
        super().__init__(f"{what}: size {size} exceeds guard {bound} "
                         f"(raise with GRPD_GUARD_OVERRIDE)")
        self.size = size
        self.bound = bound


class WindowBoundaryError(GrpdError):
    """A windowed computation needs data outside the window."""


class NotAProjectionError(GrpdError, ValueError):
    pass


class UnsupportedDegreeError(GrpdError, NotImplementedError):
    pass


class InconsistencyError(GrpdError):
    """Independent methods disagreed; this is always a bug."""

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump or {}
