"""Errors raised by the simulator.

Each error carries the process exit code the management commands use for it.
"""


class ChronoloopError(Exception):
    exit_code = 1


class DimensionMismatch(ChronoloopError, ValueError):
    pass


class InvalidSplitter(ChronoloopError, ValueError):
    pass


class InvalidState(ChronoloopError, ValueError):
    pass


class ZeroOutput(ChronoloopError):
    """Both output channels carry the zero state, so collapse is undefined."""
    exit_code = 2


class Singular(ChronoloopError):
    """The linear system has no unique solution at these parameters."""
    exit_code = 3

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NoConvergence(ChronoloopError):
    exit_code = 4

    def __init__(self, message, iterations, last_update):
        super().__init__(message)
        self.iterations = iterations
        self.last_update = last_update


class MissingSecondPass(ChronoloopError):
    pass


class VerificationFailed(ChronoloopError):
    exit_code = 5


class NonUnitaryWarning(UserWarning):
    pass


class ConfigError(ChronoloopError):
    """The run configuration could not be read or failed schema validation."""

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors
