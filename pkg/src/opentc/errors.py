"""Exception types raised by the steady-state engine."""


class OpenTCError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(OpenTCError):
    """Invalid physical parameters or malformed inputs."""


class GridError(OpenTCError):
    """Frequency grid is unusable (non-uniform, too short, mismatched)."""


class TailDivergence(OpenTCError):
    """An integrand does not decay fast enough at the grid edges for the
    requested tail treatment."""


class SingularBlock(OpenTCError):
    """A 2x2 inverse-propagator block is numerically singular."""

    def __init__(self, message, omega=None):
        super().__init__(message)
        self.omega = omega


class ConvergenceError(OpenTCError):
    """An iterative procedure (root solve, fixed point) failed to converge."""


class UnknownKey(ValidationError):
    """A configuration document contains a key the engine does not define."""


class ParseError(OpenTCError):
    """Malformed configuration document."""

    def __init__(self, message, line=None, col=None):
        where = f" (line {line}" + (f", col {col}" if col else "") + ")" \
            if line else ""
        super().__init__(message + where)
        self.line = line
        self.col = col
