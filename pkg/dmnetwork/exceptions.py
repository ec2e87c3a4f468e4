"""Error hierarchy. The CLI maps these onto exit codes (see runner.EXIT_CODES)."""


class DMNetworkError(Exception):
    """Base class for every error raised by the simulator."""


class DimensionError(DMNetworkError, ValueError):
    """Operand shapes or qubit indices do not fit together."""


class NotHermitianError(DMNetworkError):
    """A Hermitian-only routine received a matrix outside the Hermitian tolerance."""


class ConvergenceError(DMNetworkError):
    """An iterative kernel hit its iteration cap."""


class InvalidStateError(DMNetworkError):
    """A numerical invariant of a state broke (norm, trace, PSD, purity)."""


class CouplingError(DMNetworkError, ValueError):
    """Invalid DM coupling, or the analytic path was asked for a multi-axis vector."""


class GridError(DMNetworkError, ValueError):
    """Invalid time grid or an empty sweep."""


class PresetError(DMNetworkError, ValueError):
    """Unknown figure preset or malformed override."""
