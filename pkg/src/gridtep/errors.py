"""Exception types shared across the package."""


class GridTepError(Exception):
    """Base class for all package-specific errors."""


class CaseParseError(GridTepError):
    """The case file could not be read or is not valid JSON."""


class CaseValidationError(GridTepError):
    """The case file parsed but violates one or more model invariants."""

    def __init__(self, failures):
        # failures: list of (field_path, message)
        self.failures = list(failures)
        lines = [f"{path}: {msg}" for path, msg in self.failures]
        super().__init__("invalid case: " + "; ".join(lines))


class NetworkDisconnectedError(GridTepError):
    """A load-flow solve was requested on a network whose in-service graph
    leaves a nonzero injection unreachable from the slack bus."""


class UnbalancedInjectionsError(GridTepError):
    """Injections passed to the load-flow solver do not sum to zero."""


class ResampleBudgetError(GridTepError):
    """Contingency resampling exhausted its retry budget; the case is
    pathologically hard to sample (e.g. almost every state islands)."""
