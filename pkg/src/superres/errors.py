"""Exception types shared across the solvers and the CLI."""


class RecoveryError(Exception):
    """Base class for solver failures that a harness should count, not crash on."""


class EmptyEstimateError(RecoveryError):
    """No frequency survived filtering; the estimate is empty."""


class OvercompleteSupportError(RecoveryError):
    """A candidate support has more atoms than measurements."""


class DegenerateGapError(RecoveryError):
    """The singular-value gap feeding a threshold formula is not positive."""
