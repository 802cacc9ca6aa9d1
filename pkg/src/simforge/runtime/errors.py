"""Runtime error types."""


class SolverError(RuntimeError):
    """A numeric task failed hard (bad bounds, singularity, no convergence)."""


class RunInputError(ValueError):
    """The parameter valuation does not satisfy the compute plan's contract."""
