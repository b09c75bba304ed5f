"""Exception types shared across the package."""


class FptsimError(Exception):
    pass


class MaxStepsExceeded(FptsimError):
    """A simulation loop hit its step cap; the boundary likely violates the
    hypotheses the algorithm needs in practice."""

    def __init__(self, cap, trial_index=None):
        self.cap = cap
        self.trial_index = trial_index
        where = "" if trial_index is None else f" (trial {trial_index})"
        super().__init__(f"step cap {cap} exceeded{where}")


class InvalidSlope(FptsimError, ValueError):
    """slope_r must exceed the boundary's declared rho_minus."""


class InvalidProblem(FptsimError, ValueError):
    """An Ornstein-Uhlenbeck hitting problem with a nonpositive transformed
    start value (boundary does not start above x0)."""
