"""Exception and warning types shared across oscillatory-dmd."""


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""
    pass


class DegenerateDataError(ArithmeticError):
    """Raised when the data carry no usable information (numerical rank 0)."""
    pass


class RankDeficiencyWarning(UserWarning):
    """A least-squares system was rank-deficient and had to be truncated."""
    pass


class NonUniqueSolutionWarning(UserWarning):
    """The constrained least-squares problem has more than one minimizer."""
    pass


class UndefinedFrequencyWarning(UserWarning):
    """A DMD eigenvalue is zero, so its continuous frequency is undefined."""
    pass


class LargeProblemWarning(UserWarning):
    """A dense O(n^3) computation was requested at a large dimension."""
    pass
