"""Shared exception types."""


class NonConvergence(RuntimeError):
    """Quadrature failed to meet the requested tolerance at the grid cap.

    Carries the last computed value and the last refinement delta so callers
    can decide whether to fall back to Monte Carlo.
    """

    def __init__(self, message, value=None, est_error=None, grid_size=None):
        super().__init__(message)
        self.value = value
        self.est_error = est_error
        self.grid_size = grid_size


class BudgetExceeded(ValueError):
    """Requested computation would push the quadrature grid past its cap."""


class RootBracketFailure(RuntimeError):
    """Phase unwrapping on the boundary grid failed monotonicity."""


class SeparationViolation(ValueError):
    """Block families must be strictly ordered: max(A_k) < min(A_{k+1})."""


class ShapeMismatch(ValueError):
    """Sign/index pattern does not match any of the four-factor shapes."""


class SandwichViolation(RuntimeError):
    """Variance left the Toeplitz sandwich; indicates an implementation bug."""


class RegimeTooSmall(ValueError):
    """N too small for the block-splitting construction to place one block."""


class InsufficientSamples(ValueError):
    """Not enough samples for the requested distributional statistic."""


class HeavyTruncation(ValueError):
    """Stored coefficient tail truncates too much mass for a tail run."""
