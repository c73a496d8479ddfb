"""Error taxonomy shared by every check suite."""


class HmonoError(Exception):
    """Base class for toolkit errors."""


class DimensionMismatchError(HmonoError, ValueError):
    def __init__(self, expected: int, got: int, what: str = "point"):
        super().__init__(f"Dimension mismatch: expected {what} of dimension {expected}, got {got}")
        self.expected = expected
        self.got = got


class ClosureAbsentError(HmonoError, ValueError):
    def __init__(self, label: str, operation: str):
        super().__init__(f"closure absent: map '{label}' has no analytic closure, required by {operation}")
        self.label = label
        self.operation = operation


class UnsupportedInputError(HmonoError, ValueError):
    """Input is well-formed but outside the supported regime of an operation."""


class NonFiniteError(HmonoError, ArithmeticError):
    """A non-finite intermediate was produced; values are never clamped."""


class ConfigError(HmonoError, ValueError):
    """Experiment configuration could not be loaded or validated."""


class ConvergenceError(HmonoError, ArithmeticError):
    """An iterative inversion did not reach its residual target."""
