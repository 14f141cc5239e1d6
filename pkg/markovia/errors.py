"""Exception hierarchy shared by every markovia module.

Each error carries the CLI exit code it maps to, so the command line front
end can translate any library failure without a lookup table.
"""

import numpy as np


class MarkoviaError(Exception):
    """Base class for all markovia errors."""

    exit_code = 1


class DomainError(MarkoviaError, ValueError):
    """A precondition on the inputs does not hold."""


class SizeError(MarkoviaError):
    """An exhaustive enumeration was requested above its cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class NumericError(MarkoviaError, np.linalg.LinAlgError):
    """A matrix was not numerically positive definite."""

    def __init__(self, message: str, lambda_min: float | None = None):
        self.lambda_min = lambda_min
        if lambda_min is not None:
            message = f"{message} (smallest eigenvalue {lambda_min:.6g})"
        super().__init__(message)


class IllConditionedError(NumericError):
    """Condition number of a block exceeded the configured cap."""

    def __init__(self, condition: float, cap: float, lambda_min: float):
        self.condition = condition
        self.cap = cap
        super().__init__(
            f"condition number {condition:.3g} exceeds cap {cap:.3g}", lambda_min
        )


class ModelClassError(MarkoviaError, TypeError):
    """Operation applied to a model of the wrong family."""


class ConfigError(MarkoviaError):
    """Malformed configuration file or command-line flags."""

    def __init__(
        self,
        message: str,
        path: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ):
        self.path = path
        self.line = line
        self.column = column
        self.message = message
        super().__init__(self.location + message)

    @property
    def location(self) -> str:
        """Return a `file:line:col: ` prefix for whatever is known."""
        if self.path is None:
            return ""
        parts = [self.path]
        if self.line is not None:
            parts.append(str(self.line))
            if self.column is not None:
                parts.append(str(self.column))
        return ":".join(parts) + ": "


class SchemaError(ConfigError):
    """A report file does not carry the expected schema version."""
