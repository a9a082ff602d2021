"""Exception types raised by the solver."""

from __future__ import annotations


class AdmissibilityError(ValueError):
    """A state left the admissible set (negative density or internal energy).

    ``index`` is the offending array index (cell, or component and cell) and
    ``value`` the offending value, when known.
    """

    def __init__(self, message, index=None, value=None):
        self.index = index
        self.value = value
        details = []
        if index is not None:
            details.append(f"index={index}")
        if value is not None:
            details.append(f"value={value!r}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)


class SolverError(RuntimeError):
    """The pressure solver failed to converge."""

    def __init__(self, message, residuals=()):
        self.residuals = list(residuals)
        super().__init__(message)


class ConfigError(ValueError):
    """Invalid problem or solver configuration."""
