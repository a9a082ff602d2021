"""Equations of state in the form e = e(p, rho).

The pressure solver only ever needs the specific internal energy as a
function of pressure at fixed density, plus its pressure derivative.  Any
model that is non-negative and non-decreasing in ``p`` can be plugged in by
subclassing :class:`EquationOfState`.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, ConfigError


def _check_density(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0.0):
        bad = np.argwhere(np.atleast_1d(rho) <= 0.0)[0]
        raise AdmissibilityError(
            "non-positive density", index=tuple(int(k) for k in bad),
            value=float(np.atleast_1d(rho)[tuple(bad)]))
    return rho


class EquationOfState(abc.ABC):
    """Thermodynamic closure keyed on pressure and density."""

    @abc.abstractmethod
    def internal_energy(self, p, rho):
        """Specific internal energy e(p, rho)."""

    @abc.abstractmethod
    def pressure_from_energy(self, e, rho):
        """Inverse of :meth:`internal_energy` in ``p``."""

    @abc.abstractmethod
    def de_dp(self, p, rho):
        """Partial derivative of e with respect to p at fixed rho."""

    @abc.abstractmethod
    def sound_speed_sq(self, p, rho):
        """Squared adiabatic sound speed."""

    @abc.abstractmethod
    def temperature(self, p, rho):
        """Temperature from the thermal equation of state."""

    def enthalpy(self, p, rho):
        """Specific enthalpy h = e + p / rho."""
        rho = _check_density(rho)
        return self.internal_energy(p, rho) + np.asarray(p, dtype=float) / rho


@dataclass(frozen=True)
class IdealGas(EquationOfState):
    """Calorically perfect gas, ``p / rho = R T`` and ``e = c_v T``.

    Parameters
    ----------
    gamma : float
        Ratio of specific heats, must exceed one.
    c_v : float
        Specific heat at constant volume.
    """

    gamma: float = 1.4
    c_v: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ConfigError(f"gamma must be > 1, got {self.gamma}")
        if not self.c_v > 0.0:
            raise ConfigError(f"c_v must be > 0, got {self.c_v}")

    @property
    def kind(self) -> str:
        return "IdealGas"

    @property
    def R(self) -> float:
        return (self.gamma - 1.0) * self.c_v

    def internal_energy(self, p, rho):
        rho = _check_density(rho)
        return np.asarray(p, dtype=float) / ((self.gamma - 1.0) * rho)

    def pressure_from_energy(self, e, rho):
        rho = _check_density(rho)
        return (self.gamma - 1.0) * rho * np.asarray(e, dtype=float)

    def de_dp(self, p, rho):
        rho = _check_density(rho)
        return np.broadcast_to(1.0 / ((self.gamma - 1.0) * rho),
                               np.broadcast_shapes(np.shape(p), rho.shape)).copy()

    def sound_speed_sq(self, p, rho):
        rho = _check_density(rho)
        return self.gamma * np.asarray(p, dtype=float) / rho

    def temperature(self, p, rho):
        rho = _check_density(rho)
        if self.R == 0.0:
            raise ConfigError("specific gas constant R is zero")
        return np.asarray(p, dtype=float) / (self.R * rho)
