"""Gaussian-cgs physical constants and unit conversions.

Everything inside this package is Gaussian-cgs: gauss, erg, centimeter,
second.  Laboratory units (ohm cm, amu, eV) are converted once, at the
input/output boundary, with the factors defined here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in Gaussian-cgs units (CODATA 2018)."""

    hbar: float = 1.054571817e-27      # erg s
    mu_B: float = 9.2740100783e-21     # erg/G
    k_B: float = 1.380649e-16          # erg/K
    c: float = 2.99792458e10           # cm/s
    h: float = 6.62607015e-27          # erg s
    amu: float = 1.66053906660e-24     # g
    zeta3: float = 1.2020569031595943  # Riemann zeta(3)

    def __post_init__(self) -> None:
        for name in ("hbar", "mu_B", "k_B", "c", "h", "amu", "zeta3"):
            if getattr(self, name) <= 0.0:
                raise InvalidParameterError(f"constant {name} must be positive")
        # h and hbar must agree to six significant figures
        if abs(self.h - 2.0 * math.pi * self.hbar) > 1e-6 * self.h:
            raise InvalidParameterError("h must equal 2*pi*hbar")

    def gyromagnetic_ratio(self, g_factor: float) -> float:
        """Spin gyromagnetic ratio g*mu_B/hbar in rad/(s G)."""
        return g_factor * self.mu_B / self.hbar

    @property
    def ohm_cm_to_s(self) -> float:
        """Resistivity conversion: 1 ohm cm in Gaussian seconds (= 1e9/c^2)."""
        return 1e9 / self.c**2


CGS = PhysicalConstants()

ERG_PER_EV = 1.602176634e-12  # erg/eV


def resistivity_to_gaussian(rho_ohm_cm: float, constants: PhysicalConstants = CGS) -> float:
    """Convert a resistivity from ohm cm to Gaussian seconds."""
    return rho_ohm_cm * constants.ohm_cm_to_s


def resistivity_from_gaussian(rho_s: float, constants: PhysicalConstants = CGS) -> float:
    """Convert a resistivity from Gaussian seconds back to ohm cm."""
    return rho_s / constants.ohm_cm_to_s


def erg_to_ev(energy_erg: float) -> float:
    return energy_erg / ERG_PER_EV
