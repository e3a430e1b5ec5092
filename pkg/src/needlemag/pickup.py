"""SQUID pickup-loop readout: flux capture, angular resolution, field floor.

The precessing needle is treated as a point dipole at its center.  The
loop sits on the dipole axis; `standoff` is the axial distance from the
needle center to the loop plane.  The default geometry puts the loop rim
at one needle length from the dipole, at the polar angle that maximizes
captured flux for the resulting plane distance (tan(theta) = sqrt(2),
about 54.74 degrees), which is also where the rim radius equals
length*sin(theta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CGS, PhysicalConstants
from .errors import InvalidParameterError

# Polar angle of the flux-optimal loop rim: acos(1/sqrt(3)) ~ 54.74 deg.
MAGIC_ANGLE = math.acos(1.0 / math.sqrt(3.0))

DEFAULT_FLUX_SENSITIVITY = 1.0e-13  # G cm^2 / sqrt(Hz), low-T SQUID


@dataclass(frozen=True)
class PickupLoop:
    """Circular pickup loop on the dipole axis.

    radius: loop radius in cm.
    standoff: needle-center-to-loop-plane distance in cm.
    flux_sensitivity: SQUID flux noise floor in G cm^2 / sqrt(Hz).
    """

    radius: float
    standoff: float
    flux_sensitivity: float = DEFAULT_FLUX_SENSITIVITY

    def __post_init__(self) -> None:
        for name in ("radius", "standoff", "flux_sensitivity"):
            if getattr(self, name) <= 0.0:
                raise InvalidParameterError(f"pickup {name} must be positive")


def default_loop(
    needle_length: float, flux_sensitivity: float = DEFAULT_FLUX_SENSITIVITY
) -> PickupLoop:
    """Loop with its rim one needle length from the dipole at the magic angle."""
    return PickupLoop(
        radius=needle_length * math.sin(MAGIC_ANGLE),
        standoff=needle_length * math.cos(MAGIC_ANGLE),
        flux_sensitivity=flux_sensitivity,
    )


def dipole_flux(moment: float, loop: PickupLoop) -> float:
    """On-axis flux of a point dipole through the loop, G cm^2.

    Phi = 2 pi m a^2 / (a^2 + d^2)^(3/2) with a the loop radius and d the
    axial distance from dipole to loop plane.  Geometry factors beyond
    the on-axis formula are absorbed into a coupling coefficient of 1.
    """
    if moment < 0.0:
        raise InvalidParameterError("moment must be non-negative")
    a2 = loop.radius**2
    return 2.0 * math.pi * moment * a2 / (a2 + loop.standoff**2) ** 1.5


def angle_resolution(loop: PickupLoop, flux_amplitude: float) -> float:
    """Angular resolution of the precession readout, rad/sqrt(Hz)."""
    if flux_amplitude <= 0.0:
        raise InvalidParameterError("flux_amplitude must be positive")
    return loop.flux_sensitivity / flux_amplitude


def detection_limit(
    delta_phi: float,
    g_factor: float,
    t: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Detection-limited field uncertainty after averaging time t, G.

    The angular readout noise integrates down as 1/sqrt(t) and the
    accrued precession angle grows as t, so the field floor falls as
    t^(-3/2): dB = (hbar/(g mu_B)) dphi t^(-3/2).
    """
    if t <= 0.0:
        raise InvalidParameterError("averaging time must be positive")
    return constants.hbar / (g_factor * constants.mu_B) * delta_phi * t**-1.5


def readout_resolution(moment: float, loop: PickupLoop) -> float:
    """Chain dipole flux and SQUID floor into rad/sqrt(Hz)."""
    return angle_resolution(loop, dipole_flux(moment, loop))
