"""Needle inputs (material, geometry) and the derived static quantities.

The needle is a single-domain ferromagnetic cylinder whose polarized
electron spins act as one collective spin of magnitude N*hbar along the
long axis.  Everything downstream (thresholds, readout, noise budget) is
computed from the `NeedleDerived` bundle built here.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from .constants import CGS, PhysicalConstants, resistivity_to_gaussian
from .errors import InvalidParameterError, SingleDomainWarning

# Aspect ratios outside this window risk multi-domain behavior; we warn
# and proceed because the macrospin model itself does not break down.
SINGLE_DOMAIN_ASPECT_RANGE = (5.0, 50.0)


@dataclass(frozen=True)
class Material:
    """Intrinsic constants of the ferromagnet, all in Gaussian-cgs.

    resistivity is stored in Gaussian seconds; use `material_from_dict`
    or `Material.from_lab_units` to enter it in ohm cm.
    """

    name: str
    density: float          # g/cm^3
    atomic_mass: float      # g
    g_factor: float         # dimensionless
    gilbert_alpha: float    # dimensionless
    fmr_frequency: float    # rad/s
    resistivity: float      # s (Gaussian)
    spins_per_atom: float = 1.0

    def __post_init__(self) -> None:
        for name in ("density", "atomic_mass", "fmr_frequency", "resistivity"):
            if getattr(self, name) <= 0.0:
                raise InvalidParameterError(f"material {name} must be positive")
        if not 0.0 < self.gilbert_alpha < 1.0:
            raise InvalidParameterError("gilbert_alpha must lie in (0, 1)")
        if self.spins_per_atom <= 0.0:
            raise InvalidParameterError("spins_per_atom must be positive")
        if self.g_factor <= 0.0:
            raise InvalidParameterError("g_factor must be positive")

    @classmethod
    def from_lab_units(
        cls,
        name: str,
        density_g_cm3: float,
        atomic_mass_amu: float,
        g_factor: float,
        gilbert_alpha: float,
        fmr_frequency_rad_s: float,
        resistivity_ohm_cm: float,
        spins_per_atom: float = 1.0,
        constants: PhysicalConstants = CGS,
    ) -> "Material":
        return cls(
            name=name,
            density=density_g_cm3,
            atomic_mass=atomic_mass_amu * constants.amu,
            g_factor=g_factor,
            gilbert_alpha=gilbert_alpha,
            fmr_frequency=fmr_frequency_rad_s,
            resistivity=resistivity_to_gaussian(resistivity_ohm_cm, constants),
            spins_per_atom=spins_per_atom,
        )


# Bulk cobalt at room temperature; the default every headline number of
# this package is built on.  Low-temperature refinements are config
# overrides, not code.
COBALT = Material.from_lab_units(
    name="cobalt",
    density_g_cm3=8.86,
    atomic_mass_amu=58.93,
    g_factor=1.0,
    gilbert_alpha=0.01,
    fmr_frequency_rad_s=1.0e11,
    resistivity_ohm_cm=1.0e-7,
    spins_per_atom=1.0,
)

MATERIAL_PRESETS = {"cobalt": COBALT}

_MATERIAL_JSON_KEYS = {
    "name",
    "density_g_cm3",
    "atomic_mass_amu",
    "g_factor",
    "gilbert_alpha",
    "fmr_frequency_rad_s",
    "resistivity_ohm_cm",
    "spins_per_atom",
}


def material_from_dict(doc: dict, constants: PhysicalConstants = CGS) -> Material:
    """Build a Material from its JSON document form (lab units)."""
    unknown = set(doc) - _MATERIAL_JSON_KEYS
    if unknown:
        raise InvalidParameterError(f"unknown material key '{sorted(unknown)[0]}'")
    missing = _MATERIAL_JSON_KEYS - {"spins_per_atom"} - set(doc)
    if missing:
        raise InvalidParameterError(f"missing material key '{sorted(missing)[0]}'")
    return Material.from_lab_units(
        name=doc["name"],
        density_g_cm3=float(doc["density_g_cm3"]),
        atomic_mass_amu=float(doc["atomic_mass_amu"]),
        g_factor=float(doc["g_factor"]),
        gilbert_alpha=float(doc["gilbert_alpha"]),
        fmr_frequency_rad_s=float(doc["fmr_frequency_rad_s"]),
        resistivity_ohm_cm=float(doc["resistivity_ohm_cm"]),
        spins_per_atom=float(doc.get("spins_per_atom", 1.0)),
        constants=constants,
    )


def material_to_dict(material: Material, constants: PhysicalConstants = CGS) -> dict:
    """Inverse of `material_from_dict` (lab units at the boundary)."""
    return {
        "name": material.name,
        "density_g_cm3": material.density,
        "atomic_mass_amu": material.atomic_mass / constants.amu,
        "g_factor": material.g_factor,
        "gilbert_alpha": material.gilbert_alpha,
        "fmr_frequency_rad_s": material.fmr_frequency,
        "resistivity_ohm_cm": material.resistivity / constants.ohm_cm_to_s,
        "spins_per_atom": material.spins_per_atom,
    }


def load_materials(path: str | Path, constants: PhysicalConstants = CGS) -> dict[str, Material]:
    """Load a material table from a JSON file (one object or a list)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    entries = doc if isinstance(doc, list) else [doc]
    table = {}
    for entry in entries:
        mat = material_from_dict(entry, constants)
        table[mat.name] = mat
    return table


@dataclass(frozen=True)
class NeedleGeometry:
    """Cylinder dimensions in cm."""

    length: float  # cm
    radius: float  # cm

    def __post_init__(self) -> None:
        if self.length <= 0.0 or self.radius <= 0.0:
            raise InvalidParameterError("needle length and radius must be positive")
        aspect = self.length / self.radius
        if aspect < 1.0:
            warnings.warn(
                f"aspect ratio {aspect:.3g} < 1: this is a disk, not a needle",
                SingleDomainWarning,
                stacklevel=2,
            )
        elif not SINGLE_DOMAIN_ASPECT_RANGE[0] <= aspect <= SINGLE_DOMAIN_ASPECT_RANGE[1]:
            warnings.warn(
                f"aspect ratio {aspect:.3g} outside {SINGLE_DOMAIN_ASPECT_RANGE}: "
                "needle may not stay single-domain",
                SingleDomainWarning,
                stacklevel=2,
            )

    @property
    def aspect_ratio(self) -> float:
        return self.length / self.radius


# Reference geometry: 10 um x 1 um cobalt needle.
REFERENCE_GEOMETRY_KWARGS = {"length": 1.0e-3, "radius": 1.0e-4}


@dataclass(frozen=True)
class NeedleDerived:
    """Geometry-derived static quantities; the bridge to every formula.

    omega_star is the precession frequency at which mechanical angular
    momentum would match the intrinsic spin N*hbar; b_star the field
    producing it.  Precession is gyroscopic only well below both.
    """

    geometry: NeedleGeometry
    material: Material
    volume: float             # cm^3
    mass: float               # g
    moment_of_inertia: float  # g cm^2, thin rod about a transverse axis
    spin_count: float         # N, polarized spins
    total_spin: float         # erg s, N*hbar
    magnetic_moment: float    # erg/G, N*g*mu_B
    omega_star: float         # rad/s
    b_star: float             # G
    gamma_g: float            # 1/s, spin-lattice locking rate alpha*omega0


def derive_needle(
    geometry: NeedleGeometry,
    material: Material,
    constants: PhysicalConstants = CGS,
) -> NeedleDerived:
    """Populate every derived needle quantity from geometry and material."""
    volume = math.pi * geometry.radius**2 * geometry.length
    mass = material.density * volume
    inertia = mass * geometry.length**2 / 12.0
    spin_count = mass / material.atomic_mass * material.spins_per_atom
    total_spin = spin_count * constants.hbar
    moment = spin_count * material.g_factor * constants.mu_B
    omega_star = total_spin / inertia
    b_star = constants.hbar * omega_star / (material.g_factor * constants.mu_B)
    gamma_g = material.gilbert_alpha * material.fmr_frequency
    return NeedleDerived(
        geometry=geometry,
        material=material,
        volume=volume,
        mass=mass,
        moment_of_inertia=inertia,
        spin_count=spin_count,
        total_spin=total_spin,
        magnetic_moment=moment,
        omega_star=omega_star,
        b_star=b_star,
        gamma_g=gamma_g,
    )


def critical_thresholds(
    derived: NeedleDerived, constants: PhysicalConstants = CGS
) -> tuple[float, float]:
    """Gyroscopic thresholds (omega_star, b_star) recomputed from N and I."""
    omega_star = derived.total_spin / derived.moment_of_inertia
    b_star = constants.hbar * omega_star / (derived.material.g_factor * constants.mu_B)
    return omega_star, b_star


def mean_thermal_speed(
    temperature: float, gas_mass: float, constants: PhysicalConstants = CGS
) -> float:
    """Mean speed sqrt(8 k_B T / (pi m)) of a thermal gas molecule, cm/s."""
    if temperature < 0.0:
        raise InvalidParameterError("temperature must be non-negative")
    if gas_mass <= 0.0:
        raise InvalidParameterError("gas_mass must be positive")
    if temperature == 0.0:
        return 0.0
    return math.sqrt(8.0 * constants.k_B * temperature / (math.pi * gas_mass))


def reference_needle(constants: PhysicalConstants = CGS) -> NeedleDerived:
    """The 10 um x 1 um cobalt needle used throughout as the reference."""
    return derive_needle(NeedleGeometry(**REFERENCE_GEOMETRY_KWARGS), COBALT, constants)
