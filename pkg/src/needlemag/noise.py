"""Closed-form noise and sensitivity limits for the precessing needle.

Conventions:
  * every limit is returned as a magnetic-field uncertainty in G unless
    the name says phase (rad) or rate (1/s);
  * "field noise" here means the uncertainty of a field estimate
    averaged over the full measurement time t, so random-walk sources
    (collisions, black-body kicks) fall as 1/sqrt(t) even though their
    accumulated phase noise grows as sqrt(t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CGS, PhysicalConstants
from .errors import InvalidParameterError
from .needle import Material, NeedleDerived, mean_thermal_speed

HELIUM_MASS_AMU = 4.0026


@dataclass(frozen=True)
class EnvironmentConditions:
    """Cryostat environment around the needle."""

    temperature: float       # K
    gas_density: float       # cm^-3
    gas_mass: float          # g
    emissivity: float = 1.0  # dimensionless, [0, 1]
    relaxation_rate: float = 0.0  # 1/s, for SQL comparisons

    def __post_init__(self) -> None:
        if self.temperature < 0.0:
            raise InvalidParameterError("temperature must be non-negative")
        if self.gas_density < 0.0:
            raise InvalidParameterError("gas_density must be non-negative")
        if self.gas_mass <= 0.0:
            raise InvalidParameterError("gas_mass must be positive")
        if not 0.0 <= self.emissivity <= 1.0:
            raise InvalidParameterError("emissivity must lie in [0, 1]")
        if self.relaxation_rate < 0.0:
            raise InvalidParameterError("relaxation_rate must be non-negative")


def reference_environment(constants: PhysicalConstants = CGS) -> EnvironmentConditions:
    """Cryogenic vacuum: 0.1 K, 1e3 He atoms per cm^3, unit emissivity."""
    return EnvironmentConditions(
        temperature=0.1,
        gas_density=1.0e3,
        gas_mass=HELIUM_MASS_AMU * constants.amu,
        emissivity=1.0,
        relaxation_rate=0.0,
    )


@dataclass(frozen=True)
class PerturbationKick:
    """Average transverse angular-momentum kick and its Poisson rate."""

    dL: float    # erg s
    rate: float  # 1/s

    def __post_init__(self) -> None:
        if self.dL < 0.0 or self.rate < 0.0:
            raise InvalidParameterError("kick magnitude and rate must be non-negative")


def sql_limit(
    n_spins: float,
    t: float,
    relaxation_rate: float = 0.0,
    g_factor: float = 1.0,
    constants: PhysicalConstants = CGS,
) -> float:
    """Standard quantum limit on the field for N independent spins, G.

    The frequency uncertainty is sqrt(Gamma_rel/(N t)); once the
    coherence outlives the measurement (Gamma_rel * t <= 1) the rate is
    replaced by 1/t, giving 1/(t sqrt(N)).  The two branches agree at
    Gamma_rel * t = 1, so the limit is continuous.
    """
    if t <= 0.0:
        raise InvalidParameterError("measurement time must be positive")
    if n_spins < 1.0:
        raise InvalidParameterError("n_spins must be at least 1")
    if relaxation_rate * t > 1.0:
        delta_omega = math.sqrt(relaxation_rate / (n_spins * t))
    else:
        delta_omega = 1.0 / (t * math.sqrt(n_spins))
    return constants.hbar / (g_factor * constants.mu_B) * delta_omega


def imaginary_susceptibility(
    omega: float,
    n_spins: float,
    alpha: float,
    omega0: float,
    volume: float,
    g_factor: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Dissipative part of the magnetic susceptibility at frequency omega.

    Linearizing the damped macrospin equation of motion gives
    chi'' = N hbar alpha (g mu_B)^2 / V * omega / omega0^2.
    """
    return (
        n_spins
        * constants.hbar
        * alpha
        * (g_factor * constants.mu_B) ** 2
        / volume
        * omega
        / omega0**2
    )


def spin_noise_from_susceptibility(
    omega: float,
    temperature: float,
    volume: float,
    chi_imag: float,
    g_factor: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Spectral density of transverse spin fluctuations, (erg s)^2 per Hz.

    Fluctuation-dissipation route, valid for hbar*omega << k_B*T:
    (dS_y)^2 = V/(g mu_B)^2 * 2 k_B T / omega * chi''(omega).
    """
    return (
        volume
        / (g_factor * constants.mu_B) ** 2
        * 2.0
        * constants.k_B
        * temperature
        / omega
        * chi_imag
    )


def quantum_spin_noise(
    needle: NeedleDerived,
    temperature: float,
    alpha: float | None = None,
    omega0: float | None = None,
    constants: PhysicalConstants = CGS,
) -> float:
    """Transverse spin noise amplitude per sqrt(Hz), erg s.

    Closed form of the fluctuation-dissipation chain: the spectral
    density is white, (dS_y)^2 = N hbar 2 alpha k_B T / omega0^2, and
    this returns its square root.
    """
    if temperature < 0.0:
        raise InvalidParameterError("temperature must be non-negative")
    alpha = needle.material.gilbert_alpha if alpha is None else alpha
    omega0 = needle.material.fmr_frequency if omega0 is None else omega0
    density = (
        needle.spin_count * constants.hbar * 2.0 * alpha * constants.k_B * temperature / omega0**2
    )
    return math.sqrt(density)


def quantum_phase_noise(
    needle: NeedleDerived,
    temperature: float,
    t: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Thermally averaged precession-angle uncertainty after time t, rad."""
    if t <= 0.0:
        raise InvalidParameterError("measurement time must be positive")
    return quantum_spin_noise(needle, temperature, constants=constants) / (
        needle.total_spin * math.sqrt(t)
    )


def quantum_limit(
    needle: NeedleDerived,
    temperature: float,
    t: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Quantum (spin-lattice fluctuation) field uncertainty, G.

    dB_Q = hbar/(g mu_B) sqrt(2 alpha k_B T/(hbar omega0^2)) / sqrt(N t^3).
    White internal spin noise integrates down as t^(-3/2), the same
    scaling as the detection limit and far below it numerically.
    """
    if t <= 0.0:
        raise InvalidParameterError("measurement time must be positive")
    mat = needle.material
    factor = math.sqrt(
        2.0 * mat.gilbert_alpha * constants.k_B * temperature / (constants.hbar * mat.fmr_frequency**2)
    )
    return (
        constants.hbar
        / (mat.g_factor * constants.mu_B)
        * factor
        / math.sqrt(needle.spin_count * t**3)
    )


def collision_kick(
    env: EnvironmentConditions,
    needle: NeedleDerived,
    constants: PhysicalConstants = CGS,
) -> PerturbationKick:
    """Average angular-momentum kick and rate of residual-gas collisions.

    The kick magnitude m*v*l/16 averages over impact angle and location.
    The rate is the thermal effusion flux n*v/4 onto the needle's
    lateral surface 2*pi*r*l; at the reference vacuum of 1e3 cm^-3 this
    is a fraction of a hertz, i.e. collisions about once a second.
    """
    speed = mean_thermal_speed(env.temperature, env.gas_mass, constants)
    dL = env.gas_mass * speed * needle.geometry.length / 16.0
    area = 2.0 * math.pi * needle.geometry.radius * needle.geometry.length
    rate = env.gas_density * area * speed / 4.0
    return PerturbationKick(dL=dL, rate=rate)


def perturbation_phase_noise(
    kick: PerturbationKick, n_spins: float, t: float, constants: PhysicalConstants = CGS
) -> float:
    """Accumulated precession-angle random walk after time t, rad.

    Each kick rotates the spin in the precession plane by dL/(N hbar);
    Poisson kicks at the given rate make the spread grow as sqrt(t).
    """
    if t < 0.0:
        raise InvalidParameterError("time must be non-negative")
    if t == 0.0:
        return 0.0
    return kick.dL / (n_spins * constants.hbar) * math.sqrt(kick.rate * t)


def collision_phase_noise(
    env: EnvironmentConditions,
    needle: NeedleDerived,
    t: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Precession-angle spread from gas collisions after time t, rad."""
    return perturbation_phase_noise(
        collision_kick(env, needle, constants), needle.spin_count, t, constants
    )


def collision_field_noise(
    env: EnvironmentConditions,
    needle: NeedleDerived,
    t: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Field uncertainty from gas collisions after averaging time t, G.

    Equivalent to hbar/(g mu_B) * (m/(32 N hbar)) sqrt(2 pi n r l^3 v^3 / t):
    the phase walk grows as sqrt(t), the averaged field estimate divides
    by t, so this bound falls as 1/sqrt(t) and rises as sqrt(n).
    """
    if t <= 0.0:
        raise InvalidParameterError("averaging time must be positive")
    phase = collision_phase_noise(env, needle, t, constants)
    return constants.hbar / (needle.material.g_factor * constants.mu_B) * phase / t


def blackbody_rate(
    env: EnvironmentConditions,
    needle: NeedleDerived,
    constants: PhysicalConstants = CGS,
) -> float:
    """Black-body photon emission rate of the needle, photons/s.

    Stefan-Boltzmann photon-count form over the lateral surface
    2*pi*r*l; each photon carries an angular-momentum kick of about
    hbar.  Sub-wavelength emissivity suppression is left to the caller
    through env.emissivity.
    """
    area = 2.0 * math.pi * needle.geometry.radius * needle.geometry.length
    return (
        4.0
        * constants.zeta3
        * env.emissivity
        / (constants.c**2 * constants.h**3)
        * (constants.k_B * env.temperature) ** 3
        * area
    )


def blackbody_kick(
    env: EnvironmentConditions,
    needle: NeedleDerived,
    constants: PhysicalConstants = CGS,
) -> PerturbationKick:
    """Photon kicks: hbar of angular momentum at the black-body rate."""
    return PerturbationKick(dL=constants.hbar, rate=blackbody_rate(env, needle, constants))


def thermal_current_noise(
    material: Material,
    needle: NeedleDerived,
    temperature: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Upper bound on field noise from thermal currents, G/sqrt(Hz).

    Conducting-slab estimate with the slab thickness set to the needle
    length: dB^2 = (pi/4) k_B T / (c^2 rho l).  A needle of radius
    l/10 produces considerably less, so this is a bound and is not
    folded into the quadrature budget by default.
    """
    if temperature < 0.0:
        raise InvalidParameterError("temperature must be non-negative")
    density = (
        math.pi
        / 4.0
        * constants.k_B
        * temperature
        / (constants.c**2 * material.resistivity * needle.geometry.length)
    )
    return math.sqrt(density)


def gradient_limit(
    needle: NeedleDerived,
    material: Material,
    t: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Largest tolerable field gradient along the spin axis, G/cm.

    Keeps the free-floating needle's displacement under its own radius
    during the measurement time: |dB_x/dx| < 2 r m_a / (mu_B t^2).
    """
    if t <= 0.0:
        raise InvalidParameterError("measurement time must be positive")
    return 2.0 * needle.geometry.radius * material.atomic_mass / (constants.mu_B * t**2)
