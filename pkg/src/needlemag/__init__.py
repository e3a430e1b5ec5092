"""Precessing ferromagnetic needle magnetometer simulation.

A single-domain ferromagnetic needle whose intrinsic spin dominates its
rotational angular momentum precesses about a magnetic field like an
atomic spin.  This package models the coupled macrospin/rigid-rotor
dynamics, the SQUID pickup readout, every analytic noise floor of the
instrument, Monte Carlo kick processes that validate the random-walk
formulas, and the assembled sensitivity budget.
"""

from .budget import (
    NoiseBudget,
    assemble_budget,
    average_uncertainty,
    budget_to_csv,
    budget_to_json,
    crossover_time,
    exotic_coupling_reach,
    required_vacuum,
)
from .constants import CGS, PhysicalConstants
from .dynamics import (
    DynamicsConfig,
    DynamicState,
    Regime,
    Trajectory,
    classify_regime,
    config_for_needle,
    effective_precession,
    fit_locking_rate,
    fit_precession_frequency,
    integrate_full,
    llg_rotor_derivative,
    locked_state,
    misaligned_state,
)
from .errors import ConfigError, InvalidParameterError, SingleDomainWarning
from .montecarlo import (
    CollisionGeometryKick,
    FixedKick,
    KickProcess,
    WalkSummary,
    scaling_exponent,
    simulate_walk,
    sz_budget_check,
)
from .needle import (
    COBALT,
    Material,
    NeedleDerived,
    NeedleGeometry,
    critical_thresholds,
    derive_needle,
    load_materials,
    material_from_dict,
    mean_thermal_speed,
    reference_needle,
)
from .noise import (
    EnvironmentConditions,
    PerturbationKick,
    blackbody_rate,
    collision_field_noise,
    collision_kick,
    collision_phase_noise,
    gradient_limit,
    imaginary_susceptibility,
    perturbation_phase_noise,
    quantum_limit,
    quantum_phase_noise,
    quantum_spin_noise,
    reference_environment,
    spin_noise_from_susceptibility,
    sql_limit,
    thermal_current_noise,
)
from .pickup import (
    MAGIC_ANGLE,
    PickupLoop,
    angle_resolution,
    default_loop,
    detection_limit,
    dipole_flux,
    readout_resolution,
)

__version__ = "0.1.0"
