"""Run configuration: JSON ingestion, strict validation, presets.

The config document is JSON with unit-suffixed key names so a value can
never be silently misread in the wrong unit.  Unknown keys are rejected
by name.  The `cobalt-reference` preset is the cryogenic-vacuum cobalt
needle every headline number refers to.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

from .constants import CGS, PhysicalConstants
from .errors import ConfigError, InvalidParameterError
from .montecarlo import CollisionGeometryKick, FixedKick, KickProcess
from .needle import (
    MATERIAL_PRESETS,
    Material,
    NeedleDerived,
    NeedleGeometry,
    derive_needle,
    material_from_dict,
    material_to_dict,
    mean_thermal_speed,
)
from .noise import HELIUM_MASS_AMU, EnvironmentConditions, collision_kick
from .pickup import DEFAULT_FLUX_SENSITIVITY, PickupLoop, default_loop

_TOP_KEYS = {"material", "geometry", "environment", "pickup", "field_G", "dynamics", "mc", "output"}
_GEOMETRY_KEYS = {"length_cm", "radius_cm"}
_ENVIRONMENT_KEYS = {
    "temperature_K",
    "gas_density_cm3",
    "gas_mass_amu",
    "emissivity",
    "relaxation_rate_per_s",
}
_PICKUP_KEYS = {"radius_cm", "standoff_cm", "flux_sensitivity_G_cm2_rtHz"}
_DYNAMICS_KEYS = {
    "anisotropy_field_G",
    "damping",
    "fast_dt_s",
    "lock_tolerance",
    "max_duration_s",
    "sample_every",
}
_MC_KEYS = {"kick", "dL_erg_s", "rate_per_s", "seed"}
_OUTPUT_KEYS = {"path", "format"}

DEFAULT_FIELD_G = (0.0, 0.0, 1.0e-7)


@dataclass(frozen=True)
class McSettings:
    """Monte Carlo kick-process settings (resolved lazily against env)."""

    kick: str = "collision-geometry"
    dL_erg_s: float | None = None
    rate_per_s: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kick not in ("collision-geometry", "fixed-magnitude"):
            raise ConfigError(f"unknown kick sampler '{self.kick}'")
        if self.kick == "fixed-magnitude" and self.dL_erg_s is None:
            raise ConfigError("fixed-magnitude kick requires dL_erg_s")


@dataclass(frozen=True)
class OutputSettings:
    path: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown output format '{self.format}'")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved inputs for every subcommand."""

    material: Material
    geometry: NeedleGeometry
    environment: EnvironmentConditions
    pickup: PickupLoop
    field: tuple[float, float, float] = DEFAULT_FIELD_G
    dynamics: dict = dataclass_field(default_factory=dict)
    mc: McSettings = McSettings()
    output: OutputSettings = OutputSettings()

    def needle(self, constants: PhysicalConstants = CGS) -> NeedleDerived:
        return derive_needle(self.geometry, self.material, constants)

    def kick_process(
        self,
        needle: NeedleDerived,
        seed: int | None = None,
        constants: PhysicalConstants = CGS,
    ) -> KickProcess:
        """Build the configured kick process against this needle."""
        rate = self.mc.rate_per_s
        if self.mc.kick == "fixed-magnitude":
            sampler: FixedKick | CollisionGeometryKick = FixedKick(self.mc.dL_erg_s)
            if rate is None:
                raise ConfigError("fixed-magnitude kick requires rate_per_s")
        else:
            speed = mean_thermal_speed(
                self.environment.temperature, self.environment.gas_mass, constants
            )
            sampler = CollisionGeometryKick(
                gas_mass=self.environment.gas_mass,
                speed=speed,
                length=self.geometry.length,
            )
            if rate is None:
                rate = collision_kick(self.environment, needle, constants).rate
        return KickProcess(
            rate=rate,
            sampler=sampler,
            rng_seed=self.mc.seed if seed is None else seed,
        )


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"section '{where}' must be a JSON object")
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in '{where}'")


def config_from_dict(doc: dict, constants: PhysicalConstants = CGS) -> RunConfig:
    """Build a RunConfig from a parsed JSON document, strictly."""
    _check_keys(doc, _TOP_KEYS, "config")
    for required in ("material", "geometry"):
        if required not in doc:
            raise ConfigError(f"missing required key '{required}'")

    mat_doc = doc["material"]
    if isinstance(mat_doc, str):
        if mat_doc not in MATERIAL_PRESETS:
            raise ConfigError(f"unknown material preset '{mat_doc}'")
        material = MATERIAL_PRESETS[mat_doc]
    else:
        try:
            material = material_from_dict(mat_doc, constants)
        except InvalidParameterError as exc:
            raise ConfigError(str(exc)) from exc

    geo = doc["geometry"]
    _check_keys(geo, _GEOMETRY_KEYS, "geometry")
    for required in ("length_cm", "radius_cm"):
        if required not in geo:
            raise ConfigError(f"missing required key 'geometry.{required}'")
    geometry = NeedleGeometry(length=float(geo["length_cm"]), radius=float(geo["radius_cm"]))

    env_doc = doc.get("environment", {})
    _check_keys(env_doc, _ENVIRONMENT_KEYS, "environment")
    environment = EnvironmentConditions(
        temperature=float(env_doc.get("temperature_K", 0.1)),
        gas_density=float(env_doc.get("gas_density_cm3", 1.0e3)),
        gas_mass=float(env_doc.get("gas_mass_amu", HELIUM_MASS_AMU)) * constants.amu,
        emissivity=float(env_doc.get("emissivity", 1.0)),
        relaxation_rate=float(env_doc.get("relaxation_rate_per_s", 0.0)),
    )

    pick_doc = doc.get("pickup", {})
    _check_keys(pick_doc, _PICKUP_KEYS, "pickup")
    defaults = default_loop(
        geometry.length,
        flux_sensitivity=float(
            pick_doc.get("flux_sensitivity_G_cm2_rtHz", DEFAULT_FLUX_SENSITIVITY)
        ),
    )
    pickup = PickupLoop(
        radius=float(pick_doc.get("radius_cm", defaults.radius)),
        standoff=float(pick_doc.get("standoff_cm", defaults.standoff)),
        flux_sensitivity=defaults.flux_sensitivity,
    )

    field_doc = doc.get("field_G", list(DEFAULT_FIELD_G))
    if not isinstance(field_doc, (list, tuple)) or len(field_doc) != 3:
        raise ConfigError("'field_G' must be a 3-element array")
    field_g = tuple(float(b) for b in field_doc)

    dyn_doc = doc.get("dynamics", {})
    _check_keys(dyn_doc, _DYNAMICS_KEYS, "dynamics")

    mc_doc = doc.get("mc", {})
    _check_keys(mc_doc, _MC_KEYS, "mc")
    mc = McSettings(
        kick=mc_doc.get("kick", "collision-geometry"),
        dL_erg_s=None if mc_doc.get("dL_erg_s") is None else float(mc_doc["dL_erg_s"]),
        rate_per_s=None if mc_doc.get("rate_per_s") is None else float(mc_doc["rate_per_s"]),
        seed=int(mc_doc.get("seed", 0)),
    )

    out_doc = doc.get("output", {})
    _check_keys(out_doc, _OUTPUT_KEYS, "output")
    output = OutputSettings(
        path=out_doc.get("path"), format=out_doc.get("format", "csv")
    )

    return RunConfig(
        material=material,
        geometry=geometry,
        environment=environment,
        pickup=pickup,
        field=field_g,
        dynamics=dict(dyn_doc),
        mc=mc,
        output=output,
    )


def config_to_dict(cfg: RunConfig, constants: PhysicalConstants = CGS) -> dict:
    """Fully resolved JSON document; config_from_dict inverts it exactly."""
    return {
        "material": material_to_dict(cfg.material, constants),
        "geometry": {
            "length_cm": cfg.geometry.length,
            "radius_cm": cfg.geometry.radius,
        },
        "environment": {
            "temperature_K": cfg.environment.temperature,
            "gas_density_cm3": cfg.environment.gas_density,
            "gas_mass_amu": cfg.environment.gas_mass / constants.amu,
            "emissivity": cfg.environment.emissivity,
            "relaxation_rate_per_s": cfg.environment.relaxation_rate,
        },
        "pickup": {
            "radius_cm": cfg.pickup.radius,
            "standoff_cm": cfg.pickup.standoff,
            "flux_sensitivity_G_cm2_rtHz": cfg.pickup.flux_sensitivity,
        },
        "field_G": list(cfg.field),
        "dynamics": dict(cfg.dynamics),
        "mc": {
            "kick": cfg.mc.kick,
            "dL_erg_s": cfg.mc.dL_erg_s,
            "rate_per_s": cfg.mc.rate_per_s,
            "seed": cfg.mc.seed,
        },
        "output": {"path": cfg.output.path, "format": cfg.output.format},
    }


def load_config(path: str | Path, constants: PhysicalConstants = CGS) -> RunConfig:
    """Load and validate a JSON config file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    return config_from_dict(doc, constants)


def preset_config(name: str = "cobalt-reference") -> RunConfig:
    """Named preset configurations."""
    if name != "cobalt-reference":
        raise ConfigError(f"unknown preset '{name}'")
    return config_from_dict(
        {
            "material": "cobalt",
            "geometry": {"length_cm": 1.0e-3, "radius_cm": 1.0e-4},
        }
    )
