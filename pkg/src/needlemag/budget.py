"""Noise budget: per-source field-uncertainty curves over measurement time.

Curve conventions, chosen to reproduce the headline sensitivity plot:

  * detection and quantum are averaging-limited floors and fall as
    t^(-3/2);
  * collisions and blackbody are random-walk sources; their plotted
    curve is the accumulated phase noise expressed as an equivalent
    field through the unit measurement time (1 s), so it grows as
    sqrt(t).  It coincides with the time-averaged field uncertainty at
    t = 1 s; for an averaged estimate at any other time divide by t,
    which `average_uncertainty` and `exotic_coupling_reach` do.
  * the independent-spin standard quantum limit is an overlay for
    comparison and never enters the total;
  * the total is the quadrature sum of the included sources, and the
    dominant label tracks the pointwise maximum.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import CGS, ERG_PER_EV, PhysicalConstants
from .errors import InvalidParameterError
from .needle import NeedleDerived
from .noise import (
    EnvironmentConditions,
    blackbody_kick,
    collision_kick,
    perturbation_phase_noise,
    quantum_limit,
    sql_limit,
)
from .pickup import PickupLoop, detection_limit, readout_resolution

SOURCE_DETECTION = "detection"
SOURCE_QUANTUM = "quantum"
SOURCE_COLLISIONS = "collisions"
SOURCE_BLACKBODY = "blackbody"
OVERLAY_SQL = "sql"

INCLUDED_SOURCES = (SOURCE_DETECTION, SOURCE_QUANTUM, SOURCE_COLLISIONS, SOURCE_BLACKBODY)
WALK_SOURCES = frozenset({SOURCE_COLLISIONS, SOURCE_BLACKBODY})

# Measurement time through which walk-source phase noise is expressed as
# an equivalent field on the plotted curves.
WALK_REFERENCE_TIME = 1.0  # s

_CSV_COLUMNS = {
    SOURCE_DETECTION: "dB_det_G",
    SOURCE_QUANTUM: "dB_Q_G",
    SOURCE_COLLISIONS: "dB_col_G",
    SOURCE_BLACKBODY: "dB_BB_G",
    OVERLAY_SQL: "dB_SQL_G",
}


@dataclass(frozen=True)
class NoiseBudget:
    """Per-source field-uncertainty curves on a log-spaced time grid."""

    time_grid: np.ndarray
    per_source: dict[str, np.ndarray]  # included sources only
    overlays: dict[str, np.ndarray]
    total: np.ndarray
    dominant: tuple[str, ...]
    g_factor: float

    def source(self, label: str) -> np.ndarray:
        if label in self.per_source:
            return self.per_source[label]
        if label in self.overlays:
            return self.overlays[label]
        raise InvalidParameterError(f"unknown noise source '{label}'")


def assemble_budget(
    needle: NeedleDerived,
    env: EnvironmentConditions,
    pickup: PickupLoop,
    t_min: float = 1.0e-2,
    t_max: float = 1.0e3,
    points: int = 200,
    constants: PhysicalConstants = CGS,
) -> NoiseBudget:
    """Evaluate every noise source on a log-spaced grid of times."""
    if not 0.0 < t_min < t_max:
        raise InvalidParameterError("need 0 < t_min < t_max")
    if points < 2:
        raise InvalidParameterError("need at least 2 grid points")
    grid = np.geomspace(t_min, t_max, points)
    g = needle.material.g_factor
    hbar_over_gmu = constants.hbar / (g * constants.mu_B)

    delta_phi = readout_resolution(needle.magnetic_moment, pickup)
    det = np.array([detection_limit(delta_phi, g, t, constants) for t in grid])
    quantum = np.array([quantum_limit(needle, env.temperature, t, constants) for t in grid])

    col_kick = collision_kick(env, needle, constants)
    bb_kick = blackbody_kick(env, needle, constants)
    col = np.array(
        [
            hbar_over_gmu
            * perturbation_phase_noise(col_kick, needle.spin_count, t, constants)
            / WALK_REFERENCE_TIME
            for t in grid
        ]
    )
    bb = np.array(
        [
            hbar_over_gmu
            * perturbation_phase_noise(bb_kick, needle.spin_count, t, constants)
            / WALK_REFERENCE_TIME
            for t in grid
        ]
    )
    sql = np.array(
        [sql_limit(needle.spin_count, t, env.relaxation_rate, g, constants) for t in grid]
    )

    per_source = {
        SOURCE_DETECTION: det,
        SOURCE_QUANTUM: quantum,
        SOURCE_COLLISIONS: col,
        SOURCE_BLACKBODY: bb,
    }
    stack = np.vstack([per_source[label] for label in INCLUDED_SOURCES])
    total = np.sqrt(np.sum(stack**2, axis=0))
    dominant = tuple(INCLUDED_SOURCES[i] for i in np.argmax(stack, axis=0))
    return NoiseBudget(
        time_grid=grid,
        per_source=per_source,
        overlays={OVERLAY_SQL: sql},
        total=total,
        dominant=dominant,
        g_factor=g,
    )


def crossover_time(budget: NoiseBudget, a: str, b: str) -> float | None:
    """Time at which source `a`'s curve crosses source `b`'s.

    Log-linear interpolation between the bracketing grid points; None if
    the curves do not cross inside the grid.
    """
    if a == b:
        raise InvalidParameterError("crossover of a source with itself is undefined")
    ca = budget.source(a)
    cb = budget.source(b)
    diff = ca - cb
    signs = np.sign(diff)
    for i in range(len(diff) - 1):
        if signs[i] == 0.0:
            return float(budget.time_grid[i])
        if signs[i] * signs[i + 1] < 0.0:
            t0, t1 = budget.time_grid[i], budget.time_grid[i + 1]
            if min(ca[i], ca[i + 1], cb[i], cb[i + 1]) > 0.0:
                d0 = math.log(ca[i]) - math.log(cb[i])
                d1 = math.log(ca[i + 1]) - math.log(cb[i + 1])
            else:
                d0, d1 = diff[i], diff[i + 1]
            frac = d0 / (d0 - d1)
            return float(math.exp(math.log(t0) + frac * (math.log(t1) - math.log(t0))))
    if signs[-1] == 0.0:
        return float(budget.time_grid[-1])
    return None


def average_uncertainty(budget: NoiseBudget, t: float) -> float:
    """Quadrature field uncertainty of a t-averaged estimate, G.

    Walk-source curves are converted back from the plotted convention by
    the factor WALK_REFERENCE_TIME/t before combining.
    """
    grid = budget.time_grid
    if not grid[0] <= t <= grid[-1]:
        raise InvalidParameterError("time outside the budget grid")
    log_t = math.log(t)
    total_sq = 0.0
    for label, curve in budget.per_source.items():
        # curves are pure power laws: zero anywhere means zero everywhere
        if curve[0] == 0.0:
            continue
        value = math.exp(float(np.interp(log_t, np.log(grid), np.log(curve))))
        if label in WALK_SOURCES:
            value *= WALK_REFERENCE_TIME / t
        total_sq += value * value
    return math.sqrt(total_sq)


def required_vacuum(
    needle: NeedleDerived,
    env: EnvironmentConditions,
    pickup: PickupLoop,
    t_ref: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Gas density at which collision noise reaches the detection floor.

    Solves collision(n, t_ref) = detection(t_ref) in closed form; the
    collision curve scales as sqrt(n), so n is proportional to the
    squared detection limit.  env supplies the gas species and
    temperature; its density is ignored.
    """
    if t_ref <= 0.0:
        raise InvalidParameterError("t_ref must be positive")
    g = needle.material.g_factor
    delta_phi = readout_resolution(needle.magnetic_moment, pickup)
    det = detection_limit(delta_phi, g, t_ref, constants)
    unit_env = EnvironmentConditions(
        temperature=env.temperature,
        gas_density=1.0,
        gas_mass=env.gas_mass,
        emissivity=env.emissivity,
        relaxation_rate=env.relaxation_rate,
    )
    kick = collision_kick(unit_env, needle, constants)
    col_unit = (
        constants.hbar
        / (g * constants.mu_B)
        * perturbation_phase_noise(kick, needle.spin_count, t_ref, constants)
        / WALK_REFERENCE_TIME
    )
    return (det / col_unit) ** 2


def exotic_coupling_reach(budget: NoiseBudget, t: float, constants: PhysicalConstants = CGS) -> float:
    """Energy scale of detectable exotic spin couplings at time t, eV.

    Converts the t-averaged total field uncertainty to an energy through
    the needle's moment per spin, g mu_B dB.
    """
    db = average_uncertainty(budget, t)
    return budget.g_factor * constants.mu_B * db / ERG_PER_EV


def budget_rows(budget: NoiseBudget):
    """Iterate CSV/JSON rows in the documented column order."""
    labels = list(INCLUDED_SOURCES) + [OVERLAY_SQL]
    for i, t in enumerate(budget.time_grid):
        row = {"t_s": float(t)}
        for label in labels:
            row[_CSV_COLUMNS[label]] = float(budget.source(label)[i])
        row["dB_total_G"] = float(budget.total[i])
        row["dominant"] = budget.dominant[i]
        yield row


def budget_csv_text(budget: NoiseBudget) -> str:
    """Budget as CSV text with 6-significant-digit scientific values."""
    header = ["t_s", "dB_det_G", "dB_Q_G", "dB_col_G", "dB_BB_G", "dB_SQL_G", "dB_total_G", "dominant"]
    lines = [",".join(header)]
    for row in budget_rows(budget):
        lines.append(
            ",".join(
                [f"{row[col]:.5e}" for col in header[:-1]] + [row["dominant"]]
            )
        )
    return "\n".join(lines) + "\n"


def budget_json_text(budget: NoiseBudget) -> str:
    """JSON twin of the CSV export, column-oriented, identical content."""
    doc: dict = {
        "t_s": [float(t) for t in budget.time_grid],
        "dominant": list(budget.dominant),
    }
    for label in list(INCLUDED_SOURCES) + [OVERLAY_SQL]:
        doc[_CSV_COLUMNS[label]] = [float(v) for v in budget.source(label)]
    doc["dB_total_G"] = [float(v) for v in budget.total]
    return json.dumps(doc, indent=2) + "\n"


def budget_to_csv(budget: NoiseBudget, path: str | Path) -> None:
    Path(path).write_text(budget_csv_text(budget), encoding="utf-8")


def budget_to_json(budget: NoiseBudget, path: str | Path) -> None:
    Path(path).write_text(budget_json_text(budget), encoding="utf-8")
