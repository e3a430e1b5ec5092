"""Stochastic environmental kicks on the locked gyroscope.

Brute-force oracle for the random-walk noise formulas: each trial draws
a Poisson number of kicks over the duration, every kick rotates the spin
in the precession plane by dL_y/(N hbar) and walks S_z by dL_z.  Kicks
act on the locked effective model as instantaneous phase increments; the
fast integrator is never involved.

Reproducibility: each trial uses its own counter-based stream keyed by
(seed, trial index), so results are bit-identical regardless of
execution order and safe to fan out across processes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CGS, PhysicalConstants
from .errors import InvalidParameterError
from .needle import NeedleDerived

# Largest |S_z| drift fraction of N hbar still certified as a valid run.
SZ_BUDGET_THRESHOLD = 1.0e-2


@dataclass(frozen=True)
class FixedKick:
    """Every kick carries the same angular-momentum magnitude."""

    magnitude: float  # erg s

    def __post_init__(self) -> None:
        if self.magnitude < 0.0:
            raise InvalidParameterError("kick magnitude must be non-negative")

    def sample(self, gen: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        signs_y = gen.integers(0, 2, n) * 2.0 - 1.0
        signs_z = gen.integers(0, 2, n) * 2.0 - 1.0
        return self.magnitude * signs_y, self.magnitude * signs_z


@dataclass(frozen=True)
class CollisionGeometryKick:
    """Gas-molecule impacts sampled over the needle's lateral surface.

    Impact point uniform along the rod, incidence from the cosine-law
    (effusive) hemisphere, full momentum accommodation of the normal
    component m v cos(theta).  The lever arm is the axial offset of the
    impact point, and the kick lands in the transverse plane at a
    uniform azimuth, splitting into the in-plane (phase) and axial
    (S_z) components.
    """

    gas_mass: float  # g
    speed: float     # cm/s, mean thermal speed
    length: float    # cm, needle length

    def __post_init__(self) -> None:
        if self.gas_mass <= 0.0 or self.speed < 0.0 or self.length <= 0.0:
            raise InvalidParameterError("gas_mass and length must be positive, speed non-negative")

    def sample(self, gen: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        offset = gen.uniform(-0.5 * self.length, 0.5 * self.length, n)
        cos_theta = np.sqrt(gen.uniform(0.0, 1.0, n))  # cosine-law flux
        azimuth = gen.uniform(0.0, 2.0 * math.pi, n)
        magnitude = self.gas_mass * self.speed * cos_theta * offset
        return magnitude * np.cos(azimuth), magnitude * np.sin(azimuth)


@dataclass(frozen=True)
class KickProcess:
    """Poisson kick process: rate, magnitude sampler and base seed."""

    rate: float  # 1/s
    sampler: FixedKick | CollisionGeometryKick
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.rate < 0.0:
            raise InvalidParameterError("rate must be non-negative")
        if not 0 <= int(self.rng_seed) < 2**64:
            raise InvalidParameterError("rng_seed must fit in 64 bits")


@dataclass(frozen=True)
class WalkSummary:
    """Statistics of the accumulated phase walk over many trials."""

    n_trials: int
    duration: float        # s
    mean_phi: float        # rad
    std_phi: float         # rad, sample standard deviation
    mean_sz_drift: float   # erg s
    kick_count_mean: float

    def to_dict(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "duration_s": self.duration,
            "mean_phi_rad": self.mean_phi,
            "std_phi_rad": self.std_phi,
            "mean_Sz_drift_erg_s": self.mean_sz_drift,
            "kick_count_mean": self.kick_count_mean,
        }


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial, keyed by (seed, trial)."""
    key = np.array([seed, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _run_trials(
    process: KickProcess,
    needle: NeedleDerived,
    duration: float,
    n_trials: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-trial (final phase, S_z drift, kick count) arrays."""
    if duration <= 0.0:
        raise InvalidParameterError("duration must be positive")
    if n_trials < 1:
        raise InvalidParameterError("n_trials must be at least 1")
    lam = process.rate * duration
    inv_total_spin = 1.0 / needle.total_spin
    phi = np.zeros(n_trials)
    sz = np.zeros(n_trials)
    counts = np.zeros(n_trials, dtype=np.int64)
    for trial in range(n_trials):
        gen = trial_generator(process.rng_seed, trial)
        n_kicks = int(gen.poisson(lam)) if lam > 0.0 else 0
        counts[trial] = n_kicks
        if n_kicks == 0:
            continue
        d_ly, d_lz = process.sampler.sample(gen, n_kicks)
        phi[trial] = d_ly.sum() * inv_total_spin
        sz[trial] = d_lz.sum()
    return phi, sz, counts


def simulate_walk(
    process: KickProcess,
    needle: NeedleDerived,
    duration: float,
    n_trials: int,
) -> WalkSummary:
    """Monte Carlo phase random walk; deterministic for a fixed seed."""
    phi, sz, counts = _run_trials(process, needle, duration, n_trials)
    std = float(np.std(phi, ddof=1)) if n_trials > 1 else 0.0
    return WalkSummary(
        n_trials=n_trials,
        duration=duration,
        mean_phi=float(np.mean(phi)),
        std_phi=std,
        mean_sz_drift=float(np.mean(sz)),
        kick_count_mean=float(np.mean(counts)),
    )


def scaling_exponent(
    process: KickProcess,
    needle: NeedleDerived,
    durations: list[float],
    n_trials: int,
) -> float:
    """Least-squares slope of log(std_phi) versus log(duration).

    Random-walk growth shows up as an exponent of one half, the opposite
    sign of the averaging-limited noise floors.
    """
    durations = sorted(float(t) for t in durations)
    if len(durations) < 4:
        raise InvalidParameterError("need at least 4 duration points")
    if durations[0] <= 0.0:
        raise InvalidParameterError("durations must be positive")
    if durations[-1] / durations[0] < 100.0:
        raise InvalidParameterError("durations must span at least two decades")
    if process.rate == 0.0:
        raise InvalidParameterError("scaling exponent undefined for a zero-rate process")
    stds = [simulate_walk(process, needle, t, n_trials).std_phi for t in durations]
    if any(s <= 0.0 for s in stds):
        raise InvalidParameterError("zero spread encountered; increase trials or durations")
    slope = np.polyfit(np.log(durations), np.log(stds), 1)[0]
    return float(slope)


def sz_budget_check(
    process: KickProcess,
    needle: NeedleDerived,
    duration: float,
    n_trials: int,
) -> float:
    """Worst-case |S_z| drift over trials as a fraction of N hbar.

    The measurement stays valid while the longitudinal walk is far from
    exhausting the spin; compare against SZ_BUDGET_THRESHOLD.
    """
    _, sz, _ = _run_trials(process, needle, duration, n_trials)
    return float(np.max(np.abs(sz)) / needle.total_spin)


def process_descriptor(process: KickProcess) -> dict:
    """JSON-ready description of a kick process."""
    sampler = process.sampler
    if isinstance(sampler, FixedKick):
        kind = {"kind": "fixed-magnitude", "dL_erg_s": sampler.magnitude}
    else:
        kind = {
            "kind": "collision-geometry",
            "gas_mass_g": sampler.gas_mass,
            "speed_cm_s": sampler.speed,
            "length_cm": sampler.length,
        }
    return {"rate_per_s": process.rate, "rng_seed": int(process.rng_seed), "kick_sampler": kind}


def summary_document(process: KickProcess, summary: WalkSummary) -> dict:
    """Summary plus its input descriptor, ready for JSON export."""
    doc = {"process": process_descriptor(process)}
    doc.update(summary.to_dict())
    return doc
