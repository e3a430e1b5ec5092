"""Coupled macrospin + rigid-rotor dynamics of the needle.

State: collective spin S (erg s), orbital angular momentum L (erg s) and
the lattice axis a-hat.  Internal torques (anisotropy precession and
Gilbert damping of the spin relative to the lattice) exchange angular
momentum between S and L and conserve J = S + L; only the external field
torques S directly.

Two time scales differ by ~10 orders of magnitude: the internal
precession omega0 ~ 1e11 rad/s and the Larmor precession ~ 1-100 rad/s.
The fixed-step integrator here resolves the fast scale and is meant for
transients (locking, tipping onset) of at most ~1e6 steps; long-time
behavior is the locked effective model `effective_precession` plus the
stochastic kick modules.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from numba import njit

from .constants import CGS, PhysicalConstants
from .errors import InvalidParameterError
from .needle import NeedleDerived

DEFAULT_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class DynamicsConfig:
    """Integration parameters; build with `config_for_needle` for defaults.

    anisotropy_field is the effective internal field H_eff chosen so that
    g mu_B H_eff / hbar equals the ferromagnetic-resonance frequency.
    """

    field: tuple[float, float, float]  # G, lab frame
    anisotropy_field: float            # G
    damping: float                     # Gilbert alpha
    fast_dt: float                     # s, fixed integrator step
    lock_tolerance: float = 1.0e-4     # rad, spin-axis angle counted as locked
    max_duration: float = 0.0          # s, fast-integrator cap (0: set from steps)
    sample_every: int = 100            # steps between recorded samples

    def __post_init__(self) -> None:
        if self.fast_dt <= 0.0:
            raise InvalidParameterError("fast_dt must be positive")
        if not 0.0 < self.lock_tolerance <= 1.0e-3:
            raise InvalidParameterError("lock_tolerance must lie in (0, 1e-3]")
        if self.damping < 0.0:
            raise InvalidParameterError("damping must be non-negative")
        if self.anisotropy_field <= 0.0:
            raise InvalidParameterError("anisotropy_field must be positive")
        if self.sample_every < 1:
            raise InvalidParameterError("sample_every must be at least 1")
        if self.max_duration == 0.0:
            object.__setattr__(self, "max_duration", DEFAULT_MAX_STEPS * self.fast_dt)


def config_for_needle(
    needle: NeedleDerived,
    field: tuple[float, float, float] = (0.0, 0.0, 0.0),
    constants: PhysicalConstants = CGS,
    **overrides,
) -> DynamicsConfig:
    """DynamicsConfig with H_eff and the step size derived from the material.

    The step defaults to 0.01/omega0, the stability/accuracy sweet spot
    for the classic fourth-order scheme on the fast precession.
    """
    gamma = constants.gyromagnetic_ratio(needle.material.g_factor)
    heff = overrides.pop("anisotropy_field", needle.material.fmr_frequency / gamma)
    omega0 = gamma * heff
    fast_dt = overrides.pop("fast_dt", 0.01 / omega0)
    if fast_dt > 0.01 / omega0 * (1.0 + 1e-12):
        raise InvalidParameterError("fast_dt must not exceed 0.01/omega0")
    damping = overrides.pop("damping", needle.material.gilbert_alpha)
    return DynamicsConfig(
        field=tuple(float(b) for b in field),
        anisotropy_field=heff,
        damping=damping,
        fast_dt=fast_dt,
        **overrides,
    )


@dataclass(frozen=True)
class DynamicState:
    """Instantaneous spin, orbital angular momentum and lattice axis."""

    spin: np.ndarray     # (3,) erg s
    orbital: np.ndarray  # (3,) erg s
    axis: np.ndarray     # (3,) unit vector
    time: float = 0.0

    def __post_init__(self) -> None:
        for name in ("spin", "orbital", "axis"):
            vec = np.asarray(getattr(self, name), dtype=float)
            if vec.shape != (3,):
                raise InvalidParameterError(f"{name} must be a 3-vector")
            object.__setattr__(self, name, vec)
        norm = float(np.linalg.norm(self.axis))
        if not math.isclose(norm, 1.0, rel_tol=1e-6):
            raise InvalidParameterError("axis must be a unit vector")
        object.__setattr__(self, "axis", self.axis / norm)


def locked_state(
    needle: NeedleDerived,
    direction: tuple[float, float, float] = (1.0, 0.0, 0.0),
    field: tuple[float, float, float] = (0.0, 0.0, 0.0),
    constants: PhysicalConstants = CGS,
) -> DynamicState:
    """Steady gyroscopic state: S parallel to a-hat, L = I * Omega.

    With the spin along `direction` and the Larmor angular velocity set
    by `field`, this is an exact stationary solution of the coupled
    equations (the internal torques vanish identically for S || a-hat).
    """
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    gamma = constants.gyromagnetic_ratio(needle.material.g_factor)
    omega = gamma * np.asarray(field, dtype=float)
    return DynamicState(
        spin=needle.total_spin * direction,
        orbital=needle.moment_of_inertia * omega,
        axis=direction,
    )


def misaligned_state(
    needle: NeedleDerived,
    angle: float,
    axis_direction: tuple[float, float, float] = (1.0, 0.0, 0.0),
) -> DynamicState:
    """Needle at rest with the spin tilted by `angle` from the lattice axis."""
    a_hat = np.asarray(axis_direction, dtype=float)
    a_hat = a_hat / np.linalg.norm(a_hat)
    # any unit vector orthogonal to a_hat
    helper = np.array([0.0, 0.0, 1.0]) if abs(a_hat[2]) < 0.9 else np.array([0.0, 1.0, 0.0])
    perp = np.cross(a_hat, helper)
    perp /= np.linalg.norm(perp)
    s_hat = math.cos(angle) * a_hat + math.sin(angle) * perp
    return DynamicState(
        spin=needle.total_spin * s_hat,
        orbital=np.zeros(3),
        axis=a_hat,
    )


def llg_rotor_derivative(
    state: DynamicState,
    cfg: DynamicsConfig,
    needle: NeedleDerived,
    constants: PhysicalConstants = CGS,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Time derivatives (dS/dt, dL/dt, da/dt) of the coupled system.

    dS/dt = -gamma S x (B + H_anis) - (alpha gamma/|S|) S x (S x H_anis)
    with H_anis = H_eff (s-hat . a-hat) a-hat.  The anisotropy and
    damping torques are internal and enter dL/dt with opposite sign; the
    external-field torque appears only in dS/dt.  Damping acts on the
    spin's motion relative to the lattice, so a locked co-rotating state
    feels none of it.
    """
    gamma = constants.gyromagnetic_ratio(needle.material.g_factor)
    spin, orbital, axis = state.spin, state.orbital, state.axis
    s_norm = needle.total_spin
    cos_sa = float(spin @ axis) / s_norm
    h_anis = cfg.anisotropy_field * cos_sa * axis
    torque_ext = -gamma * np.cross(spin, np.asarray(cfg.field, dtype=float))
    torque_int = -gamma * np.cross(spin, h_anis)
    torque_damp = -(cfg.damping * gamma / s_norm) * np.cross(spin, np.cross(spin, h_anis))
    d_spin = torque_ext + torque_int + torque_damp
    d_orbital = -(torque_int + torque_damp)
    d_axis = np.cross(orbital / needle.moment_of_inertia, axis)
    return d_spin, d_orbital, d_axis


@njit(cache=True)
def _deriv(y, k, bx, by, bz, heff, alpha, gamma, inv_inertia, inv_snorm):
    sx, sy, sz = y[0], y[1], y[2]
    lx, ly, lz = y[3], y[4], y[5]
    ax, ay, az = y[6], y[7], y[8]
    # anisotropy field H_eff (s.a) a
    ca = (sx * ax + sy * ay + sz * az) * inv_snorm
    hx = heff * ca * ax
    hy = heff * ca * ay
    hz = heff * ca * az
    # internal precession torque -gamma S x H_anis
    pix = -gamma * (sy * hz - sz * hy)
    piy = -gamma * (sz * hx - sx * hz)
    piz = -gamma * (sx * hy - sy * hx)
    # damping torque -(alpha gamma/|S|) S x (S x H_anis)
    cx = sy * hz - sz * hy
    cy = sz * hx - sx * hz
    cz = sx * hy - sy * hx
    dx = sy * cz - sz * cy
    dy = sz * cx - sx * cz
    dz = sx * cy - sy * cx
    f = alpha * gamma * inv_snorm
    tdx = -f * dx
    tdy = -f * dy
    tdz = -f * dz
    # external torque -gamma S x B
    tex = -gamma * (sy * bz - sz * by)
    tey = -gamma * (sz * bx - sx * bz)
    tez = -gamma * (sx * by - sy * bx)
    k[0] = tex + pix + tdx
    k[1] = tey + piy + tdy
    k[2] = tez + piz + tdz
    k[3] = -(pix + tdx)
    k[4] = -(piy + tdy)
    k[5] = -(piz + tdz)
    # rigid rotor: da/dt = (L/I) x a
    wx = lx * inv_inertia
    wy = ly * inv_inertia
    wz = lz * inv_inertia
    k[6] = wy * az - wz * ay
    k[7] = wz * ax - wx * az
    k[8] = wx * ay - wy * ax


@njit(cache=True)
def _integrate(y, n_steps, dt, bx, by, bz, heff, alpha, gamma, inv_inertia, s_norm, sample_every, out):
    inv_snorm = 1.0 / s_norm
    k1 = np.empty(9)
    k2 = np.empty(9)
    k3 = np.empty(9)
    k4 = np.empty(9)
    tmp = np.empty(9)
    out[0] = y
    row = 1
    for step in range(1, n_steps + 1):
        _deriv(y, k1, bx, by, bz, heff, alpha, gamma, inv_inertia, inv_snorm)
        for i in range(9):
            tmp[i] = y[i] + 0.5 * dt * k1[i]
        _deriv(tmp, k2, bx, by, bz, heff, alpha, gamma, inv_inertia, inv_snorm)
        for i in range(9):
            tmp[i] = y[i] + 0.5 * dt * k2[i]
        _deriv(tmp, k3, bx, by, bz, heff, alpha, gamma, inv_inertia, inv_snorm)
        for i in range(9):
            tmp[i] = y[i] + dt * k3[i]
        _deriv(tmp, k4, bx, by, bz, heff, alpha, gamma, inv_inertia, inv_snorm)
        for i in range(9):
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        # renormalize |S| to N hbar; push the (numerical) difference into
        # L so the renormalization never touches J = S + L
        sn = math.sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])
        scale = s_norm / sn
        for i in range(3):
            y[3 + i] += y[i] * (1.0 - scale)
            y[i] *= scale
        # renormalize the lattice axis
        an = math.sqrt(y[6] * y[6] + y[7] * y[7] + y[8] * y[8])
        for i in range(6, 9):
            y[i] /= an
        if step % sample_every == 0 or step == n_steps:
            out[row] = y
            row += 1
    return row


@dataclass(frozen=True)
class Trajectory:
    """Sampled states of one integration run.

    `truncated` is set when the requested duration exceeded the fast
    integrator's step cap; the run then covers only the cap.
    """

    times: np.ndarray    # (n,)
    spin: np.ndarray     # (n, 3)
    orbital: np.ndarray  # (n, 3)
    axis: np.ndarray     # (n, 3)
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.times)

    def state(self, index: int) -> DynamicState:
        return DynamicState(
            spin=self.spin[index],
            orbital=self.orbital[index],
            axis=self.axis[index],
            time=float(self.times[index]),
        )

    def to_csv(self, path: str | Path) -> None:
        data = np.column_stack([self.times, self.spin, self.orbital, self.axis])
        np.savetxt(
            path,
            data,
            delimiter=",",
            header="t_s,Sx,Sy,Sz,Lx,Ly,Lz,ax,ay,az",
            comments="",
            fmt="%.9e",
        )


def integrate_full(
    state0: DynamicState,
    cfg: DynamicsConfig,
    needle: NeedleDerived,
    duration: float,
    constants: PhysicalConstants = CGS,
) -> Trajectory:
    """Integrate the coupled fast dynamics for `duration` seconds.

    Classic fixed-step fourth-order scheme with per-step renormalization
    of |S| and |a-hat|.  Spin magnitude is conserved to better than 1e-6
    relative and, at zero external field, |S + L| to better than 1e-8
    relative.  If the requested duration exceeds cfg.max_duration the
    run is truncated there and flagged, never silently shortened.
    """
    if duration < 0.0:
        raise InvalidParameterError("duration must be non-negative")
    gamma = constants.gyromagnetic_ratio(needle.material.g_factor)
    omega0 = gamma * cfg.anisotropy_field
    if cfg.fast_dt > 0.01 / omega0 * (1.0 + 1e-12):
        raise InvalidParameterError("fast_dt must not exceed 0.01/omega0")
    spin_norm = float(np.linalg.norm(state0.spin))
    if abs(spin_norm - needle.total_spin) > 1e-3 * needle.total_spin:
        raise InvalidParameterError("initial |S| must equal the needle's N hbar")

    n_steps = int(round(duration / cfg.fast_dt))
    cap = int(round(cfg.max_duration / cfg.fast_dt))
    truncated = n_steps > cap
    if truncated:
        n_steps = cap

    y = np.empty(9)
    y[0:3] = state0.spin * (needle.total_spin / spin_norm)
    y[3:6] = state0.orbital
    y[6:9] = state0.axis
    n_rows = 1 + n_steps // cfg.sample_every + (1 if n_steps % cfg.sample_every else 0)
    out = np.empty((n_rows, 9))
    rows = _integrate(
        y,
        n_steps,
        cfg.fast_dt,
        cfg.field[0],
        cfg.field[1],
        cfg.field[2],
        cfg.anisotropy_field,
        cfg.damping,
        gamma,
        1.0 / needle.moment_of_inertia,
        needle.total_spin,
        cfg.sample_every,
        out,
    )
    out = out[:rows]
    step_index = np.arange(0, n_steps + 1, cfg.sample_every)
    if n_steps % cfg.sample_every:
        step_index = np.append(step_index, n_steps)
    times = state0.time + step_index[:rows] * cfg.fast_dt
    return Trajectory(
        times=times,
        spin=out[:, 0:3].copy(),
        orbital=out[:, 3:6].copy(),
        axis=out[:, 6:9].copy(),
        truncated=truncated,
    )


def effective_precession(
    phi0: float,
    field: float,
    g_factor: float,
    t: float,
    constants: PhysicalConstants = CGS,
) -> float:
    """Locked-gyroscope precession angle phi0 + g mu_B B t / hbar, rad."""
    return phi0 + constants.gyromagnetic_ratio(g_factor) * field * t


class Regime(enum.Enum):
    """Operating regime of the needle in a given field."""

    PRECESSING = "Precessing"
    MARGINAL = "Marginal"
    TIPPING = "Tipping"


def classify_regime(field, needle: NeedleDerived, margin: float = 0.1) -> Regime:
    """Classify the field against the gyroscopic threshold b_star.

    Precessing requires |B| << b_star and tipping |B| >> b_star; the
    band between margin*b_star and b_star/margin is reported Marginal
    because the underlying conditions are asymptotic.
    """
    if not 0.0 < margin < 1.0:
        raise InvalidParameterError("margin must lie in (0, 1)")
    magnitude = float(np.linalg.norm(np.atleast_1d(np.asarray(field, dtype=float))))
    if magnitude < margin * needle.b_star:
        return Regime.PRECESSING
    if magnitude > needle.b_star / margin:
        return Regime.TIPPING
    return Regime.MARGINAL


def spin_axis_angle(trajectory: Trajectory) -> np.ndarray:
    """Angle between S and a-hat at each sample, rad."""
    s_hat = trajectory.spin / np.linalg.norm(trajectory.spin, axis=1, keepdims=True)
    cos = np.clip(np.sum(s_hat * trajectory.axis, axis=1), -1.0, 1.0)
    return np.arccos(cos)


def fit_locking_rate(trajectory: Trajectory) -> float:
    """Exponential decay rate of the spin-axis misalignment, 1/s.

    Fits log(angle) over the stretch where the angle has decayed to
    between 80% and 2% of its initial value.
    """
    angle = spin_axis_angle(trajectory)
    theta0 = angle[0]
    if theta0 <= 0.0:
        raise InvalidParameterError("trajectory starts already locked")
    mask = (angle < 0.8 * theta0) & (angle > 0.02 * theta0)
    if mask.sum() < 4:
        raise InvalidParameterError("trajectory too short to fit a locking rate")
    slope = np.polyfit(trajectory.times[mask], np.log(angle[mask]), 1)[0]
    return -float(slope)


def fit_precession_frequency(trajectory: Trajectory) -> float:
    """Angular frequency of the spin's rotation about z, rad/s.

    Least-squares slope of the unwrapped azimuth of S; use on locked
    trajectories where the azimuth advances linearly.
    """
    phi = np.unwrap(np.arctan2(trajectory.spin[:, 1], trajectory.spin[:, 0]))
    if len(phi) < 2:
        raise InvalidParameterError("trajectory too short to fit a frequency")
    return float(np.polyfit(trajectory.times, phi, 1)[0])


def total_energy(
    trajectory: Trajectory,
    cfg: DynamicsConfig,
    needle: NeedleDerived,
    constants: PhysicalConstants = CGS,
) -> np.ndarray:
    """Rotational + anisotropy + Zeeman energy at each sample, erg.

    Conserved when damping and the external field are both zero; used
    as an integrator diagnostic.
    """
    gamma = constants.gyromagnetic_ratio(needle.material.g_factor)
    rot = np.sum(trajectory.orbital**2, axis=1) / (2.0 * needle.moment_of_inertia)
    cos_sa = np.sum(trajectory.spin * trajectory.axis, axis=1) / needle.total_spin
    anis = -0.5 * gamma * needle.total_spin * cfg.anisotropy_field * cos_sa**2
    zeeman = -gamma * trajectory.spin @ np.asarray(cfg.field, dtype=float)
    return rot + anis + zeeman
