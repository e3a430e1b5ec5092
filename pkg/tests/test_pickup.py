"""Pickup-loop flux capture and the detection-limited field floor."""
import math

import numpy as np
import pytest

from needlemag import (
    CGS,
    MAGIC_ANGLE,
    InvalidParameterError,
    PickupLoop,
    angle_resolution,
    default_loop,
    detection_limit,
    dipole_flux,
    readout_resolution,
)


def test_magic_angle_value():
    assert math.degrees(MAGIC_ANGLE) == pytest.approx(54.7356, abs=1e-3)


def test_default_loop_geometry(needle, loop):
    length = needle.geometry.length
    assert loop.radius == pytest.approx(length * math.sin(MAGIC_ANGLE), rel=1e-12)
    assert loop.standoff == pytest.approx(length * math.cos(MAGIC_ANGLE), rel=1e-12)
    # rim sits one needle length from the dipole
    assert math.hypot(loop.radius, loop.standoff) == pytest.approx(length, rel=1e-12)


def test_reference_flux_amplitude(needle, loop):
    flux = dipole_flux(needle.magnetic_moment, loop)
    # magic-angle rim at distance l: Phi = 4 pi m / (3 l), and the
    # published order of magnitude is 1e-4 G cm^2
    expected = 4.0 * math.pi * needle.magnetic_moment / (3.0 * needle.geometry.length)
    assert flux == pytest.approx(expected, rel=1e-12)
    assert 1e-4 / 3.0 <= flux <= 1e-4 * 3.0
    assert flux == pytest.approx(1.10498e-4, rel=1e-4)


def test_flux_zero_moment(loop):
    assert dipole_flux(0.0, loop) == 0.0
    with pytest.raises(InvalidParameterError):
        dipole_flux(-1.0, loop)


def test_flux_far_field_scaling():
    # with a << d the flux falls as 1/d^3
    near = PickupLoop(radius=1e-6, standoff=1.0)
    far = PickupLoop(radius=1e-6, standoff=10.0)
    ratio = dipole_flux(1.0, near) / dipole_flux(1.0, far)
    assert ratio == pytest.approx(1e3, rel=1e-3)


def test_flux_linear_in_moment(needle, loop):
    base = dipole_flux(needle.magnetic_moment, loop)
    assert dipole_flux(3.0 * needle.magnetic_moment, loop) == pytest.approx(
        3.0 * base, rel=1e-12
    )


def test_magic_angle_radius_optimizes_flux(needle, loop):
    # at fixed plane distance, the default radius is the flux optimum
    length = needle.geometry.length
    grid = np.linspace(3.0 * length / 200.0, 3.0 * length, 200)
    fluxes = [
        dipole_flux(needle.magnetic_moment, PickupLoop(a, loop.standoff, loop.flux_sensitivity))
        for a in grid
    ]
    best = max(fluxes)
    assert dipole_flux(needle.magnetic_moment, loop) >= 0.95 * best


def test_angle_resolution_values(loop):
    assert angle_resolution(loop, 1e-4) == pytest.approx(1e-9, rel=1e-12)
    halved = PickupLoop(loop.radius, loop.standoff, loop.flux_sensitivity / 2.0)
    assert angle_resolution(halved, 1e-4) == pytest.approx(0.5e-9, rel=1e-12)
    with pytest.raises(InvalidParameterError):
        angle_resolution(loop, 0.0)


def test_reference_angle_resolution_chain(needle, loop):
    delta_phi = readout_resolution(needle.magnetic_moment, loop)
    assert 1e-9 / 3.0 <= delta_phi <= 1e-9 * 3.0
    assert delta_phi == pytest.approx(9.0499e-10, rel=1e-4)


def test_detection_limit_reference():
    db = detection_limit(1e-9, 1.0, 1.0)
    assert db == pytest.approx(CGS.hbar / CGS.mu_B * 1e-9, rel=1e-12)
    assert 0.5e-16 <= db <= 2e-16
    assert db == pytest.approx(1.13712e-16, rel=1e-4)


def test_detection_limit_time_scaling():
    assert detection_limit(1e-9, 1.0, 100.0) == pytest.approx(
        detection_limit(1e-9, 1.0, 1.0) / 1e3, rel=1e-12
    )
    # pure power law: dB * t^(3/2) constant across any grid
    values = [detection_limit(1e-9, 1.0, t) * t**1.5 for t in np.geomspace(1e-3, 1e4, 17)]
    assert max(values) == pytest.approx(min(values), rel=1e-12)
    with pytest.raises(InvalidParameterError):
        detection_limit(1e-9, 1.0, 0.0)


def test_detection_limit_full_chain(needle, loop):
    delta_phi = readout_resolution(needle.magnetic_moment, loop)
    db = detection_limit(delta_phi, needle.material.g_factor, 1.0)
    assert 1e-16 / 3.0 <= db <= 1e-16 * 3.0
    assert db == pytest.approx(1.02909e-16, rel=1e-4)


def test_pickup_loop_validation():
    with pytest.raises(InvalidParameterError):
        PickupLoop(radius=0.0, standoff=1e-3)
    with pytest.raises(InvalidParameterError):
        PickupLoop(radius=1e-3, standoff=-1e-3)
    with pytest.raises(InvalidParameterError):
        PickupLoop(radius=1e-3, standoff=1e-3, flux_sensitivity=0.0)
