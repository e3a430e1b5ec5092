"""Constants, material/geometry inputs and derived needle quantities."""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from needlemag import (
    CGS,
    COBALT,
    InvalidParameterError,
    Material,
    NeedleGeometry,
    PhysicalConstants,
    SingleDomainWarning,
    critical_thresholds,
    derive_needle,
    load_materials,
    material_from_dict,
    mean_thermal_speed,
)
from needlemag.constants import resistivity_from_gaussian, resistivity_to_gaussian
from needlemag.needle import material_to_dict


def test_constants_are_positive_and_consistent():
    for name in ("hbar", "mu_B", "k_B", "c", "h", "amu", "zeta3"):
        assert getattr(CGS, name) > 0.0
    assert CGS.h == pytest.approx(2.0 * math.pi * CGS.hbar, rel=1e-6)
    # mu_B/hbar is the magnetometer's rad/(s G) conversion
    assert CGS.gyromagnetic_ratio(1.0) == pytest.approx(8.7941e6, rel=1e-4)


def test_inconsistent_constants_rejected():
    with pytest.raises(InvalidParameterError):
        PhysicalConstants(h=1e-26)
    with pytest.raises(InvalidParameterError):
        PhysicalConstants(k_B=-1.0)


def test_resistivity_round_trip_is_bit_stable():
    rho = 1.0e-7
    back = resistivity_from_gaussian(resistivity_to_gaussian(rho))
    assert abs(back - rho) <= 1e-12 * rho


def test_resistivity_conversion_factor():
    # Gaussian resistivity is a time: 1 ohm cm = 1e9/c^2 s
    assert CGS.ohm_cm_to_s == pytest.approx(1.11265e-12, rel=1e-5)


def test_cobalt_defaults():
    assert COBALT.density == 8.86
    assert COBALT.atomic_mass == pytest.approx(58.93 * CGS.amu)
    assert COBALT.g_factor == 1.0
    assert COBALT.gilbert_alpha == 0.01
    assert COBALT.fmr_frequency == 1.0e11
    assert COBALT.resistivity == pytest.approx(1.0e-7 * CGS.ohm_cm_to_s)
    assert COBALT.spins_per_atom == 1.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"density": -1.0},
        {"gilbert_alpha": 0.0},
        {"gilbert_alpha": 1.0},
        {"fmr_frequency": 0.0},
        {"spins_per_atom": 0.0},
        {"g_factor": -2.0},
    ],
)
def test_material_validation(kwargs):
    base = dict(
        name="x",
        density=8.86,
        atomic_mass=58.93 * CGS.amu,
        g_factor=1.0,
        gilbert_alpha=0.01,
        fmr_frequency=1e11,
        resistivity=1e-19,
        spins_per_atom=1.0,
    )
    base.update(kwargs)
    with pytest.raises(InvalidParameterError):
        Material(**base)


def test_material_json_round_trip():
    doc = material_to_dict(COBALT)
    again = material_from_dict(doc)
    assert again == COBALT


def test_material_dict_rejects_unknown_and_missing_keys():
    doc = material_to_dict(COBALT)
    doc["color"] = "grey"
    with pytest.raises(InvalidParameterError, match="color"):
        material_from_dict(doc)
    del doc["color"]
    del doc["density_g_cm3"]
    with pytest.raises(InvalidParameterError, match="density_g_cm3"):
        material_from_dict(doc)


def test_load_materials_table(tmp_path):
    import json

    path = tmp_path / "materials.json"
    path.write_text(json.dumps([material_to_dict(COBALT)]), encoding="utf-8")
    table = load_materials(path)
    assert table["cobalt"] == COBALT


def test_geometry_validation_and_warnings():
    with pytest.raises(InvalidParameterError):
        NeedleGeometry(length=0.0, radius=1e-4)
    with pytest.raises(InvalidParameterError):
        NeedleGeometry(length=1e-3, radius=-1e-4)
    with pytest.warns(SingleDomainWarning, match="disk"):
        NeedleGeometry(length=1e-4, radius=1e-3)
    with pytest.warns(SingleDomainWarning, match="single-domain"):
        NeedleGeometry(length=1e-3, radius=1e-5)  # aspect 100
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        NeedleGeometry(length=1e-3, radius=1e-4)  # aspect 10: quiet


def test_reference_needle_matches_published_count(needle):
    # roughly 3e12 polarized spins for the 10 um x 1 um cobalt needle
    assert needle.spin_count == pytest.approx(3.0e12, rel=0.20)


def test_reference_needle_mass_and_inertia(needle):
    # hand computation: M = rho pi r^2 l, I = M l^2 / 12
    assert needle.mass == pytest.approx(2.78345e-10, rel=1e-4)
    assert needle.moment_of_inertia == pytest.approx(2.31954e-17, rel=1e-4)
    assert needle.volume == pytest.approx(math.pi * 1e-11, rel=1e-12)


def test_omega_star_scales_inverse_length_squared():
    short = derive_needle(NeedleGeometry(length=1e-3, radius=1e-4), COBALT)
    with pytest.warns(SingleDomainWarning):
        long = derive_needle(NeedleGeometry(length=2e-3, radius=1e-4), COBALT)
    assert short.omega_star == pytest.approx(4.0 * long.omega_star, rel=1e-12)


def test_reference_thresholds(needle):
    omega_star, b_star = critical_thresholds(needle)
    assert 80.0 <= omega_star <= 150.0
    assert 0.8e-5 <= b_star <= 1.5e-5
    # frozen values from the hand-computed chain
    assert omega_star == pytest.approx(129.322, rel=1e-4)
    assert b_star == pytest.approx(1.47055e-5, rel=1e-4)


def test_b_star_halves_when_g_doubles(needle):
    doubled = Material(
        name="cobalt-g2",
        density=COBALT.density,
        atomic_mass=COBALT.atomic_mass,
        g_factor=2.0,
        gilbert_alpha=COBALT.gilbert_alpha,
        fmr_frequency=COBALT.fmr_frequency,
        resistivity=COBALT.resistivity,
        spins_per_atom=COBALT.spins_per_atom,
    )
    other = derive_needle(needle.geometry, doubled)
    # same Omega* (independent of g), half the threshold field
    assert other.omega_star == pytest.approx(needle.omega_star, rel=1e-12)
    assert other.b_star == pytest.approx(needle.b_star / 2.0, rel=1e-12)


_materials = st.builds(
    Material,
    name=st.just("m"),
    density=st.floats(1.0, 25.0),
    atomic_mass=st.floats(10.0, 250.0).map(lambda a: a * CGS.amu),
    g_factor=st.floats(0.5, 2.5),
    gilbert_alpha=st.floats(1e-3, 0.1),
    fmr_frequency=st.floats(1e10, 1e12),
    resistivity=st.floats(1e-20, 1e-17),
    spins_per_atom=st.floats(0.5, 3.0),
)
_geometries = st.builds(
    lambda l, aspect: NeedleGeometry(length=l, radius=l / aspect),
    st.floats(1e-5, 1e-1),
    st.floats(5.0, 50.0),
)


@settings(max_examples=60, deadline=None)
@given(geometry=_geometries, material=_materials)
def test_threshold_identities(geometry, material):
    derived = derive_needle(geometry, material)
    assert derived.omega_star * derived.moment_of_inertia == pytest.approx(
        derived.total_spin, rel=1e-12
    )
    assert derived.b_star * material.g_factor * CGS.mu_B == pytest.approx(
        CGS.hbar * derived.omega_star, rel=1e-12
    )
    # Omega* reduces to 12 hbar spins_per_atom / (m_a l^2)
    explicit = 12.0 * CGS.hbar * material.spins_per_atom / (
        material.atomic_mass * geometry.length**2
    )
    assert derived.omega_star == pytest.approx(explicit, rel=1e-3)


def test_omega_star_independent_of_radius():
    values = []
    for radius in (2e-5, 5e-5, 1e-4, 2e-4):
        values.append(derive_needle(NeedleGeometry(length=1e-3, radius=radius), COBALT))
    omegas = [n.omega_star for n in values]
    assert max(omegas) == pytest.approx(min(omegas), rel=1e-12)
    # while N scales linearly with volume
    for a, b in zip(values, values[1:]):
        assert b.spin_count / a.spin_count == pytest.approx(b.volume / a.volume, rel=1e-12)


def test_mean_thermal_speed_helium(env):
    v = mean_thermal_speed(0.1, env.gas_mass)
    assert v == pytest.approx(2299.9, rel=1e-3)
    # consistent with the rounded 3e3 cm/s figure within a factor 1.5
    assert 3.0e3 / 1.5 <= v <= 3.0e3 * 1.5


def test_mean_thermal_speed_limits(env):
    assert mean_thermal_speed(0.0, env.gas_mass) == 0.0
    v1 = mean_thermal_speed(0.1, env.gas_mass)
    v4 = mean_thermal_speed(0.4, env.gas_mass)
    assert v4 == pytest.approx(2.0 * v1, rel=1e-12)
    with pytest.raises(InvalidParameterError):
        mean_thermal_speed(-0.1, env.gas_mass)
    with pytest.raises(InvalidParameterError):
        mean_thermal_speed(0.1, 0.0)


def test_derive_needle_rejects_bad_inputs():
    with pytest.raises(InvalidParameterError):
        NeedleGeometry(length=-1e-3, radius=1e-4)
