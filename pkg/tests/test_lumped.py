import math
import warnings
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memsres.lumped import (
    DeviceOffError,
    DriveCondition,
    GapExceededError,
    LumpedElectrical,
    LumpedMechanical,
    SmallSignalWarning,
    cap_derivative,
    damping_factor,
    effective_mass,
    effective_mass_quadrature,
    effective_stiffness,
    electrical_model,
    electrostatic_force,
    extract_rlc,
    motional_capacitance_with_softening,
    motional_resistance_formula,
    output_current,
    peak_displacement,
    static_capacitance,
    transduction_factor,
)
from memsres.materials import builtin
from memsres.modal import DiskGeometry, disk_radial_f0

W_PUB = 2 * math.pi * 152.4e6
M_PUB = 3.83e-12


@pytest.fixture
def mech_pub():
    return LumpedMechanical.from_mode(W_PUB, M_PUB, 12289)


def test_static_capacitance(disk18):
    c0 = static_capacitance(disk18)
    assert c0 == pytest.approx(12.09e-15, abs=0.01e-15)
    assert static_capacitance(disk18, math.pi / 2) == pytest.approx(c0 / 2)
    assert static_capacitance(replace(disk18, gap=174e-9)) == pytest.approx(c0 / 2)


def test_cap_derivative(disk18):
    d = cap_derivative(disk18)
    assert d == pytest.approx(1.390e-7, abs=1e-10)
    assert cap_derivative(disk18, disk18.gap / 2) == pytest.approx(4 * d)
    with pytest.raises(GapExceededError):
        cap_derivative(disk18, disk18.gap)


def test_electrostatic_force(disk18):
    f0, fi = electrostatic_force(disk18, DriveCondition(6.0))
    assert fi == pytest.approx(8.34e-7, rel=0.01)
    assert f0 == pytest.approx(2.50e-6, rel=0.01)
    assert electrostatic_force(disk18, DriveCondition(0.0)) == (0.0, 0.0)
    assert transduction_factor(disk18, DriveCondition(6.0)) == pytest.approx(fi, rel=1e-15)


def test_transduction_factor(disk18):
    n = transduction_factor(disk18, DriveCondition(6.0))
    assert n == pytest.approx(8.34e-7, rel=0.01)
    assert transduction_factor(disk18, DriveCondition(12.0)) == pytest.approx(2 * n)


def test_drive_condition():
    with pytest.raises(ValueError):
        DriveCondition(-1.0)
    with pytest.warns(SmallSignalWarning):
        DriveCondition(6.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        DriveCondition(6.0, 0.1)


def test_effective_mass(poly, disk18):
    mode = disk_radial_f0(poly, disk18)
    m = effective_mass(poly, disk18, mode)
    assert m == pytest.approx(3.75e-12, rel=0.02)
    assert m == pytest.approx(M_PUB, rel=0.05)
    assert effective_mass(poly, replace(disk18, thickness=4.2e-6), mode) == pytest.approx(2 * m)
    assert effective_mass(replace(poly, density=4600.0), disk18, mode) == pytest.approx(2 * m)


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_effective_mass_quadrature(poly, disk18, i):
    mode = disk_radial_f0(poly, disk18, i)
    closed = effective_mass(poly, disk18, mode)
    assert effective_mass_quadrature(poly, disk18, mode) == pytest.approx(closed, rel=1e-6)


def test_stiffness_and_damping():
    assert effective_stiffness(W_PUB, M_PUB) == pytest.approx(3.51e6, rel=0.01)
    assert effective_stiffness(W_PUB, M_PUB) == pytest.approx(3.52e6, rel=0.01)
    assert effective_stiffness(W_PUB, 2 * M_PUB) == pytest.approx(2 * effective_stiffness(W_PUB, M_PUB))
    assert effective_stiffness(1.0, 1.0) == 1.0
    b = damping_factor(W_PUB, M_PUB, 12289)
    assert b == pytest.approx(2.98e-7, rel=0.02)
    assert b == pytest.approx(3.01e-7, rel=0.02)
    k = effective_stiffness(W_PUB, M_PUB)
    assert b == pytest.approx(math.sqrt(k * M_PUB) / 12289, rel=1e-12)
    assert damping_factor(W_PUB, M_PUB, 1e300) < 1e-290
    with pytest.raises(ValueError):
        damping_factor(W_PUB, M_PUB, 0)


def test_mechanical_matches_mode(poly, disk18):
    mode = disk_radial_f0(poly, disk18)
    mech, _ = electrical_model(poly, disk18, mode, 1e4, DriveCondition(10.0))
    assert mech.omega0 == pytest.approx(mode.omega0, rel=1e-9)


def test_peak_displacement(poly, disk18, mech_pub):
    mode = disk_radial_f0(poly, disk18)
    amp, shape = peak_displacement(mode, mech_pub, disk18, DriveCondition(6.0, 1e-3))
    assert amp == pytest.approx(2.9e-12, rel=0.05)
    assert shape(0.0) == 0.0
    assert shape(disk18.radius) == pytest.approx(1.0)
    amp0, _ = peak_displacement(mode, mech_pub, disk18, DriveCondition(6.0))
    assert amp0 == 0.0


def test_peak_displacement_warns(poly, disk18, mech_pub):
    mode = disk_radial_f0(poly, disk18)
    with pytest.warns(SmallSignalWarning):
        peak_displacement(mode, mech_pub, disk18, DriveCondition(60.0, 5.0))


def test_extract_rlc(mech_pub):
    e = extract_rlc(mech_pub, 8.34e-7)
    assert e.le == pytest.approx(5.51, rel=0.02)
    assert e.ce == pytest.approx(1.97e-19, rel=0.02)
    assert e.re == pytest.approx(430e3, rel=0.02)
    assert e.le == pytest.approx(6.20, rel=0.15)
    assert e.ce == pytest.approx(1.78e-19, rel=0.15)
    assert e.re == pytest.approx(479.5e3, rel=0.15)
    e2 = extract_rlc(mech_pub, 2 * 8.34e-7)
    assert e2.re == pytest.approx(e.re / 4)
    assert e2.le == pytest.approx(e.le / 4)
    assert e2.ce == pytest.approx(e.ce * 4)
    assert e2.le * e2.ce == pytest.approx(e.le * e.ce)


def test_extract_rlc_device_off(mech_pub):
    with pytest.raises(DeviceOffError):
        extract_rlc(mech_pub, 0.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(5e-6, 60e-6), st.floats(0.5e-6, 5e-6), st.floats(30e-9, 300e-9),
       st.floats(0.5, 100), st.floats(10, 1e6), st.integers(1, 4))
def test_energy_method_consistency(r, t, d0, vdc, q, i):
    poly = builtin("polysilicon")
    g = DiskGeometry(r, t, min(d0, 0.09 * r))
    mode = disk_radial_f0(poly, g, i)
    _, e = electrical_model(poly, g, mode, q, DriveCondition(vdc))
    w = mode.omega0
    assert e.le * e.ce * w * w == pytest.approx(1.0, rel=1e-9)
    assert e.re * q == pytest.approx(w * e.le, rel=1e-9)
    assert e.q == pytest.approx(q, rel=1e-9)


def test_lumped_electrical_invariants():
    with pytest.raises(ValueError):
        LumpedElectrical(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        LumpedElectrical(1.0, 1.0, 1.0, c0=-1.0)
    with pytest.raises(ValueError):
        LumpedMechanical(1.0, 1.0, 1.0, 0.0)


def test_softening_diagnostic(mech_pub):
    n = 8.34e-7
    assert motional_capacitance_with_softening(mech_pub, n, 0.0) == pytest.approx(n * n / mech_pub.k_eff)
    assert motional_capacitance_with_softening(mech_pub, n, 1e5) > n * n / mech_pub.k_eff
    with pytest.raises(ValueError):
        motional_capacitance_with_softening(mech_pub, n, mech_pub.k_eff)


def test_re_closed_form():
    g = DiskGeometry(18e-6, 2.1e-6, 100e-9)
    re = motional_resistance_formula(g, 1e4, 30.0)
    assert re == pytest.approx(1.18e29 / (1e4 * 900) * 1e-28 / (18e-6 * 2.1e-6), rel=1e-12)
    assert re == pytest.approx(34.7e3, rel=0.02)
    assert motional_resistance_formula(replace(g, gap=200e-9), 1e4, 30.0) == pytest.approx(16 * re, rel=1e-12)
    assert motional_resistance_formula(g, 1e4, 60.0) == pytest.approx(re / 4, rel=1e-12)


def test_re_closed_form_table_device(disk18, mech_pub):
    re = motional_resistance_formula(disk18, 12289, 6.0)
    assert re == pytest.approx(404e3, rel=0.01)
    chain = extract_rlc(mech_pub, transduction_factor(disk18, DriveCondition(6.0))).re
    assert re == pytest.approx(chain, rel=0.20)
    assert re == pytest.approx(479.5e3, rel=0.20)


def test_re_closed_form_warnings_and_errors(disk18):
    with pytest.warns(UserWarning):
        motional_resistance_formula(disk18, 1e4, 10.0, builtin("nickel"))
    with pytest.warns(UserWarning):
        motional_resistance_formula(replace(disk18, electrode_angle=1.0), 1e4, 10.0)
    with pytest.raises(DeviceOffError):
        motional_resistance_formula(disk18, 1e4, 0.0)


def test_closed_form_tracks_full_chain_over_box(poly):
    worst = 0.0
    for d0 in [50e-9, 75e-9, 100e-9, 150e-9, 200e-9]:
        for t in [1e-6, 2e-6, 3e-6, 4e-6]:
            for r in [12e-6, 18e-6]:
                g = DiskGeometry(r, t, d0)
                _, e = electrical_model(poly, g, disk_radial_f0(poly, g), 1e4, DriveCondition(30.0))
                worst = max(worst, abs(motional_resistance_formula(g, 1e4, 30.0) / e.re - 1))
    assert worst <= 0.25


def _chain_re(poly, r=18e-6, t=2.1e-6, d0=100e-9, vdc=10.0, q=1e4):
    g = DiskGeometry(r, t, d0)
    return electrical_model(poly, g, disk_radial_f0(poly, g), q, DriveCondition(vdc))[1].re


def test_re_monotonicity(poly):
    def strictly(seq, up):
        return all((b > a) if up else (b < a) for a, b in zip(seq, seq[1:]))

    assert strictly([_chain_re(poly, d0=d) for d in (50e-9, 100e-9, 150e-9, 200e-9)], True)
    assert strictly([_chain_re(poly, t=t) for t in (1e-6, 2e-6, 3e-6)], False)
    assert strictly([_chain_re(poly, r=r) for r in (12e-6, 18e-6, 24e-6)], False)
    assert strictly([_chain_re(poly, vdc=v) for v in (5.0, 10.0, 20.0)], False)
    assert strictly([_chain_re(poly, q=q) for q in (1e3, 1e4, 1e5)], False)


def test_output_current(poly, disk18, mech_pub):
    mode = disk_radial_f0(poly, disk18)
    d = DriveCondition(6.0)
    g_m = output_current(W_PUB, mech_pub, disk18, d)
    assert abs(g_m) == pytest.approx(2.33e-6, rel=0.05)
    assert g_m < 0
    e = extract_rlc(mech_pub, transduction_factor(disk18, d))
    assert abs(g_m) * e.re == pytest.approx(1.0, rel=1e-9)
    assert output_current(mode, mech_pub, disk18, DriveCondition(0.0)) == 0.0
