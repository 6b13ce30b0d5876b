"""Lumped mechanical and electrical models of a capacitively driven disk.

Mode shapes are normalised to unit radial displacement at the perimeter,
which makes the effective mass the one seen by the electrodes.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from .materials import Material
from .modal import EPS0, DiskGeometry, ModeSolution
from .numerics import bessel_j, integrate

RE_CLOSED_FORM_CONSTANT = 1.18e29  # polysilicon, phi = pi, first radial mode


class DeviceOffError(ValueError):
    """Zero transduction factor: with no dc bias the resonator is switched off."""


class GapExceededError(ValueError):
    pass


class SmallSignalWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DriveCondition:
    vdc: float
    vi: float = 0.0

    def __post_init__(self):
        if self.vdc < 0:
            raise ValueError("dc bias must be non-negative")
        if self.vdc > 0 and abs(self.vi) > 0.1 * self.vdc:
            warnings.warn(f"vi={self.vi} V is not small against Vdc={self.vdc} V; "
                          "linearised force is inaccurate", SmallSignalWarning, stacklevel=3)


@dataclass(frozen=True)
class LumpedMechanical:
    m_eff: float
    k_eff: float
    b_eff: float
    q: float

    def __post_init__(self):
        for name in ("m_eff", "k_eff", "b_eff", "q"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def omega0(self) -> float:
        return math.sqrt(self.k_eff / self.m_eff)

    @property
    def f0(self) -> float:
        return self.omega0 / (2.0 * math.pi)

    @classmethod
    def from_mode(cls, omega0: float, m_eff: float, q: float) -> LumpedMechanical:
        return cls(m_eff, effective_stiffness(omega0, m_eff), damping_factor(omega0, m_eff, q), q)


@dataclass(frozen=True)
class LumpedElectrical:
    """Series Re-Le-Ce branch seen through transformers of ratio n."""

    re: float
    le: float
    ce: float
    n: float = 1.0
    c0: float = 0.0

    def __post_init__(self):
        if not (self.re > 0 and self.le > 0 and self.ce > 0):
            raise ValueError("Re, Le, Ce must be positive")
        if self.c0 < 0:
            raise ValueError("C0 must be non-negative")

    @property
    def omega0(self) -> float:
        return 1.0 / math.sqrt(self.le * self.ce)

    @property
    def f0(self) -> float:
        return self.omega0 / (2.0 * math.pi)

    @property
    def q(self) -> float:
        return self.omega0 * self.le / self.re


def _omega(mode) -> float:
    return mode.omega0 if hasattr(mode, "omega0") else float(mode)


# ---------------------------------------------------------------------------
# Transduction

def static_capacitance(g: DiskGeometry, angle: float | None = None) -> float:
    phi = g.electrode_angle if angle is None else angle
    return EPS0 * phi * g.radius * g.thickness / g.gap


def cap_derivative(g: DiskGeometry, displacement: float = 0.0, angle: float | None = None) -> float:
    """dC/dr of one electrode at radial displacement ``displacement``."""
    if abs(displacement) >= g.gap:
        raise GapExceededError(f"|r| = {abs(displacement):g} m reaches the gap {g.gap:g} m")
    return static_capacitance(g, angle) / g.gap / (1.0 - displacement / g.gap) ** 2


def electrostatic_force(g: DiskGeometry, d: DriveCondition) -> tuple[float, float]:
    """Static force F0 and small-signal force per input volt, at r = 0."""
    dcdr = cap_derivative(g)
    return 0.5 * dcdr * d.vdc**2, d.vdc * dcdr


def transduction_factor(g: DiskGeometry, d: DriveCondition, angle: float | None = None) -> float:
    phi = g.electrode_angle if angle is None else angle
    return d.vdc * EPS0 * phi * g.radius * g.thickness / g.gap**2


# ---------------------------------------------------------------------------
# Mechanical model

def effective_mass(m: Material, g: DiskGeometry, mode: ModeSolution) -> float:
    """Closed-form effective mass at the perimeter, with h R equal to the mode's lambda."""
    x = mode.frequency_parameter
    j0, j1, j2 = bessel_j(0, x), bessel_j(1, x), bessel_j(2, x)
    return math.pi * m.density * g.thickness * g.radius**2 * (1.0 - j0 * j2 / j1**2)


def effective_mass_quadrature(m: Material, g: DiskGeometry, mode: ModeSolution) -> float:
    """Same quantity from the kinetic-energy integral, for cross-checking."""
    x = mode.frequency_parameter
    h = x / g.radius
    # integrate in r/R to keep the integrand O(1)
    integral = integrate(lambda s: s * bessel_j(1, x * s) ** 2, 0.0, 1.0, rel_tol=1e-11)
    return 2.0 * math.pi * m.density * g.thickness * g.radius**2 * integral / bessel_j(1, h * g.radius) ** 2


def effective_stiffness(mode, m_eff: float) -> float:
    if not m_eff > 0:
        raise ValueError("m_eff must be positive")
    return _omega(mode) ** 2 * m_eff


def damping_factor(mode, m_eff: float, q: float) -> float:
    if not q > 0:
        raise ValueError("Q must be positive")
    return _omega(mode) * m_eff / q


def mechanical_model(m: Material, g: DiskGeometry, mode: ModeSolution, q: float) -> LumpedMechanical:
    m_eff = effective_mass(m, g, mode)
    return LumpedMechanical(m_eff, effective_stiffness(mode, m_eff), damping_factor(mode, m_eff, q), q)


def peak_displacement(mode: ModeSolution, mech: LumpedMechanical, g: DiskGeometry,
                      d: DriveCondition) -> tuple[float, Callable[[float], float]]:
    """Perimeter amplitude Q|F_i|/k_eff and the normalised radial shape D(r)/D(R)."""
    _, force_per_volt = electrostatic_force(g, d)
    amplitude = mech.q * abs(force_per_volt * d.vi) / mech.k_eff
    if amplitude > 0.1 * g.gap:
        warnings.warn(f"displacement {amplitude:.3g} m exceeds 10% of the gap", SmallSignalWarning,
                      stacklevel=2)
    x = mode.frequency_parameter
    edge = bessel_j(1, x)

    def shape(r: float) -> float:
        return bessel_j(1, x * r / g.radius) / edge

    return amplitude, shape


# ---------------------------------------------------------------------------
# Electrical model

def extract_rlc(mech: LumpedMechanical, n: float, c0: float = 0.0) -> LumpedElectrical:
    """Reflect m, b, 1/k through symmetric transformers of ratio n."""
    if n == 0:
        raise DeviceOffError("transduction factor is zero (no dc bias): device is switched off")
    n2 = n * n
    return LumpedElectrical(re=mech.b_eff / n2, le=mech.m_eff / n2, ce=n2 / mech.k_eff, n=n, c0=c0)


def electrical_model(m: Material, g: DiskGeometry, mode: ModeSolution, q: float,
                     d: DriveCondition) -> tuple[LumpedMechanical, LumpedElectrical]:
    mech = mechanical_model(m, g, mode, q)
    return mech, extract_rlc(mech, transduction_factor(g, d), static_capacitance(g))


def motional_capacitance_with_softening(mech: LumpedMechanical, n: float, k_electrical: float) -> float:
    """Ce including the electrical spring: n^2 / (k_eff - 2k)."""
    denom = mech.k_eff - 2.0 * k_electrical
    if denom <= 0:
        raise ValueError("electrical stiffness cancels the mechanical stiffness")
    return n * n / denom


def motional_resistance_formula(g: DiskGeometry, q: float, vdc: float, material: Material | None = None) -> float:
    """Lumped closed form of Re for a polysilicon disk in its first radial mode."""
    if material is not None and material.name != "polysilicon":
        warnings.warn("closed-form Re constant assumes polysilicon", stacklevel=2)
    if abs(g.electrode_angle - math.pi) > 0.05 * math.pi:
        warnings.warn("closed-form Re constant assumes electrodes spanning ~pi", stacklevel=2)
    if vdc == 0:
        raise DeviceOffError("zero dc bias: device is switched off")
    return RE_CLOSED_FORM_CONSTANT / (q * vdc**2) * g.gap**4 / (g.radius * g.thickness)


def output_current(mode, mech: LumpedMechanical, g: DiskGeometry, d: DriveCondition,
                   angle_in: float | None = None, angle_out: float | None = None) -> float:
    """Output current per volt of input at resonance.

    Negative: in the two-electrode scheme the current is 180 degrees out of
    phase with the drive voltage.
    """
    dc1 = cap_derivative(g, angle=angle_in)
    dc2 = cap_derivative(g, angle=angle_out)
    return -mech.q * _omega(mode) / mech.k_eff * dc1 * dc2 * d.vdc**2
