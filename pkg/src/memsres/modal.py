"""Resonance-frequency solvers for disk, beam, plate and ring resonators.

All transcendental conditions are rewritten without denominators (multiplied
through by the Bessel functions that would otherwise appear below the line)
so the sign scan in :func:`numerics.find_roots_ascending` never trips over a
pole.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .materials import Material
from .numerics import (
    DomainError,
    RootFindingError,
    bessel_j,
    bessel_y,
    find_roots_ascending,
)

EPS0 = 8.8541878128e-12

F_MIN = 1e3
F_MAX = 20e9
MAX_MODE = 8
# Bessel kernel domain caps every dimensionless scan
X_CAP = 100.0


class PullInError(ValueError):
    """Electrical stiffness reaches the mechanical stiffness."""


@dataclass(frozen=True)
class DiskGeometry:
    radius: float
    thickness: float
    gap: float
    electrode_angle: float = math.pi
    stem_radius: float | None = None

    def __post_init__(self):
        if not (self.radius > 0 and self.thickness > 0):
            raise ValueError("disk radius and thickness must be positive")
        if not 0 < self.gap < 0.1 * self.radius:
            raise ValueError("gap must be positive and much smaller than the radius")
        if not 0 < self.electrode_angle <= math.pi:
            raise ValueError("electrode angle must lie in (0, pi]")


@dataclass(frozen=True)
class BeamGeometry:
    length: float
    width: float
    thickness: float
    gap: float
    electrode_width: float
    topography_factor: float = 1.0

    def __post_init__(self):
        if not (self.length > self.width > 0 and self.thickness > 0 and self.gap > 0):
            raise ValueError("beam needs length > width > 0, thickness > 0, gap > 0")
        if not 0 < self.electrode_width <= self.length:
            raise ValueError("electrode width must lie in (0, length]")
        if not 0 < self.topography_factor <= 1.2:
            raise ValueError("topography factor must lie in (0, 1.2]")

    @property
    def electrode_span(self) -> tuple[float, float]:
        return 0.5 * (self.length - self.electrode_width), 0.5 * (self.length + self.electrode_width)


@dataclass(frozen=True)
class PlateGeometry:
    side: float
    thickness: float
    gap: float | None = None

    def __post_init__(self):
        if not (self.side > 0 and self.thickness > 0):
            raise ValueError("plate side and thickness must be positive")


@dataclass(frozen=True)
class RingGeometry:
    inner_radius: float
    outer_radius: float
    thickness: float
    support_length: float | None = None
    gap: float | None = None

    def __post_init__(self):
        if not 0 < self.inner_radius < self.outer_radius:
            raise ValueError("ring needs 0 < inner_radius < outer_radius")
        if not self.thickness > 0:
            raise ValueError("ring thickness must be positive")


@dataclass(frozen=True)
class ModeSolution:
    """A solved mode. ``frequency_parameter`` is the dimensionless root."""

    mode_index: int
    frequency_parameter: float
    f0: float
    wavenumber: float | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.mode_index < 1:
            raise ValueError("mode index starts at 1")
        if not self.f0 > 0:
            raise ValueError("resonance frequency must be positive")

    @property
    def omega0(self) -> float:
        return 2.0 * math.pi * self.f0


def _check_mode_index(i):
    if isinstance(i, bool) or int(i) != i or not 1 <= i <= MAX_MODE:
        raise ValueError(f"mode index must be an integer in 1..{MAX_MODE}, got {i!r}")
    return int(i)


def _plate_velocity(m: Material) -> float:
    """sqrt(E / (rho (1 - sigma^2)))."""
    return math.sqrt(m.youngs_modulus / (m.density * (1.0 - m.poisson**2)))


# ---------------------------------------------------------------------------
# Radial-contour disk

def radial_characteristic(x: float, poisson: float) -> float:
    """x J0(x) - (1 - sigma) J1(x); zero where x J0/J1 = 1 - sigma."""
    return x * bessel_j(0, x) - (1.0 - poisson) * bessel_j(1, x)


def disk_lambda(poisson: float, mode_index: int) -> float:
    """Frequency parameter of the i-th radial-contour mode."""
    if not 0 <= poisson < 0.5:
        raise ValueError("poisson ratio must lie in [0, 0.5)")
    i = _check_mode_index(mode_index)
    roots = find_roots_ascending(lambda x: radial_characteristic(x, poisson), 0.1, 30.0, i, tol=1e-13)
    return roots[i - 1]


def disk_radial_f0(m: Material, g: DiskGeometry, mode_index: int = 1) -> ModeSolution:
    lam = disk_lambda(m.poisson, mode_index)
    f0 = lam / (2.0 * math.pi * g.radius) * _plate_velocity(m)
    zeta = 2.0 * math.pi * f0 * g.radius * math.sqrt(m.density * (2.0 + 2.0 * m.poisson) / m.youngs_modulus)
    xi = math.sqrt(2.0 / (1.0 - m.poisson))
    return ModeSolution(
        mode_index=int(mode_index),
        frequency_parameter=lam,
        f0=f0,
        wavenumber=lam / g.radius,
        diagnostics={"wavenumber_zeta": zeta, "xi": xi,
                     "residual": radial_characteristic(lam, m.poisson)},
    )


def disk_wavenumber(m: Material, omega: float) -> float:
    """h as a function of angular frequency for an isotropic plate."""
    e, s = m.youngs_modulus, m.poisson
    return omega * math.sqrt(m.density / (e / (1.0 + s) + e * s / (1.0 - s * s)))


# ---------------------------------------------------------------------------
# Wine-glass disk (n = 2)

def _wineglass_residual(zeta: float, poisson: float, n: int = 2) -> float:
    # [Psi_n(z/xi) - n - q][Psi_n(z) - n - q] - (nq - n)^2 with the J_n factors cleared
    xi = math.sqrt(2.0 / (1.0 - poisson))
    x1 = zeta / xi
    q = zeta * zeta / (2 * n * n - 2)
    jn_x1 = bessel_j(n, x1)
    jn_z = bessel_j(n, zeta)
    a = x1 * bessel_j(n - 1, x1) - (n + q) * jn_x1
    b = zeta * bessel_j(n - 1, zeta) - (n + q) * jn_z
    return a * b - (n * q - n) ** 2 * jn_x1 * jn_z


def wineglass_f0(m: Material, g: DiskGeometry, mode_index: int = 1) -> ModeSolution:
    i = _check_mode_index(mode_index)
    roots = find_roots_ascending(lambda z: _wineglass_residual(z, m.poisson), 0.5, 40.0, i, tol=1e-13)
    zeta = roots[i - 1]
    f0 = zeta / (2.0 * math.pi * g.radius * math.sqrt(2.0 * m.density * (1.0 + m.poisson) / m.youngs_modulus))
    return ModeSolution(i, zeta, f0, diagnostics={"xi": math.sqrt(2.0 / (1.0 - m.poisson))})


# ---------------------------------------------------------------------------
# Flexural and extensional closed forms

def beam_stiffness_ratio(g: BeamGeometry, bias: float, km: float | None) -> float:
    """ke/km under a uniform gap and a constant mechanical stiffness."""
    if not bias or km is None:
        return 0.0
    if km <= 0:
        raise ValueError("km must be positive")
    return bias**2 * EPS0 * g.width * g.electrode_width / (g.gap**3 * km)


def ccbeam_f0(m: Material, g: BeamGeometry, bias: float = 0.0, km: float | None = None) -> ModeSolution:
    if bias < 0:
        raise ValueError("bias must be non-negative")
    ratio = beam_stiffness_ratio(g, bias, km)
    if ratio >= 1.0:
        raise PullInError(f"ke/km = {ratio:.3g} >= 1: beam is past electrostatic pull-in")
    f0 = (1.03 * g.topography_factor * math.sqrt(m.youngs_modulus / m.density)
          * g.thickness / g.length**2 * math.sqrt(1.0 - ratio))
    return ModeSolution(1, 1.03 * g.topography_factor, f0, diagnostics={"ke_over_km": ratio})


def square_extensional_f0(m: Material, g: PlateGeometry) -> ModeSolution:
    f0 = math.sqrt(m.youngs_modulus / (4.0 * m.density * g.side**2))
    return ModeSolution(1, 0.5, f0)


def square_flexural_f0(m: Material, g: PlateGeometry) -> ModeSolution:
    f0 = (20.56 / (2.0 * math.pi)) * g.thickness / g.side**2 * math.sqrt(
        m.youngs_modulus / (12.0 * m.density * (1.0 - m.poisson**2)))
    return ModeSolution(1, 20.56, f0)


# ---------------------------------------------------------------------------
# Contour-mode ring

def _ring_branch(bessel, x: float, r_h: float, poisson: float) -> float:
    # Z1(hr) sigma - Z1(hr) + r h Z0(hr)
    return bessel(1, x) * poisson - bessel(1, x) + r_h * bessel(0, x)


def _ring_residual(x_out: float, ratio: float, poisson: float) -> float:
    """Ring determinant with x_out = h r_o and ratio = r_i / r_o."""
    x_in = ratio * x_out
    return (_ring_branch(bessel_j, x_in, x_in, poisson) * _ring_branch(bessel_y, x_out, x_out, poisson)
            - _ring_branch(bessel_y, x_in, x_in, poisson) * _ring_branch(bessel_j, x_out, x_out, poisson))


def ring_modes(m: Material, g: RingGeometry, count: int) -> list[ModeSolution]:
    """Lowest ``count`` contour modes of a free ring, ascending."""
    count = _check_mode_index(count)
    v = _plate_velocity(m)
    ratio = g.inner_radius / g.outer_radius
    x_lo = max(2.0 * math.pi * F_MIN / v * g.outer_radius, 2e-6 / ratio)
    x_hi = min(2.0 * math.pi * F_MAX / v * g.outer_radius, X_CAP)
    roots = find_roots_ascending(lambda x: _ring_residual(x, ratio, m.poisson), x_lo, x_hi, count, tol=1e-13)
    out = []
    for i, x in enumerate(roots, start=1):
        h = x / g.outer_radius
        f0 = h * v / (2.0 * math.pi)
        diag = {}
        if g.support_length is not None:
            diag["support_quarter_wave_f0"] = support_beam_f0(m, g.support_length)
        out.append(ModeSolution(i, x, f0, wavenumber=h, diagnostics=diag))
    return out


def ring_contour_f0(m: Material, g: RingGeometry, mode_index: int = 1) -> ModeSolution:
    """Contour mode ``mode_index`` of the ring (1 = lowest, the whole-ring breathing mode)."""
    return ring_modes(m, g, mode_index)[-1]


def support_beam_f0(m: Material, support_length: float, n: int = 1) -> float:
    """Frequency at which a support of this length is n quarter-wavelengths long."""
    return n / (4.0 * support_length) * math.sqrt(m.youngs_modulus / m.density)


def quarter_wave_support_length(m: Material, f0: float, n: int = 1) -> float:
    return n / (4.0 * f0) * math.sqrt(m.youngs_modulus / m.density)


__all__ = [
    "EPS0", "BeamGeometry", "DiskGeometry", "DomainError", "ModeSolution", "PlateGeometry",
    "PullInError", "RingGeometry", "RootFindingError", "ccbeam_f0", "disk_lambda", "disk_radial_f0",
    "disk_wavenumber", "quarter_wave_support_length", "radial_characteristic", "ring_contour_f0",
    "ring_modes", "square_extensional_f0", "square_flexural_f0", "support_beam_f0", "wineglass_f0",
]
