"""Embedded reference fixtures from published device data, run as one report."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import numerics
from .filters import (
    FilterSpec,
    electrical_mode_split,
    filter_network_response,
    mechanical_mode_split,
)
from .lumped import (
    DriveCondition,
    LumpedElectrical,
    LumpedMechanical,
    damping_factor,
    effective_mass,
    effective_stiffness,
    extract_rlc,
    motional_resistance_formula,
    transduction_factor,
)
from .materials import builtin
from .modal import (
    BeamGeometry,
    DiskGeometry,
    PlateGeometry,
    RingGeometry,
    ccbeam_f0,
    disk_lambda,
    disk_radial_f0,
    ring_contour_f0,
    square_flexural_f0,
    wineglass_f0,
)
from .response import (
    QBudget,
    combine_q,
    half_power_bandwidth,
    implied_mechanism_q,
    peak_frequencies,
    q_from_bandwidth,
    two_port_response,
)

# high-precision roots of x J0(x) = (1 - 0.226) J1(x), 30-digit arithmetic
LAMBDA_REFERENCE = (2.0015865921828095, 5.3751593413111893, 8.5631103222885685, 11.7254343707748)
PUBLISHED_LAMBDA = (1.99, 5.37, 8.42, 11.52)

DISK18_REFERENCE = {
    "f0": 152.4e6, "m_eff": 3.83e-12, "k_eff": 3.52e6, "b_eff": 3.01e-7,
    "re": 479.5e3, "le": 6.20, "ce": 1.78e-19, "q": 12289, "q_air": 9316, "vdc": 6.0,
}
DISK18_GEOMETRY = DiskGeometry(radius=18e-6, thickness=2.1e-6, gap=87e-9)


@dataclass
class Check:
    name: str
    expected: float
    provenance: str
    computed: float
    tolerance: float
    mode: str = "rel"

    @property
    def error(self) -> float:
        diff = abs(self.computed - self.expected)
        if self.mode == "abs":
            return diff
        return diff / abs(self.expected)

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.computed) and self.error <= self.tolerance)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["error"] = self.error
        d["passed"] = self.passed
        return d


@dataclass
class ValidationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.as_dict() for c in self.checks]}


def rlc_from_q(f0: float, q: float, re: float) -> LumpedElectrical:
    w = 2 * math.pi * f0
    le = q * re / w
    return LumpedElectrical(re, le, 1.0 / (w * w * le))


def _bessel_checks():
    return [
        Check("bessel_J0_first_zero", 0.0, "classical zero of J0", numerics.bessel_j(0, 2.404825557695773), 1e-9, "abs"),
        Check("bessel_J1_at_2", 0.5767248077568734, "series oracle", numerics.bessel_j(1, 2.0), 1e-10, "abs"),
        Check("bessel_Y1_at_2", -0.10703243154093755, "series oracle", numerics.bessel_y(1, 2.0), 1e-9, "abs"),
        Check("bessel_Y0_first_zero", 0.0, "classical zero of Y0", numerics.bessel_y(0, 0.8935769662791675), 1e-8, "abs"),
    ]


def _lambda_checks():
    out = []
    for i, (published, exact) in enumerate(zip(PUBLISHED_LAMBDA, LAMBDA_REFERENCE), start=1):
        lam = disk_lambda(0.226, i)
        out.append(Check(f"published_lambda_{i}", published, "published lambda table", lam, 0.01))
        out.append(Check(f"lambda_{i}_exact_root", exact, "30-digit root of the characteristic equation", lam, 1e-9))
    return out


def disk18_chain() -> dict:
    """Solved mode and m_eff of the R = 18 um disk, plus its chain fed with the published f0 and m_eff."""
    poly = builtin("polysilicon")
    g = DISK18_GEOMETRY
    mode = disk_radial_f0(poly, g)
    m_eff = effective_mass(poly, g, mode)
    w_pub = 2 * math.pi * DISK18_REFERENCE["f0"]
    q = DISK18_REFERENCE["q"]
    mech = LumpedMechanical(DISK18_REFERENCE["m_eff"], DISK18_REFERENCE["k_eff"], damping_factor(w_pub, DISK18_REFERENCE["m_eff"], q), q)
    n = transduction_factor(g, DriveCondition(DISK18_REFERENCE["vdc"]))
    elec = extract_rlc(mech, n)
    return {
        "mode": mode, "m_eff": m_eff,
        "k_eff": effective_stiffness(w_pub, DISK18_REFERENCE["m_eff"]),
        "b_eff": mech.b_eff, "n": n, "elec": elec,
    }


def _disk18_checks():
    c = disk18_chain()
    t = DISK18_REFERENCE
    w = 2 * math.pi * t["f0"]
    src = "published R=18um polysilicon disk"
    return [
        Check("disk18um_f0", t["f0"], src, c["mode"].f0, 0.05),
        Check("disk18um_m_eff", t["m_eff"], src, c["m_eff"], 0.05),
        Check("disk18um_k_eff", t["k_eff"], src, c["k_eff"], 0.01),
        Check("disk18um_b_eff", t["b_eff"], src, c["b_eff"], 0.02),
        Check("disk18um_Re", t["re"], src, c["elec"].re, 0.15),
        Check("disk18um_Le", t["le"], src, c["elec"].le, 0.15),
        Check("disk18um_Ce", t["ce"], src, c["elec"].ce, 0.15),
        Check("disk18um_LeCe_vs_inverse_w0_squared", 1 / w**2, src, t["le"] * t["ce"], 0.02),
        Check("disk18um_Re_over_Le_vs_w0_over_Q", w / t["q"], src, t["re"] / t["le"], 0.02),
    ]


def _survey_checks():
    poly = builtin("polysilicon")
    src = "published device survey"
    flex = square_flexural_f0(poly, PlateGeometry(side=16e-6, thickness=2.2e-6)).f0
    beam = ccbeam_f0(poly, BeamGeometry(40e-6, 8e-6, 2e-6, 100e-9, 20e-6, 1.0)).f0
    wine = wineglass_f0(poly, DiskGeometry(32e-6, 3e-6, 80e-9)).f0
    ring = ring_contour_f0(poly, RingGeometry(11.8e-6, 18.7e-6, 2e-6), mode_index=3).f0
    return [
        Check("survey_square_flexural", 68e6, src, flex, 0.03),
        Check("survey_ccbeam_unloaded", 9.34e6, src, beam, 0.15),
        Check("survey_wineglass_R32um", 60e6, src, wine, 0.10),
        Check("survey_ring_contour_mode3", 1.2e9, src, ring, 0.10),
    ]


def _re_closed_form_checks():
    g = DiskGeometry(18e-6, 2.1e-6, 100e-9)
    re = motional_resistance_formula(g, 1e4, 30.0)
    ref = 1.18e29 / (1e4 * 900) * (100e-9) ** 4 / (18e-6 * 2.1e-6)
    out = [Check("re_closed_form_Q1e4_V30_d100nm", 34.7e3, "closed form, Re-vs-gap sweep regime", re, 0.02),
           Check("re_closed_form_direct_arithmetic", ref, "direct arithmetic", re, 1e-12)]
    worst_d = worst_v = 0.0
    for d0 in np.linspace(50e-9, 200e-9, 7):
        for t in np.linspace(1e-6, 4e-6, 4):
            for r in (12e-6, 18e-6):
                base = motional_resistance_formula(DiskGeometry(r, t, d0), 1e4, 30.0)
                scaled = motional_resistance_formula(DiskGeometry(r, t, 2 * d0), 1e4, 30.0)
                worst_d = max(worst_d, abs(scaled / base / 16 - 1))
                worst_v = max(worst_v, abs(motional_resistance_formula(DiskGeometry(r, t, d0), 1e4, 60.0) / base * 4 - 1))
    out.append(Check("re_closed_form_prop_d0^4", 0.0, "exact scaling", worst_d, 1e-3, "abs"))
    out.append(Check("re_closed_form_prop_Vdc^-2", 0.0, "exact scaling", worst_v, 1e-3, "abs"))
    return out


def _filter_checks():
    out = [Check("capacitive_split_example_MHz", 10.0159, "closed form, 5 significant digits",
                 round(electrical_mode_split(10e6, 10e3, 1000, 1e-12) / 1e6, 4), 1e-12, "abs")]
    m, kr, ks = 1e-12, 3.5e6, 3.5e4
    f0 = math.sqrt(kr / m) / (2 * math.pi)
    eig = np.linalg.eigvalsh(np.array([[kr + ks, -ks], [-ks, kr + ks]]) / m)
    out.append(Check("spring_split_vs_2dof_eigen", math.sqrt(eig[1]) / (2 * math.pi), "2-DOF eigenproblem",
                     mechanical_mode_split(f0, ks, kr), 1e-12))
    c = disk18_chain()
    e = c["elec"]
    cc = 200 * math.pi * e.ce  # pi f0 Cc Re Q = 100 pi
    spec = FilterSpec((e, e), (cc,), e.re / 100)
    peaks = peak_frequencies(filter_network_response(spec))
    out.append(Check("network_upper_peak_vs_closed_form", electrical_mode_split(e.f0, e.re, e.q, cc),
                     "closed form", max(peaks), 0.005))
    rlc = rlc_from_q(810e3, 1500.0, 1e3)
    sweep = two_port_response(rlc, f_start=800e3, f_stop=820e3, points=2001, grid="linear")
    bw = half_power_bandwidth(sweep)
    out.append(Check("filter_Q_810kHz_540Hz", 1500.0, "published 810 kHz filter", q_from_bandwidth(810e3, bw), 0.02))
    return out


def _q_checks():
    implied = implied_mechanism_q(DISK18_REFERENCE["q_air"], DISK18_REFERENCE["q"])
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        qs = rng.uniform(10, 1e6, 6)
        mask = rng.random(6) < 0.5
        mask[rng.integers(6)] = True
        vals = [float(q) if keep else None for q, keep in zip(qs, mask)]
        total = combine_q(QBudget(*vals))
        ref = 1.0 / sum(1.0 / q for q, keep in zip(qs, mask) if keep)
        worst = max(worst, abs(total / ref - 1))
    return [
        Check("disk18um_air_mechanism_Q", 38510.0, "published vacuum/air Q pair", implied, 0.01),
        Check("combine_q_reciprocal_sum_1000", 0.0, "direct reciprocal sum", worst, 1e-12, "abs"),
    ]


def run_validate() -> ValidationReport:
    checks = []
    for group in (_bessel_checks, _lambda_checks, _disk18_checks, _survey_checks, _re_closed_form_checks,
                  _filter_checks, _q_checks):
        checks.extend(group())
    return ValidationReport(checks)
