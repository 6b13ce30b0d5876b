"""Coupled-resonator bandpass filters: closed-form mode splits and ladder analysis.

The ladder is the reflected (transformer-free) form: series Re-Le-Ce
branches between nodes, coupling elements as shunt capacitors to ground, and
a resistive termination at each end. Mechanical chains are mapped into the
same ladder by dividing every impedance by n^2, so a spring ks becomes a
shunt capacitor n^2/ks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lumped import LumpedElectrical, LumpedMechanical, extract_rlc
from .response import HALF_POWER_DB, FrequencySweep, band_edges, peak_frequencies

OUT_OF_MODEL_RATIO = 2.0


class SingularNetworkError(ValueError):
    pass


class NoPassbandError(ValueError):
    pass


class TargetUnreachableError(RuntimeError):
    def __init__(self, best_r_q, best_ripple, target):
        super().__init__(f"ripple target {target} dB unreachable; best {best_ripple:.3g} dB "
                         f"at R_Q = {best_r_q:.4g} ohm")
        self.best_r_q = best_r_q
        self.best_ripple = best_ripple


@dataclass(frozen=True)
class FilterSpec:
    """Ladder of identical-or-not resonators.

    ``coupling`` holds shunt capacitances (F) for electrical coupling or spring
    stiffnesses (N/m) for mechanical coupling. ``termination`` is one value
    for both ends or a (source, load) pair.
    """

    resonators: tuple
    coupling: tuple = ()
    termination: float | tuple[float, float] = 0.0
    mechanical: bool = False
    transduction: float | None = None
    port_capacitance: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "resonators", tuple(self.resonators))
        object.__setattr__(self, "coupling", tuple(self.coupling))
        if not self.resonators:
            raise ValueError("need at least one resonator")
        if len(self.coupling) != len(self.resonators) - 1:
            raise ValueError("coupling count must be resonator count - 1")
        if any(not c > 0 for c in self.coupling):
            raise ValueError("coupling values must be positive")
        kind = LumpedMechanical if self.mechanical else LumpedElectrical
        if not all(isinstance(r, kind) for r in self.resonators):
            raise TypeError(f"resonators must all be {kind.__name__}")
        if self.mechanical and not self.transduction:
            raise ValueError("mechanical specs need a non-zero transduction factor")
        rs, rl = self.terminations
        if rs < 0 or rl < 0:
            raise ValueError("terminations must be non-negative")

    @property
    def terminations(self) -> tuple[float, float]:
        t = self.termination
        return (float(t), float(t)) if np.isscalar(t) else (float(t[0]), float(t[1]))

    def with_termination(self, r_q) -> FilterSpec:
        return FilterSpec(self.resonators, self.coupling, r_q, self.mechanical, self.transduction,
                          self.port_capacitance)

    def electrical(self) -> tuple[list[LumpedElectrical], list[float]]:
        """Resonator branches and shunt coupling capacitors of the reflected ladder."""
        if not self.mechanical:
            return list(self.resonators), list(self.coupling)
        n = self.transduction
        return [extract_rlc(r, n) for r in self.resonators], [n * n / k for k in self.coupling]

    def reversed(self) -> FilterSpec:
        rs, rl = self.terminations
        return FilterSpec(self.resonators[::-1], self.coupling[::-1], (rl, rs), self.mechanical,
                          self.transduction, self.port_capacitance)


@dataclass(frozen=True)
class FilterMetrics:
    center_frequency: float
    bandwidth_3db: float
    percent_bandwidth: float
    insertion_loss: float
    stopband_rejection: float
    shape_factor_20db: float
    ripple: float


# ---------------------------------------------------------------------------
# Closed forms

def electrical_mode_split(f0: float, re: float, q: float, cc: float) -> float:
    """Upper mode of two identical resonators sharing a shunt capacitor cc."""
    if not (f0 > 0 and re > 0 and q > 0 and cc > 0):
        raise ValueError("all arguments must be positive")
    a = math.pi * f0 * cc * re * q
    return f0 * math.sqrt((1.0 + a) / a)


def is_out_of_model(f0: float, f1: float) -> bool:
    return f1 > OUT_OF_MODEL_RATIO * f0


def mechanical_mode_split(f0: float, ks12: float, kr: float) -> float:
    if not kr > 0:
        raise ValueError("kr must be positive")
    if ks12 < 0:
        raise ValueError("ks12 must be non-negative")
    return f0 * math.sqrt(1.0 + 2.0 * ks12 / kr)


def half_circuit_mode(elec: LumpedElectrical, cc: float) -> float:
    """Out-of-phase mode: one resonator with cc/2 in series."""
    c_series = elec.ce * (cc / 2) / (elec.ce + cc / 2)
    return 1.0 / (2.0 * math.pi * math.sqrt(elec.le * c_series))


# ---------------------------------------------------------------------------
# Network analysis

def ladder_transfer(spec: FilterSpec, f) -> np.ndarray:
    """V_out / V_source for the terminated ladder, by nodal analysis."""
    branches, shunts = spec.electrical()
    rs, rl = spec.terminations
    f = np.atleast_1d(np.asarray(f, dtype=float))
    w = 2.0 * np.pi * f
    n_nodes = len(branches) + 1
    if rs == 0:
        raise SingularNetworkError("source termination must be non-zero (ideal source shorts node 0)")
    y = np.zeros((f.size, n_nodes, n_nodes), dtype=complex)
    for k, br in enumerate(branches):
        yb = 1.0 / (br.re + 1j * w * br.le + 1.0 / (1j * w * br.ce))
        y[:, k, k] += yb
        y[:, k + 1, k + 1] += yb
        y[:, k, k + 1] -= yb
        y[:, k + 1, k] -= yb
    for k, c in enumerate(shunts, start=1):
        y[:, k, k] += 1j * w * c
    y[:, 0, 0] += 1.0 / rs
    if rl > 0:
        y[:, -1, -1] += 1.0 / rl
    if spec.port_capacitance:
        y[:, 0, 0] += 1j * w * spec.port_capacitance
        y[:, -1, -1] += 1j * w * spec.port_capacitance
    rhs = np.zeros((f.size, n_nodes), dtype=complex)
    rhs[:, 0] = 1.0 / rs
    try:
        v = np.linalg.solve(y, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise SingularNetworkError(str(exc)) from exc
    if not np.all(np.isfinite(v)):
        raise SingularNetworkError("non-finite node voltages")
    return v[:, -1]


def mode_frequencies(spec: FilterSpec) -> tuple[float, float]:
    """In-phase and out-of-phase estimates for a two-resonator chain."""
    branches, shunts = spec.electrical()
    f0 = branches[0].f0
    if len(branches) < 2:
        return f0, f0
    return f0, half_circuit_mode(branches[0], shunts[0])


def default_band(spec: FilterSpec, span: float = 4.0) -> tuple[float, float]:
    branches, shunts = spec.electrical()
    f_lo = min(b.f0 for b in branches)
    # interior loops see two shunts, so the top mode of a longer chain sits higher
    share = 1.0 if len(branches) == 2 else 0.5
    f_hi = max([f_lo] + [half_circuit_mode(b, share * c) for b in branches for c in shunts])
    bw = max(f_hi - f_lo, max(b.f0 / b.q for b in branches))
    return f_lo - span * bw, f_hi + span * bw


def filter_network_response(spec: FilterSpec, f_start: float | None = None, f_stop: float | None = None,
                            points: int = 4001, grid: str = "linear") -> FrequencySweep:
    if f_start is None or f_stop is None:
        lo, hi = default_band(spec)
        f_start = lo if f_start is None else f_start
        f_stop = hi if f_stop is None else f_stop
    if grid == "linear":
        f = np.linspace(f_start, f_stop, points)
    elif grid == "log":
        f = np.geomspace(f_start, f_stop, points)
    else:
        raise ValueError(f"grid must be 'linear' or 'log', got {grid!r}")
    return FrequencySweep(f, ladder_transfer(spec, f), "voltage_ratio")


def active_cascade_response(resonators, gain: float, f, f_feedthrough: str = "off") -> FrequencySweep:
    """Amplifier-isolated cascade: product of individual transadmittances times gain^(N-1)."""
    from .response import transadmittance

    f = np.asarray(f, dtype=float)
    h = np.ones(f.shape, dtype=complex)
    for r in resonators:
        h = h * transadmittance(r, f, f_feedthrough)
    return FrequencySweep(f, h * gain ** (len(resonators) - 1), "transadmittance")


# ---------------------------------------------------------------------------
# Metrics and termination

def passband_ripple(sweep: FrequencySweep) -> float:
    """Peak-to-dip depth (dB) between the outermost local maxima; 0 for a single peak."""
    db = sweep.magnitude_db
    idx = [k for k in range(1, db.size - 1) if db[k] > db[k - 1] and db[k] >= db[k + 1]]
    if len(idx) < 2:
        return 0.0
    lo, hi = idx[0], idx[-1]
    return float(db[lo:hi + 1].max() - db[lo:hi + 1].min())


def filter_metrics(sweep: FrequencySweep, reference_db: float = 0.0) -> FilterMetrics:
    db = sweep.magnitude_db
    f = sweep.frequencies
    k = int(np.argmax(db))
    if k == 0 or k == f.size - 1:
        raise NoPassbandError("response maximum sits on the sweep boundary")
    peak = float(db[k])
    try:
        lo3, hi3 = band_edges(sweep, -HALF_POWER_DB)
    except ValueError as exc:
        raise NoPassbandError(str(exc)) from exc
    bw = hi3 - lo3
    center = 0.5 * (lo3 + hi3)
    try:
        lo20, hi20 = band_edges(sweep, 20.0)
        shape = (hi20 - lo20) / bw
    except ValueError:
        shape = math.nan
    outside = np.abs(f - center) > 5.0 * bw
    rejection = float(peak - db[outside].max()) if outside.any() else math.nan
    return FilterMetrics(
        center_frequency=center,
        bandwidth_3db=bw,
        percent_bandwidth=100.0 * bw / center,
        insertion_loss=reference_db - peak,
        stopband_rejection=rejection,
        shape_factor_20db=shape,
        ripple=passband_ripple(sweep),
    )


def matched_reference_db(spec: FilterSpec) -> float:
    """Level of a lossless matched transfer, 20 log10(0.5 sqrt(RL/RS))."""
    rs, rl = spec.terminations
    return 20.0 * math.log10(0.5 * math.sqrt(rl / rs))


@dataclass(frozen=True)
class TerminationResult:
    r_q: float
    ripple_db: float
    unimodal: bool
    scan: tuple


def _passband_sweep(spec: FilterSpec, points: int) -> FrequencySweep:
    f_in, f_out = mode_frequencies(spec)
    split = f_out - f_in
    return filter_network_response(spec, f_in - 1.5 * split, f_out + 1.5 * split, points)


def ripple_for_termination(spec: FilterSpec, r_q: float, points: int = 2001) -> float:
    return passband_ripple(_passband_sweep(spec.with_termination(r_q), points))


def terminate_for_flat_passband(spec: FilterSpec, ripple_target: float = 0.5, scan_points: int = 41,
                                points: int = 2001) -> TerminationResult:
    """Smallest equal termination whose passband ripple is within ``ripple_target``.

    Ripple falls as the terminations load the modes down and reaches zero
    once the two peaks merge, so every R_Q beyond that point is a minimiser;
    the smallest one meeting the target keeps the widest flat band. The scan
    over [Re/100, 100 Re] checks that the ripple curve really is unimodal
    (non-increasing up to its floor).
    """
    branches, _ = spec.electrical()
    if len(branches) != 2:
        raise ValueError("termination search is defined for two-resonator specs")
    re = branches[0].re
    grid = np.geomspace(re / 100.0, 100.0 * re, scan_points)
    ripples = np.array([ripple_for_termination(spec, r, points) for r in grid])
    # unimodal: one descent then non-decreasing, allowing grid noise
    slack = 1e-6 + 1e-3 * ripples.max()
    k_min = int(np.argmin(ripples))
    unimodal = bool(np.all(np.diff(ripples[:k_min + 1]) <= slack) and np.all(np.diff(ripples[k_min:]) >= -slack))
    ok = np.nonzero(ripples <= ripple_target)[0]
    if ok.size == 0:
        raise TargetUnreachableError(grid[k_min], ripples[k_min], ripple_target)
    j = ok[0]
    if j == 0:
        return TerminationResult(grid[0], float(ripples[0]), unimodal, tuple(zip(grid, ripples)))
    lo, hi = math.log(grid[j - 1]), math.log(grid[j])
    best_r, best_ripple = grid[j], ripples[j]
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        rip = ripple_for_termination(spec, math.exp(mid), points)
        if rip <= ripple_target:
            hi, best_r, best_ripple = mid, math.exp(mid), rip
        else:
            lo = mid
        if hi - lo < 1e-4:
            break
    return TerminationResult(float(best_r), float(best_ripple), unimodal, tuple(zip(grid, ripples)))
