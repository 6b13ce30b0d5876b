"""Small-signal two-port response of the equivalent circuit, and Q arithmetic."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .lumped import LumpedElectrical

HALF_POWER_DB = 10.0 * math.log10(0.5)


@dataclass(frozen=True)
class FrequencySweep:
    frequencies: np.ndarray
    values: np.ndarray
    kind: str = "transadmittance"

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if f.ndim != 1 or f.shape != v.shape:
            raise ValueError("frequencies and values must be 1-D and the same length")
        if f.size < 3:
            raise ValueError("a sweep needs at least 3 points")
        if np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be strictly ascending")
        if self.kind not in ("transadmittance", "voltage_ratio"):
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def magnitude_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.values))

    @property
    def phase_deg(self) -> np.ndarray:
        return np.degrees(np.angle(self.values))

    def __len__(self):
        return self.frequencies.size


# ---------------------------------------------------------------------------
# Transducer two-port

@dataclass(frozen=True)
class TransducerTwoPort:
    """Parallel-plate transducer relating (v, i) to (F, u)."""

    c0: float
    n: float

    def __post_init__(self):
        if not self.c0 > 0:
            raise ValueError("C0 must be positive")
        if self.n == 0:
            raise ValueError("n must be non-zero")

    def factors(self, omega: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Electrical admittance, ideal transformer, mechanical series element."""
        y = 1j * omega * self.c0
        admittance = np.array([[1, 0], [y, 1]], dtype=complex)
        transformer = np.array([[1 / self.n, 0], [0, -self.n]], dtype=complex)
        mechanical = np.array([[1, self.n**2 / y], [0, 1]], dtype=complex)
        return admittance, transformer, mechanical

    def matrix(self, omega: float) -> np.ndarray:
        a, t, m = self.factors(omega)
        return a @ t @ m


def transducer_two_port(c0: float, n: float) -> TransducerTwoPort:
    return TransducerTwoPort(c0, n)


# ---------------------------------------------------------------------------
# Sweeps

def series_branch_admittance(elec: LumpedElectrical, f) -> np.ndarray:
    w = 2.0 * np.pi * np.asarray(f, dtype=float)
    return 1.0 / (elec.re + 1j * w * elec.le + 1.0 / (1j * w * elec.ce))


def transadmittance(elec: LumpedElectrical, f, feedthrough: str = "off") -> np.ndarray:
    """io/vi of the reflected model; ``feedthrough='parallel'`` adds C0 port to port."""
    y = series_branch_admittance(elec, f)
    if feedthrough == "off":
        return y
    if feedthrough == "parallel":
        return y + 2j * np.pi * np.asarray(f, dtype=float) * elec.c0
    raise ValueError(f"feedthrough must be 'off' or 'parallel', got {feedthrough!r}")


def frequency_grid(f_start: float, f_stop: float, points: int, grid: str = "log",
                   f0: float | None = None, q: float | None = None, dense_points: int = 401) -> np.ndarray:
    """Sweep grid, plus a dense linear patch over f0 (1 +/- 10/Q) when f0 and Q are given."""
    if not 0 < f_start < f_stop:
        raise ValueError("need 0 < f_start < f_stop")
    if points < 3:
        raise ValueError("need at least 3 points")
    if grid == "log":
        base = np.geomspace(f_start, f_stop, points)
    elif grid == "linear":
        base = np.linspace(f_start, f_stop, points)
    else:
        raise ValueError(f"grid must be 'log' or 'linear', got {grid!r}")
    if f0 is not None and q is not None:
        lo = max(f_start, f0 * (1 - 10.0 / q))
        hi = min(f_stop, f0 * (1 + 10.0 / q))
        if lo < hi:
            base = np.concatenate([base, np.linspace(lo, hi, dense_points), [f0] if lo < f0 < hi else []])
    base = np.unique(base)
    # merged grids can land a few ulp apart; such pairs fake local extrema
    keep = np.concatenate([[True], np.diff(base) > 1e-12 * base[1:]])
    return base[keep]


def two_port_response(elec: LumpedElectrical, feedthrough: str = "off", f_start: float | None = None,
                      f_stop: float | None = None, points: int = 801, grid: str = "log") -> FrequencySweep:
    f0, q = elec.f0, elec.q
    f_start = f0 * 0.9 if f_start is None else f_start
    f_stop = f0 * 1.1 if f_stop is None else f_stop
    f = frequency_grid(f_start, f_stop, points, grid, f0=f0, q=q)
    return FrequencySweep(f, transadmittance(elec, f, feedthrough), "transadmittance")


def _interp_crossing(f1, y1, f2, y2, level):
    if y2 == y1:
        return 0.5 * (f1 + f2)
    return f1 + (level - y1) * (f2 - f1) / (y2 - y1)


def band_edges(sweep: FrequencySweep, drop_db: float) -> tuple[float, float]:
    """Outermost frequencies where the response is ``drop_db`` below its peak."""
    db = sweep.magnitude_db
    f = sweep.frequencies
    level = db.max() - drop_db
    above = np.nonzero(db >= level)[0]
    i, j = above[0], above[-1]
    if i == 0 or j == f.size - 1:
        raise ValueError(f"sweep does not reach {drop_db} dB below the peak on both sides")
    lower = _interp_crossing(f[i - 1], db[i - 1], f[i], db[i], level)
    upper = _interp_crossing(f[j], db[j], f[j + 1], db[j + 1], level)
    return lower, upper


def half_power_bandwidth(sweep: FrequencySweep) -> float:
    lo, hi = band_edges(sweep, -HALF_POWER_DB)
    return hi - lo


def peak_frequencies(sweep: FrequencySweep) -> list[float]:
    """Local maxima of |H|, refined by a parabola through log-magnitude."""
    db = sweep.magnitude_db
    f = sweep.frequencies
    out = []
    for k in range(1, f.size - 1):
        if db[k] > db[k - 1] and db[k] >= db[k + 1]:
            x = f[k - 1:k + 2]
            y = db[k - 1:k + 2]
            a, b, _ = np.polyfit(x - f[k], y, 2)
            out.append(f[k] - b / (2 * a) if a < 0 else f[k])
    return out


# ---------------------------------------------------------------------------
# Quality factor

def q_from_bandwidth(f0: float, delta_f: float) -> float:
    if not 0 < delta_f < f0:
        raise ValueError("need 0 < delta_f < f0")
    return f0 / delta_f


def q_from_damping_ratio(damping_ratio: float) -> float:
    if not damping_ratio > 0:
        raise ValueError("damping ratio must be positive")
    return 1.0 / (2.0 * damping_ratio)


def q_from_sweep(sweep: FrequencySweep) -> float:
    peaks = peak_frequencies(sweep)
    f0 = max(peaks, key=lambda p: np.interp(p, sweep.frequencies, sweep.magnitude))
    return q_from_bandwidth(f0, half_power_bandwidth(sweep))


@dataclass(frozen=True)
class QBudget:
    """Per-mechanism quality factors; ``None`` means the mechanism is absent."""

    air_damping: float | None = None
    air_squeezing: float | None = None
    anchor_loss: float | None = None
    ted: float | None = None
    surface: float | None = None
    internal: float | None = None

    def __post_init__(self):
        finite = self.finite()
        if not finite:
            raise ValueError("a Q budget needs at least one finite mechanism")
        for name, value in finite.items():
            if not value > 0:
                raise ValueError(f"{name} Q must be positive, got {value}")

    def finite(self) -> dict[str, float]:
        out = {}
        for fld in fields(self):
            v = getattr(self, fld.name)
            if v is not None and not math.isinf(v):
                out[fld.name] = v
        return out


def combine_q(budget: QBudget) -> float:
    qs = list(budget.finite().values())
    if len(qs) == 1:
        return float(qs[0])
    return 1.0 / math.fsum(1.0 / q for q in qs)


def implied_mechanism_q(q_total: float, q_known: float) -> float:
    """Q of the extra mechanism that takes ``q_known`` down to ``q_total``."""
    if not 0 < q_total < q_known:
        raise ValueError("need 0 < q_total < q_known")
    return 1.0 / (1.0 / q_total - 1.0 / q_known)
