"""Scalar special-function, root-finding and quadrature kernel.

Everything here is plain ``math`` so the solvers above it have no
third-party numerical dependency in their inner loops.

Bessel functions of the first kind use the ascending power series below
``x = 12`` and the Hankel asymptotic expansion above it, with orders 2..8
reached by upward recurrence (stable because ``x > order`` there).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

DEFAULT_TOL = 1e-10
MAX_ORDER = 8
MAX_ARG = 100.0
SERIES_CUTOFF = 12.0
Y_MIN_ARG = 1e-6
MAX_ITER = 200

EULER_GAMMA = 0.57721566490153286061


class DomainError(ValueError):
    """Argument outside the supported domain of a special function."""


class RootFindingError(RuntimeError):
    pass


class NoSignChangeError(RootFindingError):
    pass


class MaxIterationsError(RootFindingError):
    pass


class InsufficientRootsError(RootFindingError):
    def __init__(self, found: int, wanted: int, roots=()):
        super().__init__(f"found {found} root(s), wanted {wanted}")
        self.found = found
        self.wanted = wanted
        self.roots = list(roots)


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class RootResult:
    x: float
    residual: float
    iterations: int


# ---------------------------------------------------------------------------
# Bessel functions

def _check_order(order, allowed):
    if isinstance(order, bool) or int(order) != order or order not in allowed:
        raise DomainError(f"unsupported Bessel order {order!r}")
    return int(order)


def _j_series(n: int, x: float) -> float:
    half = 0.5 * x
    term = half**n / math.factorial(n)
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if abs(term) <= 1e-17 * abs(total) or (total == 0.0 and term == 0.0):
            break
        if k > 200:
            break
    return total


def _hankel_pq(nu: int, x: float) -> tuple[float, float]:
    """Asymptotic P and Q sums, truncated at the smallest term."""
    mu = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    term = 1.0
    prev = math.inf
    k = 0
    while True:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) >= prev or term == 0.0:
            break
        prev = abs(term)
        # a_k/x^k enters with sign (-1)^(k//2)
        if k % 2 == 1:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += term if (k // 2) % 2 == 0 else -term
        if prev < 1e-17:
            break
    return p, q


def _j01_asymptotic(nu: int, x: float) -> float:
    p, q = _hankel_pq(nu, x)
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _y01_asymptotic(nu: int, x: float) -> float:
    p, q = _hankel_pq(nu, x)
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.sin(chi) + q * math.cos(chi))


def bessel_j(order: int, x: float) -> float:
    """Bessel function of the first kind J_order(x) for order 0..8, 0 <= x <= 100."""
    n = _check_order(order, range(MAX_ORDER + 1))
    x = float(x)
    if not 0.0 <= x <= MAX_ARG or math.isnan(x):
        raise DomainError(f"bessel_j argument {x} outside [0, {MAX_ARG}]")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x < SERIES_CUTOFF:
        return _j_series(n, x)
    j0 = _j01_asymptotic(0, x)
    if n == 0:
        return j0
    j1 = _j01_asymptotic(1, x)
    for k in range(1, n):
        j0, j1 = j1, (2.0 * k / x) * j1 - j0
    return j1


def _y_series(n: int, x: float) -> float:
    half = 0.5 * x
    log_term = math.log(half) + EULER_GAMMA
    q = -half * half
    if n == 0:
        # Y0 = (2/pi)[(ln(x/2)+g) J0 + sum_{k>=1} (-1)^(k+1) H_k (x^2/4)^k / (k!)^2]
        total = 0.0
        term = 1.0
        harmonic = 0.0
        for k in range(1, 200):
            term *= q / (k * k)
            harmonic += 1.0 / k
            contrib = -harmonic * term
            total += contrib
            if abs(contrib) <= 1e-17 * max(abs(total), 1e-300):
                break
        return (2.0 / math.pi) * (log_term * _j_series(0, x) + total)
    # Y1 = (2/pi)(ln(x/2)+g) J1 - 2/(pi x)
    #      - (1/pi) sum_k (-1)^k (H_k + H_{k+1}) (x/2)^(2k+1) / (k!(k+1)!)
    total = 0.0
    term = half
    h_k = 0.0
    h_k1 = 1.0
    k = 0
    while True:
        contrib = (h_k + h_k1) * term
        total += contrib
        if abs(contrib) <= 1e-17 * max(abs(total), 1e-300) or k > 200:
            break
        k += 1
        term *= q / (k * (k + 1))
        h_k = h_k1
        h_k1 += 1.0 / (k + 1)
    return (2.0 / math.pi) * log_term * _j_series(1, x) - 2.0 / (math.pi * x) - total / math.pi


def bessel_y(order: int, x: float) -> float:
    """Bessel function of the second kind Y_order(x), order 0 or 1, x >= 1e-6."""
    n = _check_order(order, (0, 1))
    x = float(x)
    if math.isnan(x) or x < Y_MIN_ARG:
        raise DomainError(f"bessel_y argument {x} below {Y_MIN_ARG} (logarithmic/pole singularity)")
    if x > MAX_ARG:
        raise DomainError(f"bessel_y argument {x} above {MAX_ARG}")
    if x < SERIES_CUTOFF:
        return _y_series(n, x)
    return _y01_asymptotic(n, x)


# ---------------------------------------------------------------------------
# Root finding

def find_root(f: Callable[[float], float], bracket: Bracket | tuple[float, float],
              tol: float = DEFAULT_TOL) -> RootResult:
    """Brent's method on a sign-changing bracket.

    Stops when ``|f(x)| <= tol`` or the bracket has shrunk below
    ``tol * max(1, |x|)``. Interpolation steps that misbehave fall back to
    bisection, so convergence is guaranteed for continuous ``f``.
    """
    if not isinstance(bracket, Bracket):
        bracket = Bracket(*bracket)
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = f(a), f(b)
    if abs(fa) <= tol and abs(fa) <= abs(fb):
        return RootResult(a, fa, 0)
    if abs(fb) <= tol:
        return RootResult(b, fb, 0)
    if fa * fb > 0:
        raise NoSignChangeError(f"f({a})={fa:g} and f({b})={fb:g} have the same sign")

    c, fc = a, fa
    d = e = b - a
    for it in range(1, MAX_ITER + 1):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, fa = b, fb
            b, fb = c, fc
            c, fc = a, fa
        tol_act = 2.0 * 2.2e-16 * abs(b) + 0.5 * tol * max(1.0, abs(b))
        m = 0.5 * (c - b)
        if abs(fb) <= tol or abs(m) <= tol_act or fb == 0.0:
            return RootResult(b, fb, it)
        if abs(e) >= tol_act and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                qq = fa / fc
                r = fb / fc
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0))
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol_act * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol_act else math.copysign(tol_act, m)
        fb = f(b)
    raise MaxIterationsError(f"no convergence in {MAX_ITER} iterations")


def find_roots_ascending(f: Callable[[float], float], x_start: float, x_end: float,
                         n: int, tol: float = DEFAULT_TOL, steps: int = 2048) -> list[float]:
    """First ``n`` roots of ``f`` in ``(x_start, x_end)``, ascending.

    Roots are isolated by a sign scan on ``steps`` equal intervals and then
    refined with :func:`find_root`. Sign changes across poles are rejected
    (the refined point must have a smaller ``|f|`` than both scan ends).
    """
    if not x_start < x_end:
        raise ValueError("x_start must be below x_end")
    if n < 1:
        raise ValueError("n must be >= 1")
    h = (x_end - x_start) / steps
    roots: list[float] = []
    x_prev = x_start
    f_prev = f(x_prev)
    for i in range(1, steps + 1):
        x = x_start + i * h if i < steps else x_end
        fx = f(x)
        if f_prev == 0.0:
            roots.append(x_prev)
        elif f_prev * fx < 0:
            res = find_root(f, Bracket(x_prev, x), tol)
            if abs(res.residual) <= max(abs(f_prev), abs(fx)):
                roots.append(res.x)
        if len(roots) >= n:
            return roots[:n]
        x_prev, f_prev = x, fx
    raise InsufficientRootsError(len(roots), n, roots)


# ---------------------------------------------------------------------------
# Quadrature: adaptive Gauss-Kronrod 7/15

_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(f, a, b):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    kronrod = fc * _WGK[7]
    gauss = fc * _WG[3]
    for j in range(7):
        dx = half * _XGK[j]
        s = f(center - dx) + f(center + dx)
        kronrod += _WGK[j] * s
        if j % 2 == 1:
            gauss += _WG[j // 2] * s
    return kronrod * half, abs((kronrod - gauss) * half)


def integrate(f: Callable[[float], float], a: float, b: float,
              rel_tol: float = 1e-9, abs_tol: float = 1e-300, max_intervals: int = 2000) -> float:
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``."""
    if not a < b:
        raise ValueError("integrate requires a < b")
    value, err = _gk15(f, a, b)
    heap = [(-err, a, b, value)]
    total, total_err = value, err
    count = 1
    while total_err > max(abs_tol, 0.1 * rel_tol * abs(total)):
        if count >= max_intervals:
            raise IntegrationError(
                f"no convergence after {max_intervals} subintervals (error estimate {total_err:g})")
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        count += 1
    # re-sum to shed accumulated rounding from the running updates
    return math.fsum(item[3] for item in heap)
