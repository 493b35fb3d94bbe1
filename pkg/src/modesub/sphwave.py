"""Analytical eigenvalue traces of vector spherical waves on a spherical shell.

Spherical Bessel functions are evaluated by recurrence: downward (Miller's
algorithm, normalized by j_0) for j_t when the order exceeds the argument,
upward otherwise; y_t is always recurred upward, which is stable because it
grows with order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pointgroup import O3IrrepId, TE, TM

#: denominator magnitude below which an eigenvalue is reported as infinite
POLE_DENOMINATOR_TOL = 1e-13

#: pole scan density: points per unit of kR/pi
POLE_SCAN_DENSITY = 4096

#: bisection convergence (absolute, in kR)
POLE_BISECTION_TOL = 1e-10


def _sph_j_array(t: int, x: float) -> np.ndarray:
    """j_0..j_t at x > 0."""
    out = np.empty(t + 1)
    j0 = math.sin(x) / x
    out[0] = j0
    if t == 0:
        return out
    j1 = math.sin(x) / x ** 2 - math.cos(x) / x
    if x >= t:
        out[1] = j1
        for n in range(1, t):
            out[n + 1] = (2 * n + 1) / x * out[n] - out[n - 1]
        return out
    # downward recurrence from a padded start order, normalized by j_0
    start = t + 30
    fp = 0.0
    f = 1e-30
    tail = np.empty(t + 1)
    for n in range(start, 0, -1):
        fm = (2 * n + 1) / x * f - fp
        fp, f = f, fm
        if abs(f) > 1e250:
            f *= 1e-250
            fp *= 1e-250
            if n <= t:
                tail[n:t + 1] *= 1e-250
        if n - 1 <= t:
            tail[n - 1] = f
    out[:] = tail * (j0 / tail[0])
    return out


def _sph_y_array(t: int, x: float) -> np.ndarray:
    """y_0..y_t at x > 0 (upward recurrence)."""
    out = np.empty(t + 1)
    out[0] = -math.cos(x) / x
    if t == 0:
        return out
    out[1] = -math.cos(x) / x ** 2 - math.sin(x) / x
    for n in range(1, t):
        out[n + 1] = (2 * n + 1) / x * out[n] - out[n - 1]
    return out


def spherical_bessel(kind: str, t: int, x: float) -> float:
    """Spherical Bessel function of the first ("j") or second ("y") kind."""
    if x <= 0:
        raise ValueError("argument must be positive")
    if t < 0 or t > 30:
        raise ValueError("order must be in 0..30")
    if kind == "j":
        return float(_sph_j_array(t, x)[t])
    if kind == "y":
        return float(_sph_y_array(t, x)[t])
    raise ValueError("kind must be 'j' or 'y'")


def _riccati_pair(wave: O3IrrepId, x: float):
    """Numerator and denominator of the eigenvalue at kR = x.

    TE uses (y_t, j_t); TM uses the derivative d/dx [x f_t(x)], expanded as
    x f_{t-1}(x) - t f_t(x).
    """
    t = wave.t
    j = _sph_j_array(t, x)
    y = _sph_y_array(t, x)
    if wave.s == TE:
        return y[t], j[t]
    num = x * y[t - 1] - t * y[t]
    den = x * j[t - 1] - t * j[t]
    return num, den


def eigenvalue(wave: O3IrrepId, kR: float) -> float:
    """Characteristic eigenvalue of the (t, s) wave on a shell of size kR.

    Returns a signed infinity when the denominator magnitude drops below
    POLE_DENOMINATOR_TOL; the sign continues the approach from below
    (-inf) or above (+inf) of the pole.
    """
    if kR <= 0:
        raise ValueError("kR must be positive")
    num, den = _riccati_pair(wave, kR)
    if abs(den) < POLE_DENOMINATOR_TOL:
        if den != 0.0:
            return math.inf if -num / den > 0 else -math.inf
        return -math.copysign(math.inf, num)
    return -num / den


def eigenvalue_denominator(wave: O3IrrepId, kR: float) -> float:
    _, den = _riccati_pair(wave, kR)
    return den


@dataclass(frozen=True)
class ModeIndex:
    """Global index of one vector spherical wave: n enumerates (t, m, s)."""

    t: int
    m: int
    s: int
    n: int


def mode_index(t: int, m: int, s: int) -> ModeIndex:
    """Compact global index n = 2(t(t+1) + m - 1) + s."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if abs(m) > t:
        raise ValueError("m must satisfy -t <= m <= t")
    if s not in (TE, TM):
        raise ValueError("s must be 1 (TE) or 2 (TM)")
    n = 2 * (t * (t + 1) + m - 1) + s
    return ModeIndex(t, m, s, n)


def index_to_mode(n: int) -> ModeIndex:
    """Invert the global index: recover (t, m, s) from n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = TM if n % 2 == 0 else TE
    k = (n - s) // 2 + 1          # k = t(t+1) + m, with t^2 <= k <= t^2 + 2t
    t = int(math.isqrt(k))
    m = k - t * (t + 1)
    return ModeIndex(t, m, s, n)


def poles(wave: O3IrrepId, lo: float, hi: float) -> list[float]:
    """Eigenvalue poles (denominator zeros) inside [lo, hi], in kR units.

    The interval is scanned at POLE_SCAN_DENSITY points per unit of kR/pi
    and each bracketed sign change is bisected to POLE_BISECTION_TOL.
    """
    if not (0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    step = math.pi / POLE_SCAN_DENSITY
    count = max(2, int(math.ceil((hi - lo) / step)) + 1)
    xs = np.linspace(lo, hi, count)
    dens = np.array([eigenvalue_denominator(wave, float(x)) for x in xs])
    found = []
    for i in range(count - 1):
        a, b = float(xs[i]), float(xs[i + 1])
        fa, fb = float(dens[i]), float(dens[i + 1])
        if fa == 0.0:
            found.append(a)
            continue
        if fa * fb < 0:
            while b - a > POLE_BISECTION_TOL:
                m = 0.5 * (a + b)
                fm = eigenvalue_denominator(wave, m)
                if fm == 0.0:
                    a = b = m
                    break
                if fa * fm < 0:
                    b = m
                else:
                    a, fa = m, fm
            found.append(0.5 * (a + b))
    if count >= 1 and float(dens[-1]) == 0.0:
        found.append(float(xs[-1]))
    return found


@dataclass(frozen=True)
class SphericalTrace:
    """One analytical trace: identity, degeneracy and poles on an interval."""

    wave: O3IrrepId
    degeneracy: int
    interval: tuple
    poles: tuple

    def eval(self, kR: float) -> float:
        return eigenvalue(self.wave, kR)

    __call__ = eval


def spherical_trace(wave: O3IrrepId, lo: float, hi: float) -> SphericalTrace:
    """Trace of (t, s) on [lo, hi] with its poles located up front."""
    return SphericalTrace(wave, 2 * wave.t + 1, (lo, hi),
                          tuple(poles(wave, lo, hi)))


def sample_trace(wave: O3IrrepId, kr: np.ndarray):
    """Sample a trace on a strictly increasing kR grid.

    Returns (lam, pole_adjacent): eigenvalues (signed infinities possible at
    exact poles) and a bool mask flagging the two samples bracketing each
    pole, i.e. samples within one grid cell of it.
    """
    kr = np.asarray(kr, dtype=float)
    if kr.ndim != 1 or len(kr) < 2 or np.any(np.diff(kr) <= 0):
        raise ValueError("kr must be a strictly increasing 1-d grid")
    lam = np.array([eigenvalue(wave, float(x)) for x in kr])
    adjacent = np.zeros(len(kr), dtype=bool)
    pad = float(kr[1] - kr[0])
    for p in poles(wave, max(float(kr[0]) - pad, 1e-12), float(kr[-1]) + pad):
        i = int(np.searchsorted(kr, p))
        for k in (i - 1, i):
            if 0 <= k < len(kr):
                adjacent[k] = True
    adjacent |= ~np.isfinite(lam)
    return lam, adjacent
