"""Numerical derivative of T(omega) and feature location on a frequency grid."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidWindow, StepTooLarge
from .model import Setup

DEFAULT_STEP = 1e-5
PLATEAU_SLOPE = 0.05
PLATEAU_MIN_WIDTH = 0.02
PLATEAU_MIN_T = 0.1
REFINE_TOL = 1e-8
MAX_REFINE_DEPTH = 20
# absolute floor (1/omega2) for the step-consistency check near extrema
_SLOPE_FLOOR = 1e-4


def transmission_derivative(omega, setup: Setup, h: float = DEFAULT_STEP):
    """dT/domega by central differences with one Richardson step.

    Raises StepTooLarge where the two central differences disagree by more
    than 1% (relative to max(|D|, 1e-4)).
    """
    if not h > 0:
        raise ValueError("step h must be > 0")
    omega = np.asarray(omega, dtype=float)
    T = setup.transmission
    d_full = (T(omega + h) - T(omega - h)) / (2 * h)
    d_half = (T(omega + h / 2) - T(omega - h / 2)) / h
    scale = np.maximum(np.maximum(np.abs(d_full), np.abs(d_half)), _SLOPE_FLOOR)
    if np.any(np.abs(d_full - d_half) > 1e-2 * scale):
        raise StepTooLarge(f"derivative estimates disagree at step h={h:g}; reduce h")
    out = (4 * d_half - d_full) / 3
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SpectralFeature:
    kind: str  # "peak", "dip" or "plateau"
    omega: float
    T: float
    omega_lo: float | None = None
    omega_hi: float | None = None

    @property
    def width(self) -> float:
        if self.omega_lo is None:
            return 0.0
        return self.omega_hi - self.omega_lo


def _bisect_root(f, a, b, fa):
    while b - a > REFINE_TOL:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0:
            return m
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _refine_cell(f, a, b, depth=0):
    """Roots of f in a cell whose endpoints differ in sign."""
    xs = np.linspace(a, b, 9)
    ys = np.array([f(x) for x in xs])
    cells = np.nonzero(np.sign(ys[:-1]) * np.sign(ys[1:]) < 0)[0]
    exact = [xs[i] for i in range(len(xs)) if ys[i] == 0]
    if len(cells) <= 1 or depth >= MAX_REFINE_DEPTH:
        roots = [_bisect_root(f, xs[i], xs[i + 1], ys[i]) for i in cells[:1]]
        return sorted(roots + exact)
    roots = list(exact)
    for i in cells:
        roots.extend(_refine_cell(f, xs[i], xs[i + 1], depth + 1))
    return sorted(roots)


def find_spectral_features(
    setup: Setup,
    window: tuple[float, float],
    grid_n: int = 4001,
    plateau_slope: float = PLATEAU_SLOPE,
    plateau_min_width: float = PLATEAU_MIN_WIDTH,
    h: float = DEFAULT_STEP,
) -> list[SpectralFeature]:
    """Peaks, dips and plateaus of T(omega) inside ``window``, sorted by omega.

    An empty list is a valid result.
    """
    lo, hi = window
    if not lo < hi:
        raise InvalidWindow(f"window must satisfy lo < hi, got {window!r}")
    if grid_n < 100:
        raise InvalidWindow("grid_n must be >= 100")
    grid = np.linspace(lo, hi, grid_n)
    slope = transmission_derivative(grid, setup, h)
    T = setup.transmission(grid)

    def deriv(x):
        return transmission_derivative(x, setup, h)

    features = []
    sgn = np.sign(slope)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        for root in _refine_cell(deriv, grid[i], grid[i + 1]):
            kind = "peak" if sgn[i] > 0 else "dip"
            features.append(SpectralFeature(kind, root, float(setup.transmission(root))))
    for i in np.nonzero(sgn == 0)[0]:
        if 0 < i < grid_n - 1 and sgn[i - 1] * sgn[i + 1] < 0:
            kind = "peak" if sgn[i - 1] > 0 else "dip"
            features.append(SpectralFeature(kind, grid[i], float(T[i])))

    flat = (np.abs(slope) < plateau_slope) & (T > PLATEAU_MIN_T)
    for start, stop in _runs(flat):
        a, b = grid[start], grid[stop - 1]
        if b - a >= plateau_min_width:
            mid = 0.5 * (a + b)
            features.append(SpectralFeature("plateau", mid, float(setup.transmission(mid)), a, b))
    return sorted(features, key=lambda f: (f.omega, f.kind))


def _runs(mask):
    """(start, stop) index pairs of maximal True runs."""
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    edges = np.diff(padded)
    return list(zip(np.nonzero(edges == 1)[0], np.nonzero(edges == -1)[0]))


def transmission_reflection_crossings(setup: Setup, window: tuple[float, float], n: int = 20001) -> np.ndarray:
    """Frequencies where T(omega) = R(omega), located by bisection."""
    lo, hi = window
    if not lo < hi:
        raise InvalidWindow(f"window must satisfy lo < hi, got {window!r}")
    grid = np.linspace(lo, hi, n)

    def diff(x):
        res = setup.amplitudes(x)
        return res.T - res.R

    d = diff(grid)
    idx = np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]
    return np.array([_bisect_root(diff, grid[i], grid[i + 1], d[i]) for i in idx])
