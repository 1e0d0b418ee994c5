"""Bloch dispersion of the infinite chain, band gaps and the gap-width law."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, brentq

from .chain import LatticeConfig, phase
from .errors import DegenerateFit, GridTooCoarse, NoGapFound, PoleAtBandEdge, ZeroTransmission
from .model import CouplingConfig, DispersionModel, EmitterConfig, Linear, Nonlinear
from .parallel import ordered_map

POLE_FLOOR = 1e-30
POLE_EXCLUSION = 1e-6
EDGE_XTOL = 1e-12
DEFAULT_RESOLUTION = 1e-4
MAX_GAP_SEARCH = 10.0
FIG4_SPACINGS = (0.045, 0.05)


@dataclass(frozen=True)
class BandPoint:
    omega: float
    cos_KL: float
    K_real: float | None
    kappa: float | None

    @property
    def forbidden(self) -> bool:
        return abs(self.cos_KL) > 1


@dataclass(frozen=True)
class BandInterval:
    kind: str  # "allowed" or "forbidden"
    omega_start: float
    omega_end: float

    @property
    def width(self) -> float:
        return self.omega_end - self.omega_start


@dataclass(frozen=True)
class GapFit:
    """Least-squares fit of delta_omega_B(J) = log_b(J) + xi (omega2 = 1)."""

    base_b: float
    xi: float
    rms_residual: float
    j_samples: tuple[tuple[float, float], ...]

    @property
    def slope(self) -> float:
        return 1.0 / math.log(self.base_b)

    def predict(self, J):
        return self.slope * np.log(J) + self.xi

    @property
    def crossing(self) -> float:
        """J at which the fitted law changes sign."""
        return self.base_b ** (-self.xi)


def bloch_cos_closed(omega, emitter: EmitterConfig, coupling: CouplingConfig,
                     dispersion: DispersionModel, lattice: LatticeConfig):
    """cos(KL) from the closed dispersion relations (lossless, symmetric coupling).

    linear:    cos qL + sin qL * G d3 / (2 (d2 d3 - W^2/4))
    nonlinear: cos qL + sin qL * G d3 / (J w (d2 d3 - W^2/4))
    """
    if not emitter.lossless:
        raise ValueError("closed dispersion relations need gamma2 = gamma3 = 0")
    if not coupling.symmetric():
        raise ValueError("closed dispersion relations need gamma_L = gamma_R")
    omega = np.asarray(omega, dtype=float)
    d2 = omega - emitter.omega2
    d3 = omega - (emitter.omega2 - emitter.delta)
    lam = d2 * d3 - emitter.omega_rabi**2 / 4
    gamma = coupling.gamma_L
    if isinstance(dispersion, Nonlinear):
        lam = omega * lam
        scale = dispersion.J
    else:
        scale = 2.0
    if np.any(np.abs(lam) < POLE_FLOOR):
        raise PoleAtBandEdge("evaluated exactly on a polariton pole")
    qL = phase(omega, lattice, coupling, emitter.omega2)
    out = np.cos(qL) + np.sin(qL) * gamma * d3 / (scale * lam)
    return float(out) if out.ndim == 0 else out


def bloch_cos_from_t(t, qL):
    """cos(KL) = Re[exp(-iqL) / t], half the trace of one block matrix."""
    t = np.asarray(t, dtype=complex)
    if np.any(np.abs(t) < POLE_FLOOR):
        raise ZeroTransmission("t = 0 has no Bloch phase")
    out = np.real(np.exp(-1j * np.asarray(qL)) / t)
    return float(out) if out.ndim == 0 else out


def poles(emitter: EmitterConfig, dispersion: DispersionModel) -> np.ndarray:
    """Real frequencies where the dispersion-relation denominator vanishes."""
    centre = emitter.omega2 - emitter.delta / 2
    half = math.hypot(emitter.delta, emitter.omega_rabi) / 2
    out = [centre - half, centre + half]
    if isinstance(dispersion, Nonlinear):
        out.append(0.0)
    return np.unique(out)


def scan_grid(lo: float, hi: float, emitter: EmitterConfig, dispersion: DispersionModel,
              resolution: float = DEFAULT_RESOLUTION) -> np.ndarray:
    """Uniform grid over [lo, hi] with pole neighbourhoods removed."""
    n = int(math.ceil((hi - lo) / resolution)) + 1
    grid = np.linspace(lo, hi, n)
    keep = np.ones(n, dtype=bool)
    for p in poles(emitter, dispersion):
        keep &= np.abs(grid - p) > POLE_EXCLUSION
    if isinstance(dispersion, Nonlinear):
        keep &= grid > 0
    return grid[keep]


def band_points(omega, emitter, coupling, dispersion, lattice) -> list[BandPoint]:
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    c = np.atleast_1d(bloch_cos_closed(omega, emitter, coupling, dispersion, lattice))
    L = lattice.length(coupling.v_g, emitter.omega2)
    out = []
    for w, x in zip(omega.tolist(), c.tolist()):
        if abs(x) > 1:
            out.append(BandPoint(w, x, None, math.acosh(abs(x)) / L))
        else:
            out.append(BandPoint(w, x, math.acos(x) / L, None))
    return out


def _refine_edge(cos_kl, a, b):
    g = lambda w: abs(cos_kl(w)) - 1.0
    ga, gb = g(a), g(b)
    if ga == 0:
        return a
    if gb == 0:
        return b
    if np.sign(ga) == np.sign(gb):
        return 0.5 * (a + b)
    return bisect(g, a, b, xtol=EDGE_XTOL)


def _runs(flags):
    flags = np.asarray(flags, dtype=bool)
    cuts = np.nonzero(flags[1:] != flags[:-1])[0] + 1
    starts = np.concatenate(([0], cuts))
    stops = np.concatenate((cuts, [len(flags)]))
    return list(zip(starts.tolist(), stops.tolist()))


def classify_band(points, cos_kl=None) -> list[BandInterval]:
    """Maximal allowed/forbidden runs of an omega-ordered scan.

    With ``cos_kl`` (a callable omega -> cos KL) inner edges are refined
    by bisection on |cos KL| = 1; otherwise they sit midway between samples.
    """
    if len(points) == 0:
        return []
    omegas = np.array([p.omega for p in points])
    flags = np.array([p.forbidden for p in points])
    runs = _runs(flags)
    for k, (start, stop) in enumerate(runs):
        if 0 < k < len(runs) - 1 and stop - start < 3:
            raise GridTooCoarse(
                f"band run near omega={omegas[start]:.6g} spans {stop - start} samples; refine the grid")
    edges = []
    for start, _ in runs[1:]:
        a, b = omegas[start - 1], omegas[start]
        edges.append(_refine_edge(cos_kl, a, b) if cos_kl else 0.5 * (a + b))
    bounds = [omegas[0]] + edges + [omegas[-1]]
    return [
        BandInterval("forbidden" if flags[start] else "allowed", float(bounds[k]), float(bounds[k + 1]))
        for k, (start, _) in enumerate(runs)
    ]


def bands(lo, hi, emitter, coupling, dispersion, lattice, resolution=DEFAULT_RESOLUTION):
    """Scan [lo, hi] and return (points, intervals)."""
    grid = scan_grid(lo, hi, emitter, dispersion, resolution)
    pts = band_points(grid, emitter, coupling, dispersion, lattice)
    f = functools.partial(bloch_cos_closed, emitter=emitter, coupling=coupling,
                          dispersion=dispersion, lattice=lattice)
    return pts, classify_band(pts, f)


def gap_above_resonance(emitter, coupling, dispersion, lattice,
                        resolution=DEFAULT_RESOLUTION) -> BandInterval:
    """First forbidden band whose interior reaches above omega2."""
    w2 = emitter.omega2
    lo, hi = 0.9 * w2, 2.0 * w2
    cos_kl = functools.partial(bloch_cos_closed, emitter=emitter, coupling=coupling,
                               dispersion=dispersion, lattice=lattice)
    while True:
        grid = scan_grid(lo, hi, emitter, dispersion, resolution)
        flags = np.abs(cos_kl(grid)) > 1
        found = None
        for start, stop in _runs(flags):
            if flags[start] and grid[stop - 1] > w2 and grid[start] < 2 * w2:
                found = (start, stop)
                break
        if found is None:
            raise NoGapFound("no forbidden band intersects (omega2, 2 omega2)")
        start, stop = found
        if stop == len(grid):
            if hi >= MAX_GAP_SEARCH * w2:
                raise NoGapFound(f"forbidden band extends beyond {hi:g}")
            hi = min(2 * hi, MAX_GAP_SEARCH * w2)
            continue
        lower = lo if start == 0 else _refine_edge(cos_kl, grid[start - 1], grid[start])
        upper = _refine_edge(cos_kl, grid[stop - 1], grid[stop])
        return BandInterval("forbidden", float(lower), float(upper))


def gap_end_above_resonance(emitter, coupling, dispersion, lattice,
                            resolution=DEFAULT_RESOLUTION) -> float:
    return gap_above_resonance(emitter, coupling, dispersion, lattice, resolution).omega_end


@functools.lru_cache(maxsize=64)
def _linear_gap_end(emitter, coupling, lattice, resolution):
    return gap_end_above_resonance(emitter, coupling, Linear(coupling.v_g), lattice, resolution)


def gap_difference(J: float, emitter: EmitterConfig, coupling: CouplingConfig,
                   lattice: LatticeConfig, resolution=DEFAULT_RESOLUTION) -> float:
    """omega_lB - omega_nlB for hopping rate J."""
    linear_end = _linear_gap_end(emitter, coupling, lattice, resolution)
    return linear_end - gap_end_above_resonance(emitter, coupling, Nonlinear(J), lattice, resolution)


def default_j_grid() -> np.ndarray:
    return np.geomspace(1.2, 5.0, 20)


def gap_samples(js, emitter, coupling, lattice, resolution=DEFAULT_RESOLUTION):
    """[(J, delta_omega_B)] in ascending J."""
    js = sorted(float(j) for j in js)
    _linear_gap_end(emitter, coupling, lattice, resolution)
    diffs = ordered_map(lambda j: gap_difference(j, emitter, coupling, lattice, resolution), js)
    return list(zip(js, diffs))


def gap_crossing(emitter, coupling, lattice, bracket=(0.5, 2.5), resolution=DEFAULT_RESOLUTION) -> float:
    """Hopping rate J where delta_omega_B changes sign."""
    f = lambda J: gap_difference(J, emitter, coupling, lattice, resolution)
    return brentq(f, *bracket, xtol=1e-8)


def fit_gap_law(samples) -> GapFit:
    """Least-squares fit of delta_omega_B = a ln J + xi; b = exp(1/a).

    Intended for >= 8 samples covering J in [1.2, 5]; raises DegenerateFit
    when the slope is undetermined or non-positive.
    """
    samples = sorted((float(j), float(d)) for j, d in samples)
    js = np.array([s[0] for s in samples])
    ds = np.array([s[1] for s in samples])
    if len(samples) < 2 or np.any(js <= 0) or np.unique(js).size < 2:
        raise DegenerateFit("need at least two distinct positive J values")
    design = np.column_stack([np.log(js), np.ones_like(js)])
    (a, xi), _, rank, _ = np.linalg.lstsq(design, ds, rcond=None)
    if rank < 2:
        raise DegenerateFit("design matrix is rank deficient")
    if not a > 1e-12 * max(1.0, np.max(np.abs(ds))):
        raise DegenerateFit(f"non-positive slope {a:g}: log base undefined")
    base = math.exp(1.0 / a)
    if not math.isfinite(base):
        raise DegenerateFit(f"slope {a:g} too small for a finite log base")
    resid = design @ np.array([a, xi]) - ds
    return GapFit(base, float(xi), float(np.sqrt(np.mean(resid**2))), tuple(samples))
