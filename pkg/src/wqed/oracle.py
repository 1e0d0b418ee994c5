"""Independent checks: direct solution of the amplitude equations and scans."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import LatticeConfig, chain_power_spectrum, chebyshev_transmission, phase
from .errors import SingularSystem
from .model import CouplingConfig, DispersionModel, EmitterConfig, Nonlinear, Setup, amplitudes

MAX_CONDITION = 1e14


@dataclass(frozen=True)
class OracleSolution:
    t: complex
    r: complex
    e2: complex
    e3: complex
    residual: float

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    @property
    def R(self) -> float:
        return abs(self.r) ** 2


def amplitude_system(omega: float, emitter: EmitterConfig, coupling: CouplingConfig,
                     dispersion: DispersionModel):
    """Matrix and right-hand side for the unknowns (t, r, e2, e3).

    The two boundary rows share one form, -i a t + V_R e2 = -i a and
    -i a r + V_L e2 = 0, with a = v_g (linear) or J omega / v_g (nonlinear).
    """
    v_g = coupling.v_g
    if isinstance(dispersion, Nonlinear):
        if omega <= 0:
            raise ValueError("nonlinear dispersion requires omega > 0")
        a = dispersion.J * omega / v_g
    else:
        a = v_g
    V_L, V_R = coupling.V_L, coupling.V_R
    half_rabi = emitter.omega_rabi / 2
    d2 = omega - emitter.pole2
    d3 = omega - emitter.pole3
    A = np.array([
        [-1j * a, 0, V_R, 0],
        [0, -1j * a, V_L, 0],
        [V_R / 2, V_L / 2, -d2, half_rabi],
        [0, 0, half_rabi, -d3],
    ], dtype=complex)
    b = np.array([-1j * a, 0, -V_R / 2, 0], dtype=complex)
    return A, b


def solve_single_emitter(omega: float, emitter: EmitterConfig, coupling: CouplingConfig,
                         dispersion: DispersionModel) -> OracleSolution:
    A, b = amplitude_system(float(omega), emitter, coupling, dispersion)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularSystem(f"amplitude equations are singular (cond={cond:.3g}) at omega={omega!r}")
    x = np.linalg.solve(A, b)
    residual = np.linalg.norm(A @ x - b) / np.linalg.norm(b)
    return OracleSolution(*x, residual=float(residual))


def unitarity_scan(setup: Setup, lo: float, hi: float, n: int) -> float:
    """max |T + R - 1| over an n-point grid."""
    if n < 100:
        raise ValueError("n must be >= 100")
    res = setup.amplitudes(np.linspace(lo, hi, n))
    return float(np.max(np.abs(res.T + res.R - 1)))


def chebyshev_vs_power_scan(emitter: EmitterConfig, coupling: CouplingConfig,
                            dispersion: DispersionModel, lattice: LatticeConfig,
                            n_max: int, omegas) -> float:
    """max relative |T_cheb - T_power| over omegas x N in 1..n_max.

    Points within 1e-4 of qL = m pi are excluded, as are points where
    both transmissions underflow below the smallest normal float.
    """
    omegas = np.asarray(omegas, dtype=float)
    qL = phase(omegas, lattice, coupling, emitter.omega2)
    dist = np.abs(qL - np.pi * np.round(qL / np.pi))
    omegas = omegas[dist > 1e-4]
    res = amplitudes(omegas, emitter, coupling, dispersion)
    qL = phase(omegas, lattice, coupling, emitter.omega2)
    worst = 0.0
    for n in range(1, n_max + 1):
        lat = LatticeConfig(n, lattice.spacing, lattice.phase_mode)
        t_power, _ = chain_power_spectrum(omegas, emitter, coupling, dispersion, lat)
        t_cheb = chebyshev_transmission(n, res.t, res.r, qL)
        # both below the normal float range: no relative comparison possible
        normal = np.maximum(t_cheb, t_power) >= np.finfo(float).tiny
        rel = np.abs(t_cheb - t_power)[normal] / t_power[normal]
        if rel.size:
            worst = max(worst, float(np.max(rel)))
    return worst


def random_setup(rng: np.random.Generator, nonlinear: bool, lo=1e-3, hi=10.0):
    """(omega, Setup) with every frequency/rate log-uniform in [lo, hi]."""
    def draw():
        return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))

    emitter = EmitterConfig(1.0, draw() * rng.choice([-1.0, 1.0]), draw(), draw(), draw())
    coupling = CouplingConfig(draw(), draw())
    dispersion = Nonlinear(draw()) if nonlinear else None
    setup = Setup(emitter, coupling, dispersion) if nonlinear else Setup(emitter, coupling)
    return draw(), setup


def closed_form_error(omega: float, setup: Setup) -> float:
    """Norm-wise relative distance between closed-form and solved (t, r)."""
    cf = setup.amplitudes(omega)
    sol = solve_single_emitter(omega, setup.emitter, setup.coupling, setup.dispersion)
    return float(np.hypot(abs(cf.t - sol.t), abs(cf.r - sol.r)) / np.hypot(abs(sol.t), abs(sol.r)))
