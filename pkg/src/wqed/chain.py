"""Transfer matrices for periodic chains of identical emitters."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ZeroTransmission, LossyInputWarning
from .model import CouplingConfig, DispersionModel, EmitterConfig, amplitudes

ZERO_T_FLOOR = 1e-30


class PhaseMode(str, Enum):
    FREQUENCY_DEPENDENT = "frequency_dependent"
    RESONANT = "resonant"


@dataclass(frozen=True)
class LatticeConfig:
    """N emitters with spacing given in units of the resonant wavelength."""

    n_emitters: int = 1
    spacing: float = 0.5
    phase_mode: PhaseMode = PhaseMode.FREQUENCY_DEPENDENT

    def __post_init__(self):
        if int(self.n_emitters) != self.n_emitters or self.n_emitters < 1:
            raise ValueError("n_emitters must be an integer >= 1")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValueError("spacing must be > 0")
        object.__setattr__(self, "phase_mode", PhaseMode(self.phase_mode))

    def length(self, v_g: float = 1.0, omega2: float = 1.0) -> float:
        """Absolute spacing, spacing * 2 pi v_g / omega2."""
        return self.spacing * 2 * math.pi * v_g / omega2


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", np.asarray(self.m, dtype=complex).reshape(2, 2))

    m11 = property(lambda self: self.m[0, 0])
    m12 = property(lambda self: self.m[0, 1])
    m21 = property(lambda self: self.m[1, 0])
    m22 = property(lambda self: self.m[1, 1])

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(self.m @ other.m)

    def __pow__(self, n: int) -> "TransferMatrix":
        return TransferMatrix(np.linalg.matrix_power(self.m, n))

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.m))

    @property
    def transmission(self) -> float:
        """Net transmission probability 1/|m22|^2."""
        return 1.0 / abs(self.m22) ** 2

    @property
    def reflection(self) -> float:
        return abs(self.m21 / self.m22) ** 2

    def allclose(self, other: "TransferMatrix", rtol=1e-10, atol=0.0) -> bool:
        return np.allclose(self.m, other.m, rtol=rtol, atol=atol)


def _emitter_array(t, r):
    t = np.asarray(t, dtype=complex)
    r = np.asarray(r, dtype=complex)
    if np.any(np.abs(t) < ZERO_T_FLOOR):
        raise ZeroTransmission("emitter reflects perfectly; no finite transfer matrix")
    tc = np.conj(t)
    m = np.empty(t.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = 1 / tc
    m[..., 0, 1] = -np.conj(r) / tc
    m[..., 1, 0] = -r / t
    m[..., 1, 1] = 1 / t
    return m


def _free_array(qL):
    qL = np.asarray(qL, dtype=float)
    m = np.zeros(qL.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = np.exp(1j * qL)
    m[..., 1, 1] = np.exp(-1j * qL)
    return m


def emitter_matrix(t: complex, r: complex) -> TransferMatrix:
    return TransferMatrix(_emitter_array(t, r))


def free_matrix(qL: float) -> TransferMatrix:
    return TransferMatrix(_free_array(qL))


def phase(omega, lattice: LatticeConfig, coupling: CouplingConfig, omega2: float = 1.0):
    """Propagation phase qL between neighbouring emitters."""
    L = lattice.length(coupling.v_g, omega2)
    omega = np.asarray(omega, dtype=float)
    if lattice.phase_mode is PhaseMode.RESONANT:
        qL = np.full(omega.shape, omega2 / coupling.v_g * L)
    else:
        qL = omega / coupling.v_g * L
    return float(qL) if qL.ndim == 0 else qL


def block_matrices(omega, emitter, coupling, dispersion, lattice) -> np.ndarray:
    """Stack of single-block matrices M_QE @ M_F, shape (..., 2, 2)."""
    res = amplitudes(omega, emitter, coupling, dispersion)
    qL = phase(omega, lattice, coupling, emitter.omega2)
    return _emitter_array(res.t, res.r) @ _free_array(qL)


def chain_matrix(omega: float, emitter: EmitterConfig, coupling: CouplingConfig,
                 dispersion: DispersionModel, lattice: LatticeConfig) -> TransferMatrix:
    block = block_matrices(omega, emitter, coupling, dispersion, lattice)
    return TransferMatrix(np.linalg.matrix_power(block, lattice.n_emitters))


def chain_power_spectrum(omega, emitter, coupling, dispersion, lattice):
    """(T_N, R_N) from the N-th power of the block matrix, vectorized over omega."""
    block = block_matrices(omega, emitter, coupling, dispersion, lattice)
    total = np.linalg.matrix_power(block, lattice.n_emitters)
    m21, m22 = total[..., 1, 0], total[..., 1, 1]
    return (1.0 / np.abs(m22)) ** 2, np.abs(m21 / m22) ** 2


def chebyshev_u(n: int, x):
    """Chebyshev polynomial of the second kind U_n(x), any real x."""
    x = np.asarray(x, dtype=float)
    if n < 0:
        raise ValueError("n must be >= 0")
    prev, cur = np.ones_like(x), 2 * x
    if n == 0:
        return prev
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n - 1):
            prev, cur = cur, 2 * x * cur - prev
    return cur


def _warn_if_lossy(t, r):
    flux = np.abs(t) ** 2 + np.abs(r) ** 2
    if np.any(np.abs(flux - 1) > 1e-6):
        warnings.warn("Chebyshev chain formula assumes |t|^2 + |r|^2 = 1; input is lossy",
                      LossyInputWarning, stacklevel=3)


def chebyshev_transmission(n: int, t, r, qL):
    """Lossless N-emitter transmission from Chebyshev's identity.

    T_N = 1 / (1 + |r/t|^2 U_{N-1}(cos KL)^2) with cos KL = Re[exp(-iqL)/t],
    i.e. sin(NKL)/sin(KL) evaluated through the Bloch phase of one block.
    """
    t = np.asarray(t, dtype=complex)
    r = np.asarray(r, dtype=complex)
    if n < 1:
        raise ValueError("n must be >= 1")
    if np.any(np.abs(t) < ZERO_T_FLOOR):
        raise ZeroTransmission("emitter reflects perfectly")
    _warn_if_lossy(t, r)
    cos_kl = np.real(np.exp(-1j * np.asarray(qL)) / t)
    u = chebyshev_u(n - 1, cos_kl)
    with np.errstate(over="ignore", invalid="ignore"):
        out = 1.0 / (1.0 + np.abs(r / t) ** 2 * u**2)
    out = np.where(np.isnan(out), 0.0, out)
    return float(out) if out.ndim == 0 else out


def printed_chebyshev_transmission(n: int, t, r, qL):
    """T_N with the free-propagation phase in place of the Bloch phase.

    Only equals the matrix-power result when r = 0 or N = 1; kept for
    comparison.  |sin qL| < 1e-8 uses the limit N cos(NqL)/cos(qL).
    """
    t = np.asarray(t, dtype=complex)
    r = np.asarray(r, dtype=complex)
    qL = np.asarray(qL, dtype=float)
    if np.any(np.abs(t) < ZERO_T_FLOOR):
        raise ZeroTransmission("emitter reflects perfectly")
    _warn_if_lossy(t, r)
    s = np.sin(qL)
    near = np.abs(s) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(near, n * np.cos(n * qL) / np.cos(qL), np.sin(n * qL) / np.where(near, 1.0, s))
    out = 1.0 / (1.0 + np.abs(r / t) ** 2 * ratio**2)
    return float(out) if out.ndim == 0 else out


def chain_spectrum(omega, emitter, coupling, dispersion, lattice, method="auto"):
    """Chain (T_N, R_N, method_used).

    ``auto`` uses the Chebyshev form for lossless emitters and the matrix
    power otherwise.
    """
    if method == "auto":
        method = "chebyshev" if emitter.lossless else "power"
    if method == "power":
        T, R = chain_power_spectrum(omega, emitter, coupling, dispersion, lattice)
        return T, R, method
    if method != "chebyshev":
        raise ValueError(f"unknown method {method!r}")
    res = amplitudes(omega, emitter, coupling, dispersion)
    qL = phase(omega, lattice, coupling, emitter.omega2)
    T = chebyshev_transmission(lattice.n_emitters, res.t, res.r, qL)
    return T, 1.0 - T, method
