"""Emitter, coupling and dispersion types plus single-emitter amplitudes.

Everything is dimensionless: frequencies and rates in units of the
|1>-|2> transition frequency, group velocity 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DegenerateDenominator, InvalidHopping

DENOMINATOR_FLOOR = 1e-30


@dataclass(frozen=True)
class EmitterConfig:
    """Three-level Lambda emitter.

    ``delta`` is the pump detuning; level 3 sits at ``omega2 - delta``.
    """

    omega2: float = 1.0
    delta: float = 0.0
    gamma2: float = 0.0
    gamma3: float = 0.0
    omega_rabi: float = 0.0

    def __post_init__(self):
        for name in ("omega2", "delta", "gamma2", "gamma3", "omega_rabi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.omega2 <= 0:
            raise ValueError("omega2 must be > 0")
        for name in ("gamma2", "gamma3", "omega_rabi"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def pole2(self) -> complex:
        return complex(self.omega2, -self.gamma2 / 2)

    @property
    def pole3(self) -> complex:
        return complex(self.omega2 - self.delta, -self.gamma3 / 2)

    @property
    def lossless(self) -> bool:
        return self.gamma2 == 0 and self.gamma3 == 0


@dataclass(frozen=True)
class CouplingConfig:
    """Directional emitter-waveguide decay rates, Gamma_d = 2 V_d**2 / v_g."""

    gamma_L: float
    gamma_R: float
    v_g: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma_L) and math.isfinite(self.gamma_R)):
            raise ValueError("coupling rates must be finite")
        if self.gamma_L < 0 or self.gamma_R < 0:
            raise ValueError("coupling rates must be >= 0")
        if not (self.v_g > 0 and math.isfinite(self.v_g)):
            raise ValueError("v_g must be > 0")

    @classmethod
    def from_amplitudes(cls, V_L: float, V_R: float, v_g: float = 1.0) -> "CouplingConfig":
        return cls(2 * V_L**2 / v_g, 2 * V_R**2 / v_g, v_g)

    @classmethod
    def symmetric_rate(cls, gamma: float, v_g: float = 1.0) -> "CouplingConfig":
        return cls(gamma, gamma, v_g)

    @property
    def V_L(self) -> float:
        return math.sqrt(self.gamma_L * self.v_g / 2)

    @property
    def V_R(self) -> float:
        return math.sqrt(self.gamma_R * self.v_g / 2)

    def symmetric(self) -> bool:
        return self.gamma_L == self.gamma_R


@dataclass(frozen=True)
class Linear:
    v_g: float = 1.0

    def __post_init__(self):
        if not self.v_g > 0:
            raise ValueError("v_g must be > 0")


@dataclass(frozen=True)
class Nonlinear:
    """Cosine dispersion omega(k) = omega_J - 2J cos(kL) with omega_J = 0."""

    J: float

    def __post_init__(self):
        if not (self.J > 0 and math.isfinite(self.J)):
            raise InvalidHopping(f"hopping rate J must be > 0, got {self.J!r}")

    @property
    def omega_J(self) -> float:
        return 0.0


DispersionModel = Union[Linear, Nonlinear]


@dataclass(frozen=True)
class ScatteringResult:
    """Transmission and reflection amplitudes; scalars or same-shape arrays."""

    t: complex | np.ndarray
    r: complex | np.ndarray

    @property
    def T(self):
        return np.abs(self.t) ** 2

    @property
    def R(self):
        return np.abs(self.r) ** 2


def complex_detunings(omega, emitter: EmitterConfig):
    """Return ``(omega - pole2, omega - pole3)``."""
    return omega - emitter.pole2, omega - emitter.pole3


def _check_denominator(den):
    if np.any(np.abs(den) < DENOMINATOR_FLOOR):
        raise DegenerateDenominator("scattering denominator vanishes at this parameter point")


def amplitudes_linear(omega, emitter: EmitterConfig, coupling: CouplingConfig) -> ScatteringResult:
    omega = np.asarray(omega, dtype=float) if np.ndim(omega) else float(omega)
    d2, d3 = complex_detunings(omega, emitter)
    gl, gr = coupling.gamma_L, coupling.gamma_R
    quarter_rabi = emitter.omega_rabi**2 / 4
    den = d3 * (d2 + 1j * (gl + gr) / 4) - quarter_rabi
    _check_denominator(den)
    t = (d3 * (d2 + 1j * (gl - gr) / 4) - quarter_rabi) / den
    r = (-0.5j * math.sqrt(gl * gr) * d3) / den
    return ScatteringResult(t, r)


def amplitudes_nonlinear(omega, emitter: EmitterConfig, coupling: CouplingConfig, J: float) -> ScatteringResult:
    # Verbatim closed form in dimensionless units; the omega prefactor makes
    # omega = 0 singular, hence omega > 0.
    if not J > 0:
        raise InvalidHopping(f"hopping rate J must be > 0, got {J!r}")
    omega = np.asarray(omega, dtype=float) if np.ndim(omega) else float(omega)
    if np.any(np.asarray(omega) <= 0):
        raise ValueError("nonlinear dispersion requires omega > 0")
    d2, d3 = complex_detunings(omega, emitter)
    gl, gr = coupling.gamma_L, coupling.gamma_R
    rabi_term = omega * emitter.omega_rabi**2 / 4
    den = d3 * (omega * d2 + 1j * (gl + gr) / (4 * J)) - rabi_term
    _check_denominator(den)
    t = (d3 * (omega * d2 + 1j * (gl - gr) / (4 * J)) - rabi_term) / den
    r = (-2j * math.sqrt(gl * gr) * d3 / (4 * J)) / den
    return ScatteringResult(t, r)


def amplitudes(omega, emitter: EmitterConfig, coupling: CouplingConfig, dispersion: DispersionModel) -> ScatteringResult:
    if isinstance(dispersion, Nonlinear):
        return amplitudes_nonlinear(omega, emitter, coupling, dispersion.J)
    return amplitudes_linear(omega, emitter, coupling)


@dataclass(frozen=True)
class Setup:
    """One emitter, its coupling and the waveguide dispersion."""

    emitter: EmitterConfig
    coupling: CouplingConfig
    dispersion: DispersionModel = field(default_factory=Linear)

    def __post_init__(self):
        if isinstance(self.dispersion, Linear) and self.dispersion.v_g != self.coupling.v_g:
            raise ValueError("Linear.v_g must equal coupling.v_g")
        if isinstance(self.dispersion, Nonlinear) and self.coupling.v_g != 1.0:
            raise ValueError("nonlinear closed forms are dimensionless; use v_g = 1")

    def amplitudes(self, omega) -> ScatteringResult:
        return amplitudes(omega, self.emitter, self.coupling, self.dispersion)

    def transmission(self, omega):
        return self.amplitudes(omega).T

    def reflection(self, omega):
        return self.amplitudes(omega).R
