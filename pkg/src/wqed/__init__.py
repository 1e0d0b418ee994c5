"""Single-photon EIT transport in waveguide QED with linear and cosine dispersion."""

from .bands import (BandInterval, BandPoint, GapFit, bloch_cos_closed, bloch_cos_from_t, classify_band,
                    fit_gap_law, gap_difference, gap_end_above_resonance)
from .chain import (LatticeConfig, PhaseMode, TransferMatrix, chain_matrix, chebyshev_transmission,
                    emitter_matrix, free_matrix, phase)
from .config import RunConfig, parse_config, preset
from .model import (CouplingConfig, EmitterConfig, Linear, Nonlinear, ScatteringResult, Setup,
                    amplitudes, amplitudes_linear, amplitudes_nonlinear, complex_detunings)
from .oracle import OracleSolution, solve_single_emitter
from .spectral import find_spectral_features, transmission_derivative

__version__ = "0.1.0"
