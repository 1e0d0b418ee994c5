import numpy as np
import pytest

from wqed.errors import InvalidWindow, StepTooLarge
from wqed.model import Nonlinear, Setup
from wqed.spectral import find_spectral_features, transmission_derivative, transmission_reflection_crossings

from conftest import OC_COUPLING, OC_EMITTER


def analytic_slope(w, gamma2=0.1, gamma=0.4, rabi=0.2):
    """dT/domega of the symmetric linear model by the quotient rule."""
    d2 = w - (1 - 0.5j * gamma2)
    d3 = w - 1.0
    c = 0.5j * gamma
    num, den = d3 * d2 - rabi**2 / 4, d3 * (d2 + c) - rabi**2 / 4
    dnum, dden = d2 + d3, d2 + c + d3
    t = num / den
    dt = (dnum * den - num * dden) / den**2
    return 2 * np.real(np.conj(t) * dt)


def test_derivative_vanishes_at_eit_peak(oc_linear, oc_nonlinear):
    assert abs(transmission_derivative(1.0, oc_linear)) < 1e-6
    assert abs(transmission_derivative(1.0, oc_nonlinear)) < 1e-6


def test_derivative_matches_quotient_rule(oc_linear):
    w = np.linspace(0.5, 1.5, 97)
    w = w[np.min(np.abs(w[:, None] - [0.9, 1.0, 1.1]), axis=1) > 1e-3]
    np.testing.assert_allclose(transmission_derivative(w, oc_linear), analytic_slope(w), rtol=1e-6, atol=1e-7)


def test_derivative_small_on_plateau(oc_nonlinear):
    plateaus = [f for f in find_spectral_features(oc_nonlinear, (0.1, 0.9)) if f.kind == "plateau"]
    assert plateaus
    for p in plateaus:
        assert abs(transmission_derivative(p.omega, oc_nonlinear)) < 0.05


def test_derivative_step_too_large(oc_linear):
    with pytest.raises(StepTooLarge):
        transmission_derivative(0.95, oc_linear, h=0.05)
    with pytest.raises(ValueError):
        transmission_derivative(0.95, oc_linear, h=0.0)


def test_linear_features(oc_linear):
    feats = find_spectral_features(oc_linear, (0.5, 1.5))
    peaks = [f for f in feats if f.kind == "peak"]
    dips = sorted((f for f in feats if f.kind == "dip"), key=lambda f: f.omega)
    assert len(peaks) == 1 and abs(peaks[0].omega - 1.0) < 1e-6
    assert len(dips) == 2
    assert dips[0].omega == pytest.approx(0.9, abs=1e-4)
    assert dips[1].omega == pytest.approx(1.1, abs=1e-4)
    assert dips[0].T == pytest.approx(0.04, abs=1e-8)


def test_plateau_only_nonlinear(oc_linear, oc_nonlinear):
    nl = [f for f in find_spectral_features(oc_nonlinear, (0.1, 0.9)) if f.kind == "plateau"]
    lin = [f for f in find_spectral_features(oc_linear, (0.1, 0.9)) if f.kind == "plateau"]
    assert nl and not lin
    assert all(f.width >= 0.02 and f.omega_lo < f.omega < f.omega_hi for f in nl)


def test_side_peak_below_resonance(oc_nonlinear):
    peaks = [f for f in find_spectral_features(oc_nonlinear, (0.3, 0.7)) if f.kind == "peak"]
    assert any(0.3 < f.omega < 0.7 for f in peaks)


@pytest.mark.parametrize("window, n", [((1.0, 1.0), 4001), ((1.5, 0.5), 4001), ((0.5, 1.5), 50)])
def test_invalid_window(oc_linear, window, n):
    with pytest.raises(InvalidWindow):
        find_spectral_features(oc_linear, window, grid_n=n)


def test_four_crossings(oc_linear):
    x = transmission_reflection_crossings(oc_linear, (0.5, 1.5))
    assert len(x) == 4
    res = oc_linear.amplitudes(x)
    np.testing.assert_allclose(res.T, res.R, atol=1e-7)
    # mirror symmetry of the linear model pairs the crossings about resonance
    np.testing.assert_allclose(x + x[::-1], 2.0, atol=1e-7)


def test_no_crossings_without_coupling():
    from wqed.model import CouplingConfig
    setup = Setup(OC_EMITTER, CouplingConfig(0.0, 0.0), Nonlinear(1.0))
    assert len(transmission_reflection_crossings(setup, (0.5, 1.5), n=2001)) == 0
