import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wqed.errors import DegenerateDenominator, InvalidHopping
from wqed.model import (CouplingConfig, EmitterConfig, Linear, Nonlinear, Setup, amplitudes_linear,
                        amplitudes_nonlinear, complex_detunings)

from conftest import OC_COUPLING, OC_EMITTER

rates = st.floats(1e-3, 10.0)
grid = np.linspace(0.01, 3.0, 10_000)


def test_detunings_on_resonance_lossless():
    assert complex_detunings(1.0, EmitterConfig()) == (0, 0)


def test_detunings_fig2_loss():
    d2, d3 = complex_detunings(1.0, EmitterConfig(gamma2=0.1))
    assert d2 == pytest.approx(0.05j)
    assert d3 == 0


def test_detunings_arithmetic():
    d2, d3 = complex_detunings(1.1, EmitterConfig(delta=0.2))
    assert d2 == pytest.approx(0.1)
    assert d3 == pytest.approx(0.3)


def test_poles_follow_fields():
    e = EmitterConfig(1.0, 0.3, 0.2, 0.4, 0.1)
    assert e.pole2 == complex(1.0, -0.1)
    assert e.pole3 == complex(0.7, -0.2)


@pytest.mark.parametrize("kwargs", [dict(gamma2=-1), dict(gamma3=-0.1), dict(omega_rabi=-1), dict(omega2=0)])
def test_emitter_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        EmitterConfig(**kwargs)


def test_coupling_from_amplitudes_is_exact():
    c = CouplingConfig.from_amplitudes(0.3, 0.5, v_g=2.0)
    assert c.gamma_L == 2 * 0.3**2 / 2.0
    assert c.gamma_R == 2 * 0.5**2 / 2.0
    assert c.V_L == pytest.approx(0.3)
    assert not c.symmetric()
    assert CouplingConfig.symmetric_rate(0.4).symmetric()


def test_nonlinear_requires_positive_hopping():
    with pytest.raises(InvalidHopping):
        Nonlinear(0.0)
    with pytest.raises(InvalidHopping):
        amplitudes_nonlinear(0.5, OC_EMITTER, OC_COUPLING, -1.0)
    assert Nonlinear(2.5).omega_J == 0.0


def test_nonlinear_rejects_nonpositive_frequency():
    with pytest.raises(ValueError):
        amplitudes_nonlinear(0.0, OC_EMITTER, OC_COUPLING, 1.0)


@pytest.mark.parametrize("gamma", [0.05, 0.4, 3.0])
@pytest.mark.parametrize("gamma2", [0.0, 0.1])
def test_linear_eit_point(gamma, gamma2):
    e = EmitterConfig(1.0, 0.0, gamma2, 0.0, 0.2)
    res = amplitudes_linear(1.0, e, CouplingConfig.symmetric_rate(gamma))
    assert res.t == 1 and res.r == 0
    assert res.T == 1 and res.R == 0


def test_linear_dip_value():
    # at omega = 1 + Omega/2 the closed form reduces to gamma2 / (gamma2 + Gamma)
    res = amplitudes_linear(1.1, OC_EMITTER, OC_COUPLING)
    assert res.T == pytest.approx(1 / 25, abs=1e-12)


def test_two_level_full_reflection():
    res = amplitudes_linear(1.0, EmitterConfig(delta=0.5), CouplingConfig.symmetric_rate(0.3))
    assert abs(res.t) < 1e-15
    assert abs(res.r) == pytest.approx(1.0)


def test_degenerate_denominator():
    with pytest.raises(DegenerateDenominator):
        amplitudes_linear(1.0, EmitterConfig(), CouplingConfig(0.0, 0.0))


@pytest.mark.parametrize("J", [0.5, 1.0, 2.5])
def test_nonlinear_eit_point(J):
    res = amplitudes_nonlinear(1.0, OC_EMITTER, OC_COUPLING, J)
    assert res.t == 1 and res.r == 0


def test_nonlinear_side_peak_below_resonance():
    setup = Setup(OC_EMITTER, OC_COUPLING, Nonlinear(2.5))
    w = np.linspace(0.3, 0.7, 4001)
    T = setup.transmission(w)
    inner = (T[1:-1] > T[:-2]) & (T[1:-1] > T[2:])
    assert inner.any()


@pytest.mark.parametrize("dispersion", [Linear(), Nonlinear(0.5), Nonlinear(2.5)])
def test_lossless_unitarity_on_grid(dispersion):
    setup = Setup(EmitterConfig(1.0, 0.0, 0.0, 0.0, 0.2), OC_COUPLING, dispersion)
    res = setup.amplitudes(grid)
    assert np.max(np.abs(res.T + res.R - 1)) < 1e-12


@pytest.mark.parametrize("dispersion", [Linear(), Nonlinear(1.0)])
def test_passivity_on_grid(dispersion):
    res = Setup(OC_EMITTER, OC_COUPLING, dispersion).amplitudes(grid)
    assert np.all(res.T + res.R <= 1 + 1e-12)
    assert np.all((res.T >= 0) & (res.T <= 1) & (res.R >= 0) & (res.R <= 1))


@settings(max_examples=200, deadline=None)
@given(gamma2=st.floats(0, 5), gamma=st.floats(1e-3, 5), rabi=st.floats(1e-3, 2), J=rates,
       nonlinear=st.booleans())
def test_exact_transparency_property(gamma2, gamma, rabi, J, nonlinear):
    e = EmitterConfig(1.0, 0.0, gamma2, 0.0, rabi)
    disp = Nonlinear(J) if nonlinear else Linear()
    res = Setup(e, CouplingConfig.symmetric_rate(gamma), disp).amplitudes(1.0)
    assert res.t == 1 + 0j and res.r == 0


@settings(max_examples=200, deadline=None)
@given(delta=st.floats(1e-4, 2.5), gamma2=st.floats(0, 3), gamma=rates, rabi=st.floats(0, 2))
def test_mirror_symmetry_linear(delta, gamma2, gamma, rabi):
    e = EmitterConfig(1.0, 0.0, gamma2, 0.0, rabi)
    c = CouplingConfig.symmetric_rate(gamma)
    hi, lo = amplitudes_linear(1 + delta, e, c), amplitudes_linear(1 - delta, e, c)
    assert hi.T == pytest.approx(lo.T, rel=1e-10, abs=1e-14)
    assert hi.R == pytest.approx(lo.R, rel=1e-10, abs=1e-14)


def test_two_level_reduction(rng):
    for _ in range(100):
        e = EmitterConfig(1.0, rng.uniform(-1, 1), rng.uniform(0, 1), rng.uniform(0, 1), 0.0)
        c = CouplingConfig(rng.uniform(0.01, 2), rng.uniform(0.01, 2))
        w = rng.uniform(0.1, 2)
        d2 = w - e.pole2
        expected = (d2 + 1j * (c.gamma_L - c.gamma_R) / 4) / (d2 + 1j * (c.gamma_L + c.gamma_R) / 4)
        assert amplitudes_linear(w, e, c).t == pytest.approx(expected, rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(w=st.floats(0.01, 3), gamma_L=rates, gamma_R=rates, J=rates)
def test_lossless_symmetric_flux_property(w, gamma_L, gamma_R, J):
    e = EmitterConfig(1.0, 0.1, 0.0, 0.0, 0.3)
    c = CouplingConfig.symmetric_rate(gamma_L)
    for res in (amplitudes_linear(w, e, c), amplitudes_nonlinear(w, e, c, J)):
        assert res.T + res.R == pytest.approx(1.0, abs=1e-12)


def test_vectorized_matches_scalar(oc_nonlinear):
    w = np.array([0.2, 0.7, 1.3])
    vec = oc_nonlinear.amplitudes(w)
    for i, x in enumerate(w):
        assert vec.t[i] == pytest.approx(oc_nonlinear.amplitudes(x).t, rel=1e-14)


def test_setup_rejects_inconsistent_group_velocity():
    with pytest.raises(ValueError):
        Setup(OC_EMITTER, CouplingConfig(0.4, 0.4, v_g=2.0), Linear(1.0))
    with pytest.raises(ValueError):
        Setup(OC_EMITTER, CouplingConfig(0.4, 0.4, v_g=2.0), Nonlinear(1.0))
    assert math.isclose(Setup(OC_EMITTER, CouplingConfig(0.4, 0.4, 2.0), Linear(2.0)).transmission(1.0), 1.0)
