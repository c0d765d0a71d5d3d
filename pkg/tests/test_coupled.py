import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transmon_photon import coupled as cp
from transmon_photon.errors import (
    DispersiveApproximationWarning,
    DomainError,
    InversionError,
    ResonantLimitWarning,
)


def test_flux_dependence():
    assert cp.ej_at_flux(76.0, 0.0) == 76.0
    assert cp.ej_at_flux(76.0, 0.5) == pytest.approx(0.0, abs=1e-12)
    assert cp.ej_at_flux(1.0, 0.23) == pytest.approx(0.750, abs=5e-4)
    assert cp.ej_at_flux(1.0, 0.23) == pytest.approx(math.cos(0.23 * math.pi), rel=1e-14)


@given(st.floats(min_value=-3, max_value=3))
def test_flux_period_and_parity(phi):
    assert cp.ej_at_flux(1.0, phi + 1) == pytest.approx(cp.ej_at_flux(1.0, phi), abs=1e-12)
    assert cp.ej_at_flux(1.0, -phi) == pytest.approx(cp.ej_at_flux(1.0, phi), abs=1e-12)


def test_dispersive_shift_examples():
    assert cp.dispersive_shift(54.3, 0.990, 0.561) == pytest.approx(3.89, abs=0.02)
    assert cp.dispersive_shift(54.3, 1.5, 0.540) == pytest.approx(1.11, abs=0.005)
    # oracle: plain arithmetic on g^2 nu_C / (Delta (Delta - nu_C))
    assert cp.dispersive_shift(54.3, 1.5, 0.540) == pytest.approx(0.0543**2 * 0.540 / (1.5 * 0.96) * 1e3, rel=1e-12)
    assert cp.dispersive_shift(0.0, 1.5, 0.540) == 0.0


def test_dispersive_shift_near_pole():
    with pytest.warns(DispersiveApproximationWarning):
        cp.dispersive_shift(54.3, 0.5405, 0.540, kappa=1.4)
    with pytest.raises(DomainError):
        cp.dispersive_shift(54.3, 0.540, 0.540)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        cp.dispersive_shift(54.3, 0.990, 0.561, kappa=1.4)


def test_nu_c_from_chi():
    assert cp.nu_c_from_chi(3.9, 0.990, 54.3) * 1e3 == pytest.approx(561.0, abs=1.0)
    assert cp.nu_c_from_chi(1.11, 1.5, 54.3) * 1e3 == pytest.approx(540.0, abs=2.0)
    # a small negative chi maps to a negative charging frequency
    with pytest.raises(InversionError):
        cp.nu_c_from_chi(-1.0, 0.990, 54.3)


@settings(max_examples=1000, deadline=None)
@given(
    st.floats(min_value=1.0, max_value=300.0),
    st.floats(min_value=0.05, max_value=3.0),
    st.floats(min_value=0.05, max_value=0.95),
)
def test_dispersive_inverse_pair(g, nu_c, frac):
    # delta0 > nu_C, the branch on which the inverse is unique
    delta0 = nu_c / frac
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DispersiveApproximationWarning)
        chi = cp.dispersive_shift(g, delta0, nu_c)
    assert cp.nu_c_from_chi(chi, delta0, g) == pytest.approx(nu_c, rel=1e-9)


def test_ej_from_spectroscopy():
    nu_c = cp.nu_c_from_chi(3.9, 0.990, 54.3)
    e_j, nu_j = cp.ej_from_spectroscopy(8.501, nu_c)
    assert nu_j == pytest.approx(18.30, abs=0.05)
    assert e_j == pytest.approx(76.0, abs=1.0)
    e_j, nu_j = cp.ej_from_spectroscopy(8.5, 0.540)
    assert nu_j == pytest.approx(18.92, abs=0.005)
    assert cp.nu01_from_energies(nu_j, 0.540) == pytest.approx(8.5, rel=1e-14)


def _dense_2x2(nu01, f_r, g):
    # oracle: direct eigenvalues of the one-excitation block
    return np.linalg.eigvalsh(np.array([[nu01, g * 1e-3], [g * 1e-3, f_r]]))


def test_dressed_levels_resonant_splitting():
    lo, hi = cp.dressed_levels(7.5, 7.5, 54.3)
    assert (hi - lo) * 1e3 == pytest.approx(108.6, abs=1e-9)


def test_dressed_levels_repulsion():
    lo, hi = cp.dressed_levels(8.49, 7.5, 54.3)
    assert [lo, hi] == pytest.approx(_dense_2x2(8.49, 7.5, 54.3), abs=1e-12)
    shift = (hi - 8.49) * 1e3
    assert shift == pytest.approx(2.970, abs=0.001)
    assert shift == pytest.approx(54.3**2 / 990, rel=0.01)


def test_dressed_levels_uncoupled():
    lo, hi = cp.dressed_levels(8.49, 7.5, 0.0)
    assert (lo, hi) == (7.5, 8.49)


@given(st.floats(min_value=-2, max_value=2), st.floats(min_value=1, max_value=200))
def test_branches_never_closer_than_2g(delta, g):
    lo, hi = cp.dressed_levels(7.5 + delta, 7.5, g)
    assert (hi - lo) >= 2 * g * 1e-3 * (1 - 1e-12)
    if abs(delta) > 1e-6:
        assert hi - lo > 2 * g * 1e-3


def test_anticrossing_sweep():
    nu_c = cp.nu_c_from_chi(3.9, 0.990, 54.3)
    _, nu_j = cp.ej_from_spectroscopy(8.501, nu_c)
    flux = np.linspace(0, 0.5, 2001)
    sw = cp.anticrossing_sweep(flux, nu_j, nu_c, 7.5, 54.3)
    gap = sw["upper"] - sw["lower"]
    phi_min = flux[np.argmin(gap)]
    assert gap.min() * 1e3 == pytest.approx(108.6, abs=0.1)
    assert phi_min == pytest.approx(cp.anticrossing_flux(nu_j, nu_c, 7.5), abs=1e-3)
    # the 0.23 Phi0 reference position is only reproduced to about 0.02 Phi0
    assert phi_min == pytest.approx(0.23, abs=0.025)


def test_purcell():
    t1 = cp.purcell_t1(1.37, 54.3, 0.990, 4.72)
    assert t1 == pytest.approx(4.21, abs=0.01)
    assert 1 / cp.purcell_rate(1.37, 54.3, 0.990) == pytest.approx(38.8, abs=0.3)
    # oracle: rate addition by hand
    assert t1 == pytest.approx(1 / (1 / 4.72 + 2 * math.pi * 1.37 * (0.0543 / 0.990) ** 2), rel=1e-12)
    assert 1 / cp.purcell_rate(1.37, 54.3, 0.200) == pytest.approx(1.58, abs=0.01)
    assert cp.purcell_t1(1.37, 54.3, 1e6, 4.72) == pytest.approx(4.72, rel=1e-9)


def test_purcell_resonant_limit():
    with pytest.warns(ResonantLimitWarning):
        t1 = cp.purcell_t1(1.37, 54.3, 0.0, 4.72)
    assert t1 == pytest.approx(1 / (1 / 4.72 + math.pi * 1.37))


@given(st.floats(min_value=0.01, max_value=5), st.floats(min_value=1.0001, max_value=3))
def test_purcell_monotone_and_bounded(delta, factor):
    for sign in (1, -1):
        a = cp.purcell_t1(1.37, 54.3, sign * delta, 4.72)
        b = cp.purcell_t1(1.37, 54.3, sign * delta * factor, 4.72)
        assert a < b <= 4.72


def test_coupled_system():
    cs = cp.CoupledSystem(54.3, 7.5, 8.49, 0.561)
    assert cs.delta0 == pytest.approx(0.990)
    assert cs.chi_over_2pi == pytest.approx(3.89, abs=0.02)
    at = cp.CoupledSystem.at_flux(0.0, 18.3, 0.561, 7.5, 54.3)
    assert at.nu01 == pytest.approx(cp.nu01_from_energies(18.3, 0.561))
