import math

import pytest
from hypothesis import given, strategies as st

from transmon_photon import constants as c


def test_constants_consistent():
    assert c.R_Q * 4 * c.E_CHARGE**2 == pytest.approx(c.H, rel=1e-12)
    assert c.PHI_0 * 2 * c.E_CHARGE == pytest.approx(c.H, rel=1e-12)
    assert c.R_Q == pytest.approx(6453.2, abs=0.1)


def test_gap_energy_to_frequency():
    assert c.energy_uev_to_freq_ghz(200.0) == pytest.approx(48.36, abs=0.01)


def test_charging_energy_to_frequency():
    assert c.energy_uev_to_freq_ghz(2.23) == pytest.approx(0.539, abs=0.001)


def test_zero_energy():
    assert c.energy_uev_to_freq_ghz(0.0) == 0.0


def test_planck_in_working_units():
    # h = 4.135667696e-15 eV s -> ueV per GHz
    assert c.H_UEV_PER_GHZ == pytest.approx(4.135667696, rel=1e-9)


@given(st.floats(min_value=1e-9, max_value=1e9, allow_nan=False))
def test_energy_roundtrip(e):
    back = c.freq_ghz_to_energy_uev(c.energy_uev_to_freq_ghz(e))
    assert abs(back - e) / e < 1e-12


@given(st.floats(min_value=1e-6, max_value=1e6))
def test_voltage_roundtrip(v):
    assert math.isclose(c.freq_mhz_to_voltage_uv(c.voltage_uv_to_freq_mhz(v)), v, rel_tol=1e-12)
