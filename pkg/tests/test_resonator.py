import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from transmon_photon import resonator as res
from transmon_photon.errors import DomainError


def test_quarter_wave_length_reference():
    length = res.quarter_wave_length(7.0)
    assert length == pytest.approx(4210.12, abs=0.01)
    assert abs(length - 4220.0) / 4220.0 < 0.005


def test_quarter_wave_length_other_frequency():
    # oracle: (pi/2)/(beta f0), cross-checked by scaling the 7 GHz length
    assert res.quarter_wave_length(7.7) == pytest.approx(3827.38, abs=0.01)
    assert res.quarter_wave_length(7.7) == pytest.approx(res.quarter_wave_length(7.0) * 7.0 / 7.7, rel=1e-14)


def test_length_halves_when_frequency_doubles():
    assert res.quarter_wave_length(14.0) == pytest.approx(res.quarter_wave_length(7.0) / 2, rel=1e-14)


@given(st.floats(min_value=0.1, max_value=50.0))
def test_length_times_frequency_constant(f):
    assert res.quarter_wave_length(f) * f == pytest.approx(res.quarter_wave_length(1.0), rel=1e-12)


def test_length_rejects_nonpositive_frequency():
    with pytest.raises(DomainError):
        res.quarter_wave_length(0.0)


def test_qc_from_coupler():
    assert res.qc_from_coupler_s21(-35.0) == pytest.approx(4967.29, abs=0.01)
    assert res.qc_from_coupler_s21(-30.0) == pytest.approx(math.pi / (2e-3), rel=1e-12)
    assert round(res.qc_from_coupler_s21(-30.0)) == 1571


def test_qc_scales_by_ten_per_ten_db():
    assert res.qc_from_coupler_s21(-45.0) == pytest.approx(10 * res.qc_from_coupler_s21(-35.0), rel=1e-12)


@given(st.floats(min_value=-80, max_value=-0.1), st.floats(min_value=0.01, max_value=20))
def test_qc_decreasing_in_transmission(db, step):
    assert res.qc_from_coupler_s21(db - step) > res.qc_from_coupler_s21(db)


def test_qc_rejects_gain():
    with pytest.raises(DomainError):
        res.qc_from_coupler_s21(0.0)


def test_linewidth():
    assert res.linewidth(7.0, 5000) == 1.4
    assert res.linewidth(7.52, 5500) == pytest.approx(1.37, abs=0.005)
    assert res.linewidth(6.3, 6300) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(DomainError):
        res.linewidth(7.0, 0)


def test_vacuum_fluctuations_calibrated():
    v0, nu0 = res.vacuum_fluctuations(7.0, length=4220.0)
    assert v0 == pytest.approx(2.58, abs=1e-12)
    assert nu0 == pytest.approx(623.0, abs=1.0)


def test_vacuum_fluctuations_literal():
    _, nu0 = res.vacuum_fluctuations(7.0, length=4220.0, mode="literal")
    # oracle: sqrt(f0 / (2 R_Q L c_r)) evaluated with SI inputs
    r_q = 6.62607015e-34 / (4 * 1.602176634e-19**2)
    expected = math.sqrt(7e9 / (2 * r_q * 4220e-6 * 153e-12)) * 1e-6
    assert nu0 == pytest.approx(expected, rel=1e-9)
    assert nu0 == pytest.approx(916.5, abs=0.5)


def test_vacuum_fluctuations_sqrt_scaling():
    geom = res.REFERENCE_GEOMETRY
    for mode in ("calibrated", "literal"):
        _, a = res.vacuum_fluctuations(2.0, geom, length=4000.0, mode=mode)
        _, b = res.vacuum_fluctuations(8.0, geom, length=4000.0, mode=mode)
        assert b == pytest.approx(2 * a, rel=1e-12)


def test_vacuum_fluctuations_unknown_mode():
    with pytest.raises(ValueError):
        res.vacuum_fluctuations(7.0, mode="other")


def test_geometry_deviations_reported():
    geom = res.REFERENCE_GEOMETRY
    dev = geom.consistency_deviations()
    assert dev["z0"] == pytest.approx(0.0252, abs=1e-3)
    assert dev["phase_const"] == pytest.approx(0.0755, abs=1e-3)
    with pytest.warns(UserWarning):
        assert geom.check_consistency() is False
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert geom.check_consistency(rtol=0.1)


def test_design_resonator():
    d = res.design_resonator(7.0, s21_db=-35.0)
    assert d.qc == pytest.approx(4967.29, abs=0.01)
    assert d.kappa_over_2pi == pytest.approx(7000 / d.qc)
    assert d.q_loaded < d.qc
    with pytest.raises(ValueError):
        res.design_resonator(7.0)


@given(st.floats(min_value=0.5, max_value=20), st.floats(min_value=-60, max_value=-5))
def test_outputs_finite(f0, db):
    d = res.design_resonator(f0, s21_db=db)
    vals = [d.length, d.qc, d.kappa_over_2pi, *res.vacuum_fluctuations(f0)]
    assert np.all(np.isfinite(vals))
