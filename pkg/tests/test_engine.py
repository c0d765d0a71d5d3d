import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transmon_photon.errors import DomainError, IntegrationAccuracyError
from transmon_photon.dynamics import (
    LindbladConfig,
    PulseSegment,
    PulseSequence,
    evolve,
    rabi_pi_time,
    step_doubling_error,
)
from transmon_photon.dynamics.analysis import dominant_frequency
from transmon_photon.dynamics.engine import Model
from transmon_photon.kernels import AVAILABLE_BACKENDS

BACKENDS = list(AVAILABLE_BACKENDS)
FQ = 8.512
OMEGA = 6.17


def rabi_formula(t, omega, delta):
    # two-level Rabi oscillation, frequencies in MHz and t in ns
    w = math.hypot(omega, delta)
    return (omega / w) ** 2 * np.sin(math.pi * w * 1e-3 * t) ** 2


def test_pi_time():
    assert rabi_pi_time(OMEGA) == pytest.approx(81.04, abs=0.01)


@pytest.mark.parametrize("backend", BACKENDS)
def test_closed_rabi_matches_formula(backend):
    cfg = LindbladConfig(qubit_freq=FQ)
    tr = evolve(cfg, PulseSequence([PulseSegment.drive(1000.0, FQ, OMEGA)]), backend=backend)
    assert np.max(np.abs(tr.values - rabi_formula(tr.times, OMEGA, 0.0))) < 1e-3
    pi = evolve(cfg, PulseSequence([PulseSegment.drive(rabi_pi_time(OMEGA), FQ, OMEGA)]), backend=backend)
    assert pi.values[-1] == pytest.approx(1.0, abs=1e-3)


def test_detuned_rabi():
    cfg = LindbladConfig(qubit_freq=FQ)
    tr = evolve(cfg, PulseSequence([PulseSegment.drive(1000.0, FQ + 0.008, OMEGA)]))
    assert np.max(np.abs(tr.values - rabi_formula(tr.times, OMEGA, 8.0))) < 1e-3
    assert tr.values.max() == pytest.approx(OMEGA**2 / (OMEGA**2 + 64.0), abs=2e-3)
    assert tr.values.max() == pytest.approx(0.373, abs=2e-3)
    assert dominant_frequency(tr.times, tr.values) == pytest.approx(math.hypot(OMEGA, 8.0), rel=1e-3)


def test_peak_quarter_at_sqrt3_detuning():
    delta = OMEGA * math.sqrt(3.0)
    cfg = LindbladConfig(qubit_freq=FQ)
    tr = evolve(cfg, PulseSequence([PulseSegment.drive(500.0, FQ + 1e-3 * delta, OMEGA)]),
                sample_interval=0.25)
    assert tr.values.max() == pytest.approx(0.25, abs=1e-3)


def test_zero_duration_sequence():
    cfg = LindbladConfig(qubit_freq=FQ, t1=4.72, t2=6.38)
    tr = evolve(cfg, PulseSequence([PulseSegment.drive(0.0, FQ, OMEGA)]))
    assert tr.values[-1] == pytest.approx(0.0, abs=1e-15)


def _open_config(**kw):
    base = dict(qubit_freq=FQ, t1=4.72, t2=6.38, qubit_levels=3, n_max=2, resonator_freq=7.5,
                g=54.3, kappa_ext=1.36, kappa_int=0.19, integrator_step=0.01)
    base.update(kw)
    return LindbladConfig(**base)


@pytest.mark.parametrize("backend", BACKENDS)
def test_trace_and_positivity(backend):
    cfg = _open_config()
    seq = PulseSequence([PulseSegment.drive(81.0, FQ, OMEGA), PulseSegment.delay(100.0, qubit_freq=7.5),
                         PulseSegment.delay(200.0)])
    tr = evolve(cfg, seq, keep_states=True, backend=backend, frame_freq=7.5)
    traces = np.real(np.trace(tr.states, axis1=1, axis2=2))
    assert np.max(np.abs(traces - 1.0)) < 1e-8
    herm = 0.5 * (tr.states + np.conj(np.transpose(tr.states, (0, 2, 1))))
    assert np.linalg.eigvalsh(herm).min() >= -1e-8
    assert np.allclose(tr.states, np.conj(np.transpose(tr.states, (0, 2, 1))), atol=1e-10)


def test_excitation_bookkeeping():
    # without drive the excitation number can only leave through the three loss channels
    cfg = _open_config(qubit_levels=2)
    model = Model(cfg)
    rho0 = np.zeros((model.dim, model.dim), dtype=complex)
    rho0[model.dim // 2, model.dim // 2] = 1.0  # qubit excited, resonator empty
    tr = evolve(cfg, PulseSequence([PulseSegment.delay(300.0, qubit_freq=7.5)]),
                initial_state=rho0, frame_freq=7.5, keep_states=True)
    remaining = np.real(np.einsum("kij,ji->k", tr.states, model.n_q + model.n_r))
    meta = tr.metadata
    total = remaining + meta["emitted"] + meta["lost_internal"] + meta["lost_qubit"]
    assert np.max(np.abs(total - 1.0)) < 1e-8
    assert np.all(np.diff(meta["emitted"]) >= -1e-12)


def test_step_halving():
    cfg = LindbladConfig(qubit_freq=FQ, t1=4.72, t2=6.38)
    seq = PulseSequence([PulseSegment.drive(500.0, FQ, OMEGA)])
    assert step_doubling_error(cfg, seq) < 1e-6


def test_frame_choice_is_irrelevant():
    cfg = LindbladConfig(qubit_freq=FQ, t1=4.72, t2=6.38, integrator_step=0.02)
    seq = PulseSequence([
        PulseSegment.drive(40.0, FQ + 0.002, OMEGA),
        PulseSegment.delay(137.0),
        PulseSegment.drive(40.0, FQ + 0.002, OMEGA, phase=0.7),
    ])
    a = evolve(cfg, seq, frame_freq=FQ + 0.002, keep_states=True)
    b = evolve(cfg, seq, frame_freq=FQ, keep_states=True)
    pa = np.real(a.states[:, 1, 1])
    pb = np.real(b.states[:, 1, 1])
    assert np.max(np.abs(pa - pb)) < 1e-6


def test_phase_tracked_across_delay():
    # hard pi/2 pulses around a delay: the fringe follows the drive detuning
    omega, delta = 100.0, 2.0
    cfg = LindbladConfig(qubit_freq=FQ, integrator_step=0.02)
    half = rabi_pi_time(omega) / 2
    for tau in (0.0, 125.0, 250.0, 400.0):
        seq = PulseSequence([
            PulseSegment.drive(half, FQ + 1e-3 * delta, omega),
            PulseSegment.delay(tau),
            PulseSegment.drive(half, FQ + 1e-3 * delta, omega),
        ])
        pe = evolve(cfg, seq).values[-1]
        assert pe == pytest.approx(0.5 * (1 + math.cos(2 * math.pi * delta * 1e-3 * (tau + half))), abs=5e-3)


def test_ideal_rotation_is_pi_pulse():
    model = Model(LindbladConfig())
    y = model.ideal_rotation(math.pi) @ model.ground_state().reshape(-1)
    assert model.rho(y)[1, 1].real == pytest.approx(1.0, abs=1e-14)
    half = model.ideal_rotation(math.pi / 2, phase=0.3)
    rho = model.rho(half @ model.ground_state().reshape(-1))
    assert rho[1, 1].real == pytest.approx(0.5, abs=1e-14)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)


def test_parity_average():
    cfg = LindbladConfig(qubit_freq=FQ, parity_split=2.0)
    seq = PulseSequence([PulseSegment.drive(600.0, FQ, OMEGA)])
    avg = evolve(cfg, seq).values
    lo = evolve(cfg.replace(parity_split=0.0, qubit_freq=FQ - 0.001), seq, frame_freq=FQ).values
    hi = evolve(cfg.replace(parity_split=0.0, qubit_freq=FQ + 0.001), seq, frame_freq=FQ).values
    assert np.max(np.abs(avg - 0.5 * (lo + hi))) < 1e-12


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 50.0), st.floats(0.1, 1.0))
def test_decay_positive_and_bounded(t1, frac):
    cfg = LindbladConfig(qubit_freq=FQ, t1=t1, t2=2 * t1 * frac)
    tr = evolve(cfg, PulseSequence([PulseSegment.drive(200.0, FQ, OMEGA)]), sample_interval=5.0)
    assert np.all(tr.values >= -1e-9) and np.all(tr.values <= 1 + 1e-9)


def test_config_validation():
    with pytest.raises(DomainError):
        LindbladConfig(t1=4.0, t2=9.0)
    with pytest.raises(DomainError):
        LindbladConfig(t1=4.0)
    with pytest.raises(DomainError):
        LindbladConfig(qubit_levels=4)
    with pytest.raises(DomainError):
        LindbladConfig(kappa_ext=-1.0)
    with pytest.raises(DomainError):
        PulseSegment.drive(-1.0, FQ, OMEGA)
    with pytest.raises(DomainError):
        PulseSequence([])
    with pytest.raises(DomainError):
        evolve(LindbladConfig(), PulseSequence([PulseSegment.delay(1.0)], readout="photon_number"))


def test_coarse_step_is_rejected():
    cfg = _open_config(integrator_step=0.25)
    with pytest.raises(IntegrationAccuracyError):
        evolve(cfg, PulseSequence([PulseSegment.delay(10.0)]))
