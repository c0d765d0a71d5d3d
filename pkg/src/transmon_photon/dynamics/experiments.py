"""Simulated pulse experiments: Rabi chevron, T1, Ramsey, echo, Purcell sweep.

Each experiment runs in the frame of its drive, where pulse propagators do
not depend on their start time. Delay scans are then one sampled delay run
plus pre-computed pulse propagators instead of one simulation per delay.
"""

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import coupled
from ..errors import DomainError, ResolutionWarning
from .analysis import (
    TonesFit,
    dominant_frequency,
    fit_damped_tones,
    fit_exponential,
    spectral_peaks,
    spectrum,
)
from .engine import (
    Branch,
    Model,
    PulseSegment,
    SimulationTrace,
    check_trace,
    parity_offsets,
    rabi_pi_time,
)

DEFAULT_RABI_RATE = 6.17  # MHz


def _uniform(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 3:
        raise DomainError("need a 1-D grid with at least 3 points")
    step = grid[1] - grid[0]
    if not step > 0 or not np.allclose(np.diff(grid), step, rtol=1e-9, atol=1e-9):
        raise DomainError("grid must be uniform and increasing")
    if grid[0] < 0:
        raise DomainError("delays must be non-negative")
    return grid, step


def _sampled_states(config, frame, pre, seg, interval, count, backend=None):
    """Branch-averaged states after ``pre`` and then every ``interval`` ns of ``seg``.

    Returns (model, states) with ``count + 1`` samples (the first at the end of ``pre``).
    """
    model = Model(config)
    out = []
    for offset in parity_offsets(config):
        branch = Branch(model, frame, offset, backend)
        y = model.vec(model.ground_state())
        t = 0.0
        for p in pre:
            if p.duration > 0:
                y = branch.advance(y, p, t, p.duration)[-1]
            t += p.duration
        block = branch.advance(y, seg, t, interval, count) if count else np.empty((0, y.size))
        out.append(np.vstack([y[None, :], block]))
    states = np.mean(out, axis=0)
    check_trace(model, states, config.tolerance)
    return model, states


def _population(model, states):
    row = model.expectation_row(model.p_excited)
    return np.real(states[..., : model.dim**2] @ row)


# -- Rabi chevron ------------------------------------------------------------


@dataclass
class ChevronMap:
    freqs: np.ndarray  # GHz
    durations: np.ndarray  # ns
    pe: np.ndarray  # (len(durations), len(freqs))
    qubit_freq: float
    rabi_rate: float

    def oscillation_frequencies(self):
        """Dominant oscillation frequency (MHz) along duration for every drive frequency."""
        return np.array([dominant_frequency(self.durations, col) for col in self.pe.T])

    def peak_population(self):
        return self.pe.max(axis=0)


def rabi_chevron(config, freq_span=(8.502, 8.520), duration_span=(0.0, 1000.0),
                 grid=(19, 501), rabi_rate=DEFAULT_RABI_RATE, workers=1, backend=None):
    """P_e(drive frequency, pulse duration) for rectangular pulses from the ground state."""
    nf, nt = grid
    if not (freq_span[1] > freq_span[0] and duration_span[1] > duration_span[0]):
        raise DomainError("chevron spans must be non-degenerate")
    freqs = np.linspace(freq_span[0], freq_span[1], nf)
    durations, step = _uniform(np.linspace(duration_span[0], duration_span[1], nt))

    def column(f):
        pre = [PulseSegment.drive(durations[0], f, rabi_rate)]
        seg = PulseSegment.drive(durations[-1], f, rabi_rate)
        model, states = _sampled_states(config, f, pre, seg, step, nt - 1, backend)
        return _population(model, states)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            cols = list(pool.map(column, freqs))
    else:
        cols = [column(f) for f in freqs]
    return ChevronMap(freqs, durations, np.column_stack(cols), config.qubit_freq, rabi_rate)


# -- T1 ------------------------------------------------------------------------


@dataclass
class DecayResult:
    trace: SimulationTrace
    time_constant: float  # us
    fit: object
    epsilon: float = None


def t1_experiment(config, tau_grid, rabi_rate=DEFAULT_RABI_RATE, backend=None):
    """pi pulse, delay tau, population readout; fit a single exponential."""
    if math.isinf(config.t1):
        raise DomainError("T1 experiment needs a finite T1")
    taus, step = _uniform(tau_grid)
    f = config.qubit_freq
    pre = [
        PulseSegment.drive(rabi_pi_time(rabi_rate), f, rabi_rate),
        PulseSegment.delay(taus[0]),
    ]
    model, states = _sampled_states(config, f, pre, PulseSegment.delay(taus[-1]), step, len(taus) - 1, backend)
    pe = _population(model, states)
    fit = fit_exponential(taus, pe)
    trace = SimulationTrace(taus, pe, {"experiment": "t1", "config": config, "rabi_rate": rabi_rate})
    return DecayResult(trace, fit.tau * 1e-3, fit, epsilon=float(pe[0]))


# -- Ramsey --------------------------------------------------------------------


@dataclass
class RamseyResult:
    trace: SimulationTrace
    t2: float  # us
    peak_freqs: np.ndarray  # MHz
    peak_magnitudes: np.ndarray
    spectrum_freqs: np.ndarray  # MHz
    spectrum_magnitude: np.ndarray
    fit: TonesFit

    @property
    def peak_separation(self):
        return float(np.ptp(self.peak_freqs)) if len(self.peak_freqs) > 1 else 0.0


def ramsey_experiment(config, tau_grid, rabi_rate=DEFAULT_RABI_RATE, detuning=None, backend=None):
    """Two pi/2 pulses separated by tau, drive detuned by ``detuning`` MHz.

    The fringe is the equal-weight average over the parity branches
    (qubit frequency +- parity_split/2).
    """
    taus, step = _uniform(tau_grid)
    detuning = config.detuning if detuning is None else detuning
    if config.parity_split > 0 and taus[-1] - taus[0] < 2e3 / config.parity_split:
        warnings.warn(
            "delay window shorter than 2/parity_split; the two components are not resolved",
            ResolutionWarning,
            stacklevel=2,
        )
    f = config.qubit_freq + detuning * 1e-3
    half = PulseSegment.drive(0.5 * rabi_pi_time(rabi_rate), f, rabi_rate)
    model = Model(config)
    pe = np.zeros(len(taus))
    offsets = parity_offsets(config)
    for offset in offsets:
        branch = Branch(model, f, offset, backend)
        y = model.vec(model.ground_state())
        y = branch.advance(y, half, 0.0, half.duration)[-1]
        if taus[0] > 0:
            y = branch.advance(y, PulseSegment.delay(taus[0]), half.duration, taus[0])[-1]
        block = branch.advance(y, PulseSegment.delay(taus[-1]), half.duration + taus[0], step, len(taus) - 1)
        states = np.vstack([y[None, :], block])
        check_trace(model, states, config.tolerance)
        closing = branch.propagator(half)
        rhos = states[:, : model.dim**2] @ closing.T
        pe += _population(model, rhos) / len(offsets)
    trace = SimulationTrace(taus, pe, {"experiment": "ramsey", "config": config, "detuning": detuning})
    return analyse_ramsey(trace, t2_guess=config.t2)


def analyse_ramsey(trace, t2_guess=None):
    """Spectral peaks and damped-tone fit of a Ramsey fringe."""
    taus, pe = trace.times, trace.values
    freqs, mag = spectrum(taus - taus[0], pe)
    pk_f, _ = spectral_peaks(freqs[1:], mag[1:], rel_height=0.35, max_peaks=2)
    tau_guess = 1e3 * t2_guess if t2_guess and math.isfinite(t2_guess) else 0.3 * (taus[-1] - taus[0])
    fit = fit_damped_tones(taus - taus[0], pe, pk_f, tau_guess)
    return RamseyResult(
        trace=trace,
        t2=fit.tau * 1e-3,
        peak_freqs=fit.freqs,
        peak_magnitudes=fit.amplitudes,
        spectrum_freqs=freqs,
        spectrum_magnitude=mag,
        fit=fit,
    )


# -- echo ----------------------------------------------------------------------


def echo_experiment(config, tau_grid, rabi_rate=DEFAULT_RABI_RATE, detuning=0.0,
                    pulses="finite", backend=None):
    """(pi/2) - tau/2 - (pi) - tau/2 - (pi/2); fit the exponential envelope.

    Parameters
    ----------
    pulses : {"finite", "ideal"}
        ``"finite"`` simulates rectangular pulses at ``rabi_rate``.
        ``"ideal"`` uses instantaneous rotations, which refocus any static
        detuning exactly; finite pulses leave a residual of order
        (detuning / rabi_rate).
    """
    if pulses not in ("finite", "ideal"):
        raise DomainError(f"unknown pulse model {pulses!r}")
    taus, step = _uniform(tau_grid)
    f = config.qubit_freq + detuning * 1e-3
    t_pi = rabi_pi_time(rabi_rate)
    half = PulseSegment.drive(0.5 * t_pi, f, rabi_rate)
    full = PulseSegment.drive(t_pi, f, rabi_rate)
    model = Model(config)
    d2 = model.dim**2
    rho0 = model.ground_state().reshape(-1)
    pe = np.zeros(len(taus))
    offsets = parity_offsets(config)
    for offset in offsets:
        branch = Branch(model, f, offset, backend)
        if pulses == "ideal":
            p_half = model.ideal_rotation(0.5 * np.pi)
            p_full = model.ideal_rotation(np.pi)
        else:
            p_half = branch.propagator(half)
            p_full = branch.propagator(full)
        d_start = branch.propagator(PulseSegment.delay(0.5 * taus[0]))
        samples = branch.propagator_samples(PulseSegment.delay(0.5 * taus[-1]), 0.0, 0.5 * step, len(taus) - 1)
        delays = np.concatenate([np.eye(d2)[None], samples]) @ d_start
        v = p_half @ rho0
        v = np.einsum("kij,j->ki", delays, v)
        v = v @ p_full.T
        v = np.einsum("kij,kj->ki", delays, v)
        v = v @ p_half.T
        check_trace(model, v, config.tolerance)
        pe += _population(model, v) / len(offsets)
    fit = fit_exponential(taus, pe)
    trace = SimulationTrace(
        taus, pe, {"experiment": "echo", "config": config, "detuning": detuning, "pulses": pulses}
    )
    return DecayResult(trace, fit.tau * 1e-3, fit)


# -- Purcell sweep -------------------------------------------------------------


def purcell_sweep(nu01_grid, f_r, kappa, g, t1_intrinsic, t2_echo_intrinsic):
    """T1 and the T1-limited echo bound versus qubit frequency.

    Pure dephasing is held at its sweet-spot value
    1/T_phi = 1/T2_echo - 1/(2 T1_intrinsic); the Purcell rate only adds to T1.
    Returns a dict of arrays (GHz, us).
    """
    nu = np.asarray(nu01_grid, dtype=float)
    delta = nu - f_r
    if np.any(delta == 0):
        raise DomainError("nu01 grid includes the resonance delta0 = 0")
    gamma_phi = max(1.0 / t2_echo_intrinsic - 0.5 / t1_intrinsic, 0.0)
    t1 = np.array([coupled.purcell_t1(kappa, g, d, t1_intrinsic) for d in delta])
    t2 = 1.0 / (0.5 / t1 + gamma_phi)
    return {"nu01": nu, "delta0": delta, "t1_total": t1, "t2_echo_bound": t2}
