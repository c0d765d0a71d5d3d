"""Fits and spectral estimates for simulated time traces (times in ns)."""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.signal import find_peaks

from ..errors import FitError


@dataclass
class ExponentialFit:
    tau: float  # ns
    amplitude: float
    offset: float
    residual: float


def _exp_model(t, amp, tau, offset):
    return amp * np.exp(-t / tau) + offset


def fit_exponential(t, y, tau_guess=None):
    """Least-squares fit of ``amp exp(-t/tau) + offset``."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if tau_guess is None:
        span = y[0] - y[-1]
        target = y[-1] + span / np.e
        idx = int(np.argmin(np.abs(y - target)))
        tau_guess = max(t[idx] - t[0], (t[-1] - t[0]) / 10.0)
    p0 = (y[0] - y[-1], tau_guess, y[-1])
    try:
        with warnings.catch_warnings():
            # exact synthetic data leaves the covariance undefined; only popt is used
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _ = curve_fit(_exp_model, t, y, p0=p0, maxfev=20000, xtol=1e-14, ftol=1e-14)
    except (RuntimeError, ValueError) as exc:
        raise FitError(f"exponential fit failed: {exc}", best=p0) from exc
    resid = float(np.sqrt(np.mean((_exp_model(t, *popt) - y) ** 2)))
    amp, tau, off = popt
    if not tau > 0:
        raise FitError("fitted decay time is not positive", best=popt, residual=resid)
    return ExponentialFit(tau=float(tau), amplitude=float(amp), offset=float(off), residual=resid)


def spectrum(t, y, pad=16):
    """Magnitude of the zero-padded real FFT of ``y - mean(y)``.

    Returns (freqs_mhz, magnitude) with magnitude normalised per sample.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    dt = t[1] - t[0]
    n = len(y) * pad
    mag = np.abs(np.fft.rfft(y - y.mean(), n=n)) / len(y)
    freqs = np.fft.rfftfreq(n, d=dt) * 1e3
    return freqs, mag


def spectral_peaks(freqs, mag, rel_height=0.3, max_peaks=4):
    """Frequencies of the strongest local maxima above ``rel_height * max``."""
    idx, props = find_peaks(mag, height=rel_height * mag.max())
    order = np.argsort(props["peak_heights"])[::-1][:max_peaks]
    idx = np.sort(idx[order])
    return freqs[idx], mag[idx]


def _tones_model(n_tones):
    # parametrised by the decay rate so a vanishing envelope decay stays regular
    def model(t, offset, rate, *p):
        out = np.zeros_like(t)
        for k in range(n_tones):
            amp, freq, phase = p[3 * k : 3 * k + 3]
            out += amp * np.cos(2.0 * np.pi * freq * t + phase)
        return offset + np.exp(-t * rate) * out

    return model


@dataclass
class TonesFit:
    freqs: np.ndarray  # MHz
    amplitudes: np.ndarray
    phases: np.ndarray
    tau: float  # ns
    offset: float
    residual: float


def _fit_tones(t, y, freqs_mhz, tau_guess):
    n = len(freqs_mhz)
    model = _tones_model(n)
    amp0 = 0.5 * np.ptp(y) / n
    best = None
    # the initial phase is unknown; try a few starting values and keep the best
    for ph in (0.0, np.pi / 2, np.pi, -np.pi / 2):
        p0 = [float(np.mean(y)), 1.0 / tau_guess]
        for f in freqs_mhz:
            p0 += [amp0, f * 1e-3, ph]
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", OptimizeWarning)
                popt, _ = curve_fit(model, t, y, p0=p0, maxfev=40000, xtol=1e-14, ftol=1e-14)
        except RuntimeError:
            continue
        resid = float(np.sqrt(np.mean((model(t, *popt) - y) ** 2)))
        if best is None or resid < best[1]:
            best = (popt, resid)
    if best is None:
        raise FitError("damped-tone fit did not converge", best=None)
    return best


def fit_damped_tones(t, y, freqs_mhz, tau_guess):
    """Fit ``offset + exp(-t/tau) sum_k A_k cos(2 pi f_k t + p_k)``.

    Amplitudes are reported non-negative (sign folded into the phase).
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    popt, resid = _fit_tones(t, y, freqs_mhz, tau_guess)
    amps = np.array(popt[2::3])
    freqs = np.array(popt[3::3]) * 1e3
    phases = np.array(popt[4::3])
    # cos(-x) = cos(x) and -cos(x) = cos(x + pi)
    phases = np.where(freqs < 0, -phases, phases)
    phases = np.where(amps < 0, phases + np.pi, phases)
    phases = np.mod(phases + np.pi, 2 * np.pi) - np.pi
    order = np.argsort(np.abs(freqs))
    rate = float(popt[1])
    if not rate > 0:
        raise FitError("fitted envelope does not decay", best=popt, residual=resid)
    return TonesFit(
        freqs=np.abs(freqs)[order],
        amplitudes=np.abs(amps)[order],
        phases=phases[order],
        tau=1.0 / rate,
        offset=float(popt[0]),
        residual=resid,
    )


def dominant_frequency(t, y):
    """Dominant oscillation frequency (MHz) of a trace: FFT peak refined by a fit."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    freqs, mag = spectrum(t, y)
    f0 = freqs[1:][np.argmax(mag[1:])]
    popt, _ = _fit_tones(t, y, [f0], tau_guess=10.0 * (t[-1] - t[0]))
    return float(abs(popt[3]) * 1e3)
