"""Feedline transmission past a notch-coupled resonator: model, fit, file I/O.

The lineshape is

    S21(f) = 1 - (Q / Qc) exp(i phi) / (1 + 2 i Q (f - f0) / f0),   1/Q = 1/Qi + 1/Qc,

where ``Qc`` is the magnitude of the complex coupling quality factor and
``phi`` its asymmetry angle. Background transmission is normalised to 1.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError, FitError


@dataclass
class S21Sweep:
    freqs: np.ndarray  # GHz
    s21: np.ndarray
    power_dbm: float = None

    def __post_init__(self):
        self.freqs = np.asarray(self.freqs, dtype=float)
        self.s21 = np.asarray(self.s21, dtype=np.complex128)
        if self.freqs.shape != self.s21.shape or self.freqs.ndim != 1:
            raise DomainError("freqs and s21 must be 1-D arrays of equal length")
        if len(self.freqs) > 1 and np.any(np.diff(self.freqs) <= 0):
            raise DomainError("freqs must be strictly increasing")


@dataclass
class ResonanceFit:
    f0: float  # GHz
    qi: float
    qc: float
    asymmetry: float  # rad
    residual: float

    @property
    def q_loaded(self):
        return 1.0 / (1.0 / self.qi + 1.0 / self.qc)

    def to_record(self):
        return {
            "f0": self.f0,
            "qi": self.qi,
            "qc": self.qc,
            "asymmetry_rad": self.asymmetry,
            "residual": self.residual,
        }

    @classmethod
    def from_record(cls, rec):
        return cls(rec["f0"], rec["qi"], rec["qc"], rec["asymmetry_rad"], rec["residual"])


def _s21(f0, qi, qc, phi, freqs):
    q = 1.0 / (1.0 / qi + 1.0 / qc)
    return 1.0 - (q / qc) * np.exp(1j * phi) / (1.0 + 2j * q * (freqs - f0) / f0)


def notch_model(f0, qi, qc, asymmetry, freqs, power_dbm=None):
    """Synthetic sweep of the notch lineshape at ``freqs`` (GHz)."""
    if not (qi > 0 and qc > 0):
        raise DomainError("Qi and Qc must be positive")
    freqs = np.asarray(freqs, dtype=float)
    return S21Sweep(freqs, _s21(f0, qi, qc, asymmetry, freqs), power_dbm)


def add_noise(sweep, sigma, seed=0):
    """Copy of ``sweep`` with complex Gaussian noise of std ``sigma`` per quadrature."""
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, sigma, len(sweep.s21)) + 1j * rng.normal(0.0, sigma, len(sweep.s21))
    return S21Sweep(sweep.freqs.copy(), sweep.s21 + noise, sweep.power_dbm)


def circle_fit(z):
    """Algebraic least-squares circle through complex points.

    Returns (center, radius, rms radial residual).
    """
    z = np.asarray(z, dtype=np.complex128)
    x, y = z.real, z.imag
    a = np.column_stack([x, y, np.ones_like(x)])
    sol, *_ = np.linalg.lstsq(a, x**2 + y**2, rcond=None)
    cx, cy = 0.5 * sol[0], 0.5 * sol[1]
    radius = np.sqrt(sol[2] + cx**2 + cy**2)
    center = cx + 1j * cy
    resid = float(np.sqrt(np.mean((np.abs(z - center) - radius) ** 2)))
    return center, float(radius), resid


def initial_guess(sweep):
    """(f0, Qi, Qc, asymmetry) from the circle geometry and the dip width."""
    f, z = sweep.freqs, sweep.s21
    center, radius, _ = circle_fit(z)
    # the resonance is the circle point diametrically opposite the off-resonant point 1
    phi = float(np.angle(1.0 - center))
    q_over_qc = min(2.0 * radius, 0.999)
    dist = np.abs(z - 1.0)
    i0 = int(np.argmax(dist))
    f0 = f[i0]
    # |1 - S21| falls to 1/sqrt(2) of its peak at f0 (1 +- 1/(2Q))
    half = dist >= dist[i0] / np.sqrt(2.0)
    lo, hi = i0, i0
    while lo > 0 and half[lo - 1]:
        lo -= 1
    while hi < len(f) - 1 and half[hi + 1]:
        hi += 1
    width = max(f[hi] - f[lo], f[min(i0 + 1, len(f) - 1)] - f[max(i0 - 1, 0)])
    q = f0 / width
    qc = q / q_over_qc
    qi = 1.0 / max(1.0 / q - 1.0 / qc, 1e-12)
    return f0, qi, qc, phi


def fit_notch(sweep, guess=None, max_nfev=2000):
    """Complex least-squares fit of :func:`notch_model` to ``sweep``.

    The starting point comes from :func:`initial_guess` unless ``guess``
    (f0, Qi, Qc, asymmetry) is given. Refinement is Levenberg-Marquardt on
    (scaled f0 shift, log Qi, log Qc, asymmetry).

    Raises
    ------
    FitError
        If the optimiser does not converge within ``max_nfev`` evaluations.
        ``best`` holds the last parameters and ``residual`` their RMS misfit.
    """
    f, z = sweep.freqs, sweep.s21
    if len(f) < 8:
        raise DomainError("need at least 8 points to fit a resonance")
    f0g, qig, qcg, phig = guess if guess is not None else initial_guess(sweep)
    scale = f0g / max(qcg, 1.0)

    def unpack(p):
        return f0g + p[0] * scale, np.exp(p[1]), np.exp(p[2]), p[3]

    def residual(p):
        d = _s21(*unpack(p), f) - z
        return np.concatenate([d.real, d.imag])

    p0 = np.array([0.0, np.log(qig), np.log(qcg), phig])
    res = least_squares(residual, p0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
    f0, qi, qc, phi = unpack(res.x)
    rms = float(np.sqrt(np.mean(np.abs(_s21(f0, qi, qc, phi, f) - z) ** 2)))
    phi = float(np.mod(phi + np.pi, 2 * np.pi) - np.pi)
    if res.status <= 0:
        raise FitError(f"notch fit did not converge: {res.message}", best=(f0, qi, qc, phi), residual=rms)
    return ResonanceFit(float(f0), float(qi), float(qc), phi, rms)


def dispersive_pull(f0, chi, state):
    """Resonator frequency (GHz) for a qubit state; ``chi`` is chi/2pi in MHz.

    ``"saturated"`` stands for the high-power regime where the resonator
    returns to its bare frequency.
    """
    if not np.isfinite(chi):
        raise DomainError("chi must be finite")
    f0 = f0.f0 if isinstance(f0, ResonanceFit) else f0
    shift = {"ground": -1.0, "excited": 1.0, "saturated": 0.0}
    if state not in shift:
        raise DomainError(f"unknown qubit state {state!r}")
    return f0 + shift[state] * chi * 1e-3


def dip_depth_db(qi, qc, asymmetry=0.0):
    """|S21| at f0 in dB."""
    return 20.0 * np.log10(abs(_s21(1.0, qi, qc, asymmetry, 1.0)))


# -- file formats --------------------------------------------------------------


def write_sweep_csv(path, sweep, header=None):
    """CSV with columns freq_ghz, re, im; ``header`` lines are written as '#' comments."""
    with open(path, "w", newline="") as fh:
        for line in header or ():
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["freq_ghz", "re", "im"])
        for fr, s in zip(sweep.freqs, sweep.s21):
            w.writerow([repr(float(fr)), repr(float(s.real)), repr(float(s.imag))])


def read_sweep_csv(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.startswith("#"))]
    if not rows or [c.strip() for c in rows[0]] != ["freq_ghz", "re", "im"]:
        raise DomainError(f"{path}: expected header freq_ghz,re,im")
    data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float).reshape(-1, 3)
    return S21Sweep(data[:, 0], data[:, 1] + 1j * data[:, 2])


def write_fit_json(path, fit, extra=None):
    rec = fit.to_record()
    rec.update(extra or {})
    with open(path, "w") as fh:
        json.dump(rec, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_fit_json(path):
    with open(path) as fh:
        return ResonanceFit.from_record(json.load(fh))


__all__ = [
    "S21Sweep",
    "ResonanceFit",
    "notch_model",
    "add_noise",
    "circle_fit",
    "initial_guess",
    "fit_notch",
    "dispersive_pull",
    "dip_depth_db",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_fit_json",
    "read_fit_json",
]
