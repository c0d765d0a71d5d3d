"""Lindblad evolution of a driven transmon, optionally coupled to a resonator.

The density matrix is vectorised row-major, vec(A rho B) = (A kron B^T) vec(rho),
and advanced with the fixed-step RK4 kernel. Each run works in a frame
rotating at one reference frequency shared by qubit and resonator; drives at
other frequencies carry the phase exp(-i (w t + phase)) with t the absolute
sequence time, so multi-pulse sequences keep their relative phase.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import expm

from ..constants import TWO_PI
from ..errors import DomainError, IntegrationAccuracyError
from ..kernels import rk4_propagate

_EPS = 1e-9


@dataclass(frozen=True)
class PulseSegment:
    """One piece of a pulse sequence.

    ``rabi_rate`` is the on-resonance Rabi frequency Omega in MHz (a
    rectangular pulse of length 1/(2 Omega) is a pi pulse). ``qubit_freq``
    overrides the configured qubit frequency for the segment (flux tuning).
    """

    kind: str
    duration: float  # ns
    drive_freq: float = None  # GHz
    rabi_rate: float = 0.0  # MHz
    phase: float = 0.0  # rad
    qubit_freq: float = None  # GHz

    def __post_init__(self):
        if self.kind not in ("drive", "delay"):
            raise DomainError(f"unknown segment kind {self.kind!r}")
        if not (self.duration >= 0 and math.isfinite(self.duration)):
            raise DomainError("segment duration must be finite and >= 0")
        if self.rabi_rate < 0:
            raise DomainError("rabi_rate must be >= 0")
        if self.kind == "delay" and self.rabi_rate != 0:
            raise DomainError("delay segments carry no drive")
        if self.kind == "drive" and self.drive_freq is None:
            raise DomainError("drive segments need a drive frequency")

    @classmethod
    def drive(cls, duration, drive_freq, rabi_rate, phase=0.0, qubit_freq=None):
        return cls("drive", duration, drive_freq, rabi_rate, phase, qubit_freq)

    @classmethod
    def delay(cls, duration, qubit_freq=None):
        return cls("delay", duration, qubit_freq=qubit_freq)


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple
    readout: str = "excited_population"

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise DomainError("a pulse sequence needs at least one segment")
        if self.readout not in ("excited_population", "photon_number"):
            raise DomainError(f"unknown readout {self.readout!r}")

    @property
    def duration(self):
        return sum(s.duration for s in self.segments)


@dataclass(frozen=True)
class LindbladConfig:
    """Open-system parameters.

    Lifetimes in us, rates and couplings in MHz (cyclic), frequencies in GHz,
    times in ns. ``n_max = 0`` simulates the qubit alone; otherwise the
    resonator is truncated at ``n_max`` photons. ``t2`` is the total coherence
    time; pure dephasing follows from 1/T_phi = 1/T2 - 1/(2 T1).
    """

    qubit_freq: float = 8.512
    t1: float = math.inf
    t2: float = math.inf
    qubit_levels: int = 2
    anharmonicity: float = -561.0
    n_max: int = 0
    resonator_freq: float = 7.5
    g: float = 54.3
    kappa_ext: float = 0.0
    kappa_int: float = 0.0
    detuning: float = 0.0
    parity_split: float = 0.0
    integrator_step: float = 0.25
    tolerance: float = 1e-6
    sample_interval: float = 1.0

    def __post_init__(self):
        if self.qubit_levels not in (2, 3):
            raise DomainError("qubit_levels must be 2 or 3")
        if not (self.t1 > 0 and self.t2 > 0):
            raise DomainError("T1 and T2 must be positive")
        if math.isfinite(self.t2) and self.t2 > 2.0 * self.t1 * (1 + 1e-12):
            raise DomainError("unphysical coherence: T2 must not exceed 2 T1")
        if math.isinf(self.t2) and math.isfinite(self.t1):
            raise DomainError("finite T1 requires finite T2 <= 2 T1")
        if self.n_max < 0:
            raise DomainError("n_max must be >= 0")
        if not (self.integrator_step > 0 and self.tolerance > 0 and self.sample_interval > 0):
            raise DomainError("step, tolerance and sample interval must be positive")
        if self.kappa_ext < 0 or self.kappa_int < 0 or self.parity_split < 0:
            raise DomainError("rates and parity split must be >= 0")

    @property
    def gamma1(self):
        """Relaxation rate in 1/ns."""
        return 0.0 if math.isinf(self.t1) else 1e-3 / self.t1

    @property
    def gamma_phi(self):
        """Pure dephasing rate in 1/ns."""
        if math.isinf(self.t2):
            return 0.0
        return max(1e-3 / self.t2 - 0.5 * self.gamma1, 0.0)

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass
class SimulationTrace:
    times: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)
    states: np.ndarray = None
    final_state: np.ndarray = None


def _lowering(n):
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(np.complex128)


def _commutator_superop(op):
    eye = np.eye(op.shape[0])
    return -1j * (np.kron(op, eye) - np.kron(eye, op.T))


def _dissipator_superop(c):
    eye = np.eye(c.shape[0])
    cdc = c.conj().T @ c
    return np.kron(c, c.conj()) - 0.5 * np.kron(cdc, eye) - 0.5 * np.kron(eye, cdc.T)


class Model:
    """Operators and generators for one :class:`LindbladConfig`."""

    def __init__(self, config):
        self.config = config
        dq = config.qubit_levels
        dr = config.n_max + 1
        self.dim = dq * dr
        self.has_resonator = config.n_max > 0
        eye_q, eye_r = np.eye(dq), np.eye(dr)
        self.b = np.kron(_lowering(dq), eye_r)
        self.a = np.kron(eye_q, _lowering(dr))
        self.n_q = self.b.conj().T @ self.b
        self.n_r = self.a.conj().T @ self.a
        proj = np.zeros((dq, dq))
        proj[1, 1] = 1.0
        self.p_excited = np.kron(proj, eye_r)

        d2 = self.dim**2
        # running integrals of emitted, internally lost and qubit-lost population
        self.n_acc = 3 if self.has_resonator else 0
        self.size = d2 + self.n_acc

        diss = np.zeros((d2, d2), dtype=np.complex128)
        if config.gamma1:
            diss += config.gamma1 * _dissipator_superop(self.b)
        if config.gamma_phi:
            diss += 2.0 * config.gamma_phi * _dissipator_superop(self.n_q)
        if self.has_resonator:
            self.kext = TWO_PI * config.kappa_ext * 1e-3
            self.kint = TWO_PI * config.kappa_int * 1e-3
            diss += (self.kext + self.kint) * _dissipator_superop(self.a)
        self._dissipator = diss
        self._cache = {}

    # -- vector helpers -------------------------------------------------
    def expectation_row(self, op):
        return op.T.reshape(-1)

    def vec(self, rho):
        y = np.zeros(self.size, dtype=np.complex128)
        y[: self.dim**2] = np.asarray(rho, dtype=np.complex128).reshape(-1)
        return y

    def rho(self, y):
        return y[..., : self.dim**2].reshape(y.shape[:-1] + (self.dim, self.dim))

    def ground_state(self):
        rho = np.zeros((self.dim, self.dim), dtype=np.complex128)
        rho[0, 0] = 1.0
        return rho

    def observable(self, name):
        if name == "excited_population":
            return self.p_excited
        if name == "photon_number":
            if not self.has_resonator:
                raise DomainError("photon-number readout needs a resonator (n_max >= 1)")
            return self.n_r
        raise DomainError(f"unknown observable {name!r}")

    # -- generators -------------------------------------------------------
    def _pad(self, mat):
        if not self.n_acc:
            return mat
        out = np.zeros((self.size, self.size), dtype=np.complex128)
        out[: mat.shape[0], : mat.shape[1]] = mat
        return out

    def static_generator(self, qubit_freq, frame_freq):
        key = ("static", round(qubit_freq, 15), round(frame_freq, 15))
        if key not in self._cache:
            cfg = self.config
            h = (qubit_freq - frame_freq) * self.n_q
            if cfg.qubit_levels == 3:
                h = h + 0.5 * cfg.anharmonicity * 1e-3 * (self.n_q @ self.n_q - self.n_q)
            if self.has_resonator:
                h = h + (cfg.resonator_freq - frame_freq) * self.n_r
                h = h + cfg.g * 1e-3 * (self.a.conj().T @ self.b + self.a @ self.b.conj().T)
            gen = self._pad(_commutator_superop(TWO_PI * h) + self._dissipator)
            if self.n_acc:
                d2 = self.dim**2
                gen[d2, :d2] = self.kext * self.expectation_row(self.n_r)
                gen[d2 + 1, :d2] = self.kint * self.expectation_row(self.n_r)
                gen[d2 + 2, :d2] = self.config.gamma1 * self.expectation_row(self.n_q)
            radius = float(np.max(np.abs(np.linalg.eigvals(gen)))) if gen.size else 0.0
            self._cache[key] = (gen, radius)
        return self._cache[key]

    def drive_generators(self, rabi_rate):
        key = ("drive", rabi_rate)
        if key not in self._cache:
            amp = TWO_PI * 0.5 * rabi_rate * 1e-3
            bdag = self.b.conj().T
            self._cache[key] = (
                self._pad(_commutator_superop(amp * bdag)),
                self._pad(_commutator_superop(amp * self.b)),
            )
        return self._cache[key]

    def ideal_rotation(self, angle, phase=0.0):
        """Superoperator of an instantaneous qubit rotation by ``angle`` about ``phase``.

        Uses the same sign convention as a resonant drive of that phase.
        """
        gen = np.exp(-1j * phase) * self.b.conj().T + np.exp(1j * phase) * self.b
        u = expm(-0.5j * angle * gen)
        return np.kron(u, u.conj())


class Branch:
    """Propagates states of one parity branch through segments.

    ``qubit_offset`` (GHz) shifts every qubit frequency of the branch.
    """

    def __init__(self, model, frame_freq, qubit_offset=0.0, backend=None):
        self.model = model
        self.config = model.config
        self.frame_freq = frame_freq
        self.qubit_offset = qubit_offset
        self.backend = backend

    def _generators(self, seg):
        qf = seg.qubit_freq if seg.qubit_freq is not None else self.config.qubit_freq
        l0, radius = self.model.static_generator(qf + self.qubit_offset, self.frame_freq)
        if seg.kind == "drive" and seg.rabi_rate > 0:
            lp, lm = self.model.drive_generators(seg.rabi_rate)
            w = TWO_PI * (seg.drive_freq - self.frame_freq)
            rate = radius + abs(w) + TWO_PI * seg.rabi_rate * 1e-3
        else:
            lp = lm = None
            w = 0.0
            rate = radius
        local_error = (rate * self.config.integrator_step) ** 5 / 120.0
        if local_error > self.config.tolerance:
            raise IntegrationAccuracyError(
                f"integrator step {self.config.integrator_step} ns too coarse: "
                f"estimated local error {local_error:.2e} > tolerance {self.config.tolerance:.1e}"
            )
        return l0, lp, lm, w

    def _steps(self, length):
        n = max(1, math.ceil(length / self.config.integrator_step - _EPS))
        return n, length / n

    def advance(self, y, seg, t_start, length, count=1):
        """Integrate ``count`` consecutive intervals of ``length`` ns inside ``seg``.

        ``t_start`` is absolute sequence time. Returns the ``count`` states
        at the interval ends, shape (count,) + y.shape.
        """
        l0, lp, lm, w = self._generators(seg)
        n, h = self._steps(length)
        phi = w * t_start + seg.phase
        return rk4_propagate(l0, lp, lm, w, phi, y, h, n * count, n, backend=self.backend)

    def run(self, y, segments, t_start=0.0, sample_interval=None):
        """Propagate through ``segments``; sample on a uniform grid from ``t_start``.

        Returns (times, states, final_state).
        """
        times = [t_start]
        states = [y]
        t = t_start
        for seg in segments:
            if seg.duration <= 0:
                continue
            t_end = t + seg.duration
            if sample_interval is None:
                y = self.advance(y, seg, t, seg.duration)[-1]
                t = t_end
                continue
            k_next = math.floor((t - t_start) / sample_interval + _EPS) + 1
            k_last = math.floor((t_end - t_start) / sample_interval + _EPS)
            if k_last >= k_next:
                first = t_start + k_next * sample_interval
                if first - t > _EPS:
                    y = self.advance(y, seg, t, first - t)[-1]
                times.append(first)
                states.append(y)
                t = first
                bulk = k_last - k_next
                if bulk > 0:
                    block = self.advance(y, seg, t, sample_interval, bulk)
                    states.extend(block)
                    times.extend(t_start + sample_interval * np.arange(k_next + 1, k_last + 1))
                    y = block[-1]
                    t = t_start + k_last * sample_interval
            if t_end - t > _EPS:
                y = self.advance(y, seg, t, t_end - t)[-1]
            t = t_end
        if sample_interval is None:
            return np.array([t_start, t]), np.array([states[0], y]), y
        return np.asarray(times), np.asarray(states), y

    def propagator(self, seg, t_start=0.0):
        """Superoperator of one segment acting on vec(rho) (accumulators excluded)."""
        d2 = self.model.dim**2
        eye = np.zeros((self.model.size, d2), dtype=np.complex128)
        eye[:d2] = np.eye(d2)
        if seg.duration <= 0:
            return np.eye(d2, dtype=np.complex128)
        return self.advance(eye, seg, t_start, seg.duration)[-1][:d2]

    def propagator_samples(self, seg, t_start, interval, count):
        """Propagators of a segment truncated after interval, 2 interval, ... count interval."""
        d2 = self.model.dim**2
        eye = np.zeros((self.model.size, d2), dtype=np.complex128)
        eye[:d2] = np.eye(d2)
        return self.advance(eye, seg, t_start, interval, count)[:, :d2]


def parity_offsets(config):
    """Qubit frequency offsets (GHz) of the equal-weight parity branches."""
    if config.parity_split > 0:
        half = 0.5 * config.parity_split * 1e-3
        return (-half, +half)
    return (0.0,)


def default_frame(config, sequence):
    for seg in sequence.segments:
        if seg.kind == "drive":
            return seg.drive_freq
    return config.qubit_freq


def check_trace(model, states, tolerance):
    rhos = model.rho(states)
    tr = np.real(np.trace(rhos, axis1=-2, axis2=-1))
    dev = float(np.max(np.abs(tr - 1.0))) if tr.size else 0.0
    if dev > 10.0 * tolerance:
        raise IntegrationAccuracyError(f"trace deviation {dev:.2e} exceeds 10 x tolerance")
    return dev


def evolve(config, sequence, initial_state=None, start_time=0.0, frame_freq=None,
           sample_interval=None, backend=None, keep_states=False):
    """Evolve a density matrix through ``sequence``.

    The readout observable is sampled every ``sample_interval`` ns (default
    ``config.sample_interval``) from ``start_time``. With a non-zero parity
    split the result is the equal-weight average of the two branches.
    """
    model = Model(config)
    frame = default_frame(config, sequence) if frame_freq is None else frame_freq
    rho0 = model.ground_state() if initial_state is None else np.asarray(initial_state)
    y0 = model.vec(rho0)
    dt = config.sample_interval if sample_interval is None else sample_interval
    obs = model.expectation_row(model.observable(sequence.readout))

    runs = []
    for offset in parity_offsets(config):
        branch = Branch(model, frame, offset, backend)
        runs.append(branch.run(y0, sequence.segments, start_time, dt))
    times = runs[0][0]
    states = np.mean([r[1] for r in runs], axis=0)
    final = np.mean([r[2] for r in runs], axis=0)
    trace_dev = check_trace(model, states, config.tolerance)
    d2 = model.dim**2
    values = np.real(states[:, :d2] @ obs)
    meta = {
        "config": config,
        "frame_freq": frame,
        "readout": sequence.readout,
        "trace_deviation": trace_dev,
    }
    if model.n_acc:
        meta["emitted"] = np.real(states[:, d2])
        meta["lost_internal"] = np.real(states[:, d2 + 1])
        meta["lost_qubit"] = np.real(states[:, d2 + 2])
        meta["final_emitted"], meta["final_lost_internal"], meta["final_lost_qubit"] = (
            float(v) for v in np.real(final[d2 : d2 + 3])
        )
    return SimulationTrace(
        times=times,
        values=values,
        metadata=meta,
        states=model.rho(states) if keep_states else None,
        final_state=model.rho(final),
    )


def step_doubling_error(config, sequence, **kwargs):
    """Largest change of the sampled observable when the step is halved."""
    coarse = evolve(config, sequence, **kwargs)
    fine = evolve(config.replace(integrator_step=0.5 * config.integrator_step), sequence, **kwargs)
    return float(np.max(np.abs(coarse.values - fine.values)))


def rabi_pi_time(rabi_rate):
    """Length in ns of a rectangular pi pulse at Rabi frequency ``rabi_rate`` MHz."""
    return 1e3 / (2.0 * rabi_rate)
