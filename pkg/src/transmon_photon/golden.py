"""Golden-value regression checks against the reference device numbers."""

import warnings
from dataclasses import dataclass

import numpy as np

from . import coupled, resonator, s21, transmon
from .constants import energy_uev_to_freq_ghz
from .dynamics import experiments
from .dynamics.engine import LindbladConfig, PulseSegment, PulseSequence, evolve, rabi_pi_time
from . import photon_source as ps


@dataclass
class GoldenResult:
    name: str
    value: float
    expected: float
    tolerance: float
    mode: str = "abs"  # "abs", "rel" or "min" (value must reach expected)

    @property
    def error(self):
        if self.mode == "min":
            return max(self.expected - self.value, 0.0)
        diff = abs(self.value - self.expected)
        return diff / abs(self.expected) if self.mode == "rel" else diff

    @property
    def passed(self):
        return bool(np.isfinite(self.value)) and self.error <= self.tolerance

    def line(self):
        kind = self.mode
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name:<44} value={self.value:<14.6g} expected={self.expected:<10.6g} "
            f"{kind} err={self.error:.2e} tol={self.tolerance:g}"
        )


def _geometry(p):
    return resonator.CpwGeometry(p["centre_width"], p["gap"], p["c_r"], p["l_r"], p["beta"], p["z0"])


def _checks(p):
    geom = _geometry(p)
    v0, nu0 = resonator.vacuum_fluctuations(p["f_design"], geom, p["length"], p["v0_mode"])
    design = transmon.design_transmon(
        p["r"], p["nu01"], p["nu_gap"], p["delta0_design"], nu0 * 1e-3, p["chi_design"] * 1e-3
    )
    yield "energy 200 ueV -> GHz", energy_uev_to_freq_ghz(200.0), 48.36, 0.01, "abs"
    yield "E_C 2.23 ueV -> nu_C (GHz)", energy_uev_to_freq_ghz(2.23), 0.539, 0.001, "abs"
    yield "quarter-wave length at 7 GHz (um)", resonator.quarter_wave_length(p["f_design"], geom), 4220.0, 0.005, "rel"
    yield "Qc from -35 dB coupler", resonator.qc_from_coupler_s21(p["s21_coupler_db"]), 4967.0, 0.001, "rel"
    yield "kappa/2pi at (7.0 GHz, 5000) (MHz)", resonator.linewidth(p["f_design"], p["qc_design"]), 1.40, 1e-12, "abs"
    yield "kappa/2pi at (7.52 GHz, 5500) (MHz)", resonator.linewidth(p["f0_s21"], p["qc"]), 1.37, 0.005, "abs"
    yield "V0_rms (uV)", v0, 2.58, 0.005, "abs"
    yield "nu0_rms (MHz)", nu0, 623.0, 1.0, "abs"
    yield "R_N (kOhm)", design.r_n, 8.24, 0.01, "rel"
    yield "C_sigma (fF)", design.c_sigma, 35.8, 0.01, "rel"
    yield "E_C (ueV)", design.e_c, 2.23, 0.01, "rel"
    yield "nu_C (MHz)", design.nu_c * 1e3, 540.0, 0.01, "rel"
    yield "C_g / C_sigma", design.c_g / design.c_sigma, 0.090, 0.03, "rel"
    yield "C_g (fF)", design.c_g, 3.2, 0.05, "abs"
    spec = transmon.transmon_spectrum(design.e_j_max, design.e_c, n_cut=p["n_cut"], levels=3)
    yield "nu01 at r = 35 (GHz)", spec.nu01, 8.50, 0.02, "rel"
    yield "chi(54.3, 0.990, 0.561) (MHz)", coupled.dispersive_shift(p["g"], p["delta0"], 0.561), 3.89, 0.02, "abs"
    nu_c = coupled.nu_c_from_chi(p["chi"], p["delta0"], p["g"])
    yield "nu_C from chi (MHz)", nu_c * 1e3, 561.0, 1.0, "abs"
    e_j, nu_j = coupled.ej_from_spectroscopy(p["nu01_measured"], nu_c)
    yield "nu_J (GHz)", nu_j, 18.30, 0.05, "abs"
    yield "E_J max (ueV)", e_j, 76.0, 1.0, "abs"
    lo, hi = coupled.dressed_levels(p["f_r"], p["f_r"], p["g"])
    yield "vacuum-Rabi splitting at delta0 = 0 (MHz)", float(hi - lo) * 1e3, 2 * p["g"], 1e-9, "abs"
    yield "pi time at Omega = 6.17 MHz (ns)", rabi_pi_time(p["omega"]), 81.0, 1.0, "abs"

    closed = LindbladConfig(qubit_freq=p["qubit_freq"], integrator_step=p["step"])
    t_pi = rabi_pi_time(p["omega"])
    tr = evolve(closed, PulseSequence([PulseSegment.drive(t_pi, p["qubit_freq"], p["omega"])]))
    yield "closed-system P_e after pi pulse", float(tr.values[-1]), 1.0, 1e-3, "abs"
    chev = experiments.rabi_chevron(closed, (p["qubit_freq"] - 0.003, p["qubit_freq"] + 0.003),
                                    (0.0, p["tmax"]), (7, p["time_points"]), p["omega"])
    yield "minimum chevron frequency (MHz)", float(chev.oscillation_frequencies().min()), p["omega"], 0.01, "rel"

    open_cfg = LindbladConfig(qubit_freq=p["qubit_freq"], t1=p["t1"], t2=p["t2_ramsey"], integrator_step=p["step"])
    t1r = experiments.t1_experiment(open_cfg, np.linspace(0, p["t1_tmax"], p["t1_points"]), p["omega"])
    yield "fitted T1 (us)", t1r.time_constant, p["t1"], 0.01, "rel"
    eps = ps.epsilon_after_pi(p["tau_pi"], p["t1"])
    yield "P_e at tau = 0 vs epsilon", t1r.epsilon, eps, 0.015, "abs"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ram = experiments.ramsey_experiment(
            open_cfg.replace(parity_split=p["parity_split"]),
            np.linspace(0, p["ramsey_tmax"], p["ramsey_points"]),
            p["omega"],
            p["ramsey_detuning"],
        )
    yield "Ramsey peak separation (MHz)", ram.peak_separation, p["parity_split"], 0.02, "rel"
    yield "Ramsey envelope T2 (us)", ram.t2, p["t2_ramsey"], 0.02, "rel"
    echo_cfg = open_cfg.replace(t2=p["t2_echo"], parity_split=p["parity_split"])
    echo = experiments.echo_experiment(echo_cfg, np.linspace(0, p["echo_tmax"], p["echo_points"]), p["omega"],
                                       pulses=p["echo_pulses"])
    yield "echo T2 (us)", echo.time_constant, p["t2_echo"], 0.02, "rel"
    kappa = resonator.linewidth(p["f_r"], p["qc"])
    sweep = experiments.purcell_sweep([p["nu01"]], p["f_r"], kappa, p["g"], p["t1"], p["t2_echo"])
    yield "T1 at nu01 = 8.5 GHz (us)", float(sweep["t1_total"][0]), p["t1"], 0.15, "rel"

    f0 = p["f0_s21"]
    q = 1.0 / (1.0 / p["qi"] + 1.0 / p["qc"])
    freqs = np.linspace(f0 * (1 - p["s21_span_linewidths"] / q), f0 * (1 + p["s21_span_linewidths"] / q), p["s21_points"])
    fit = s21.fit_notch(s21.add_noise(s21.notch_model(f0, p["qi"], p["qc"], p["asymmetry"], freqs), 0.01, p["seed"]))
    yield "fitted Qi (sigma = 0.01)", fit.qi, 38600.0, 0.05, "rel"
    yield "fitted Qc (sigma = 0.01)", fit.qc, 5500.0, 0.05, "rel"
    yield "dispersive pull, ground (GHz)", s21.dispersive_pull(f0, p["chi"], "ground"), 7.5161, 1e-4, "abs"

    yield "epsilon after pi pulse", eps, 0.983, 0.0005, "abs"
    eta_s = ps.eta_static(eps, p["f_r"], p["qc_design"], p["g"], p["delta0"], p["t1"], p["t2_echo"])
    yield "eta_static (%)", 100 * eta_s, 0.9, 0.1, "abs"
    yield "eta_static Purcell-tuned reference (%)", 100 * ps.ETA_STATIC_PURCELL_REFERENCE, 1.8, 1e-12, "abs"
    eta_d = ps.eta_dynamic(p["qi"], p["qc"], p["tau_pi"], p["tau_swap"], p["t1"])
    yield "eta_dynamic (%)", 100 * eta_d, 85.0, 0.5, "abs"
    eta_i = ps.eta_dynamic(p["qi_improved"], p["qc_improved"], p["tau_pi"], p["tau_swap"], p["t1_improved"])
    yield "eta_dynamic improved device (%)", 100 * eta_i, 99.5, 0.0, "min"
    qopt = ps.qc_optimal(p["f_r"], p["t1_improved"], p["g"], p["delta0_design"], p["qc_convention"])
    yield "Qc optimal, improved device", qopt, 4300.0, 0.05, "rel"


def run_golden(params):
    """Evaluate every golden check; returns a list of :class:`GoldenResult`."""
    out = []
    for name, value, expected, tol, mode in _checks(params):
        out.append(GoldenResult(name, float(value), float(expected), tol, mode))
    return out


def summary(results):
    lines = [r.line() for r in results]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} golden checks passed")
    return "\n".join(lines)


__all__ = ["GoldenResult", "run_golden", "summary"]
