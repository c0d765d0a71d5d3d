"""Command-line front end.

Every command resolves a full parameter set (built-in profile, optional
profile file, ``--set key=value`` pairs, then per-parameter flags), runs,
prints a JSON summary to stdout and writes its artifacts to the output
directory. Exit status: 0 success, 2 usage error, 3 computation error.
"""

import argparse
import csv
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import coupled, photon_source, resonator, s21, transmon
from .errors import ComputationError, DomainError
from .golden import run_golden, summary as golden_summary
from .kernels import AVAILABLE_BACKENDS
from .profile import (
    REFERENCE_PROFILE,
    ProfileError,
    UnknownParameterError,
    header_lines,
    load_profile,
    parse_span,
)

OUTPUT_DIR_ENV = "TRANSMON_PHOTON_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "transmon_photon_output"
COMMANDS = ("design", "spectrum", "anticross", "simulate", "photon-source", "fit-s21", "golden")
EXPERIMENTS = ("rabi", "t1", "ramsey", "echo", "purcell")


class UsageError(Exception):
    pass


# -- artifact writers ------------------------------------------------------------


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path, columns, rows, params, title=None):
    """CSV with a '#' comment header holding the resolved parameters."""
    with open(path, "w", newline="") as fh:
        if title:
            fh.write(f"# {title}\n")
        for line in header_lines(params):
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def read_csv(path):
    """Inverse of :func:`write_csv`: (columns, float array, header comment lines)."""
    comments = []
    body = []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            else:
                body.append(line)
    rows = list(csv.reader(body))
    columns = rows[0]
    data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float).reshape(-1, len(columns))
    return columns, data, comments


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def flat_record(record, params):
    out = {k: _jsonable(v) for k, v in record.items()}
    out.update({f"param_{k}": _jsonable(v) for k, v in params.items()})
    return out


def write_json(path, record, params):
    with open(path, "w") as fh:
        json.dump(flat_record(record, params), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def write_gnuplot(path, csv_name, xcol, ycols, xlabel, ylabel, title, surface=False):
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        f"set title '{title}'",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set key autotitle columnhead",
    ]
    if surface:
        lines += ["set view map", f"splot '{csv_name}' using {xcol}:{ycols[0]}:{ycols[1]} with image"]
    else:
        plots = ", ".join(f"'{csv_name}' using {xcol}:{c} with lines" for c in ycols)
        lines.append(f"plot {plots}")
    Path(path).write_text("\n".join(lines) + "\n")


# -- commands --------------------------------------------------------------------


def _geometry(p):
    return resonator.CpwGeometry(p["centre_width"], p["gap"], p["c_r"], p["l_r"], p["beta"], p["z0"])


def cmd_design(p, out, args):
    geom = _geometry(p)
    v0, nu0 = resonator.vacuum_fluctuations(p["f_design"], geom, p["length"], p["v0_mode"])
    d = transmon.design_transmon(p["r"], p["nu01"], p["nu_gap"], p["delta0_design"], nu0 * 1e-3,
                                 p["chi_design"] * 1e-3)
    spec = transmon.transmon_spectrum(d.e_j_max, d.e_c, n_cut=p["n_cut"], levels=3)
    res = resonator.design_resonator(p["f_design"], geom, s21_db=p["s21_coupler_db"], qi=p["qi"])
    dev = geom.consistency_deviations()
    rec = {
        "r_n_kohm": d.r_n,
        "c_sigma_ff": d.c_sigma,
        "c_g_ff": d.c_g,
        "cg_ratio": d.c_g / d.c_sigma,
        "e_c_uev": d.e_c,
        "nu_c_mhz": d.nu_c * 1e3,
        "e_j_max_uev": d.e_j_max,
        "nu01_numeric_ghz": spec.nu01,
        "anharmonicity_mhz": spec.anharmonicity * 1e3,
        "v0_rms_uv": v0,
        "nu0_rms_mhz": nu0,
        "resonator_length_um": res.length,
        "qc_coupler": res.qc,
        "kappa_mhz": res.kappa_over_2pi,
        "z0_lc_deviation": dev["z0"],
        "beta_lc_deviation": dev["phase_const"],
    }
    write_json(out / "design.json", rec, p)
    return rec


def cmd_spectrum(p, out, args):
    c_sigma = transmon.csigma_for_target(p["r"], p["nu01"])
    e_c = transmon.charging_energy(c_sigma)
    e_j = p["r"] * e_c
    ng = np.linspace(0.0, 0.5, p["ng_points"])
    spec = transmon.transmon_spectrum(e_j, e_c, ng, n_cut=p["n_cut"], levels=4)
    cols = ["n_g"] + [f"level_{k}_ghz" for k in range(spec.levels.shape[0])]
    write_csv(out / "spectrum.csv", cols, np.column_stack([ng, spec.levels.T]), p, "transmon levels vs n_g")
    if args.gnuplot:
        write_gnuplot(out / "spectrum.gp", "spectrum.csv", 1, [3, 4, 5], "n_g", "E_m - E_0 (GHz)", "transmon levels")
    rec = {
        "e_j_uev": e_j,
        "e_c_uev": e_c,
        "nu01_ghz": spec.nu01,
        "nu12_ghz": spec.nu12,
        "anharmonicity_mhz": spec.anharmonicity * 1e3,
        "dispersion_01_mhz": spec.dispersion_01,
        "nu01_perturbative_ghz": transmon.perturbative_nu01(e_j, e_c),
    }
    write_json(out / "spectrum.json", rec, p)
    return rec


def cmd_anticross(p, out, args):
    nu_c = coupled.nu_c_from_chi(p["chi"], p["delta0"], p["g"])
    _, nu_j = coupled.ej_from_spectroscopy(p["nu01_measured"], nu_c)
    flux = np.linspace(0.0, 0.5, p["flux_points"]) + p["flux_offset"]
    sw = coupled.anticrossing_sweep(flux, nu_j, nu_c, p["f_r"], p["g"], p["flux_offset"])
    cols = ["flux", "lower", "upper", "bare_qubit", "bare_resonator"]
    write_csv(out / "anticross.csv", cols, np.column_stack([sw[c] for c in cols]), p, "dressed levels vs flux (GHz)")
    if args.gnuplot:
        write_gnuplot(out / "anticross.gp", "anticross.csv", 1, [2, 3, 4, 5], "flux (Phi0)", "frequency (GHz)",
                      "vacuum-Rabi anticrossing")
    rec = {
        "nu_c_ghz": nu_c,
        "nu_j_ghz": nu_j,
        "anticrossing_flux": coupled.anticrossing_flux(nu_j, nu_c, p["f_r"], p["flux_offset"]),
        "min_splitting_mhz": float(np.min(sw["upper"] - sw["lower"]) * 1e3),
    }
    write_json(out / "anticross.json", rec, p)
    return rec


def _open_config(p, t2):
    from .dynamics.engine import LindbladConfig

    return LindbladConfig(
        qubit_freq=p["qubit_freq"],
        t1=p["t1"],
        t2=t2,
        qubit_levels=p["qubit_levels"],
        integrator_step=p["step"],
        tolerance=p["tolerance"],
    )


def cmd_simulate(p, out, args):
    from .dynamics import experiments

    exp = args.experiment
    backend = args.backend
    if exp == "rabi":
        lo, hi = parse_span(p["span"])
        chev = experiments.rabi_chevron(_open_config(p, p["t2_ramsey"]), (lo, hi), (0.0, p["tmax"]),
                                        (p["chevron_points"], p["time_points"]), p["omega"],
                                        workers=min(4, os.cpu_count() or 1), backend=backend)
        ff, tt = np.meshgrid(chev.freqs, chev.durations)
        write_csv(out / "rabi_chevron.csv", ["freq_ghz", "duration_ns", "pe"],
                  np.column_stack([ff.T.ravel(), tt.T.ravel(), chev.pe.T.ravel()]), p, "Rabi chevron")
        osc = chev.oscillation_frequencies()
        det = (chev.freqs - p["qubit_freq"]) * 1e3
        write_csv(out / "rabi_frequencies.csv", ["freq_ghz", "detuning_mhz", "oscillation_mhz"],
                  np.column_stack([chev.freqs, det, osc]), p, "chevron oscillation frequency")
        if args.gnuplot:
            write_gnuplot(out / "rabi_chevron.gp", "rabi_chevron.csv", 1, [2, 3], "drive (GHz)",
                          "duration (ns)", "Rabi chevron", surface=True)
        i0 = int(np.argmin(np.abs(det)))
        return {
            "min_oscillation_mhz": float(osc.min()),
            "zero_detuning_period_ns": 1e3 / float(osc[i0]),
            "pi_time_ns": 1e3 / (2.0 * p["omega"]),
        }

    if exp == "t1":
        taus = np.linspace(0.0, p["t1_tmax"], p["t1_points"])
        r = experiments.t1_experiment(_open_config(p, p["t2_ramsey"]), taus, p["omega"], backend=backend)
        write_csv(out / "t1.csv", ["tau_ns", "pe"], np.column_stack([taus, r.trace.values]), p, "T1 decay")
        if args.gnuplot:
            write_gnuplot(out / "t1.gp", "t1.csv", 1, [2], "tau (ns)", "P_e", "T1")
        rec = {"t1_fit_us": r.time_constant, "epsilon": r.epsilon, "fit_residual": r.fit.residual}

    elif exp == "ramsey":
        taus = np.linspace(0.0, p["ramsey_tmax"], p["ramsey_points"])
        cfg = _open_config(p, p["t2_ramsey"]).replace(parity_split=p["parity_split"])
        r = experiments.ramsey_experiment(cfg, taus, p["omega"], p["ramsey_detuning"], backend=backend)
        write_csv(out / "ramsey.csv", ["tau_ns", "pe"], np.column_stack([taus, r.trace.values]), p, "Ramsey fringe")
        write_csv(out / "ramsey_spectrum.csv", ["freq_mhz", "magnitude"],
                  np.column_stack([r.spectrum_freqs, r.spectrum_magnitude]), p, "Ramsey FFT")
        if args.gnuplot:
            write_gnuplot(out / "ramsey.gp", "ramsey.csv", 1, [2], "tau (ns)", "P_e", "Ramsey")
        rec = {"t2_fit_us": r.t2, "peak_separation_mhz": r.peak_separation, "fit_residual": r.fit.residual}
        rec.update({f"peak_{k}_mhz": f for k, f in enumerate(r.peak_freqs)})

    elif exp == "echo":
        taus = np.linspace(0.0, p["echo_tmax"], p["echo_points"])
        cfg = _open_config(p, p["t2_echo"]).replace(parity_split=p["parity_split"])
        r = experiments.echo_experiment(cfg, taus, p["omega"], pulses=p["echo_pulses"], backend=backend)
        write_csv(out / "echo.csv", ["tau_ns", "pe"], np.column_stack([taus, r.trace.values]), p, "echo decay")
        if args.gnuplot:
            write_gnuplot(out / "echo.gp", "echo.csv", 1, [2], "tau (ns)", "P_e", "spin echo")
        rec = {"t2_echo_fit_us": r.time_constant, "fit_residual": r.fit.residual}

    else:
        lo, hi = parse_span(p["purcell_span"])
        grid = np.linspace(lo, hi, p["purcell_points"])
        grid = grid[grid != p["f_r"]]
        kappa = resonator.linewidth(p["f_r"], p["qc"])
        sw = experiments.purcell_sweep(grid, p["f_r"], kappa, p["g"], p["t1"], p["t2_echo"])
        cols = ["nu01", "delta0", "t1_total", "t2_echo_bound"]
        write_csv(out / "purcell.csv", cols, np.column_stack([sw[c] for c in cols]), p,
                  "T1 and T2 echo bound vs qubit frequency (GHz, us)")
        if args.gnuplot:
            write_gnuplot(out / "purcell.gp", "purcell.csv", 1, [3, 4], "nu01 (GHz)", "time (us)", "Purcell limit")
        rec = {"kappa_mhz": kappa, "t1_at_max_nu01_us": float(sw["t1_total"][-1])}
    write_json(out / f"{exp}.json", rec, p)
    return rec


def cmd_photon_source(p, out, args):
    rep = photon_source.photon_source_report(
        f_r=p["f_r"], qi=p["qi"], qc=p["qc"], qc_static=p["qc_design"], g=p["g"], delta0=p["delta0"],
        t1=p["t1"], t2=p["t2_echo"], tau_pi=p["tau_pi"], tau_swap=p["tau_swap"],
        qc_convention=p["qc_convention"], delta0_design=p["delta0_design"],
    )
    rec = rep.to_record()
    rec["eta_dynamic_improved"] = photon_source.eta_dynamic(
        p["qi_improved"], p["qc_improved"], p["tau_pi"], p["tau_swap"], p["t1_improved"]
    )
    rec["qc_optimal_improved"] = photon_source.qc_optimal(
        p["f_r"], p["t1_improved"], p["g"], p["delta0_design"], p["qc_convention"]
    )
    table = rep.to_table()
    if p["simulate_protocol"]:
        sim = photon_source.simulate_dynamic_protocol(
            f_r=p["f_r"], qi=p["qi"], qc=p["qc"], g=p["g"], delta0=p["delta0"], t1=p["t1"], t2=p["t2_echo"],
            tau_pi=p["tau_pi"], tau_swap=p["tau_swap"], decay=p["decay"], ramp=p["ramp"], n_max=p["n_max"],
            step=p["protocol_step"], tolerance=p["tolerance"], backend=args.backend,
        )
        sim.write_csv(out / "protocol_trace.csv", header=["dynamic photon-source protocol"] + header_lines(p))
        if args.gnuplot:
            write_gnuplot(out / "protocol_trace.gp", "protocol_trace.csv", 1, [2, 3, 4, 5], "time (ns)",
                          "probability / photons", "dynamic protocol")
        rec["simulated_emission_probability"] = sim.emission_probability
        rec["simulated_hold_ns"] = sim.hold
        table += f"\nsimulated emission probability  {100 * sim.emission_probability:.3f} %"
    write_json(out / "photon_source.json", rec, p)
    (out / "photon_source.txt").write_text(table + "\n")
    print(table, file=sys.stderr)
    return rec


def cmd_fit_s21(p, out, args):
    header = header_lines(p)
    results = {}
    if args.input:
        sweeps = [(Path(f).stem, s21.read_sweep_csv(f)) for f in args.input]
    else:
        f0 = p["f0_s21"]
        q = 1.0 / (1.0 / p["qi"] + 1.0 / p["qc"])
        half = p["s21_span_linewidths"] * f0 / q
        sweep = s21.notch_model(f0, p["qi"], p["qc"], p["asymmetry"], np.linspace(f0 - half, f0 + half, p["s21_points"]))
        if p["noise_sigma"] > 0:
            sweep = s21.add_noise(sweep, p["noise_sigma"], p["seed"])
        s21.write_sweep_csv(out / "s21_sweep.csv", sweep, header=["synthetic notch sweep"] + header)
        if args.gnuplot:
            Path(out / "s21_sweep.gp").write_text(
                "set datafile separator ','\nset datafile commentschars '#'\n"
                "set xlabel 'f (GHz)'\nset ylabel '|S21| (dB)'\n"
                "plot 's21_sweep.csv' using 1:(10*log10($2**2+$3**2)) every ::1 with lines title 'S21'\n"
            )
        sweeps = [("s21_sweep", sweep)]
    for name, sweep in sweeps:
        fit = s21.fit_notch(sweep)
        extra = {f"param_{k}": _jsonable(v) for k, v in p.items()}
        s21.write_fit_json(out / f"fit_{name}.json", fit, extra)
        results.update({f"{name}_{k}": v for k, v in fit.to_record().items()})
    return results


def cmd_golden(p, out, args):
    results = run_golden(p)
    write_csv(out / "golden.csv", ["index", "value", "expected", "tolerance", "error", "passed"],
              [[i, r.value, r.expected, r.tolerance, r.error, int(r.passed)] for i, r in enumerate(results)], p,
              "golden checks; names in golden.txt")
    text = golden_summary(results)
    (out / "golden.txt").write_text(text + "\n")
    print(text, file=sys.stderr)
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise ComputationError("golden checks failed: " + ", ".join(failed))
    return {"checks": len(results), "passed": len(results)}


HANDLERS = {
    "design": cmd_design,
    "spectrum": cmd_spectrum,
    "anticross": cmd_anticross,
    "simulate": cmd_simulate,
    "photon-source": cmd_photon_source,
    "fit-s21": cmd_fit_s21,
    "golden": cmd_golden,
}


# -- argument parsing ------------------------------------------------------------


def _common_parser():
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--profile", help="profile file (key = value lines or JSON)")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="parameter override")
    common.add_argument("--output-dir", help=f"artifact directory (default ${OUTPUT_DIR_ENV} or ./{DEFAULT_OUTPUT_DIR})")
    common.add_argument("--seed", type=int, help="seed for synthetic noise")
    common.add_argument("--gnuplot", action="store_true", help="also write gnuplot scripts")
    common.add_argument("--backend", choices=AVAILABLE_BACKENDS, help="RK4 kernel backend")
    grp = common.add_argument_group("parameters")
    for key, default in REFERENCE_PROFILE.items():
        if key == "seed":
            continue
        flags = [f"--{key}"]
        if "_" in key:
            flags.append(f"--{key.replace('_', '-')}")
        grp.add_argument(*flags, dest=f"param_{key}", metavar="V", help=f"default {default!r}")
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="transmon-photon",
        description="Transmon and resonator design, pulse simulation and photon-source efficiency.",
        epilog="exit status: 0 success, 2 usage error, 3 computation error",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("design", parents=[common], help="transmon and resonator design targets", allow_abbrev=False)
    sub.add_parser("spectrum", parents=[common], help="charge-basis transmon spectrum", allow_abbrev=False)
    sub.add_parser("anticross", parents=[common], help="dressed levels vs flux", allow_abbrev=False)
    sim = sub.add_parser("simulate", parents=[common], help="simulated pulse experiments", allow_abbrev=False)
    sim.add_argument("experiment", choices=EXPERIMENTS)
    sub.add_parser("photon-source", parents=[common], help="photon-source efficiency report", allow_abbrev=False)
    fit = sub.add_parser("fit-s21", parents=[common], help="fit notch S21 sweeps", allow_abbrev=False)
    fit.add_argument("--input", action="append", help="sweep CSV (freq_ghz,re,im); repeatable")
    sub.add_parser("golden", parents=[common], help="golden-value regression checks", allow_abbrev=False)
    return parser


def resolve_params(args):
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip().replace("-", "_")] = v.strip()
    for key in REFERENCE_PROFILE:
        v = getattr(args, f"param_{key}", None)
        if v is not None:
            overrides[key] = v
    if args.seed is not None:
        overrides["seed"] = args.seed
    return load_profile(args.profile, overrides)


def output_dir(args):
    path = Path(args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR)
    path.mkdir(parents=True, exist_ok=True)
    return path


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = resolve_params(args)
    except (UnknownParameterError, ProfileError, UsageError, ValueError, OSError) as exc:
        parser.error(str(exc))
    out = output_dir(args)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            record = HANDLERS[args.command](params, out, args)
    except (ComputationError, DomainError, np.linalg.LinAlgError) as exc:
        print(f"transmon-photon: computation error: {exc}", file=sys.stderr)
        return 3
    json.dump({k: _jsonable(v) for k, v in record.items()}, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
