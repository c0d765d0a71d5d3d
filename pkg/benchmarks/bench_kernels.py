"""Compare the compiled and pure-Python RK4 kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Three workloads are timed:
a detuned qubit drive (4-dim Liouvillian), the pi pulse of the photon-source
protocol (67-dim, qubit plus resonator with loss accumulators) and the
undriven swap-and-decay stretch of that protocol, which both backends run
through the same precomputed RK4 step matrix.
"""

import argparse
import time

import numpy as np

from transmon_photon.dynamics.engine import LindbladConfig, Model
from transmon_photon.kernels import AVAILABLE_BACKENDS, rk4_propagate


def qubit_workload():
    cfg = LindbladConfig(qubit_freq=8.512, t1=4.72, t2=6.38)
    model = Model(cfg)
    l0, _ = model.static_generator(cfg.qubit_freq, cfg.qubit_freq + 0.002)
    lp, lm = model.drive_generators(6.17)
    y0 = model.vec(model.ground_state())
    return "qubit, driven, 4-dim", (l0, lp, lm, 2 * np.pi * 0.002, 0.0, y0, 0.25, 20000, 100)


def _protocol_model():
    cfg = LindbladConfig(qubit_freq=8.49, t1=4.72, t2=6.69, n_max=3, resonator_freq=7.5,
                         kappa_ext=1.364, kappa_int=0.194, integrator_step=0.01)
    return Model(cfg)


def protocol_pulse_workload():
    model = _protocol_model()
    l0, _ = model.static_generator(8.49, 7.5)
    lp, lm = model.drive_generators(6.25)
    y0 = model.vec(model.ground_state())
    return f"protocol pi pulse, {model.size}-dim", (l0, lp, lm, 2 * np.pi * 0.993, 0.0, y0, 0.01, 8000, 100)


def protocol_decay_workload():
    model = _protocol_model()
    l0, _ = model.static_generator(7.5, 7.5)
    rho = np.zeros((model.dim, model.dim), dtype=complex)
    rho[model.dim // 2, model.dim // 2] = 1.0
    return f"protocol decay, {model.size}-dim", (l0, None, None, 0.0, 0.0, model.vec(rho), 0.01, 50000, 100)


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"backends available: {', '.join(AVAILABLE_BACKENDS)}")
    for label, wl in (qubit_workload(), protocol_pulse_workload(), protocol_decay_workload()):
        results = {}
        for backend in AVAILABLE_BACKENDS:
            results[backend] = best_of(args.repeats, lambda: rk4_propagate(*wl, backend=backend))
        line = f"{label:<32}" + "".join(f"  {b}: {t * 1e3:8.1f} ms" for b, (t, _) in results.items())
        if len(results) == 2:
            (tc, yc), (tp, yp) = results["compiled"], results["python"]
            line += f"  speedup {tp / tc:5.1f}x  max diff {np.max(np.abs(yc - yp)):.1e}"
        print(line)


if __name__ == "__main__":
    main()
