"""Pure numpy fallback of the RK4 propagator in ``_kernels.pyx``."""

import numpy as np


def rk4_step_matrix(l0, h):
    """Matrix of one RK4 step for the autonomous system dy/dt = L0 y."""
    eye = np.eye(l0.shape[0], dtype=np.complex128)
    hl = h * l0
    step_matrix = eye
    for order in (4, 3, 2, 1):
        step_matrix = eye + (hl / order) @ step_matrix
    return step_matrix


def rk4_propagate(l0, lp, lm, w, phi, y0, h, nsteps, sample_every):
    """Same contract as :func:`transmon_photon.kernels.rk4_propagate` (dense inputs)."""
    y = np.array(y0, dtype=np.complex128, copy=True)
    out = np.empty((nsteps // sample_every,) + y.shape, dtype=np.complex128)
    driven = lp is not None
    s = 0
    if not driven:
        # autonomous linear system: one RK4 step is a fixed matrix polynomial
        step_matrix = rk4_step_matrix(l0, h)
        for step in range(nsteps):
            y = step_matrix @ y
            if (step + 1) % sample_every == 0:
                out[s] = y
                s += 1
        return out

    def rhs(t, v):
        a = np.exp(-1j * (w * t + phi))
        return l0 @ v + a * (lp @ v) + np.conj(a) * (lm @ v)

    half = 0.5 * h
    for step in range(nsteps):
        t = step * h
        k1 = rhs(t, y)
        k2 = rhs(t + half, y + half * k1)
        k3 = rhs(t + half, y + half * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (step + 1) % sample_every == 0:
            out[s] = y
            s += 1
    return out
