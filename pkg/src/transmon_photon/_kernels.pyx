# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled fixed-step RK4 propagator for linear systems

    dy/dt = (L0 + a(t) Lp + conj(a(t)) Lm) y,   a(t) = exp(-i (w t + phi)),

with the three generators in CSR form and ``y`` an (n, m) block of column
vectors. Mirrors ``_kernels_py.rk4_propagate``.
"""

import numpy as np
from libc.math cimport cos, sin

ctypedef double complex cplx


cdef inline void _csr_acc(const cplx[::1] data, const int[::1] ind, const int[::1] ptr,
                          cplx[:, ::1] y, cplx[:, ::1] out, cplx coef,
                          Py_ssize_t n, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i, jj, j, k
    cdef cplx a
    for i in range(n):
        for jj in range(ptr[i], ptr[i + 1]):
            a = coef * data[jj]
            j = ind[jj]
            for k in range(m):
                out[i, k] = out[i, k] + a * y[j, k]


cdef inline void _rhs(const cplx[::1] d0, const int[::1] i0, const int[::1] p0,
                      const cplx[::1] dp, const int[::1] ip, const int[::1] pp,
                      const cplx[::1] dm, const int[::1] im, const int[::1] pm,
                      bint driven, double w, double phi, double t,
                      cplx[:, ::1] y, cplx[:, ::1] out,
                      Py_ssize_t n, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i, k
    cdef double arg
    cdef cplx a, ac
    for i in range(n):
        for k in range(m):
            out[i, k] = 0
    _csr_acc(d0, i0, p0, y, out, 1.0, n, m)
    if driven:
        arg = w * t + phi
        a = cos(arg) - 1j * sin(arg)
        ac = cos(arg) + 1j * sin(arg)
        _csr_acc(dp, ip, pp, y, out, a, n, m)
        _csr_acc(dm, im, pm, y, out, ac, n, m)


def rk4_propagate_csr(d0, i0, p0, dp, ip, pp, dm, im, pm, bint driven,
                      double w, double phi, y0, double h,
                      Py_ssize_t nsteps, Py_ssize_t sample_every):
    """Advance ``y0`` by ``nsteps`` RK4 steps of size ``h``.

    Returns an array of shape (nsteps // sample_every, n, m) holding the state
    after every ``sample_every`` steps.
    """
    cdef const cplx[::1] vd0 = d0
    cdef const int[::1] vi0 = i0
    cdef const int[::1] vp0 = p0
    cdef const cplx[::1] vdp = dp
    cdef const int[::1] vip = ip
    cdef const int[::1] vpp = pp
    cdef const cplx[::1] vdm = dm
    cdef const int[::1] vim = im
    cdef const int[::1] vpm = pm

    y_arr = np.array(y0, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = y_arr.shape[0]
    cdef Py_ssize_t m = y_arr.shape[1]
    cdef Py_ssize_t nsamp = nsteps // sample_every
    out_arr = np.empty((nsamp, n, m), dtype=np.complex128)
    k1_arr = np.empty((n, m), dtype=np.complex128)
    k2_arr = np.empty((n, m), dtype=np.complex128)
    k3_arr = np.empty((n, m), dtype=np.complex128)
    k4_arr = np.empty((n, m), dtype=np.complex128)
    tmp_arr = np.empty((n, m), dtype=np.complex128)

    cdef cplx[:, ::1] y = y_arr
    cdef cplx[:, :, ::1] out = out_arr
    cdef cplx[:, ::1] k1 = k1_arr
    cdef cplx[:, ::1] k2 = k2_arr
    cdef cplx[:, ::1] k3 = k3_arr
    cdef cplx[:, ::1] k4 = k4_arr
    cdef cplx[:, ::1] tmp = tmp_arr

    cdef Py_ssize_t step, i, k, s = 0
    cdef double t, half = 0.5 * h, sixth = h / 6.0

    with nogil:
        for step in range(nsteps):
            t = step * h
            _rhs(vd0, vi0, vp0, vdp, vip, vpp, vdm, vim, vpm, driven, w, phi, t, y, k1, n, m)
            for i in range(n):
                for k in range(m):
                    tmp[i, k] = y[i, k] + half * k1[i, k]
            _rhs(vd0, vi0, vp0, vdp, vip, vpp, vdm, vim, vpm, driven, w, phi, t + half, tmp, k2, n, m)
            for i in range(n):
                for k in range(m):
                    tmp[i, k] = y[i, k] + half * k2[i, k]
            _rhs(vd0, vi0, vp0, vdp, vip, vpp, vdm, vim, vpm, driven, w, phi, t + half, tmp, k3, n, m)
            for i in range(n):
                for k in range(m):
                    tmp[i, k] = y[i, k] + h * k3[i, k]
            _rhs(vd0, vi0, vp0, vdp, vip, vpp, vdm, vim, vpm, driven, w, phi, t + h, tmp, k4, n, m)
            for i in range(n):
                for k in range(m):
                    y[i, k] = y[i, k] + sixth * (k1[i, k] + 2.0 * k2[i, k] + 2.0 * k3[i, k] + k4[i, k])
            if (step + 1) % sample_every == 0:
                for i in range(n):
                    for k in range(m):
                        out[s, i, k] = y[i, k]
                s += 1
    return out_arr

