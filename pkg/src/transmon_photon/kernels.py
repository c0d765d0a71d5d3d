"""Backend selection for the RK4 propagation kernel.

The compiled Cython extension is used when it imports; otherwise the numpy
fallback. Set ``TRANSMON_PHOTON_BACKEND=python`` to force the fallback.
Undriven segments take the same numpy path on both backends.
"""

import os

import numpy as np
import scipy.sparse as sp

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

AVAILABLE_BACKENDS = ("compiled", "python") if _compiled is not None else ("python",)

if os.environ.get("TRANSMON_PHOTON_BACKEND", "").lower() == "python" or _compiled is None:
    DEFAULT_BACKEND = "python"
else:
    DEFAULT_BACKEND = "compiled"


def _csr_parts(mat, n):
    if mat is None:
        mat = sp.csr_matrix((n, n), dtype=np.complex128)
    csr = sp.csr_matrix(mat, dtype=np.complex128)
    csr.sort_indices()
    return (
        np.ascontiguousarray(csr.data, dtype=np.complex128),
        np.ascontiguousarray(csr.indices, dtype=np.intc),
        np.ascontiguousarray(csr.indptr, dtype=np.intc),
    )


def _dense(mat):
    if mat is None:
        return None
    if sp.issparse(mat):
        return mat.toarray()
    return np.asarray(mat, dtype=np.complex128)


def rk4_propagate(l0, lp, lm, w, phi, y0, h, nsteps, sample_every=None, backend=None):
    """Fixed-step RK4 for dy/dt = (L0 + a Lp + conj(a) Lm) y, a = exp(-i(w t + phi)).

    Parameters
    ----------
    l0, lp, lm : (n, n) array or sparse matrix
        Static generator and the two drive generators. ``lp=None`` (with
        ``lm=None``) means undriven.
    y0 : (n,) or (n, m) complex array
    h : float
        Step size.
    nsteps : int
    sample_every : int, optional
        Record the state after every ``sample_every`` steps (default: only the
        final state). ``nsteps`` must be a multiple of it.
    backend : {"compiled", "python"}, optional

    Returns
    -------
    ndarray of shape (nsteps // sample_every,) + y0.shape
    """
    backend = backend or DEFAULT_BACKEND
    if backend not in AVAILABLE_BACKENDS:
        raise ValueError(f"backend {backend!r} unavailable; have {AVAILABLE_BACKENDS}")
    if sample_every is None:
        sample_every = nsteps
    if nsteps <= 0 or sample_every <= 0 or nsteps % sample_every:
        raise ValueError("nsteps must be a positive multiple of sample_every")
    y0 = np.asarray(y0, dtype=np.complex128)
    vector = y0.ndim == 1
    y = y0[:, None] if vector else y0
    n = y.shape[0]
    driven = lp is not None or lm is not None

    if backend == "compiled" and driven:
        parts = _csr_parts(l0, n) + _csr_parts(lp, n) + _csr_parts(lm, n)
        out = _compiled.rk4_propagate_csr(
            *parts, driven, float(w), float(phi), y, float(h), int(nsteps), int(sample_every)
        )
    else:
        # undriven segments reduce to repeated dense products with the RK4
        # step matrix, which BLAS handles faster than a CSR loop
        lp_d, lm_d = _dense(lp), _dense(lm)
        if driven:
            if lp_d is None:
                lp_d = np.zeros((n, n), dtype=np.complex128)
            if lm_d is None:
                lm_d = np.zeros((n, n), dtype=np.complex128)
        out = _kernels_py.rk4_propagate(
            _dense(l0), lp_d, lm_d, w, phi, y, h, nsteps, sample_every
        )
    return out[:, :, 0] if vector else out
