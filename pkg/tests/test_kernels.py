import numpy as np
import pytest
from scipy.linalg import expm

from transmon_photon import kernels
from transmon_photon.kernels import AVAILABLE_BACKENDS, rk4_propagate

BACKENDS = list(AVAILABLE_BACKENDS)


def _random_generators(n=9, seed=1):
    rng = np.random.default_rng(seed)
    l0 = 0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    lp = 0.1 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    lm = 0.1 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    y0 = rng.normal(size=n) + 1j * rng.normal(size=n)
    return l0, lp, lm, y0


@pytest.mark.parametrize("backend", BACKENDS)
def test_static_matches_expm(backend):
    l0, _, _, y0 = _random_generators()
    out = rk4_propagate(l0, None, None, 0.0, 0.0, y0, 0.01, 400, 100, backend=backend)
    for k, y in enumerate(out, start=1):
        assert np.allclose(y, expm(l0 * k) @ y0, atol=1e-8)


@pytest.mark.parametrize("backend", BACKENDS)
def test_sampling_shapes(backend):
    l0, lp, lm, y0 = _random_generators()
    assert rk4_propagate(l0, lp, lm, 1.0, 0.2, y0, 0.01, 100, 10, backend=backend).shape == (10, 9)
    block = np.stack([y0, 2 * y0], axis=1)
    out = rk4_propagate(l0, lp, lm, 1.0, 0.2, block, 0.01, 100, backend=backend)
    assert out.shape == (1, 9, 2)
    assert np.allclose(out[0, :, 1], 2 * out[0, :, 0])


def test_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    l0, lp, lm, y0 = _random_generators()
    for args in ((lp, lm, 2.5, 0.3), (None, None, 0.0, 0.0)):
        a = rk4_propagate(l0, args[0], args[1], args[2], args[3], y0, 0.02, 500, 50, backend="compiled")
        b = rk4_propagate(l0, args[0], args[1], args[2], args[3], y0, 0.02, 500, 50, backend="python")
        assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(b))


@pytest.mark.parametrize("backend", BACKENDS)
def test_driven_matches_fine_reference(backend):
    # a very fine python RK4 run serves as the reference solution
    l0, lp, lm, y0 = _random_generators(5, seed=3)
    coarse = rk4_propagate(l0, lp, lm, 3.0, 0.1, y0, 0.01, 200, backend=backend)[-1]
    fine = rk4_propagate(l0, lp, lm, 3.0, 0.1, y0, 0.0005, 4000, backend="python")[-1]
    assert np.allclose(coarse, fine, atol=1e-8)


def test_bad_arguments():
    l0, _, _, y0 = _random_generators()
    with pytest.raises(ValueError):
        rk4_propagate(l0, None, None, 0.0, 0.0, y0, 0.01, 10, 3)
    with pytest.raises(ValueError):
        rk4_propagate(l0, None, None, 0.0, 0.0, y0, 0.01, 10, backend="fortran")


def test_default_backend_is_available():
    assert kernels.DEFAULT_BACKEND in AVAILABLE_BACKENDS
