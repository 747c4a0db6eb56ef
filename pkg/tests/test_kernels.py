import numpy as np
import pytest

from logimath import kernels
from logimath.special_fn import gamma_real

BACKENDS = ["python"]
try:
    kernels.get_backend("cython")
    BACKENDS.append("cython")
except ImportError:
    pass


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("name", BACKENDS)
def test_tricomi_series_failure_index(name):
    mod = kernels.get_backend(name)
    z = np.array([0.0, 1.0, 400.0])
    out = np.empty_like(z)
    assert mod.tricomi_series(z, 0.0, 1.0, 1e-14, 20, out) == 2


@pytest.mark.parametrize("name", BACKENDS)
def test_laguerre_cn_keeps_constants(name):
    mod = kernels.get_backend(name)
    x = np.linspace(0, 5, 51)
    F = np.full_like(x, 2.5)
    mod.laguerre_cn(F, x, 1e-2, 20, 0.5)
    assert np.allclose(F, 2.5, atol=1e-13)


@pytest.mark.parametrize("name", BACKENDS)
def test_laguerre_cn_conserves_mass(name):
    # zero flux at both ends: the trapezoidal-cell integral is invariant
    mod = kernels.get_backend(name)
    x = np.linspace(0, 4, 81)
    F = np.exp(-(x - 2) ** 2)
    w = np.full_like(x, x[1] - x[0])
    w[0] = w[-1] = w[0] / 2
    before = np.sum(w * F)
    mod.laguerre_cn(F, x, 5e-3, 100, 0.5)
    assert np.sum(w * F) == pytest.approx(before, rel=1e-12)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
def test_backends_bit_identical():
    py, cy = kernels.get_backend("python"), kernels.get_backend("cython")
    z = np.linspace(-20, 60, 301)
    a, b = np.empty_like(z), np.empty_like(z)
    first = 1 / gamma_real(4.5)
    assert py.tricomi_series(z, 3.5, first, 1e-14, 300, a) == -1
    assert cy.tricomi_series(z, 3.5, first, 1e-14, 300, b) == -1
    assert np.array_equal(a, b)

    x = np.linspace(0, 10, 201)
    F1 = 1 + x + x**2 + x**3
    F2 = F1.copy()
    py.laguerre_cn(F1, x, 1e-3, 50, 0.5)
    cy.laguerre_cn(F2, x, 1e-3, 50, 0.5)
    assert np.array_equal(F1, F2)
