import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from logimath.errors import PoleError, SeriesConvergenceError, StepUnderflowError
from logimath.residual import Grid
from logimath.special_fn import (
    SeriesPolicy,
    TricomiFunction,
    eigen_residual,
    gamma_real,
    korf_residual,
    laguerre_op_apply,
    tricomi_derivative,
    tricomi_eval,
    tricomi_values,
)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.5, 7.25, 30.0, 170.5, -0.5, -2.5, 1e-3])
def test_gamma_against_scipy(x):
    assert gamma_real(x) == pytest.approx(special.gamma(x), rel=1e-14)


def test_gamma_integers():
    for n in range(1, 15):
        assert gamma_real(n) == pytest.approx(math.factorial(n - 1), rel=1e-14)


@pytest.mark.parametrize("x", [0, -1, -7])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma_real(x)


def test_e0_at_zero_is_one():
    assert tricomi_eval(TricomiFunction(), 0.0) == 1.0


def test_e_nu_at_zero():
    assert tricomi_eval(TricomiFunction(3.5), 0.0) == pytest.approx(1 / special.gamma(4.5))


def test_bessel_identity():
    x = np.linspace(0, 10, 200)
    e0 = tricomi_values(TricomiFunction(), x)
    ref = special.i0(2 * np.sqrt(x))
    assert np.max(np.abs(e0 - ref) / ref) <= 1e-12


def test_negative_argument_gives_j0():
    x = np.linspace(-10, 0, 50)
    e0 = tricomi_values(TricomiFunction(), x)
    assert np.allclose(e0, special.j0(2 * np.sqrt(-x)), atol=1e-12)


def test_bessel_identity_higher_order():
    # e_nu(x) = x^{-nu/2} I_nu(2 sqrt x)
    x = np.linspace(0.1, 8, 40)
    for nu in (1.0, 2.5):
        got = tricomi_values(TricomiFunction(nu), x)
        ref = x ** (-nu / 2) * special.iv(nu, 2 * np.sqrt(x))
        assert np.allclose(got, ref, rtol=1e-12)


def test_derivative_shifts_order():
    f = TricomiFunction(1.5, 2.0)
    x = 0.8
    d1 = tricomi_derivative(f, x)
    assert d1 == pytest.approx(2.0 * tricomi_eval(TricomiFunction(2.5), 1.6), rel=1e-14)
    num = (tricomi_eval(f, x + 1e-5) - tricomi_eval(f, x - 1e-5)) / 2e-5
    assert d1 == pytest.approx(num, rel=1e-8)


def test_derivative_order_validation():
    with pytest.raises(ValueError):
        tricomi_derivative(TricomiFunction(), 1.0, order=0)


def test_invalid_order():
    with pytest.raises(ValueError):
        TricomiFunction(-1.0)


def test_series_cap():
    with pytest.raises(SeriesConvergenceError):
        tricomi_eval(TricomiFunction(), 500.0, SeriesPolicy(max_terms=10))


def test_policy_validation():
    with pytest.raises(ValueError):
        SeriesPolicy(rel_tol=0)
    with pytest.raises(ValueError):
        SeriesPolicy(max_terms=0)


def test_laguerre_operator_on_e0():
    f = lambda s: tricomi_eval(TricomiFunction(), s)  # noqa: E731
    assert laguerre_op_apply(f, 2.0) == pytest.approx(f(2.0), abs=1e-6)


def test_laguerre_operator_at_origin():
    # (x f')' at 0 reduces to f'(0)
    assert laguerre_op_apply(lambda s: s**2 + 3 * s, 0.0) == pytest.approx(3.0, abs=1e-9)


def test_laguerre_operator_on_power():
    # (d/dx x d/dx) x^3 = 9 x^2
    assert laguerre_op_apply(lambda s: s**3, 1.5, h=0.1) == pytest.approx(9 * 2.25, rel=1e-12)
    assert laguerre_op_apply(lambda s: s**3, 1.5) == pytest.approx(9 * 2.25, rel=1e-8)


def test_laguerre_operator_step_floor():
    with pytest.raises(StepUnderflowError):
        laguerre_op_apply(math.exp, 1.0, h=1e-12)


@pytest.mark.parametrize("nu", [0.0, 1.0, 3.5])
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_eigen_residual(nu, lam, unit_grid):
    rep = eigen_residual(nu, lam, unit_grid)
    assert rep.passed, rep.verdict_line()
    assert rep.metadata["derivatives"] == "analytic"


def test_eigen_residual_fd_mode(unit_grid):
    rep = eigen_residual(0.0, 1.0, unit_grid, mode="fd", tol=1e-5)
    assert rep.passed


def test_eigen_wrong_eigenvalue_fails(unit_grid):
    fn = TricomiFunction(0.0, 1.0)
    from logimath.residual import assemble_report
    x = unit_grid.points
    lhs = tricomi_values(fn, x, order=1) + x * tricomi_values(fn, x, order=2)
    bad = assemble_report(lhs - 1.1 * tricomi_values(fn, x), 1e-6)
    assert not bad.passed


@pytest.mark.parametrize("alpha", [1.0, 2.0, 0.5])
def test_korf_residual(alpha, unit_grid):
    assert korf_residual(1.0, alpha, unit_grid).passed


def test_residual_grid_must_be_positive():
    with pytest.raises(ValueError):
        eigen_residual(0.0, 1.0, Grid.uniform(0.0, 1.0, 5))


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.9, 6.0), st.floats(0.0, 20.0))
def test_series_recurrence(nu, z):
    # e_{nu-1}(z) = nu e_nu(z) + z e_{nu+1}(z) for nu > 0 (contiguous relation)
    if nu <= 0.1:
        return
    lo = tricomi_eval(TricomiFunction(nu - 1), z)
    mid = tricomi_eval(TricomiFunction(nu), z)
    hi = tricomi_eval(TricomiFunction(nu + 1), z)
    assert lo == pytest.approx(nu * mid + z * hi, rel=1e-12, abs=1e-300)
