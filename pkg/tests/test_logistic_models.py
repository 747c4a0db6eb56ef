import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logimath import logistic_models as lm
from logimath.errors import SingularGridError, UnsupportedVariantError
from logimath.ode_engine import integrate
from logimath.residual import Grid, numeric_derivative
from logimath.special_fn import gamma_real, tricomi_eval, TricomiFunction

GOVERNED = [
    (lm.Classical(1.0, 1.0, 100.0), "canonical", Grid.uniform(-5, 15, 81)),
    (lm.Normalized(99.0, 1.0), "canonical", Grid.uniform(-5, 10, 64)),
    (lm.TwoExponential(1.0, 1.0, 2.0), "two-exp", Grid.uniform(-2, 8, 64)),
    (lm.TwoExponential(2.0, 2.0, 1.0), "two-exp", Grid.uniform(-2, 8, 64)),
    (lm.Richards(3.0, 1.0, 2.0), "richards", Grid.uniform(-3, 8, 64)),
    (lm.Forestry(1.0, 2.0, 1.0, 3.0, 0.5, 2.0), "forestry", Grid.uniform(0, 10, 64)),
    (lm.CoshLC(1.0, 1.0), "cosh", Grid.uniform(-3, 3, 64)),
    (lm.TwoExponential(1.0, 1.0, 0.5), "double-exp", Grid.uniform(-3, 6, 64)),
    (lm.LaguerreLogistic(1.0, 1.0), "theorem-3.1", Grid.uniform(0.5, 6, 64)),
    (lm.LaguerreLogistic(1.0, 1.0, 3.5, gamma_normalized=False), "theorem-3.2",
     Grid.uniform(0.5, 6, 64)),
    (lm.LaguerreLogistic(1.0, 1.0, 3.5), "theorem-3.2", Grid.uniform(0.5, 6, 64)),
]


def test_classical_at_zero():
    assert lm.evaluate(lm.Classical(1, 1, 100), 0.0) == pytest.approx(1.0)


def test_normalized_midpoint():
    m = lm.Normalized(99, 1)
    x = math.log(99)
    assert lm.evaluate(m, x) == pytest.approx(0.5, abs=1e-15)
    assert lm.derivative(m, x) == pytest.approx(0.25, abs=1e-15)


def test_laguerre_start_value():
    assert lm.evaluate(lm.LaguerreLogistic(99, 1), 0.0) == pytest.approx(0.01)


def test_classical_saturates():
    m = lm.Classical(1, 1, 100)
    assert lm.derivative(m, 60.0) < 1e-20
    assert lm.evaluate(m, 800.0) == pytest.approx(100.0)
    assert lm.evaluate(m, -800.0) == 0.0


def test_common_anchor():
    mu = 2.5
    vals = [lm.evaluate(m, 0.0) for m in
            (lm.Normalized(mu, 0.7), lm.CoshLC(mu, 1.3), lm.LaguerreLogistic(mu, 2.0, 1.7))]
    assert vals == pytest.approx([1 / (1 + mu)] * 3, rel=1e-15)


def test_gamma_normalisation_convention():
    a = lm.LaguerreLogistic(1.0, 1.0, 3.5)
    b = lm.LaguerreLogistic(1.0, 1.0, 3.5, gamma_normalized=False)
    x = 2.0
    e = tricomi_eval(TricomiFunction(3.5), x)
    assert lm.evaluate(a, x) == pytest.approx(1 / (1 + 1 / (gamma_real(4.5) * e)))
    assert lm.evaluate(b, x) == pytest.approx(1 / (1 + 1 / e))


@pytest.mark.parametrize("model,x", [
    (lm.Classical(1, 1, 100), 3.0),
    (lm.Normalized(4, 0.5), -1.0),
    (lm.TwoExponential(1, 1, -0.2), 2.0),
    (lm.Richards(1, 1, 2), 0.0),
    (lm.Richards(0.5, 2, 0.3), 1.0),
    (lm.Forestry(1.0, 2.0, 1.0, 3.0, 0.5, 2.0), 1.0),
    (lm.CoshLC(1, 1), 0.5),
    (lm.LaguerreLogistic(2, 1, 0.5), 1.5),
])
def test_derivative_matches_finite_difference(model, x):
    fd = numeric_derivative(lambda s: float(lm.evaluate(model, s)), x, 1).value
    assert lm.derivative(model, x) == pytest.approx(fd, rel=1e-7, abs=1e-12)


@pytest.mark.parametrize("model", [lm.Normalized(3, 1.2), lm.CoshLC(2, 0.7),
                                   lm.TwoExponential(1, 1, 0.5), lm.LaguerreLogistic(1, 1)])
def test_second_derivative_matches_finite_difference(model):
    x = 0.9
    fd = numeric_derivative(lambda s: float(lm.evaluate(model, s)), x, 2, h=1e-2).value
    assert model.second_derivative(x) == pytest.approx(fd, rel=1e-6)


def test_asymptotes():
    assert lm.asymptotes(lm.Normalized(99, 1)) == (0.0, 1.0)
    assert lm.asymptotes(lm.Classical(1, 1, 100)) == (0.0, 100.0)
    assert lm.asymptotes(lm.TwoExponential(1, 1, 2)) == (0.0, 1.0)
    assert lm.asymptotes(lm.TwoExponential(1, 1, -0.2)) == (0.0, 0.0)


def test_mixed_sign_decay_sampled():
    m = lm.TwoExponential(1, 1, -0.2)
    assert lm.evaluate(m, 50.0) < 1e-3
    assert lm.evaluate(m, -50.0) < 1e-20


@pytest.mark.parametrize("args,expected", [((1.5, 0.7, 0.7), 0.0), ((1, 1, 2), -1.0),
                                           ((2, 2, 1), 1.0)])
def test_two_exp_delta(args, expected):
    assert lm.two_exp_delta(*args) == pytest.approx(expected)


def test_two_exp_delta_zero_rate():
    with pytest.raises(ZeroDivisionError):
        lm.two_exp_delta(1, 0, 1)


@pytest.mark.parametrize("model,equation,grid", GOVERNED)
def test_governing_closure(model, equation, grid):
    rep = lm.governing_residual(model, grid, equation=equation)
    assert rep.passed, rep.verdict_line()
    assert rep.max_norm <= (1e-8 if rep.metadata["derivatives"] == "analytic" else 1e-5)


@pytest.mark.parametrize("model,equation,grid", GOVERNED)
def test_governing_closure_fd(model, equation, grid):
    rep = lm.governing_residual(model, grid, equation=equation, derivatives="fd")
    assert rep.max_norm <= 1e-5, rep.verdict_line()


def test_delta_sensitivity():
    m = lm.TwoExponential(1.0, 1.0, 2.0)
    g = Grid.uniform(-2, 8, 64)
    assert lm.governing_residual(m, g).max_norm <= 1e-8
    assert lm.governing_residual(m, g, delta=-0.9).max_norm > 1e-3


def test_double_exp_literal_sign_reported():
    rep = lm.governing_residual(lm.TwoExponential(1.0, 1.0, 0.5), Grid.uniform(-3, 6, 64),
                                equation="eq-2.11")
    assert rep.passed
    assert rep.metadata["literal_form_max"] > 1e-2


def test_singular_band():
    with pytest.raises(SingularGridError):
        lm.governing_residual(lm.CoshLC(1.0, 1.0), Grid.uniform(-40, 40, 11))


def test_wrong_equation_for_variant():
    with pytest.raises(UnsupportedVariantError):
        lm.governing_residual(lm.CoshLC(1, 1), Grid.uniform(0, 1, 5), equation="richards")


def test_unknown_equation():
    with pytest.raises(KeyError):
        lm.resolve_equation("eq-9.9")


def test_from_params_aliases():
    m = lm.Classical.from_params({"a": 1.0, "lambda": 2.0, "K": 50.0})
    assert m == lm.Classical(1.0, 2.0, 50.0)
    with pytest.raises(KeyError):
        lm.Normalized.from_params({"mu": 1.0, "rr": 1.0})


@pytest.mark.parametrize("bad", [lambda: lm.Classical(0, 1, 1), lambda: lm.Normalized(-1, 1),
                                 lambda: lm.LaguerreLogistic(1, 1, -1.5)])
def test_invariants(bad):
    with pytest.raises(ValueError):
        bad()


def test_variable_rate_examples():
    assert lm.variable_rate_solution(1.0, 0.01, 1.0, 0.0) == 1.0
    ref = lm.evaluate(lm.Classical(1, 1, 100), 5.0)
    assert lm.variable_rate_solution(1.0, 0.01, 1.0, 5.0) == pytest.approx(ref, abs=1e-9)
    got = lm.variable_rate_solution(lambda t: 1 + t, 0.0, 1.0, 1.0)
    assert got == pytest.approx(math.exp(1.5), rel=1e-12)


def test_variable_rate_model_matches_classical():
    m = lm.VariableRate(1.0, 0.01, 1.0)
    assert lm.evaluate(m, 3.0) == pytest.approx(lm.evaluate(lm.Classical(1, 1, 100), 3.0),
                                                rel=1e-11)


def test_linearize_classical():
    lin = lm.linearize(lm.Classical(1.0, 1.0, 100.0))
    assert lin.initial == 1.0
    assert lin.rhs(0.0, lin.initial) == pytest.approx(-1 + 0.01)


def test_linearize_richards():
    m = lm.Richards(3.0, 1.0, 2.0)
    lin = lm.linearize(m)
    x = np.linspace(-1, 4, 11)
    y = lin.forward(lm.evaluate(m, x))
    assert np.allclose(y, 1 + 3 * np.exp(-2 * x), rtol=1e-13)
    dy = -4 * 3 * np.exp(-2 * x) / 2  # d/dx (1 + 3 e^{-2x})
    assert np.max(np.abs(lin.residual(x, y, dy))) < 1e-12
    assert np.max(np.abs(lin.residual(x, y, dy, stated=True))) > 1.0


def test_linearized_round_trip():
    m = lm.Classical(1.0, 1.0, 100.0)
    lin = lm.linearize(m)
    traj = integrate(lin.system(), [lin.initial], (0.0, 10.0), tol=1e-12)
    back = lin.inverse(traj.y[:, 0])
    assert np.max(np.abs(back - lm.evaluate(m, traj.t))) < 1e-8


def test_linearize_unsupported():
    with pytest.raises(UnsupportedVariantError):
        lm.linearize(lm.CoshLC(1, 1))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 100), st.floats(0.05, 3), st.floats(-20, 20))
def test_normalized_range(mu, r, x):
    z = lm.evaluate(lm.Normalized(mu, r), x)
    assert 0 <= z <= 1


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 50), st.floats(0.1, 3), st.floats(-0.5, 4))
def test_monotone_variants(mu, r, nu):
    x = np.linspace(0, 6, 40)
    for m in (lm.Normalized(mu, r), lm.Richards(mu, r, 1.5), lm.LaguerreLogistic(mu, r, nu)):
        v = np.asarray(lm.evaluate(m, x))
        assert np.all(np.diff(v) >= 0)
        assert np.all((v > 0) & (v <= 1))
