import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logimath.errors import ParseError, StepUnderflowError
from logimath.residual import (
    Grid,
    assemble_report,
    default_step,
    format_float,
    numeric_derivative,
)


def test_first_derivative_of_cubic():
    d = numeric_derivative(lambda x: x**3, 2.0, 1)
    assert abs(d.value - 12.0) < 1e-9


def test_second_derivative_of_sine_at_zero():
    assert abs(numeric_derivative(math.sin, 0.0, 2).value) < 1e-9


def test_third_derivative_of_exp():
    assert abs(numeric_derivative(math.exp, 1.0, 3).value - math.e) < 1e-5


@pytest.mark.parametrize("order,degree", [(1, 4), (2, 4), (3, 4)])
def test_stencils_exact_on_polynomials(order, degree):
    # a moderate step keeps round-off out of the way; truncation error is zero
    coeffs = [0.3, -1.2, 0.7, 2.0, -0.5][: degree + 1]
    p = np.polynomial.Polynomial(coeffs)
    dp = p.deriv(order)
    for x in (-1.3, 0.0, 0.8, 2.5):
        got = numeric_derivative(p, x, order, h=1.0 if order == 3 else 0.25).value
        assert abs(got - dp(x)) <= 1e-12


def test_refinement_exponent_order_one():
    f, x = math.exp, 0.7
    h = 0.2
    from logimath.residual import _stencil
    e1 = abs(_stencil(f, x, 1, h) - math.exp(x))
    e2 = abs(_stencil(f, x, 1, h / 2) - math.exp(x))
    assert math.log2(e1 / e2) >= 3.5


def test_error_estimate_is_small_for_smooth_function():
    d = numeric_derivative(math.cos, 0.4, 1)
    assert d.error < 1e-8


def test_step_floor():
    with pytest.raises(StepUnderflowError):
        numeric_derivative(math.sin, 1.0, 1, h=1e-10)


def test_bad_order():
    with pytest.raises(ValueError):
        numeric_derivative(math.sin, 1.0, 4)


def test_nan_flagged():
    with pytest.raises(ArithmeticError):
        numeric_derivative(lambda x: math.nan, 1.0, 1)


def test_default_steps():
    assert default_step(0.1, 1) == 1e-4
    assert default_step(10.0, 2) == pytest.approx(1e-3)
    assert default_step(-5.0, 3) == pytest.approx(5e-3)


def test_report_all_zero_passes():
    rep = assemble_report([0.0, 0.0, 0.0], 1e-6)
    assert rep.passed and rep.max_norm == 0


def test_report_single_fails():
    assert assemble_report([1e-3], 1e-6).verdict == "FAIL"


def test_report_norms():
    rep = assemble_report([3.0, 4.0], 10.0)
    assert rep.max_norm == 4.0
    assert rep.l2_norm == pytest.approx(math.sqrt(12.5))


def test_report_empty():
    with pytest.raises(ValueError):
        assemble_report([], 1.0)


def test_report_diag_and_complex():
    rep = assemble_report(np.array([3 + 4j, -1j]), 0.0, {"equation": "x"}, diagnostic=True)
    assert rep.verdict == "DIAG"
    assert rep.max_norm == 5.0
    assert rep.metadata["max_re"] == 3.0 and rep.metadata["max_im"] == 4.0
    text = rep.to_csv()
    assert text.splitlines()[0] == "x,residual,re,im"


def test_report_csv_and_verdict_line():
    rep = assemble_report([0.1, 0.2], 1.0, points=[1.0, 2.0])
    buf = io.StringIO()
    rep.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines == ["x,residual", "1,0.10000000000000001", "2,0.20000000000000001"]
    assert rep.verdict_line() == "PASS max=2.000000e-01 l2=1.581139e-01 tol=1.000000e+00"


def test_format_float_round_trips():
    for v in (0.1, 1 / 3, 1e-300, -2.5e17):
        assert float(format_float(v)) == v


def test_grid_parse():
    g = Grid.parse("0:1:11")
    assert len(g) == 11 and g.is_uniform and g.spacing == pytest.approx(0.1)


@pytest.mark.parametrize("text", ["0:1", "a:1:3", "1:0:5", "0:1:2"])
def test_grid_parse_errors(text):
    with pytest.raises(ParseError):
        Grid.parse(text)


def test_grid_rejects_non_monotone():
    with pytest.raises(ValueError):
        Grid(np.array([0.0, 2.0, 1.0]))


def test_grid_nonuniform():
    assert not Grid(np.array([0.0, 1.0, 3.0])).is_uniform


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=40),
       st.floats(1e-12, 1e6))
def test_report_invariants(values, tol):
    rep = assemble_report(values, tol)
    assert rep.max_norm >= 0
    assert rep.l2_norm <= rep.max_norm
    assert rep.passed == (rep.max_norm <= tol)
