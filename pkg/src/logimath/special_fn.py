"""Gamma function, Tricomi (Laguerre-exponential) functions and the
Laguerre derivative.

The ν-th order Tricomi function used throughout is

    e_ν(z) = Σ_{r≥0} z^r / (r! Γ(ν + r + 1)),      ν > -1,

with e_0(z) = I_0(2√z) for z ≥ 0. Term-wise differentiation shifts the
order, d/dz e_ν(z) = e_{ν+1}(z), which is how analytic derivatives are
produced here (no finite differences involved).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import PoleError, SeriesConvergenceError, StepUnderflowError
from .residual import Grid, ResidualReport, assemble_report, default_step, numeric_derivative

__all__ = [
    "SeriesPolicy",
    "TricomiFunction",
    "DEFAULT_POLICY",
    "gamma_real",
    "tricomi_eval",
    "tricomi_values",
    "tricomi_derivative",
    "laguerre_op_apply",
    "eigen_residual",
    "korf_residual",
]


@dataclass(frozen=True)
class SeriesPolicy:
    rel_tol: float = 1e-14
    max_terms: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError("max_terms must be a positive integer")


DEFAULT_POLICY = SeriesPolicy()


@dataclass(frozen=True)
class TricomiFunction:
    """x ↦ e_ν(λ x)."""

    nu: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.nu > -1:
            raise ValueError(f"Tricomi order must exceed -1, got {self.nu}")


# Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
_LANCZOS_G = 607 / 128
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


def gamma_real(x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Γ(x) for real x.

    Lanczos series for x ≥ 0.5, reflection Γ(x)Γ(1-x) = π / sin(πx) below.
    ``policy`` is accepted for interface symmetry with the series routines;
    the Lanczos sum has a fixed length.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x < 0.5:
        s = math.sin(math.pi * x)
        return math.pi / (s * gamma_real(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power so Γ(171) does not overflow in the intermediate
    half = t ** ((z + 0.5) / 2)
    return math.sqrt(2 * math.pi) * half * (half * math.exp(-t)) * acc


def _series(z: np.ndarray, nu: float, policy: SeriesPolicy) -> np.ndarray:
    z = np.ascontiguousarray(z, dtype=float)
    out = np.empty_like(z)
    first = 1.0 / gamma_real(nu + 1.0)
    bad = kernels.tricomi_series(z.ravel(), float(nu), first,
                                 float(policy.rel_tol), int(policy.max_terms), out.ravel())
    if bad >= 0:
        raise SeriesConvergenceError(
            f"e_{nu}({z.ravel()[bad]!r}) needs more than {policy.max_terms} terms "
            f"for rel_tol={policy.rel_tol}"
        )
    return out


def tricomi_values(
    f: TricomiFunction, x, policy: SeriesPolicy = DEFAULT_POLICY, order: int = 0
) -> np.ndarray:
    """Vectorised e_ν(λx) or its ``order``-th x-derivative λ^m e_{ν+m}(λx)."""
    x = np.asarray(x, dtype=float)
    vals = _series(f.scale * np.atleast_1d(x), f.nu + order, policy)
    if order:
        vals = vals * f.scale**order
    return vals.reshape(x.shape)


def tricomi_eval(f: TricomiFunction, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    return float(tricomi_values(f, x, policy))


def tricomi_derivative(
    f: TricomiFunction, x: float, policy: SeriesPolicy = DEFAULT_POLICY, order: int = 1
) -> float:
    """d^m/dx^m e_ν(λx) from the term-wise differentiated series."""
    if order < 1:
        raise ValueError("derivative order must be >= 1")
    return float(tricomi_values(f, x, policy, order))


def laguerre_op_apply(
    f: Callable[[float], float], x: float, nu: float = 0.0, h: float | None = None
) -> float:
    """(d/dx x d/dx + ν d/dx) f at x, via Richardson central differences.

    Expanded as (1 + ν) f'(x) + x f''(x), which stays regular at x = 0.
    """
    if h is None:
        h = default_step(x, 1)
    if not h > 1e-8 * max(1.0, abs(x)):
        raise StepUnderflowError(f"step {h!r} too small at x={x!r}")
    d1 = numeric_derivative(f, x, 1, h).value
    if x == 0.0:
        return (1.0 + nu) * d1
    d2 = numeric_derivative(f, x, 2, h).value
    return (1.0 + nu) * d1 + x * d2


def _check_positive_grid(grid: Grid):
    if grid.points[0] <= 0:
        raise ValueError("grid must lie strictly inside (0, inf)")


def eigen_residual(
    nu: float,
    lam: float,
    grid: Grid,
    policy: SeriesPolicy = DEFAULT_POLICY,
    tol: float = 1e-6,
    mode: str = "analytic",
) -> ResidualReport:
    """Residual of L_ν e_ν(λx) = λ e_ν(λx) on ``grid``.

    ``mode="analytic"`` uses the shifted-order series for the derivatives;
    ``mode="fd"`` applies :func:`laguerre_op_apply` to the series values.
    """
    _check_positive_grid(grid)
    fn = TricomiFunction(nu, lam)
    x = grid.points
    val = tricomi_values(fn, x, policy)
    if mode == "analytic":
        d1 = tricomi_values(fn, x, policy, 1)
        d2 = tricomi_values(fn, x, policy, 2)
        lhs = (1.0 + nu) * d1 + x * d2
    elif mode == "fd":
        g = lambda s: tricomi_eval(fn, s, policy)  # noqa: E731
        lhs = np.array([laguerre_op_apply(g, xi, nu) for xi in x])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    res = lhs - lam * val
    meta = {"equation": "laguerre-eigen", "nu": nu, "lambda": lam, "derivatives": mode}
    return assemble_report(res, tol, meta, x)


def korf_residual(
    lam: float,
    alpha: float,
    grid: Grid,
    policy: SeriesPolicy = DEFAULT_POLICY,
    tol: float = 1e-6,
    mode: str = "analytic",
) -> ResidualReport:
    """Residual of d/dt(t dN/dt) = λα² t^(α-1) N for N(t) = e_0(λ t^α)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    _check_positive_grid(grid)
    t = grid.points
    z = lam * t**alpha
    base = TricomiFunction(0.0, 1.0)
    n = tricomi_values(base, z, policy)
    if mode == "analytic":
        # N' = λα t^(α-1) e_1(z);  (t N')' = λα² t^(α-1) e_1 + (λα t^(α-1))² t e_2
        e1 = tricomi_values(base, z, policy, 1)
        e2 = tricomi_values(base, z, policy, 2)
        g = lam * alpha * t ** (alpha - 1)
        lhs = lam * alpha**2 * t ** (alpha - 1) * e1 + g * g * t * e2
    elif mode == "fd":
        fn = lambda s: tricomi_eval(base, lam * s**alpha, policy)  # noqa: E731
        lhs = np.array([laguerre_op_apply(fn, ti) for ti in t])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    res = lhs - lam * alpha**2 * t ** (alpha - 1) * n
    meta = {"equation": "korf", "lambda": lam, "alpha": alpha, "derivatives": mode}
    return assemble_report(res, tol, meta, t)
