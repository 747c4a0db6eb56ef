"""Catalogue of logistic-type functions and the equations they satisfy.

Each variant is an immutable dataclass exposing its closed form, its
analytic derivatives where they exist, and its limits at ±∞. The module
functions (:func:`evaluate`, :func:`governing_residual`, ...) work on any
variant.

Normalized variants share the shape Z = 1 / (1 + μ P(x)) with a
characteristic P that is an eigenfunction of some linear operator; that
eigen-relation is what produces the nonlinear governing equation.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate
from scipy.special import expit

from .errors import (
    DomainError,
    QuadratureError,
    SingularGridError,
    UnsupportedVariantError,
)
from .residual import Grid, ResidualReport, assemble_report, numeric_derivative
from .special_fn import DEFAULT_POLICY, SeriesPolicy, TricomiFunction, gamma_real, tricomi_values

__all__ = [
    "Classical",
    "Normalized",
    "TwoExponential",
    "Richards",
    "Forestry",
    "CoshLC",
    "LaguerreLogistic",
    "VariableRate",
    "LogisticModel",
    "Asymptotes",
    "GoverningEquation",
    "EQUATIONS",
    "LinearizedModel",
    "DIVERGENT",
    "OSCILLATORY",
    "UNDETERMINED",
    "evaluate",
    "derivative",
    "asymptotes",
    "governing_residual",
    "two_exp_delta",
    "variable_rate_solution",
    "linearize",
]

DIVERGENT = "divergent"
OSCILLATORY = "oscillatory"
UNDETERMINED = "undetermined"


class Asymptotes(NamedTuple):
    neg_inf: float | str
    pos_inf: float | str


def _arr(x):
    return np.asarray(x, dtype=float)


def _out(x, v):
    return float(v) if np.ndim(x) == 0 else v


class LogisticModel:
    """Common behaviour of all variants. Subclasses are frozen dataclasses."""

    variant = "abstract"
    #: keys accepted by :meth:`from_params`, with aliases
    param_aliases: dict = {}

    def value(self, x, policy: SeriesPolicy = DEFAULT_POLICY):
        raise NotImplementedError

    def first_derivative(self, x, policy: SeriesPolicy = DEFAULT_POLICY):
        raise NotImplementedError

    def second_derivative(self, x, policy: SeriesPolicy = DEFAULT_POLICY):
        raise NotImplementedError

    def limits(self) -> Asymptotes:
        return Asymptotes(UNDETERMINED, UNDETERMINED)

    @property
    def normalized(self) -> bool:
        """True if values live in (0, 1) (i.e. Z rather than F)."""
        return True

    @classmethod
    def from_params(cls, params: dict) -> "LogisticModel":
        """Build a model from ``key=value`` style parameters (floats)."""
        kwargs = {}
        for key, val in params.items():
            name = cls.param_aliases.get(key, key)
            if name not in cls.__dataclass_fields__:
                raise KeyError(key)
            kwargs[name] = val
        return cls(**kwargs)


@dataclass(frozen=True)
class Classical(LogisticModel):
    """F(x) = f0 e^{rx} / (1 + (f0/K)(e^{rx} - 1))."""

    f0: float
    r: float
    K: float
    variant = "classical"
    param_aliases = {"a": "f0", "lambda": "r", "k": "K"}

    def __post_init__(self):
        if not (self.f0 > 0 and self.K > 0):
            raise ValueError("Classical logistic needs f0 > 0 and K > 0")

    @property
    def normalized(self) -> bool:
        return False

    def _parts(self, x):
        # returns (numerator scale, denominator) after dividing by e^{rx} where rx > 0
        x = _arr(x)
        rx = self.r * x
        q = self.f0 / self.K
        with np.errstate(over="ignore"):
            e_neg = np.exp(-np.abs(rx))
        pos = rx > 0
        # rx > 0: F = f0 / (e^{-rx}(1 - q) + q);   rx <= 0: F = f0 e^{rx} / (1 + q(e^{rx} - 1))
        num = np.where(pos, 1.0, e_neg)
        den = np.where(pos, e_neg * (1 - q) + q, 1 + q * (e_neg - 1))
        if np.any(den <= 0):
            raise DomainError("classical logistic denominator vanishes on the domain")
        return num, den, e_neg, pos

    def value(self, x, policy=DEFAULT_POLICY):
        num, den, _, _ = self._parts(x)
        return _out(x, self.f0 * num / den)

    def first_derivative(self, x, policy=DEFAULT_POLICY):
        _, den, e_neg, _ = self._parts(x)
        q = self.f0 / self.K
        # F' = f0 r (1-q) e^{rx} / D^2; after rescaling the numerator is e^{-|rx|} on both branches
        return _out(x, self.f0 * self.r * (1 - q) * e_neg / den**2)

    def second_derivative(self, x, policy=DEFAULT_POLICY):
        f = _arr(self.value(x))
        d1 = _arr(self.first_derivative(x))
        return _out(x, self.r * (1 - 2 * f / self.K) * d1)

    def limits(self):
        if self.r > 0:
            return Asymptotes(0.0, self.K)
        if self.r < 0:
            return Asymptotes(self.K, 0.0)
        return Asymptotes(self.f0, self.f0)


@dataclass(frozen=True)
class Normalized(LogisticModel):
    """Z(x) = 1 / (1 + μ e^{-rx})."""

    mu: float
    r: float
    variant = "normalized"
    param_aliases = {"lambda": "r"}

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("Normalized logistic needs mu > 0")

    def _s(self, x):
        return self.r * _arr(x) - math.log(self.mu)

    def value(self, x, policy=DEFAULT_POLICY):
        return _out(x, expit(self._s(x)))

    def first_derivative(self, x, policy=DEFAULT_POLICY):
        s = self._s(x)
        return _out(x, self.r * expit(s) * expit(-s))

    def second_derivative(self, x, policy=DEFAULT_POLICY):
        s = self._s(x)
        a, b = expit(s), expit(-s)
        return _out(x, self.r**2 * a * b * (b - a))

    def limits(self):
        if self.r > 0:
            return Asymptotes(0.0, 1.0)
        if self.r < 0:
            return Asymptotes(1.0, 0.0)
        return Asymptotes(1 / (1 + self.mu), 1 / (1 + self.mu))


@dataclass(frozen=True)
class TwoExponential(LogisticModel):
    """Z(x) = 1 / (1 + μ (c1 e^{-r1 x} + c2 e^{-r2 x}))."""

    mu: float
    r1: float
    r2: float
    c1: float = 1.0
    c2: float = 1.0
    variant = "two-exponential"

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("TwoExponential needs c1, c2 >= 0")

    def _p(self, x):
        x = _arr(x)
        e1 = self.c1 * np.exp(-self.r1 * x)
        e2 = self.c2 * np.exp(-self.r2 * x)
        return e1, e2

    def _z(self, x):
        e1, e2 = self._p(x)
        den = 1 + self.mu * (e1 + e2)
        if np.any(den <= 0):
            raise DomainError("two-exponential denominator vanishes on the domain")
        return 1 / den, e1, e2

    def value(self, x, policy=DEFAULT_POLICY):
        return _out(x, self._z(x)[0])

    def first_derivative(self, x, policy=DEFAULT_POLICY):
        z, e1, e2 = self._z(x)
        dp = -self.r1 * e1 - self.r2 * e2
        return _out(x, -self.mu * dp * z * z)

    def second_derivative(self, x, policy=DEFAULT_POLICY):
        z, e1, e2 = self._z(x)
        dp = -self.r1 * e1 - self.r2 * e2
        ddp = self.r1**2 * e1 + self.r2**2 * e2
        dz = -self.mu * dp * z * z
        return _out(x, -self.mu * (ddp * z * z + 2 * dp * z * dz))

    def limits(self):
        def side(sign):
            # behaviour of c e^{-r x} as x -> sign*inf
            grows = [c > 0 and -r * sign > 0 for c, r in ((self.c1, self.r1), (self.c2, self.r2))]
            if any(grows):
                return 0.0 if self.mu > 0 else DIVERGENT
            rest = sum(c for c, r in ((self.c1, self.r1), (self.c2, self.r2)) if r == 0)
            return 1 / (1 + self.mu * rest)
        return Asymptotes(side(-1), side(+1))


@dataclass(frozen=True)
class Richards(LogisticModel):
    """F(x) = (1 + μ e^{-n r x})^{-1/n}, n > 0 not necessarily integer."""

    mu: float
    r: float
    n: float
    variant = "richards"

    def __post_init__(self):
        if not self.n > 0:
            raise ValueError("Richards exponent n must be positive")

    def _u(self, x):
        u = self.mu * np.exp(-self.n * self.r * _arr(x))
        base = 1 + u
        if np.any(base <= 0):
            raise DomainError("Richards base 1 + mu e^{-nrx} must stay positive")
        return u, base

    def value(self, x, policy=DEFAULT_POLICY):
        _, base = self._u(x)
        return _out(x, base ** (-1 / self.n))

    def first_derivative(self, x, policy=DEFAULT_POLICY):
        u, base = self._u(x)
        return _out(x, self.r * u * base ** (-1 / self.n - 1))

    def second_derivative(self, x, policy=DEFAULT_POLICY):
        u, base = self._u(x)
        return _out(x, -self.n * self.r**2 * u * base ** (-1 / self.n - 2) * (1 - u / self.n))

    def limits(self):
        if self.mu <= 0:
            return Asymptotes(UNDETERMINED, UNDETERMINED)
        if self.r > 0:
            return Asymptotes(0.0, 1.0)
        if self.r < 0:
            return Asymptotes(1.0, 0.0)
        v = (1 + self.mu) ** (-1 / self.n)
        return Asymptotes(v, v)


@dataclass(frozen=True)
class Forestry(LogisticModel):
    """σ(x) = α + (λ / (χ + η e^{-kx}))^{1/n}."""

    alpha: float
    lam: float
    chi: float
    eta: float
    k: float
    n: float
    variant = "forestry"
    param_aliases = {"lambda": "lam"}

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("Forestry exponent n must be non-zero")

    @property
    def normalized(self) -> bool:
        return False

    def _q(self, x):
        e = np.exp(-self.k * _arr(x))
        den = self.chi + self.eta * e
        if np.any(den <= 0):
            raise DomainError("chi + eta e^{-kx} must stay positive")
        q = self.lam / den
        if np.any(q <= 0):
            raise DomainError("fractional power of a non-positive base")
        return q, e, den

    def value(self, x, policy=DEFAULT_POLICY):
        q, _, _ = self._q(x)
        return _out(x, self.alpha + q ** (1 / self.n))

    def first_derivative(self, x, policy=DEFAULT_POLICY):
        q, e, den = self._q(x)
        s = q ** (1 / self.n)
        return _out(x, s * self.k * self.eta * e / (self.n * den))

    def limits(self):
        def saturated(den):
            if den > 0:
                return self.alpha + (self.lam / den) ** (1 / self.n)
            return UNDETERMINED
        if self.k == 0:
            v = saturated(self.chi + self.eta)
            return Asymptotes(v, v)
        # side where e^{-kx} -> 0 saturates; the other side sends the base to 0 (eta > 0)
        flat = saturated(self.chi)
        if self.eta > 0:
            steep = self.alpha if self.n > 0 else DIVERGENT
        else:
            steep = UNDETERMINED
        return Asymptotes(steep, flat) if self.k > 0 else Asymptotes(flat, steep)


@dataclass(frozen=True)
class CoshLC(LogisticModel):
    """Z(x) = 1 / (1 + μ cosh(rx))."""

    mu: float
    r: float
    variant = "cosh"

    def _z(self, x):
        den = 1 + self.mu * np.cosh(self.r * _arr(x))
        if np.any(den <= 0):
            raise DomainError("1 + mu cosh(rx) must stay positive")
        return 1 / den

    def value(self, x, policy=DEFAULT_POLICY):
        return _out(x, self._z(x))

    def first_derivative(self, x, policy=DEFAULT_POLICY):
        z = self._z(x)
        return _out(x, -self.mu * self.r * np.sinh(self.r * _arr(x)) * z * z)

    def second_derivative(self, x, policy=DEFAULT_POLICY):
        z = self._z(x)
        rx = self.r * _arr(x)
        dz = -self.mu * self.r * np.sinh(rx) * z * z
        return _out(x, -self.mu * self.r**2 * np.cosh(rx) * z * z
                    - 2 * self.mu * self.r * np.sinh(rx) * z * dz)

    def limits(self):
        if self.r == 0:
            v = 1 / (1 + self.mu)
            return Asymptotes(v, v)
        if self.mu > 0:
            return Asymptotes(0.0, 0.0)
        return Asymptotes(DIVERGENT, DIVERGENT)


@dataclass(frozen=True)
class LaguerreLogistic(LogisticModel):
    """Z(x) = 1 / (1 + μ / P(x)) with P = c e_ν(λx).

    ``gamma_normalized=True`` uses c = Γ(ν+1) so that P(0) = 1 and every
    variant starts at 1/(1+μ); ``False`` uses c = 1 (plain e_ν).
    """

    mu: float
    lam: float
    nu: float = 0.0
    gamma_normalized: bool = True
    variant = "laguerre"
    param_aliases = {"lambda": "lam"}

    def __post_init__(self):
        if not (self.mu > 0 and self.lam > 0 and self.nu > -1):
            raise ValueError("LaguerreLogistic needs mu > 0, lambda > 0, nu > -1")

    @property
    def _c(self):
        return gamma_real(self.nu + 1) if self.gamma_normalized else 1.0

    def characteristic(self, x, policy=DEFAULT_POLICY, order=0):
        fn = TricomiFunction(self.nu, self.lam)
        return self._c * tricomi_values(fn, _arr(x), policy, order)

    def _parts(self, x, policy):
        p = self.characteristic(x, policy)
        den = p + self.mu
        if np.any(np.abs(den) <= 1e-14 * (np.abs(p) + self.mu)):
            raise DomainError("Laguerre logistic denominator vanishes")
        return p, den

    def value(self, x, policy=DEFAULT_POLICY):
        p, den = self._parts(x, policy)
        return _out(x, p / den)

    def first_derivative(self, x, policy=DEFAULT_POLICY):
        _, den = self._parts(x, policy)
        dp = self.characteristic(x, policy, 1)
        return _out(x, self.mu * dp / den**2)

    def second_derivative(self, x, policy=DEFAULT_POLICY):
        _, den = self._parts(x, policy)
        dp = self.characteristic(x, policy, 1)
        ddp = self.characteristic(x, policy, 2)
        return _out(x, self.mu * (ddp * den - 2 * dp * dp) / den**3)

    def limits(self):
        return Asymptotes(OSCILLATORY, 1.0)


@dataclass(frozen=True)
class VariableRate(LogisticModel):
    """Logistic growth with rate r(x) and inverse capacity k(x)."""

    r: Callable[[float], float]
    k: Callable[[float], float]
    f0: float
    quad_tol: float = 1e-12
    variant = "variable-rate"

    @property
    def normalized(self) -> bool:
        return False

    def value(self, x, policy=DEFAULT_POLICY):
        xs = _arr(x)
        vals = np.array([variable_rate_solution(self.r, self.k, self.f0, xi, self.quad_tol)
                         for xi in xs.ravel()]).reshape(xs.shape)
        return _out(x, vals)

    def first_derivative(self, x, policy=DEFAULT_POLICY):
        xs = _arr(x)
        f = _arr(self.value(xs))
        rr = np.vectorize(lambda s: float(self.r(s)))(xs)
        kk = np.vectorize(lambda s: float(self.k(s)))(xs)
        return _out(x, rr * f - kk * f * f)


# ---------------------------------------------------------------------------
# module level operations


def evaluate(model: LogisticModel, x, policy: SeriesPolicy = DEFAULT_POLICY):
    return model.value(x, policy)


def derivative(model: LogisticModel, x, policy: SeriesPolicy = DEFAULT_POLICY):
    return model.first_derivative(x, policy)


def asymptotes(model: LogisticModel) -> Asymptotes:
    return model.limits()


def two_exp_delta(mu: float, r1: float, r2: float) -> float:
    """Coefficient Δ = -μ (r2 - r1) / r1 of the two-exponential equation."""
    if r1 == 0:
        raise ZeroDivisionError("two_exp_delta needs r1 != 0")
    return -mu * (r2 - r1) / r1


def _as_callable(f):
    if callable(f):
        return f
    c = float(f)
    return lambda t: c


def _quad(fn, a, b, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fn, a, b, epsabs=tol * 1e-3, epsrel=tol, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc)) from None
    return val


def variable_rate_solution(r, k, f0: float, x: float, quad_tol: float = 1e-12) -> float:
    """Closed form of F' = r(x) F - k(x) F² with F(0) = f0 by nested quadrature.

    F(x) = f0 e^{R(x)} / (1 + f0 ∫_0^x e^{R(t)} k(t) dt),   R(x) = ∫_0^x r.

    The inner integral R is memoised on its abscissa since the outer
    quadrature revisits it at every node.
    """
    if not f0 > 0:
        raise ValueError("f0 must be positive")
    r, k = _as_callable(r), _as_callable(k)

    @functools.lru_cache(maxsize=4096)
    def big_r(t):
        return _quad(r, 0.0, t, quad_tol) if t != 0.0 else 0.0

    if x == 0.0:
        return float(f0)
    outer = _quad(lambda t: math.exp(big_r(t)) * k(t), 0.0, x, quad_tol)
    denom = 1 + f0 * outer
    if denom == 0:
        raise DomainError("variable-rate solution has a pole at this x")
    return f0 * math.exp(big_r(float(x))) / denom


# ---------------------------------------------------------------------------
# governing equations


@dataclass(frozen=True)
class GoverningEquation:
    """One nonlinear equation together with the variants it governs.

    ``residual(model, x, d)`` returns LHS - RHS on the abscissas ``x``;
    ``d(m)`` supplies the m-th derivative of the model on the same points.
    """

    name: str
    order: int
    residual: Callable
    variants: tuple
    singular_band: bool = False
    laguerre_type: bool = False
    description: str = ""
    literal: Callable | None = field(default=None, compare=False)


def _canonical(m, x, d, **_):
    f = d(0)
    cap = m.K if isinstance(m, Classical) else 1.0
    return d(1) - m.r * (1 - f / cap) * f


def _two_exp(m, x, d, delta=None, **_):
    if delta is None:
        delta = two_exp_delta(m.mu * m.c2, m.r1, m.r2)
    z = d(0)
    return d(1) - m.r1 * (1 - (1 + delta * np.exp(-m.r2 * x)) * z) * z


def _richards(m, x, d, **_):
    f = d(0)
    return d(1) - m.r * (1 - f**m.n) * f


def _forestry(m, x, d, **_):
    s = d(0) - m.alpha
    return d(1) - m.k / (m.n * m.lam) * (m.lam - m.chi * s**m.n) * s


def _cosh(m, x, d, **_):
    z, z1 = d(0), d(1)
    return d(2) - 2 * (z1 / z) * z1 + m.r**2 * (1 - z) * z


def _double_exp(m, x, d, **_):
    z, z1 = d(0), d(1)
    return d(2) + (m.r1 + m.r2) * z1 - 2 * (z1 / z) * z1 - m.r1 * m.r2 * (1 - z) * z


def _double_exp_literal(m, x, d, **_):
    z, z1 = d(0), d(1)
    return d(2) + (m.r1 + m.r2) * z1 - 2 * (z1 / z) * z1 + m.r1 * m.r2 * (1 - z) * z


def _laguerre(m, x, d, lop=None, **_):
    z, z1 = d(0), d(1)
    lz = lop() if lop is not None else (1 + m.nu) * z1 + x * d(2)
    return lz + 2 * x * z1 * z1 / (1 - z) - m.lam * z * (1 - z)


EQUATIONS: dict[str, GoverningEquation] = {
    e.name: e
    for e in (
        GoverningEquation("canonical", 1, _canonical, (Classical, Normalized),
                          description="F' = r (1 - F/K) F"),
        GoverningEquation("two-exp", 1, _two_exp, (TwoExponential,),
                          description="Z' = r1 [1 - (1 + D e^{-r2 x}) Z] Z"),
        GoverningEquation("richards", 1, _richards, (Richards,),
                          description="F' = r (1 - F^n) F"),
        GoverningEquation("forestry", 1, _forestry, (Forestry,),
                          description="s' = k/(n lam) [lam - chi (s-alpha)^n] (s-alpha)"),
        GoverningEquation("cosh", 2, _cosh, (CoshLC,), singular_band=True,
                          description="Z'' - 2 (ln Z)' Z' = -r^2 (1-Z) Z"),
        GoverningEquation("double-exp", 2, _double_exp, (TwoExponential,), singular_band=True,
                          description="Z'' + (r1+r2) Z' - 2 (ln Z)' Z' = r1 r2 (1-Z) Z",
                          literal=_double_exp_literal),
        GoverningEquation("laguerre-logistic", 2, _laguerre, (LaguerreLogistic,),
                          singular_band=True, laguerre_type=True,
                          description="L_nu Z + 2x Z'^2/(1-Z) = lam Z (1-Z)"),
    )
}

EQUATION_ALIASES = {
    "eq-1.3": "canonical",
    "eq-1.7": "two-exp",
    "eq-2.2": "richards",
    "eq-2.4": "forestry",
    "eq-2.7": "cosh",
    "eq-2.11": "double-exp",
    "theorem-3.1": "laguerre-logistic",
    "theorem-3.2": "laguerre-logistic",
}

_DEFAULT_EQUATION = {
    Classical: "canonical",
    Normalized: "canonical",
    TwoExponential: "two-exp",
    Richards: "richards",
    Forestry: "forestry",
    CoshLC: "cosh",
    LaguerreLogistic: "laguerre-logistic",
}


def resolve_equation(name: str) -> GoverningEquation:
    key = EQUATION_ALIASES.get(name, name)
    try:
        return EQUATIONS[key]
    except KeyError:
        raise KeyError(f"unknown equation {name!r}") from None


def _fd_derivs(model, x, policy):
    cache = {}

    def f(s):
        return float(model.value(s, policy))

    def d(m):
        if m not in cache:
            if m == 0:
                cache[m] = _arr(model.value(x, policy))
            else:
                cache[m] = np.array([numeric_derivative(f, xi, m).value for xi in x])
        return cache[m]
    return d


def _analytic_derivs(model, x, policy):
    cache = {}
    getters = {0: model.value, 1: model.first_derivative, 2: model.second_derivative}

    def d(m):
        if m not in cache:
            cache[m] = _arr(getters[m](x, policy))
        return cache[m]
    return d


def _has_analytic(model, order):
    meth = "first_derivative" if order == 1 else "second_derivative"
    return getattr(type(model), meth) is not getattr(LogisticModel, meth)


def governing_residual(
    model: LogisticModel,
    grid: Grid,
    policy: SeriesPolicy = DEFAULT_POLICY,
    equation: str | None = None,
    derivatives: str = "auto",
    tol: float | None = None,
    band: float = 1e-6,
    delta: float | None = None,
) -> ResidualReport:
    """Substitute the closed form of ``model`` into its governing equation.

    ``derivatives`` is ``"analytic"``, ``"fd"`` (Richardson central
    differences) or ``"auto"`` (analytic when the variant provides it).
    Default tolerance is 1e-8 for analytic and 1e-5 for finite-difference
    derivatives. ``delta`` overrides Δ for the two-exponential equation.
    """
    eq = resolve_equation(equation) if equation else EQUATIONS[_DEFAULT_EQUATION[type(model)]]
    if not isinstance(model, eq.variants):
        raise UnsupportedVariantError(f"equation {eq.name!r} does not govern {model.variant!r}")
    x = grid.points
    analytic_ok = _has_analytic(model, eq.order)
    if derivatives == "auto":
        derivatives = "analytic" if analytic_ok else "fd"
    if derivatives == "analytic" and not analytic_ok:
        raise UnsupportedVariantError(f"{model.variant} has no analytic order-{eq.order} derivative")
    if derivatives not in ("analytic", "fd"):
        raise ValueError(f"unknown derivative mode {derivatives!r}")
    d = _analytic_derivs(model, x, policy) if derivatives == "analytic" else _fd_derivs(model, x, policy)

    if eq.singular_band:
        z = d(0)
        bad = (z < band) | (z > 1 - band)
        if np.any(bad):
            raise SingularGridError(
                f"Z leaves [{band}, 1-{band}] at x={x[bad][0]!r}; "
                "the logarithmic-derivative terms are singular there")

    extra = {}
    if eq.name == "two-exp":
        extra["delta"] = delta
    if eq.laguerre_type and derivatives == "fd":
        from .special_fn import laguerre_op_apply

        f = lambda s: float(model.value(s, policy))  # noqa: E731
        extra["lop"] = lambda: np.array([laguerre_op_apply(f, xi, model.nu) for xi in x])

    res = eq.residual(model, x, d, **extra)
    if tol is None:
        tol = 1e-8 if derivatives == "analytic" else 1e-5
    meta = {"model": model.variant, "equation": eq.name, "derivatives": derivatives}
    if eq.name == "two-exp":
        meta["delta"] = delta if delta is not None else two_exp_delta(model.mu * model.c2,
                                                                      model.r1, model.r2)
    if eq.literal is not None:
        meta["literal_form_max"] = float(np.max(np.abs(eq.literal(model, x, d))))
    return assemble_report(res, tol, meta, x)


# ---------------------------------------------------------------------------
# linearisation of the Riccati-type equations


@dataclass(frozen=True)
class LinearizedModel:
    """E' = -rate(x) E + forcing(x), with E = forward(F) and F = inverse(E)."""

    source: LogisticModel
    substitution: str
    rate: Callable[[float], float]
    forcing: Callable[[float], float]
    forward: Callable
    inverse: Callable
    initial: float
    #: rate coefficient as printed in the literature, kept for comparison
    stated_rate: Callable[[float], float] | None = None

    def rhs(self, x, e):
        return -self.rate(x) * e + self.forcing(x)

    def system(self):
        from .ode_engine import OdeSystem

        return OdeSystem(lambda t, y: np.array([self.rhs(t, y[0])]), 1)

    def residual(self, x, e, de, stated=False):
        rate = self.stated_rate if stated and self.stated_rate else self.rate
        return de + rate(x) * e - self.forcing(x)


def linearize(model: LogisticModel) -> LinearizedModel:
    if isinstance(model, Classical):
        r, k = model.r, model.r / model.K
        return LinearizedModel(model, "E = 1/F", lambda x: r, lambda x: k,
                               lambda f: 1 / f, lambda e: 1 / e, 1 / model.f0)
    if isinstance(model, Normalized):
        r = model.r
        return LinearizedModel(model, "E = 1/Z", lambda x: r, lambda x: r,
                               lambda f: 1 / f, lambda e: 1 / e, 1 + model.mu)
    if isinstance(model, Richards):
        nr, n = model.n * model.r, model.n
        return LinearizedModel(model, "Y = F^-n", lambda x: nr, lambda x: nr,
                               lambda f: f ** (-n), lambda y: y ** (-1 / n), 1 + model.mu,
                               stated_rate=lambda x: model.r / n)
    if isinstance(model, VariableRate):
        r, k = _as_callable(model.r), _as_callable(model.k)
        return LinearizedModel(model, "E = 1/F", r, k, lambda f: 1 / f, lambda e: 1 / e,
                               1 / model.f0)
    raise UnsupportedVariantError(f"no linear counterpart for {model.variant!r}")


MODEL_TYPES = {
    "classical": Classical,
    "normalized": Normalized,
    "two-exponential": TwoExponential,
    "richards": Richards,
    "forestry": Forestry,
    "cosh": CoshLC,
    "laguerre": LaguerreLogistic,
}
