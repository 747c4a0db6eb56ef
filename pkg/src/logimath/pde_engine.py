"""Laguerre diffusion, its Hopf-Cole/log-potential relatives, and the
Fisher travelling wave.

The Laguerre heat equation F_t = (x F_x)_x is solved two ways:

* exactly for polynomial data, by the terminating series
  F = Σ_m t^m/m! L^m g with L = d/dx x d/dx, using
  L^m x^k = (k!/(k-m)!)² x^{k-m};
* numerically, by a conservative finite-volume Crank-Nicolson scheme. The
  flux x F_x vanishes on its own at x = 0; the right end is a no-flux wall.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .errors import DomainError, InstabilityError
from .residual import Grid, ResidualReport, assemble_report, format_float

__all__ = [
    "Field1D",
    "PolyInitialData",
    "FisherParams",
    "laguerre_heat_poly",
    "laguerre_heat_fd",
    "laguerre_heat_stack",
    "exact_stack",
    "interior_mask",
    "hopf_cole_u",
    "laguerre_burgers_residual",
    "log_potential_residual",
    "fisher_wave",
    "fisher_residual",
    "front_speed",
    "stack_to_csv",
]


@dataclass(frozen=True)
class Field1D:
    grid: Grid
    values: np.ndarray
    time: float = 0.0
    bc: tuple = ("natural", "neumann")

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.points.shape:
            raise ValueError("field values do not match the grid")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points


@dataclass(frozen=True)
class PolyInitialData:
    """g(x) = Σ coefficients[k] x^k."""

    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) == 0:
            raise ValueError("need at least one coefficient")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.coefficients)

    @classmethod
    def parse(cls, text: str) -> "PolyInitialData":
        """``poly:c0,c1,...`` or just ``c0,c1,...``."""
        body = text.split(":", 1)[1] if text.startswith("poly:") else text
        return cls(tuple(float(c) for c in body.split(",") if c.strip()))


def _operator_power_coeffs(coeffs: Sequence[float], t: float, squared: bool) -> np.ndarray:
    """Coefficients in x of Σ_m w_m t^m L^m g, w_m = 1/m! or 1/(m!)²."""
    deg = len(coeffs) - 1
    out = np.zeros(deg + 1)
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        for m in range(k + 1):
            falling = math.factorial(k) // math.factorial(k - m)
            w = math.factorial(m) ** (2 if squared else 1)
            out[k - m] += c * falling**2 * t**m / w
    return out


def laguerre_heat_poly(g: PolyInitialData, t: float, x, operator: str = "e0"):
    """Operational polynomial solution with F(x, 0) = g(x).

    ``operator="e0"`` (default) applies the Laguerre exponential e_0(tL),
    weights t^m/(m!)². That series solves (t F_t)_t = (x F_x)_x; it agrees
    with the heat equation F_t = (x F_x)_x only while deg g <= 1.
    ``operator="exp"`` applies e^{tL}, weights t^m/m!, which is the exact
    solution of the heat equation for every degree.
    """
    if operator not in ("exp", "e0"):
        raise ValueError(f"unknown operator {operator!r}")
    coeffs = _operator_power_coeffs(g.coefficients, float(t), operator == "e0")
    val = np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), coeffs)
    return float(val) if np.ndim(x) == 0 else val


def laguerre_heat_fd(
    g: Field1D, t_final: float, dt: float, theta: float = 0.5
) -> Field1D:
    """March ``g`` to ``g.time + t_final`` with the theta scheme (default CN)."""
    if g.x[0] < 0:
        raise DomainError("Laguerre diffusion lives on x >= 0")
    if not (dt > 0 and t_final >= 0):
        raise ValueError("need dt > 0 and t_final >= 0")
    nsteps = int(round(t_final / dt))
    if abs(nsteps * dt - t_final) > 1e-9 * max(1.0, t_final):
        raise ValueError("t_final must be a whole number of steps")
    if len(g.grid) < 21:
        warnings.warn("grid has fewer than 21 points; expect poor accuracy", stacklevel=2)
    F = np.array(g.values, dtype=float, copy=True)
    ref = max(float(np.max(np.abs(F))), 1e-300)
    kernels.laguerre_cn(F, np.ascontiguousarray(g.x), float(dt), nsteps, float(theta))
    if not np.all(np.isfinite(F)) or np.max(np.abs(F)) > 10 * ref:
        raise InstabilityError("Laguerre heat solution grew beyond 10x its initial size")
    return Field1D(g.grid, F, g.time + nsteps * dt, g.bc)


def laguerre_heat_stack(
    g: Field1D, t_final: float, dt: float, every: int = 1, theta: float = 0.5
) -> list[Field1D]:
    """Snapshots every ``every`` steps from ``g.time`` to ``g.time + t_final``."""
    stack = [g]
    nsteps = int(round(t_final / dt))
    cur = g
    for _ in range(nsteps // every):
        cur = laguerre_heat_fd(cur, every * dt, dt, theta)
        stack.append(cur)
    return stack


def exact_stack(g: PolyInitialData, grid: Grid, times, operator: str = "exp") -> list[Field1D]:
    """Exact heat-equation slices (``operator`` as in :func:`laguerre_heat_poly`)."""
    return [Field1D(grid, laguerre_heat_poly(g, t, grid.points, operator), float(t))
            for t in times]


def interior_mask(grid: Grid, t: float, width: float = 8.0) -> np.ndarray:
    """Points the right wall cannot have influenced by time ``t``.

    In s = 2√x the equation is the radial heat equation F_t = F_ss + F_s/s,
    so wall effects travel a distance of order √t in s; points further than
    ``width``·√t from the wall (in s) are treated as interior.
    """
    s = 2 * np.sqrt(np.maximum(grid.points, 0.0))
    return s <= 2 * math.sqrt(grid.points[-1]) - width * math.sqrt(max(t, 0.0))


def _d1(v: np.ndarray, h: float) -> np.ndarray:
    """First derivative: 4th-order central inside, 2nd-order one-sided at the ends."""
    out = np.empty_like(v)
    out[2:-2] = (8 * (v[3:-1] - v[1:-3]) - (v[4:] - v[:-4])) / (12 * h)
    out[1] = (v[2] - v[0]) / (2 * h)
    out[-2] = (v[-1] - v[-3]) / (2 * h)
    out[0] = (4 * (v[1] - v[0]) - (v[2] - v[0])) / (2 * h)
    out[-1] = ((v[-3] - v[-1]) - 4 * (v[-2] - v[-1])) / (2 * h)
    return out


def _d2(v: np.ndarray, h: float) -> np.ndarray:
    out = np.full_like(v, np.nan)
    c = v[2:-2]
    # written in differences from the centre so constants give exactly zero
    out[2:-2] = (16 * ((v[3:-1] - c) + (v[1:-3] - c)) - ((v[4:] - c) + (v[:-4] - c))) / (12 * h * h)
    return out


def _spacing(grid: Grid) -> float:
    if not grid.is_uniform:
        raise ValueError("finite-difference residuals need a uniform grid")
    return grid.spacing


def hopf_cole_u(F: Field1D) -> Field1D:
    """u = F_x / F."""
    if np.any(np.abs(F.values) < 1e-10):
        raise DomainError("Hopf-Cole transform needs |F| >= 1e-10")
    u = _d1(F.values, _spacing(F.grid)) / F.values
    return Field1D(F.grid, u, F.time, F.bc)


def _stack_arrays(stack: Sequence[Field1D], dt: float):
    if len(stack) < 3:
        raise ValueError("need at least 3 time slices for centred differencing")
    times = np.array([s.time for s in stack])
    if not np.allclose(np.diff(times), dt, rtol=1e-8, atol=1e-12):
        raise ValueError("slices are not spaced by dt")
    return np.array([s.values for s in stack]), _spacing(stack[0].grid)


def _interior_report(res, stack, dt, tol, meta, margin, window):
    # time index 1..n-2, space index margin..-margin, optionally clipped to window
    x = stack[0].x
    keep = np.zeros(len(x), dtype=bool)
    keep[margin:len(x) - margin] = True
    if window is not None:
        keep &= (x >= window[0]) & (x <= window[1])
    if not keep.any():
        raise ValueError("no grid points left to score")
    r = res[:, keep]
    pts = np.tile(x[keep], r.shape[0])
    meta = dict(meta, slices=len(stack), dt=dt, dx=stack[0].grid.spacing)
    if window is not None:
        meta["window"] = (float(window[0]), float(window[1]))
    return assemble_report(r.ravel(), tol, meta, pts)


def laguerre_burgers_residual(
    u_stack: Sequence[Field1D], dt: float, tol: float = 1e-6, margin: int = 2,
    window: tuple[float, float] | None = None,
) -> ResidualReport:
    """Residual of u_t = (x u_x)_x + u_x + (1 + x d/dx) u².

    The last term is expanded as u² + 2 x u u_x. Time derivatives are
    centred over neighbouring slices; spatial ones use 4th-order stencils.
    Only interior points (``margin`` from each end, and inside ``window``
    when given) are scored. For finite-difference input a window that keeps
    clear of x = 0 avoids the first-order layer left by the end cell.
    """
    u, h = _stack_arrays(u_stack, dt)
    x = u_stack[0].x
    ut = (u[2:] - u[:-2]) / (2 * dt)
    um = u[1:-1]
    ux = np.array([_d1(row, h) for row in um])
    uxx = np.array([_d2(row, h) for row in um])
    res = ut - (ux + x * uxx + ux + um**2 + 2 * x * um * ux)
    meta = {"equation": "laguerre-burgers"}
    return _interior_report(res, u_stack, dt, tol, meta, max(margin, 2), window)


def log_potential_residual(
    F_stack: Sequence[Field1D], dt: float, tol: float = 1e-6, margin: int = 2,
    window: tuple[float, float] | None = None,
) -> ResidualReport:
    """Residual of u_t = (x u_x)_x + x u_x² for u = ln F."""
    for s in F_stack:
        if np.any(s.values <= 0):
            raise DomainError("log-potential transform needs F > 0")
    F, h = _stack_arrays(F_stack, dt)
    x = F_stack[0].x
    u = np.log(F)
    ut = (u[2:] - u[:-2]) / (2 * dt)
    um = u[1:-1]
    ux = np.array([_d1(row, h) for row in um])
    uxx = np.array([_d2(row, h) for row in um])
    res = ut - (ux + x * uxx + x * ux**2)
    meta = {"equation": "log-potential"}
    return _interior_report(res, F_stack, dt, tol, meta, max(margin, 2), window)


def stack_to_csv(stack: Sequence[Field1D], stream=None, extra: dict | None = None) -> str:
    """CSV with columns ``t,x,value`` (plus any ``extra`` per-slice arrays)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    extra = extra or {}
    w.writerow(["t", "x", "value", *extra])
    for i, s in enumerate(stack):
        for j, (xv, v) in enumerate(zip(s.x, s.values)):
            row = [format_float(s.time), format_float(xv), format_float(v)]
            row += [format_float(extra[k][i][j]) for k in extra]
            w.writerow(row)
    if stream is not None:
        stream.write(buf.getvalue())
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Fisher equation f_t - α f_xx = μ f (1 - f)


@dataclass(frozen=True)
class FisherParams:
    mu: float
    alpha: float
    branch: int = 1

    def __post_init__(self):
        if self.mu < 0 or not self.alpha > 0:
            raise ValueError("Fisher wave needs mu >= 0 and alpha > 0")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")

    @property
    def k(self) -> float:
        return self.branch * math.sqrt(self.mu / (6 * self.alpha))

    @property
    def speed(self) -> float:
        """Front velocity V = -5 α k (opposite sign to k)."""
        return -5 * self.alpha * self.k

    @property
    def literal_speed(self) -> float:
        """Velocity with the same-sign pairing V = +5 α k."""
        return 5 * self.alpha * self.k


def _profile(xi):
    s = 1 / (1 + np.exp(-xi))
    f = s * s
    d1 = 2 * s * s * (1 - s)
    d2 = (4 * s - 6 * s * s) * s * (1 - s)
    return f, d1, d2


def fisher_wave(p: FisherParams, x, t, literal: bool = False):
    """Travelling front f = (1 + e^{-ξ})^{-2}, ξ = k (x - V t).

    ``literal=True`` evaluates k^{-2} (1 + e^{-ξ})^{-2} with
    V = +5αk instead, for side-by-side comparison.
    """
    k = p.k
    v = p.literal_speed if literal else p.speed
    xi = k * (np.asarray(x, dtype=float) - v * t)
    f = _profile(xi)[0]
    if literal:
        f = f / k**2 if k != 0 else np.full_like(f, np.inf)
    return float(f) if np.ndim(f) == 0 else f


def _wave_residual(p: FisherParams, x, t, literal: bool, speed: float | None = None):
    k = p.k
    v = (p.literal_speed if literal else p.speed) if speed is None else speed
    f, d1, d2 = _profile(k * (x - v * t))
    amp = 1 / k**2 if literal else 1.0
    f, d1, d2 = amp * f, amp * d1, amp * d2
    ft = -k * v * d1
    fxx = k * k * d2
    return ft - p.alpha * fxx - p.mu * f * (1 - f)


def fisher_residual(
    p: FisherParams, grid: Grid, times: Sequence[float], tol: float = 1e-6,
    speed: float | None = None,
) -> ResidualReport:
    """Analytic-derivative residual of the travelling wave in the Fisher PDE.

    Also evaluates the literal k^{-2}-amplitude profile and reports its
    maximum residual in the metadata. ``speed`` overrides V (sensitivity
    checks).
    """
    x = grid.points
    res = np.concatenate([_wave_residual(p, x, t, False, speed) for t in times])
    meta = {"equation": "fisher", "mu": p.mu, "alpha": p.alpha, "k": p.k,
            "V": p.speed if speed is None else speed}
    if p.mu == 0:
        meta["applicable"] = False
        meta["note"] = "zero reaction: k = 0 and the profile degenerates to the constant 1/4"
        meta["literal_max"] = math.nan
    else:
        meta["applicable"] = True
        lit = np.concatenate([_wave_residual(p, x, t, True) for t in times])
        meta["literal_max"] = float(np.max(np.abs(lit)))
    return assemble_report(res, tol, meta, np.tile(x, len(times)))


def front_speed(p: FisherParams, times: Sequence[float], level: float = 0.25,
                window: float = 50.0) -> float:
    """Least-squares slope of the ``level`` set x(t) of the travelling wave."""
    if p.k == 0:
        raise DomainError("no front for mu = 0")
    xs = []
    for t in times:
        g = lambda s: fisher_wave(p, s, t) - level  # noqa: E731
        centre = p.speed * t
        xs.append(brentq(g, centre - window, centre + window, xtol=1e-14, rtol=1e-15))
    slope = np.polyfit(np.asarray(times, dtype=float), np.asarray(xs), 1)[0]
    return float(slope)
