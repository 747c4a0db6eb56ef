"""Grids, finite-difference derivatives and residual reports.

Every verification routine in the package funnels its pointwise
``|LHS - RHS|`` values through :func:`assemble_report`, so the CSV layout
and the verdict line are defined once, here.

CSV schema of a residual report::

    x,residual                 # real residuals
    x,residual,re,im           # complex residuals (residual = modulus)

followed (outside the CSV) by a single verdict line::

    PASS max=<v> l2=<v> tol=<v>
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ParseError, StepUnderflowError

__all__ = [
    "Grid",
    "ResidualReport",
    "Derivative",
    "numeric_derivative",
    "default_step",
    "assemble_report",
    "format_float",
]

# below this relative step the stencils are dominated by round-off
_STEP_FLOOR = 1e-8


def format_float(v: float) -> str:
    """Round-trip safe representation used in all CSV output."""
    if isinstance(v, complex):
        raise TypeError("format_float expects a real number")
    if math.isnan(v):
        return "nan"
    return format(float(v), ".17g")


@dataclass(frozen=True)
class Grid:
    """Strictly increasing 1-D sample abscissas (at least 3 of them)."""

    points: np.ndarray
    spacing: float | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 3:
            raise ValueError("a grid needs at least 3 points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.spacing is None:
            d = np.diff(pts)
            if np.allclose(d, d[0], rtol=1e-10, atol=0.0):
                object.__setattr__(self, "spacing", float(d[0]))

    @classmethod
    def uniform(cls, start: float, end: float, count: int) -> "Grid":
        if count < 3:
            raise ValueError("a grid needs at least 3 points")
        if not end > start:
            raise ValueError("grid end must exceed start")
        return cls(np.linspace(start, end, count), (end - start) / (count - 1))

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """Parse a ``start:end:count`` grid specification."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ParseError(f"grid spec {text!r} must look like start:end:count")
        try:
            start, end = float(parts[0]), float(parts[1])
            count = int(parts[2])
        except ValueError as exc:
            raise ParseError(f"grid spec {text!r}: {exc}") from None
        try:
            return cls.uniform(start, end, count)
        except ValueError as exc:
            raise ParseError(f"grid spec {text!r}: {exc}") from None

    @property
    def is_uniform(self) -> bool:
        return self.spacing is not None

    def __len__(self) -> int:
        return self.points.size

    def __iter__(self):
        return iter(self.points)


class Derivative(NamedTuple):
    value: float
    error: float


def default_step(x: float, order: int) -> float:
    """Central step policy shared by all finite-difference users."""
    scale = max(1.0, abs(x))
    return (1e-3 if order == 3 else 1e-4) * scale


def _stencil(f: Callable[[float], float], x: float, order: int, h: float) -> float:
    fp1, fm1 = f(x + h), f(x - h)
    fp2, fm2 = f(x + 2 * h), f(x - 2 * h)
    if order == 1:
        return (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    if order == 2:
        return (-fp2 + 16 * fp1 - 30 * f(x) + 16 * fm1 - fm2) / (12 * h * h)
    return (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h**3)


def numeric_derivative(
    f: Callable[[float], float], x: float, order: int = 1, h: float | None = None
) -> Derivative:
    """Central-difference derivative with one Richardson level.

    Orders 1 and 2 use 5-point stencils of formal order 4; order 3 uses the
    4-point stencil of formal order 2. The stencil is evaluated at ``h`` and
    ``h/2`` and the two are combined to cancel the leading error term, so
    ``f`` must be defined on ``[x - 2h, x + 2h]``.

    Returns the extrapolated value and the magnitude of the correction as an
    error estimate.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    if h is None:
        h = default_step(x, order)
    if not h > _STEP_FLOOR * max(1.0, abs(x)):
        raise StepUnderflowError(f"step {h!r} below safe floor at x={x!r}")
    p = 2 if order == 3 else 4
    coarse = _stencil(f, x, order, h)
    fine = _stencil(f, x, order, h / 2)
    corr = (fine - coarse) / (2**p - 1)
    value = fine + corr
    if not (math.isfinite(value) if not isinstance(value, complex) else
            (math.isfinite(value.real) and math.isfinite(value.imag))):
        raise ArithmeticError(f"non-finite derivative at x={x!r}")
    return Derivative(value, abs(corr))


@dataclass
class ResidualReport:
    """Pointwise residual magnitudes of one equation on one grid."""

    points: np.ndarray
    residuals: np.ndarray
    max_norm: float
    l2_norm: float
    tolerance: float
    verdict: str
    metadata: dict = field(default_factory=dict)
    complex_parts: np.ndarray | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def verdict_line(self) -> str:
        return (
            f"{self.verdict} max={self.max_norm:.6e} "
            f"l2={self.l2_norm:.6e} tol={self.tolerance:.6e}"
        )

    def to_csv(self, stream=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.complex_parts is None:
            w.writerow(["x", "residual"])
            for x, r in zip(self.points, self.residuals):
                w.writerow([format_float(x), format_float(r)])
        else:
            w.writerow(["x", "residual", "re", "im"])
            for x, r, c in zip(self.points, self.residuals, self.complex_parts):
                w.writerow([format_float(x), format_float(r),
                            format_float(c.real), format_float(c.imag)])
        text = buf.getvalue()
        if stream is not None:
            stream.write(text)
        return text

    def summary(self) -> str:
        """Human readable multi-line description (for stderr)."""
        lines = [self.verdict_line()]
        for k, v in self.metadata.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def assemble_report(
    residuals: Sequence[float] | np.ndarray,
    tol: float,
    metadata: dict | None = None,
    points: Iterable[float] | None = None,
    diagnostic: bool = False,
) -> ResidualReport:
    """Build a :class:`ResidualReport` from raw pointwise residuals.

    Complex residuals are reduced to their modulus; the signed parts are kept
    for CSV export and their separate maxima go into the metadata.
    ``diagnostic=True`` yields the ``DIAG`` verdict instead of PASS/FAIL.
    """
    raw = np.asarray(residuals)
    if raw.size == 0:
        raise ValueError("cannot assemble a report from no residuals")
    raw = raw.ravel()
    meta = dict(metadata or {})
    parts = None
    if np.iscomplexobj(raw):
        parts = raw.astype(complex)
        meta.setdefault("max_re", float(np.max(np.abs(parts.real))))
        meta.setdefault("max_im", float(np.max(np.abs(parts.imag))))
    mags = np.abs(raw).astype(float)
    if np.any(np.isnan(mags)):
        max_norm = math.nan
        l2 = math.nan
    else:
        max_norm = float(np.max(mags))
        l2 = float(np.sqrt(np.mean(mags**2)))
        # RMS can exceed max by one ulp when all entries are equal
        l2 = min(l2, max_norm)
    if diagnostic:
        verdict = "DIAG"
    else:
        verdict = "PASS" if max_norm <= tol else "FAIL"
    pts = np.arange(mags.size, dtype=float) if points is None else np.asarray(
        list(points) if not isinstance(points, np.ndarray) else points, dtype=float
    ).ravel()
    if pts.size != mags.size:
        raise ValueError("points and residuals differ in length")
    return ResidualReport(pts, mags, max_norm, l2, float(tol), verdict, meta, parts)
