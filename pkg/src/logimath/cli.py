"""Command-line front end.

Subcommands::

    logimath eval      closed-form model values on a grid (CSV x,value)
    logimath residual  residual report of an equation (CSV + verdict line)
    logimath ode       adaptive integration of a first-order logistic ODE
    logimath pde       Laguerre heat or Fisher wave fields (CSV t,x,value)
    logimath fel       FEL amplitude and logistic field (CSV)

Data goes to ``--output FILE`` or, failing that, to stdout. Human
diagnostics go to stderr. When the data is written to a file, the verdict
or summary line is also printed on stdout; with ``--stdout`` nothing but
data is written there.

``--config FILE`` reads ``key = value`` lines (``#`` starts a comment); keys
are the long option names of the subcommand. Flags given on the command line
win over the file.

Exit codes: 0 pass (and for DIAG reports), 1 fail, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import math
import os
import sys
import warnings

import numpy as np

from . import logistic_models as lm
from . import ode_engine as ode
from . import pde_engine as pde
from . import special_fn as sf
from .errors import LogimathError, ParseError
from .residual import Grid, ResidualReport, format_float

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TOL_ENV = "LOGIMATH_DEFAULT_TOL"

LAGUERRE_MODELS = ("laguerre", "laguerre-nu")
EVAL_MODELS = tuple(lm.MODEL_TYPES) + ("laguerre-nu",)

PDE_EQUATIONS = ("laguerre-burgers", "log-potential", "fisher")
SPECIAL_EQUATIONS = ("eigen", "korf", "fel-5.13")


class UsageError(Exception):
    pass


def default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return 1e-6
    try:
        val = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not val > 0:
        raise UsageError(f"{TOL_ENV} must be positive")
    return val


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_params(text: str) -> dict:
    """``k=v,k=v`` into a dict of floats; errors carry the column."""
    out = {}
    if text is None or text.strip() == "":
        return out
    col = 1
    for item in text.split(","):
        if "=" not in item:
            raise ParseError(f"params col {col}: expected key=value, got {item!r}")
        key, val = item.split("=", 1)
        key = key.strip()
        if not key:
            raise ParseError(f"params col {col}: empty key")
        if key in out:
            raise ParseError(f"params col {col}: duplicate key {key!r}")
        try:
            out[key] = float(val)
        except ValueError:
            raise ParseError(
                f"params col {col + len(item) - len(val)}: {val!r} is not a number") from None
        col += len(item) + 1
    return out


def parse_span(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ParseError(f"span {text!r} must look like start:end")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ParseError(f"span {text!r}: {exc}") from None
    if not b > a:
        raise ParseError(f"span {text!r}: end must exceed start")
    return a, b


def parse_times(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"times {text!r}: {exc}") from None
    if not vals:
        raise ParseError("times: need at least one value")
    return vals


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ParseError(f"{text!r} is not a complex number") from None


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ParseError(f"{text!r} is not a boolean")


def read_config(path: str) -> list[tuple[str, str, int, int, int]]:
    """Return ``(key, value, line, key_column, value_column)`` entries."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    entries = []
    for lineno, line in enumerate(lines, 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ParseError(f"{path}:{lineno}:{col}: expected 'key = value'")
        key, val = body.split("=", 1)
        kcol = len(key) - len(key.lstrip()) + 1
        key = key.strip()
        if not key:
            raise ParseError(f"{path}:{lineno}:{kcol}: missing key")
        vcol = len(body) - len(val.lstrip()) + 1
        entries.append((key, val.strip(), lineno, kcol, vcol))
    return entries


# option name -> (converter, default); None default means "not set"
_COMMON = {
    "output": (str, None),
    "stdout": (_bool, False),
    "tol": (float, None),
}

_OPTIONS = {
    "eval": {
        "model": (str, None),
        "compare": (str, None),
        "params": (str, ""),
        "grid": (str, "0:10:101"),
    },
    "residual": {
        "equation": (str, None),
        "model": (str, None),
        "params": (str, ""),
        "grid": (str, None),
        "derivatives": (str, "auto"),
        "nu": (float, 0.0),
        "lambda": (float, 1.0),
        "alpha": (float, 1.0),
        "g0": (float, 1.0),
        "l0": (parse_complex, 1e-3 + 0j),
        "lF": (parse_complex, 1.0 + 0j),
        "tau-max": (float, None),
        "init": (str, "poly:1,1"),
        "t": (float, 0.5),
        "dt": (float, 1e-4),
        "source": (str, "exact"),
        "mu": (float, 6.0),
        "branch": (int, 1),
        "times": (parse_times, [0.0, 0.5, 1.0]),
    },
    "ode": {
        "model": (str, None),
        "params": (str, ""),
        "span": (parse_span, (0.0, 10.0)),
        "linearized": (_bool, False),
    },
    "pde": {
        "equation": (str, "laguerre-heat"),
        "init": (str, "poly:0,1"),
        "t": (float, 0.5),
        "dt": (float, 1e-3),
        "grid": (str, None),
        "every": (int, 0),
        "mu": (float, 6.0),
        "alpha": (float, 1.0),
        "branch": (int, 1),
        "times": (parse_times, [0.0, 0.5, 1.0]),
    },
    "fel": {
        "nu": (float, 0.0),
        "g0": (float, 1.0),
        "l0": (parse_complex, 1e-3 + 0j),
        "lF": (parse_complex, 1.0 + 0j),
        "tau-max": (float, None),
        "samples": (int, 401),
    },
}

_HELP = {
    "output": "write data CSV to this file",
    "stdout": "stdout carries only the data CSV",
    "tol": f"tolerance (default ${TOL_ENV} or 1e-6)",
    "model": "model variant",
    "compare": "comma-separated models, one column each",
    "params": "model parameters as key=value,...",
    "grid": "sample grid start:end:count",
    "equation": "equation name or alias",
    "derivatives": "analytic, fd or auto",
    "span": "integration span start:end",
    "init": "polynomial initial data poly:c0,c1,...",
    "t": "final (or centre) time",
    "dt": "time step",
    "source": "exact or fd slices for the Hopf-Cole residuals",
    "every": "emit a snapshot every N steps (0: final slice only)",
    "times": "comma-separated time list",
    "tau-max": "FEL span (default 15 gain lengths)",
    "linearized": "integrate the linear counterpart and invert",
    "samples": "number of output points",
}


def _dest(name: str) -> str:
    return name.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logimath", description="Logistic models, Laguerre calculus and residual checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, opts in _OPTIONS.items():
        p = sub.add_parser(cmd)
        p.add_argument("--config", help="key = value configuration file")
        for name, (conv, _) in {**_COMMON, **opts}.items():
            flag = "--" + name
            if conv is _bool:
                p.add_argument(flag, dest=_dest(name), action="store_const", const=True,
                               default=None, help=_HELP.get(name))
            else:
                p.add_argument(flag, dest=_dest(name), default=None, help=_HELP.get(name),
                               metavar=name.upper().replace("-", "_"))
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and command line into one dict."""
    opts = {**_COMMON, **_OPTIONS[args.command]}
    cfg = {name: default for name, (_, default) in opts.items()}
    if args.config:
        for key, val, line, kcol, vcol in read_config(args.config):
            name = key.replace("_", "-")
            if name not in opts:
                raise ParseError(f"{args.config}:{line}:{kcol}: unknown key {key!r}")
            try:
                cfg[name] = opts[name][0](val)
            except (ParseError, ValueError) as exc:
                raise ParseError(f"{args.config}:{line}:{vcol}: {exc}") from None
    for name, (conv, _) in opts.items():
        raw = getattr(args, _dest(name))
        if raw is None:
            continue
        if raw is True:
            cfg[name] = True
            continue
        try:
            cfg[name] = conv(raw)
        except (ParseError, ValueError) as exc:
            raise ParseError(f"--{name}: {exc}") from None
    cfg["command"] = args.command
    if cfg["tol"] is None:
        cfg["tol"] = default_tol()
    elif not cfg["tol"] > 0:
        raise UsageError("--tol must be positive")
    return cfg


# ---------------------------------------------------------------------------
# model construction


def _laguerre_model(name: str, params: dict, strict: bool, policy=sf.DEFAULT_POLICY):
    """Laguerre logistic from mu or from (a, K); returns (model, scale, used keys)."""
    known = {"mu", "lambda", "lam", "a", "K"} | ({"nu"} if name == "laguerre-nu" else set())
    used = {k for k in params if k in known}
    extra = set(params) - known
    if strict and extra:
        raise UsageError(f"model {name!r} does not take {sorted(extra)}")
    lam = params.get("lambda", params.get("lam"))
    if lam is None:
        raise UsageError(f"model {name!r} needs lambda")
    nu = params.get("nu", 0.0) if name == "laguerre-nu" else 0.0
    if name == "laguerre-nu" and "nu" not in params:
        raise UsageError("model 'laguerre-nu' needs nu")
    scale = 1.0
    if "mu" in params:
        if "a" in params or "K" in params:
            raise UsageError("give either mu or (a, K), not both")
        mu = params["mu"]
    elif "a" in params and "K" in params:
        mu = params["K"] / params["a"] - 1.0
        scale = params["K"]
    else:
        raise UsageError(f"model {name!r} needs mu or both a and K")
    return lm.LaguerreLogistic(mu, lam, nu), scale, used


def build_model(name: str, params: dict, strict: bool = True):
    """Return ``(model, scale, used_keys)``; ``scale`` multiplies values."""
    if name in LAGUERRE_MODELS:
        return _laguerre_model(name, params, strict)
    cls = lm.MODEL_TYPES.get(name)
    if cls is None:
        raise UsageError(f"unknown model {name!r}; choose from {', '.join(EVAL_MODELS)}")
    fields = set(cls.__dataclass_fields__)
    accepted = {k for k in params if cls.param_aliases.get(k, k) in fields}
    extra = set(params) - accepted
    if strict and extra:
        raise UsageError(f"model {name!r} does not take {sorted(extra)}")
    try:
        model = cls.from_params({k: params[k] for k in sorted(accepted)})
    except TypeError as exc:
        raise UsageError(f"model {name!r}: {exc}") from None
    return model, 1.0, accepted


def _values_with_gaps(model, scale, x):
    """Vectorised evaluation; on failure fall back per point, gaps as NaN."""
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(model.value(x), dtype=float) * scale
        if np.all(np.isfinite(vals)):
            return vals, 0
    except (LogimathError, ValueError, ArithmeticError):
        pass
    vals = np.empty_like(x)
    for i, xi in enumerate(x):
        try:
            with np.errstate(all="ignore"):
                vals[i] = float(model.value(xi)) * scale
        except (LogimathError, ValueError, ArithmeticError):
            vals[i] = math.nan
    bad = int(np.sum(~np.isfinite(vals)))
    vals[~np.isfinite(vals)] = math.nan
    return vals, bad


# ---------------------------------------------------------------------------
# output


class Sink:
    def __init__(self, cfg: dict, stdout, stderr):
        self.cfg = cfg
        self.stdout = stdout
        self.stderr = stderr

    def data(self, text: str):
        path = self.cfg["output"]
        if path:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            self.stdout.write(text)

    def line(self, text: str):
        """Verdict/summary line: stderr always, stdout only if it is free."""
        self.stderr.write(text + "\n")
        if self.cfg["output"] and not self.cfg["stdout"]:
            self.stdout.write(text + "\n")

    def note(self, text: str):
        self.stderr.write(text + "\n")


def _rows_to_csv(header, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow(["" if math.isnan(v) else format_float(v) for v in row])
    return buf.getvalue()


def _grid(cfg, fallback: str | None = None) -> Grid:
    text = cfg.get("grid") or fallback
    if text is None:
        raise UsageError("--grid is required")
    return Grid.parse(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(cfg: dict, sink: Sink) -> int:
    grid = _grid(cfg)
    params = parse_params(cfg["params"])
    if bool(cfg["model"]) == bool(cfg["compare"]):
        raise UsageError("give exactly one of --model or --compare")
    if cfg["model"]:
        names, strict = [cfg["model"]], True
    else:
        names = [n.strip() for n in cfg["compare"].split(",") if n.strip()]
        if len(set(names)) != len(names):
            raise UsageError("--compare lists a model twice")
        strict = False
    x = grid.points
    columns, used_any = [], set()
    for name in names:
        try:
            model, scale, used = build_model(name, params, strict)
        except ValueError as exc:
            raise UsageError(f"model {name!r}: {exc}") from None
        used_any |= used
        vals, bad = _values_with_gaps(model, scale, x)
        if bad:
            sink.note(f"warning: {name}: {bad} of {x.size} points outside the model domain "
                      "(left empty)")
        columns.append(vals)
    unused = set(params) - used_any
    if unused:
        raise UsageError(f"parameters {sorted(unused)} are not used by any model")
    header = ["x", "value"] if cfg["model"] else ["x", *names]
    sink.data(_rows_to_csv(header, [x, *columns]))
    return EXIT_PASS


def _report_exit(report: ResidualReport, sink: Sink) -> int:
    sink.data(report.to_csv())
    for key, val in report.metadata.items():
        sink.note(f"  {key}: {val}")
    sink.line(report.verdict_line())
    if report.verdict == "DIAG":
        return EXIT_PASS
    return EXIT_PASS if report.passed else EXIT_FAIL


def _heat_slices(cfg, g: pde.PolyInitialData, grid: Grid):
    dt, t = cfg["dt"], cfg["t"]
    if cfg["source"] == "exact":
        times = [t + k * dt for k in range(-2, 3)]
        if times[0] < 0:
            raise UsageError("--t must be at least 2*dt for exact slices")
        return pde.exact_stack(g, grid, times), None
    if cfg["source"] == "fd":
        start = pde.Field1D(grid, g(grid.points))
        stack = pde.laguerre_heat_stack(start, t, dt)
        mask = pde.interior_mask(grid, t)
        if not mask.any() or grid.points[mask][-1] < 0.5:
            need = (4 * math.sqrt(t) + math.sqrt(0.5)) ** 2
            raise UsageError(f"--grid too short for fd slices at t={t:g}; the wall "
                             f"influence needs an end point of at least {need:.3g}")
        hi = float(grid.points[mask][-1])
        return stack, (0.5, hi)
    raise UsageError("--source must be exact or fd")


def cmd_residual(cfg: dict, sink: Sink) -> int:
    eq = cfg["equation"]
    tol = cfg["tol"]
    if eq is None:
        raise UsageError("--equation is required")
    if eq == "fel-5.13":
        p = ode.FelParams(cfg["nu"], cfg["g0"], cfg["l0"], cfg["lF"])
        tau_max = cfg["tau-max"] or 15 * ode.gain_length(p)
        traj = ode.fel_amplitude(p, tau_max)
        field = ode.fel_logistic_field(traj, p)
        return _report_exit(ode.fel_nonlinear_residual(field, p), sink)
    if eq == "eigen":
        grid = _grid(cfg, "0.5:5:64")
        rep = sf.eigen_residual(cfg["nu"], cfg["lambda"], grid, tol=tol,
                                mode=_special_mode(cfg))
        return _report_exit(rep, sink)
    if eq == "korf":
        grid = _grid(cfg, "0.5:5:64")
        rep = sf.korf_residual(cfg["lambda"], cfg["alpha"], grid, tol=tol,
                               mode=_special_mode(cfg))
        return _report_exit(rep, sink)
    if eq in ("laguerre-burgers", "log-potential"):
        g = pde.PolyInitialData.parse(cfg["init"])
        grid = _grid(cfg, "0:4:401")
        stack, window = _heat_slices(cfg, g, grid)
        if eq == "laguerre-burgers":
            us = [pde.hopf_cole_u(s) for s in stack]
            rep = pde.laguerre_burgers_residual(us, cfg["dt"], tol, window=window)
        else:
            rep = pde.log_potential_residual(stack, cfg["dt"], tol, window=window)
        return _report_exit(rep, sink)
    if eq == "fisher":
        p = pde.FisherParams(cfg["mu"], cfg["alpha"], cfg["branch"])
        rep = pde.fisher_residual(p, _grid(cfg, "-10:10:401"), cfg["times"], tol)
        return _report_exit(rep, sink)
    try:
        governing = lm.resolve_equation(eq)
    except KeyError:
        names = sorted(set(lm.EQUATIONS) | set(lm.EQUATION_ALIASES)
                       | set(SPECIAL_EQUATIONS) | set(PDE_EQUATIONS))
        raise UsageError(f"unknown equation {eq!r}; choose from {', '.join(names)}") from None
    if not cfg["model"]:
        raise UsageError("--model is required for governing-equation residuals")
    params = parse_params(cfg["params"])
    try:
        model, _, _ = build_model(cfg["model"], params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if eq == "theorem-3.2" and isinstance(model, lm.LaguerreLogistic):
        # stated for the plain e_nu characteristic
        model = lm.LaguerreLogistic(model.mu, model.lam, model.nu, gamma_normalized=False)
    derivs = cfg["derivatives"]
    if derivs not in ("auto", "analytic", "fd"):
        raise UsageError("--derivatives must be auto, analytic or fd")
    grid = _grid(cfg)
    rep = lm.governing_residual(model, grid, equation=governing.name, derivatives=derivs, tol=tol)
    rep.metadata["requested"] = eq
    return _report_exit(rep, sink)


def _special_mode(cfg) -> str:
    mode = cfg["derivatives"]
    if mode == "auto":
        return "analytic"
    if mode not in ("analytic", "fd"):
        raise UsageError("--derivatives must be auto, analytic or fd")
    return mode


def cmd_ode(cfg: dict, sink: Sink) -> int:
    if not cfg["model"]:
        raise UsageError("--model is required")
    params = parse_params(cfg["params"])
    try:
        model, _, _ = build_model(cfg["model"], params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t0, t1 = cfg["span"]
    tol = cfg["tol"]
    if cfg["linearized"]:
        lin = lm.linearize(model)
        e0 = lin.forward(float(model.value(t0)))
        traj = ode.integrate(lin.system(), [e0], (t0, t1), tol)
        traj = ode.Trajectory(traj.t, lin.inverse(traj.y), traj.accepted, traj.rejected,
                              traj.tol, None)
    else:
        eq = lm.EQUATIONS[lm._DEFAULT_EQUATION[type(model)]]
        if eq.order != 1:
            raise UsageError(f"model {cfg['model']!r} is governed by a second-order equation")

        def rhs(t, y):
            # residual = y' - G(t, y); evaluate with y' = 0 to read off G
            d = {0: y[0], 1: 0.0}.__getitem__
            return np.array([-eq.residual(model, t, d)])

        traj = ode.integrate(ode.OdeSystem(rhs, 1), [float(model.value(t0))], (t0, t1), tol)
    sink.data(traj.to_csv())
    end = float(traj.final[0].real)
    exact = float(model.value(t1))
    sink.line(f"endpoint={format_float(end)} closed_form={format_float(exact)} "
              f"error={abs(end - exact):.3e} steps={traj.accepted}")
    return EXIT_PASS


def cmd_pde(cfg: dict, sink: Sink) -> int:
    eq = cfg["equation"]
    if eq == "laguerre-heat":
        g = pde.PolyInitialData.parse(cfg["init"])
        grid = _grid(cfg, "0:10:501")
        t, dt = cfg["t"], cfg["dt"]
        start = pde.Field1D(grid, g(grid.points))
        if cfg["every"] > 0:
            stack = pde.laguerre_heat_stack(start, t, dt, cfg["every"])
        else:
            stack = [pde.laguerre_heat_fd(start, t, dt)]
        exact = [pde.laguerre_heat_poly(g, s.time, grid.points, "exp") for s in stack]
        sink.data(pde.stack_to_csv(stack, extra={"exact": exact}))
        final = stack[-1]
        mask = pde.interior_mask(grid, final.time)
        if mask.any():
            err = float(np.max(np.abs(final.values - exact[-1])[mask]))
            sink.line(f"t={format_float(final.time)} interior_max_error={err:.3e} "
                      f"interior_x<={format_float(grid.points[mask][-1])}")
        return EXIT_PASS
    if eq == "fisher":
        p = pde.FisherParams(cfg["mu"], cfg["alpha"], cfg["branch"])
        grid = _grid(cfg, "-10:10:201")
        stack = [pde.Field1D(grid, pde.fisher_wave(p, grid.points, t), t) for t in cfg["times"]]
        literal = None
        if p.k != 0:
            literal = [pde.fisher_wave(p, grid.points, t, literal=True)
                       for t in cfg["times"]]
        sink.data(pde.stack_to_csv(stack, extra={"literal": literal} if literal else None))
        sink.line(f"k={format_float(p.k)} V={format_float(p.speed)}")
        return EXIT_PASS
    raise UsageError("--equation must be laguerre-heat or fisher")


def cmd_fel(cfg: dict, sink: Sink) -> int:
    p = ode.FelParams(cfg["nu"], cfg["g0"], cfg["l0"], cfg["lF"])
    tau_max = cfg["tau-max"] or 15 * ode.gain_length(p)
    traj = ode.fel_amplitude(p, tau_max, min(cfg["tol"], 1e-10))
    tau = np.linspace(0.0, tau_max, max(cfg["samples"], 2))
    field = ode.fel_logistic_field(traj, p, tau)
    sink.data(field.to_csv())
    sink.line(f"gain_rate={format_float(ode.fel_gain_rate(p))} "
              f"final_abs_l={format_float(abs(field.l[-1]))} abs_lF={format_float(abs(p.lF))} "
              f"roundtrip={field.roundtrip_error:.3e}")
    return EXIT_PASS


COMMANDS = {
    "eval": cmd_eval,
    "residual": cmd_residual,
    "ode": cmd_ode,
    "pde": cmd_pde,
    "fel": cmd_fel,
}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--grid -10:40:501`` into ``--grid=-10:40:501``.

    argparse would otherwise take a value starting with '-' for an option.
    """
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and "=" not in tok and nxt is not None
                and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == ".")):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        sink = Sink(cfg, stdout, stderr)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = COMMANDS[args.command](cfg, sink)
        for w in caught:
            stderr.write(f"warning: {w.message}\n")
        return code
    except (UsageError, ParseError) as exc:
        stderr.write(f"logimath {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except LogimathError as exc:
        stderr.write(f"logimath {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
