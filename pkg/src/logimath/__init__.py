"""Logistic-type growth models, Laguerre-type special functions and
residual-based verification tools.

The submodules are:

* :mod:`logimath.special_fn`       Gamma, Tricomi functions e_ν, Laguerre derivative
* :mod:`logimath.logistic_models`  closed-form logistic variants and their ODEs
* :mod:`logimath.ode_engine`       adaptive Dormand-Prince integrator, FEL amplitude
* :mod:`logimath.pde_engine`       Laguerre heat equation, Hopf-Cole checks, Fisher wave
* :mod:`logimath.residual`         grids, finite differences, residual reports
* :mod:`logimath.cli`              command-line front end
"""

from .errors import LogimathError
from .kernels import BACKEND
from .logistic_models import (
    Classical,
    CoshLC,
    Forestry,
    LaguerreLogistic,
    Normalized,
    Richards,
    TwoExponential,
    VariableRate,
    asymptotes,
    derivative,
    evaluate,
    governing_residual,
    linearize,
    two_exp_delta,
    variable_rate_solution,
)
from .ode_engine import FelParams, OdeSystem, Trajectory, fel_amplitude, fel_gain_rate, integrate
from .pde_engine import (
    Field1D,
    FisherParams,
    PolyInitialData,
    fisher_wave,
    laguerre_heat_fd,
    laguerre_heat_poly,
)
from .residual import Grid, ResidualReport, assemble_report, numeric_derivative
from .special_fn import SeriesPolicy, TricomiFunction, gamma_real, tricomi_eval

__version__ = "0.1.0"
