"""Time the compiled kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends run the same inputs; the script also checks that the outputs
agree bit for bit.
"""

import argparse
import timeit

import numpy as np

from logimath import kernels
from logimath.special_fn import gamma_real


def _tricomi_case(mod, n=2000):
    z = np.linspace(0.0, 50.0, n)
    out = np.empty_like(z)

    def run():
        mod.tricomi_series(z, 0.0, 1.0 / gamma_real(1.0), 1e-14, 200, out)
        return out
    return run


def _heat_case(mod, n=1001, steps=250):
    x = np.linspace(0.0, 10.0, n)
    g = 1 + x + x**2 + x**3

    def run():
        F = g.copy()
        mod.laguerre_cn(F, x, 1e-3, steps, 0.5)
        return F
    return run


CASES = {"tricomi_series (2000 pts)": _tricomi_case, "laguerre_cn (1001 pts x 250 steps)": _heat_case}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        compiled = kernels.get_backend("cython")
    except ImportError:
        print("compiled extension not built; only the Python backend is available")
        compiled = None
    python = kernels.get_backend("python")
    print(f"{'kernel':40s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>9s}")
    for name, make in CASES.items():
        py_run = make(python)
        t_py = min(timeit.repeat(py_run, number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{name:40s} {t_py:12.4f} {'-':>12s} {'-':>9s}")
            continue
        cy_run = make(compiled)
        t_cy = min(timeit.repeat(cy_run, number=1, repeat=args.repeat))
        same = np.array_equal(py_run(), cy_run())
        print(f"{name:40s} {t_py:12.4f} {t_cy:12.6f} {t_py / t_cy:8.0f}x"
              + ("" if same else "  (outputs differ!)"))


if __name__ == "__main__":
    main()
