"""Compare the numba and numpy kernel backends.

Kernel timings use shapes from the four-agent benchmark (K=4, p=10, d=3).
The end-to-end timing runs one full experiment per backend in a child
process, since the backend is fixed at import time by ABLOC_DISABLE_NUMBA.

    python3 benchmarks/bench_kernels.py --T 2000 --repeat 20
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from abloc.kernels import _numba, _numpy

E2E = (
    "import time; from abloc import benchmark_config, run_experiment; from abloc.kernels import BACKEND;"
    "run_experiment(benchmark_config(T={T}));"
    "t=time.perf_counter(); [run_experiment(benchmark_config(seed=s, T={T})) for s in range(3)];"
    "print(BACKEND, (time.perf_counter()-t)/3)"
)


def kernel_cases(T, K=4, p=10, d=3, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((K, T, p))
    R = rng.standard_normal((K, T, d))
    rows = np.arange(int(0.8 * T))
    G = _numpy.gram(X, rows)
    XtR = _numpy.cross_products(X, R, rows)
    coef = rng.standard_normal((K, p, d))
    theta = rng.standard_normal((T, d))
    w = np.full(K, 1.0 / K)
    return {
        "gram": (X, rows),
        "cross_products": (X, R, rows),
        "batched_ridge_solve": (G, XtR, 0.1),
        "predict": (X, coef),
        "residual_power": (R, theta),
        "weighted_sum": (w, R),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args(argv)

    cases = kernel_cases(args.T)
    print(f"{'kernel':<22}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, call_args in cases.items():
        np_fn, nb_fn = getattr(_numpy, name), getattr(_numba, name)
        nb_fn(*call_args)  # compile
        t_np = min(timeit.repeat(lambda: np_fn(*call_args), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: nb_fn(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<22}{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>8.1f}x")

    if args.skip_e2e:
        return
    print("\nfull experiment (seconds per run):")
    for flag in ("1", "0"):
        env = dict(os.environ, ABLOC_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E.format(T=args.T)], env=env, check=True,
                             capture_output=True, text=True).stdout.split()
        print(f"  {out[0]:<8}{float(out[1]):.3f}")


if __name__ == "__main__":
    main()
