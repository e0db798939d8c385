"""Benchmark the numba kernels against the pure-numpy fallback.

Times CSR matvec, single-filter Chebyshev application, the fused
multi-band variant, and moment extraction on Erdos-Renyi graphs of
increasing size.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import argparse
import time

import numpy as np

from lsgf import _kernels
from lsgf.generators import erdos_renyi_graph
from lsgf.graphs import build_laplacian


def _time(fn, repeat, warmup=2):
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    arr = np.array(samples)
    return arr.mean(), arr.std()


def _cases(lap, degree, n_bands, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(lap.n)
    coeffs = rng.standard_normal(degree + 1)
    stack = rng.standard_normal((n_bands, degree + 1))
    center = half = lap.lambda_max_bound / 2.0
    rows = lap._row_index()
    args = (lap.indptr, lap.indices, lap.data)
    return [
        ("matvec", lambda f: f(*args, x, rows=rows),
         _kernels.csr_matvec_np, getattr(_kernels, "csr_matvec_nb", None)),
        (f"cheb K={degree}",
         lambda f: f(*args, coeffs, center, half, x, rows=rows),
         _kernels.cheb_apply_np, getattr(_kernels, "cheb_apply_nb", None)),
        (f"fused J={n_bands}",
         lambda f: f(*args, stack, center, half, x, rows=rows),
         _kernels.cheb_apply_stack_np,
         getattr(_kernels, "cheb_apply_stack_nb", None)),
        (f"moments K={degree}",
         lambda f: f(*args, degree + 1, center, half, x, rows=rows),
         _kernels.cheb_moments_np,
         getattr(_kernels, "cheb_moments_nb", None)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,5000,20000")
    ap.add_argument("--degree", type=int, default=40)
    ap.add_argument("--n-bands", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=10)
    args = ap.parse_args()

    if not _kernels.HAS_NUMBA or _kernels.BACKEND != "numba":
        print("numba backend unavailable (or disabled by LSGF_NO_NUMBA); "
              "timing numpy path only")

    for n in (int(s) for s in args.sizes.split(",")):
        p = min(0.9, 10.0 / n)
        graph = erdos_renyi_graph(n, p, seed=1)
        lap = build_laplacian(graph, kind="combinatorial")
        print(f"\nN={n} edges={graph.n_edges} degree={args.degree}")
        for name, call, np_fn, nb_fn in _cases(lap, args.degree,
                                               args.n_bands):
            mean_np, std_np = _time(lambda: call(np_fn), args.repeat)
            line = f"  {name:14s} numpy {mean_np * 1e3:9.3f} ms " \
                   f"+- {std_np * 1e3:6.3f}"
            if nb_fn is not None and _kernels.BACKEND == "numba":
                mean_nb, std_nb = _time(lambda: call(nb_fn), args.repeat)
                line += f" | numba {mean_nb * 1e3:9.3f} ms " \
                        f"+- {std_nb * 1e3:6.3f}" \
                        f" | speedup {mean_np / mean_nb:5.2f}x"
            print(line)


if __name__ == "__main__":
    main()
