"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one row per kernel with the best wall time of each backend and the speedup.
"""

import argparse
import timeit

import numpy as np

from directent import _purepy

try:
    from directent import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    g = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    herm = np.ascontiguousarray((g + g.conj().T) / 2)
    uniforms = rng.random((8192, 11))
    cdf = np.array([3 / 16, 15 / 16, 1.0])
    draws = rng.random(100_000)
    return {
        "jacobi_hermitian 16x16": lambda m: m.jacobi_hermitian(herm, 1e-12, 100),
        "permuted_pairs 8192x12": lambda m: m.permuted_pairs(12, uniforms, 1),
        "inverse_cdf 1e5": lambda m: m.inverse_cdf(cdf, draws),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=3)
    args = ap.parse_args(argv)

    if _kernels is None:
        print("compiled extension not built; only the pure backend is available")
    print(f"{'kernel':<26}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, fn in cases(np.random.default_rng(0)).items():
        best = {}
        for label, mod in (("python", _purepy), ("cython", _kernels)):
            if mod is None:
                continue
            t = timeit.repeat(lambda: fn(mod), repeat=args.repeat, number=args.number)
            best[label] = min(t) / args.number * 1e3
        cy = best.get("cython")
        speed = f"{best['python'] / cy:9.1f}x" if cy else "      n/a"
        cy_s = f"{cy:14.3f}" if cy else f"{'-':>14}"
        print(f"{name:<26}{best['python']:14.3f}{cy_s}{speed:>10}")


if __name__ == "__main__":
    main()
