"""Compare the compiled and pure-Python ridge quadrature kernels.

Run ``python benchmarks/bench_kernels.py [--rows N] [--repeat R]``.  For
each profile the script times ``ridge_moments`` on both backends with the
same inputs and reports rows per second, the speedup and the largest
difference between the two results.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ouschauder.kernels import available_backends, ridge_moments
from ouschauder.profiles import AbsClipPow, GaussBump, Sine
from ouschauder.quadrature import QuadratureSpec

PROFILES = {
    "abs_clip_pow(0.5)": AbsClipPow(0.5),
    "sine(2)": Sine(2.0),
    "gauss_bump": GaussBump(),
}


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--rows", type=int, default=20000, help="kernel rows per call")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions (best is kept)")
    parser.add_argument("--nmom", type=int, default=4, help="number of Hermite moments")
    args = parser.parse_args(argv)

    backends = available_backends()
    rng = np.random.default_rng(0)
    a = rng.uniform(-3.0, 3.0, args.rows)
    b = np.abs(rng.normal(0.5, 0.5, args.rows))
    spec = QuadratureSpec()
    print(f"backends: {', '.join(backends)}; rows per call: {args.rows}; moments: {args.nmom}")
    print(f"{'profile':20s} {'backend':9s} {'seconds':>9s} {'rows/s':>11s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, prof in PROFILES.items():
        results, times = {}, {}
        for be in backends:
            times[be] = best_time(lambda be=be: ridge_moments(prof, a, b, spec, args.nmom, backend=be), args.repeat)
            results[be] = ridge_moments(prof, a, b, spec, args.nmom, backend=be)[0]
        ref = results["python"]
        for be in backends:
            diff = float(np.abs(results[be] - ref).max())
            speed = times["python"] / times[be]
            print(f"{name:20s} {be:9s} {times[be]:9.3f} {args.rows / times[be]:11.0f} {speed:8.2f} {diff:11.2e}")


if __name__ == "__main__":
    main()
