"""Benchmark the compiled block-reduction kernels against the numpy fallback.

Times zeeman_block_terms and block_reduce on realistic large-N inputs
(the spin-1/2 analytic block arrays), cross-checks that both backends
agree, and prints per-call timings with the speedup factor.

Usage:
    python3 benchmarks/bench_kernels.py [--N 1000000] [--eta 9.0]
                                        [--T 0.5] [--h 0.001]
                                        [--repeats 7] [--loops 20]
"""

import argparse
import timeit

import numpy as np

from qks import _kernels_py
from qks.qarith import DeformationParam
from qks.spectrum import corrected_energies, half_spin_block_arrays

try:
    from qks import _kernels
except ImportError:
    _kernels = None


def _best_ms(fn, loops, repeats):
    timer = timeit.Timer(fn)
    return min(timer.repeat(repeats, loops)) / loops * 1e3


def _agreement(a, b):
    dev = 0.0
    for x, y in zip(np.atleast_1d(a), np.atleast_1d(b)):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        scale = np.maximum(1.0, np.abs(x))
        dev = max(dev, float(np.max(np.abs(x - y) / scale)))
    return dev


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--N", type=int, default=1_000_000,
                        help="number of spin-1/2 sites (blocks ~ N/2)")
    parser.add_argument("--eta", type=float, default=9.0)
    parser.add_argument("--T", type=float, default=0.5)
    parser.add_argument("--h", type=float, default=1e-3)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--loops", type=int, default=20)
    args = parser.parse_args()

    d = DeformationParam(eta=args.eta / args.N)
    J, logd, E = half_spin_block_arrays(args.N, d, 1.0 / args.N)
    E = corrected_energies(E)
    beta = 1.0 / args.T
    x = beta * args.h

    print(f"N={args.N} blocks={J.size} eta={args.eta} T={args.T} h={args.h}")
    if _kernels is None:
        print("compiled extension not importable; timing the numpy "
              "fallback only")

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("compiled", _kernels))
        dev_z = _agreement(_kernels_py.zeeman_block_terms(J, x),
                           _kernels.zeeman_block_terms(J, x))
        dev_r = _agreement(_kernels_py.block_reduce(logd, E, J, beta, x),
                           _kernels.block_reduce(logd, E, J, beta, x))
        print(f"backend agreement: zeeman {dev_z:.2e}, reduce {dev_r:.2e}")

    cases = [
        ("zeeman_block_terms",
         lambda impl: (lambda: impl.zeeman_block_terms(J, x))),
        ("block_reduce",
         lambda impl: (lambda: impl.block_reduce(logd, E, J, beta, x))),
    ]
    header = f"{'kernel':<20}" + "".join(f"{name:>12}" for name, _ in backends)
    if _kernels is not None:
        header += f"{'speedup':>10}"
    print(header)
    for label, make in cases:
        times = [_best_ms(make(impl), args.loops, args.repeats)
                 for _, impl in backends]
        row = f"{label:<20}" + "".join(f"{t:>10.3f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
