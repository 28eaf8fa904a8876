"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--sieve 10000000] [--mask 1000000] [--repeat 3]
"""

import argparse
import time
from array import array

from simplest_quartic import _kernels_py as py

try:
    from simplest_quartic import _kernels as cy
except ImportError:
    cy = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(args):
    primes = py.sieve_primes(int(args.mask ** 0.5) + 1)
    moduli = [p * p for p in primes]
    residues = [0] * len(moduli)
    strip_input = [m * m + 16 for m in range(1, 20001)]
    small = py.sieve_primes(200)

    def sieve(mod):
        return lambda: mod.sieve_primes(args.sieve)

    def mask(mod, typed):
        mods = array("q", moduli) if typed else moduli
        res = array("q", residues) if typed else residues
        return lambda: mod.mark_classes(bytearray(args.mask), 1, mods, res)

    def strip(mod):
        return lambda: [mod.strip_primes(n, small) for n in strip_input]

    yield f"sieve_primes({args.sieve})", sieve(py), cy and sieve(cy)
    yield f"mark_classes(m <= {args.mask})", mask(py, False), cy and mask(cy, True)
    yield "strip_primes(m^2+16, m <= 20000)", strip(py), cy and strip(cy)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sieve", type=int, default=10**7)
    parser.add_argument("--mask", type=int, default=10**6)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"{'kernel':40s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fpy, fcy in cases(args):
        tp = best_of(fpy, args.repeat)
        if fcy is None:
            print(f"{name:40s} {tp:10.4f} {'n/a':>10s}")
            continue
        tc = best_of(fcy, args.repeat)
        print(f"{name:40s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
