"""Time the tangent-point kernels: numpy reference vs compiled extension.

    python benchmarks/bench_kernels.py [--sizes 256 512 1024 2048] [--repeat 3]
"""

import argparse
import os
import time

import numpy as np

from symknots import _pykernels, kernels
from symknots.constructions import TorusKnotParams, torus_knot


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024, 2048])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--q", type=float, default=3.0)
    args = parser.parse_args()

    have_compiled = "compiled" in kernels.available_backends()
    threads = [1] + ([os.cpu_count()] if (os.cpu_count() or 1) > 1 else [])
    print(f"{'N':>6} {'numpy [s]':>11}", end="")
    if have_compiled:
        for t in threads:
            print(f" {f'compiled x{t} [s]':>17} {'speedup':>8}", end="")
    print()
    for n in args.sizes:
        c = torus_knot(TorusKnotParams(3, 0.04), n)
        pts, h = c.points, c.h
        ref = best_of(lambda: _pykernels.tp_energy_grad(pts, h, args.q), args.repeat)
        print(f"{n:>6} {ref:>11.4f}", end="")
        if have_compiled:
            from symknots import _ckernels

            e_ref = _pykernels.tp_energy(pts, h, args.q)
            for t in threads:
                got = best_of(lambda: _ckernels.tp_energy_grad(pts, h, args.q, t), args.repeat)
                assert np.isclose(_ckernels.tp_energy(pts, h, args.q, t), e_ref, rtol=1e-12)
                print(f" {got:>17.4f} {ref / got:>8.1f}", end="")
        print()


if __name__ == "__main__":
    main()
