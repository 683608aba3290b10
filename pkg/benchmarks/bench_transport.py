"""Benchmark the compiled transport kernel against the pure-numpy fallback.

Both backends are driven through the same encoded problem: the monodromy
of a 4-puncture logarithmic connection on 4x4 matrices.  Since the step
schedule depends only on the path geometry, both backends take the same
number of steps and produce matching matrices; the comparison is purely
about speed.

Run from the repository root:

    python benchmarks/bench_transport.py [--size N] [--tol T] [--repeat R]
"""

import argparse
import importlib
import time

import numpy as np

from starmono import _kernel_py
from starmono.connection import fuchsian_connection
from starmono.paths import puncture_loop
from starmono.transport import encode_path, encode_terms


def build_problem(size, tol):
    rng = np.random.default_rng(0)
    mats = [rng.standard_normal((size, size))
            + 1j * rng.standard_normal((size, size)) for _ in range(3)]
    mats.append(-sum(mats))
    alphas = [0.0, 1.0, 3.0, 4.5]
    terms = fuchsian_connection(mats, alphas)
    path = puncture_loop(alphas, [9.0], 2)
    enc_mats, coord, kind, pole = encode_terms(terms)
    enc_path = encode_path(path)
    return (enc_mats, coord, kind, pole, enc_path, tol, 0.05)


def bench(kernel, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = kernel.transport_path(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=4)
    ap.add_argument("--tol", type=float, default=0.02)
    ap.add_argument("--repeat", type=int, default=3)
    ns = ap.parse_args()

    try:
        kernel_cy = importlib.import_module("starmono._kernel_cy")
    except ImportError:
        kernel_cy = None

    args = build_problem(ns.size, ns.tol)
    t_py, (f_py, _, n_py) = bench(_kernel_py, args, ns.repeat)
    print(f"pure python : {t_py * 1e3:9.2f} ms   ({n_py} steps)")
    if kernel_cy is None:
        print("compiled    : not built in this environment")
        return
    t_cy, (f_cy, _, n_cy) = bench(kernel_cy, args, ns.repeat)
    print(f"compiled    : {t_cy * 1e3:9.2f} ms   ({n_cy} steps)")
    print(f"speedup     : {t_py / t_cy:9.1f}x")
    diff = float(np.linalg.norm(f_py - f_cy) / np.linalg.norm(f_py))
    print(f"agreement   : same steps = {n_py == n_cy}, "
          f"relative |F_py - F_cy| = {diff:.2e}")


if __name__ == "__main__":
    main()
