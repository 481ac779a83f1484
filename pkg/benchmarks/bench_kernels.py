"""Time the monomial-support kernels jitted by numba against the plain fallback.

Usage: python benchmarks/bench_kernels.py [--vars 24] [--gens 30] [--ideals 200] [--seed 0]

Workload: random squarefree-support monomial ideals; the kernel computes the
minimum hitting set (codimension of the monomial ideal).  Both variants run on
identical inputs and their answers are compared.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fadhm import _kernels as K


def random_masks(rng, nvars, ngens, max_support=4):
    out = np.zeros(ngens, dtype=np.uint64)
    for k in range(ngens):
        size = int(rng.integers(1, max_support + 1))
        for v in rng.choice(nvars, size=size, replace=False):
            out[k] |= np.uint64(1) << np.uint64(v)
    return out


def run(fn, workload, nvars):
    t0 = time.perf_counter()
    res = [int(fn(m, nvars)) for m in workload]
    return time.perf_counter() - t0, res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, default=24)
    ap.add_argument("--gens", type=int, default=30)
    ap.add_argument("--ideals", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    workload = []
    for _ in range(args.ideals):
        m = random_masks(rng, args.vars, args.gens)
        workload.append(m[K.minimal_supports_py(m)])

    print(f"{args.ideals} ideals, {args.vars} vars, {args.gens} generators each")
    t_py, r_py = run(K.min_hitting_set_py, workload, args.vars)
    print(f"fallback  {t_py:9.4f} s")
    if not K.HAVE_NUMBA:
        print("numba unavailable (or FADHM_NUMBA=0); jitted variant skipped")
        return
    K.min_hitting_set_jit(workload[0], args.vars)  # compile outside the timing
    t_jit, r_jit = run(K.min_hitting_set_jit, workload, args.vars)
    print(f"numba     {t_jit:9.4f} s")
    print(f"speedup   {t_py / t_jit:9.1f}x")
    print("results agree" if r_py == r_jit else "RESULTS DIFFER")


if __name__ == "__main__":
    main()
