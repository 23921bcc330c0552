"""Timing the jitted Smith normal form against the exact fallback.

Two workloads: the Lee differentials of seeded random diagrams (the
production shape, where sparse unit-pivot peeling removes most of the
work before the dense kernel sees anything) and synthetic dense cores
``L @ D @ R`` with unit-triangular ``L``, ``R`` (bounded entries, so
the int64 kernel runs without tripping its magnitude guard).

Run as ``python bench/benchmark.py [--seed N] [--count K] [--size S]``;
set ``VKH_NO_NUMBA=1`` to time the exact path only.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from vkh import _kernels
from vkh.cube import build_geometric_complex
from vkh.random_diagrams import random_link
from vkh.snf import invariant_factors, smith_normal_form
from vkh.tqft import apply_tqft


def lee_matrices(seed: int, count: int):
    mats = []
    rng = random.Random(seed)
    while len(mats) < count:
        d = random_link(random.Random(rng.randrange(2 ** 32)),
                        max_crossings=7)
        cc = apply_tqft(build_geometric_complex(d), 1)
        mats.extend(M for M in cc.mats if M.nnz())
    return mats[:count]


def dense_cores(seed: int, count: int, size: int):
    """Matrices with known-bounded entry growth under reduction."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        D = np.zeros((size, size), dtype=object)
        for i in range(size):
            D[i, i] = rng.choice((1, 1, 2, 2, 4, 6, 0))
        L = np.eye(size, dtype=object)
        R = np.eye(size, dtype=object)
        # a light unimodular disguise keeps the reduction inside the
        # int64 magnitude guard
        for _k in range(size // 2):
            i, j = rng.sample(range(size), 2)
            if i > j:
                L[i, j] = rng.choice((-1, 1))
            else:
                R[i, j] = rng.choice((-1, 1))
        out.append(L @ D @ R)
    return out


def timed(fn, *args):
    fn(*args)  # warm pass: caches, lazy allocations
    t0 = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t0, out


def with_kernel(enabled: bool, fn, *args):
    kernel = _kernels.snf_int64
    if not enabled:
        _kernels.snf_int64 = None
    try:
        return timed(fn, *args)
    finally:
        _kernels.snf_int64 = kernel


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--count", type=int, default=25)
    ap.add_argument("--size", type=int, default=60)
    args = ap.parse_args()

    if _kernels.HAVE_NUMBA:
        # compile outside every clock
        smith_normal_form(np.array([[2, 0], [0, 3]], dtype=object))

    print(f"seed={args.seed}")
    lee = lee_matrices(args.seed, args.count)
    print(f"[lee] {len(lee)} differentials, largest "
          f"{max((M.nrows, M.ncols) for M in lee)}")
    run = lambda ms: [invariant_factors(M, certify=True) for M in ms]
    t_fast, f_fast = with_kernel(True, run, lee)
    t_slow, f_slow = with_kernel(False, run, lee)
    assert f_fast == f_slow, "kernel and fallback disagree"
    print(f"[lee] jitted {t_fast:.3f}s  exact {t_slow:.3f}s  "
          f"({t_slow / t_fast:.1f}x)  (mostly sparse-peeled)")

    cores = dense_cores(args.seed, 6, args.size)
    run = lambda ms: [smith_normal_form(m, verify=False).factors
                      for m in ms]
    t_fast, f_fast = with_kernel(_kernels.HAVE_NUMBA, run, cores)
    t_slow, f_slow = with_kernel(False, run, cores)
    assert f_fast == f_slow, "kernel and fallback disagree"
    print(f"[dense {args.size}x{args.size}] jitted {t_fast:.3f}s  "
          f"exact {t_slow:.3f}s  ({t_slow / t_fast:.1f}x)")


if __name__ == "__main__":
    main()
