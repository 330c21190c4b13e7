"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --repeat 5

Each kernel runs on the same inputs through both paths; results must agree
before timings are printed.  The first numba call (compilation) is excluded.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from groupoid_graph import _accel
from groupoid_graph.groupoid import build_transitive_groupoid
from groupoid_graph.instances import random_fuzz_action
from groupoid_graph.oracle import correspondence_crossed_product
from groupoid_graph.reptheory import symmetric_group


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(seed: int):
    G = build_transitive_groupoid([f"u{i}" for i in range(3)], symmetric_group(4))  # 216 arrows
    yield "associativity (216 arrows)", lambda nb: _accel.first_assoc_violation(G.compose, use_numba=nb)
    rng = np.random.default_rng(seed)
    A = max((random_fuzz_action(rng) for _ in range(20)), key=lambda a: a.graph.n_edges)
    M = correspondence_crossed_product(A)
    mul = M.algebra.mul
    label = f"left module ({M.algebra.dim} x {M.dim})"
    yield label, lambda nb: _accel.first_module_violation(M.left, mul, use_numba=nb)
    yield f"bimodule ({M.algebra.dim} x {M.dim})", lambda nb: _accel.first_bimodule_violation(M.left, M.right, use_numba=nb)
    perms = np.array([rng.permutation(20000) for _ in range(4)])
    yield "orbit labels (20000 points)", lambda nb: _accel.orbit_labels(perms, use_numba=nb)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
        return 1
    print(f"{'kernel':36s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}")
    for name, fn in cases(args.seed):
        a, b = fn(True), fn(False)  # warm-up and parity
        if not np.array_equal(np.asarray(a), np.asarray(b)):
            raise SystemExit(f"{name}: numba and numpy disagree ({a} vs {b})")
        tn, tp = _best(lambda: fn(True), args.repeat), _best(lambda: fn(False), args.repeat)
        print(f"{name:36s} {tn:11.4f} {tp:11.4f} {tp / tn:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
