#!/usr/bin/env python3
"""Time the compiled trial-assembly kernel against the numpy fallback.

Both backends must produce identical selection matrices on identical
draws; this script asserts that and reports the speedup.  Run it from a
checkout with the extension built (``pip install -e .``).
"""

import argparse
import time

import numpy as np

from selacc import ScoreMatrix
from selacc import _sim_fallback

try:
    from selacc import _sim_kernel
except ImportError:
    _sim_kernel = None


def build_problem(rng, trials, n, m, wrong_pick):
    scores = rng.random((n, m))
    mat = ScoreMatrix.from_array(scores)
    best = scores.argmax(axis=1).astype(np.int64)
    flat, off = [], [0]
    for i in range(n):
        if wrong_pick == "worst":
            others = [int(scores[i].argmin())] if m > 1 else []
        else:  # random-other
            others = [j for j in range(m) if j != best[i]]
        flat.extend(others)
        off.append(len(flat))
    u = rng.random((trials, n))
    v = rng.random((trials, n))
    return mat, u, v, best, np.asarray(flat, dtype=np.int64), np.asarray(off, dtype=np.int64)


def time_backend(impl, u, v, best, flat, off, n_wrong, repeats):
    out = impl.exact_count_picks(u, v, best, flat, off, n_wrong)  # warm up
    best_time = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.exact_count_picks(u, v, best, flat, off, n_wrong)
        best_time = min(best_time, time.perf_counter() - t0)
    return out, best_time


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=255)
    ap.add_argument("--instances", type=int, default=2000)
    ap.add_argument("--algorithms", type=int, default=4)
    ap.add_argument("--wrong-frac", type=float, default=0.3,
                    help="fraction of rows forced wrong per trial")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--policy", choices=("worst", "random-other"), default="worst")
    args = ap.parse_args()

    if _sim_kernel is None:
        raise SystemExit("compiled kernel not available; build the extension first")

    rng = np.random.default_rng(args.seed)
    _, u, v, best, flat, off = build_problem(
        rng, args.trials, args.instances, args.algorithms, args.policy
    )
    n_wrong = int(round(args.wrong_frac * args.instances))

    sel_py, t_py = time_backend(_sim_fallback, u, v, best, flat, off, n_wrong, args.repeats)
    sel_c, t_c = time_backend(_sim_kernel, u, v, best, flat, off, n_wrong, args.repeats)

    if not np.array_equal(sel_py, sel_c):
        raise SystemExit("backend outputs differ; selections are supposed to be bit-identical")

    shape = f"{args.trials}x{args.instances}x{args.algorithms}"
    print(f"problem {shape}, {n_wrong} wrong rows/trial, policy {args.policy}")
    print(f"numpy fallback : {t_py * 1000:8.2f} ms")
    print(f"compiled kernel: {t_c * 1000:8.2f} ms")
    print(f"speedup        : {t_py / t_c:8.2f}x  (outputs identical)")


if __name__ == "__main__":
    main()
