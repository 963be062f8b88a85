"""Benchmark the pure-Python kernels against the compiled extension.

Runs the two hot kernels on sized workloads with both backends and prints a
table of best-of-N wall times plus the speedup factor. Usage:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --score-shapes 16/8,22/11 --trials 5000

``max_subset_score`` is an exhaustive n-subset enumeration, so its workload
is given as pool/n shapes with modest binomial counts, matching how the
selection oracle actually calls it. The compiled column is skipped (with a
note) when the extension is not built.
"""

from __future__ import annotations

import argparse
import math
import random
import time
from array import array

from fairform._kernels import backends


def time_call(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def score_workload(size: int, n: int):
    rng = random.Random(97)
    scores = array("q", (rng.randint(0, 5) for _ in range(size)))
    return lambda impl: impl.max_subset_score(scores, n)


def trial_workload(pool_size: int, trials: int):
    rng = random.Random(98)
    n_groups = 6
    flags = bytes(rng.randint(0, 1) for _ in range(pool_size * n_groups))
    h = array("q", (rng.randint(0, 60) for _ in range(pool_size)))
    n = max(1, pool_size // 16)
    return lambda impl: impl.rsa_trial_totals(
        flags, pool_size, n_groups, h, n, trials, 12345
    )


def fmt_ms(seconds: float) -> str:
    return f"{seconds * 1000:10.2f}"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--score-shapes", default="16/8,20/10,24/12",
                        help="comma-separated pool/n shapes for max_subset_score")
    parser.add_argument("--pool-size", type=int, default=500,
                        help="pool size for rsa_trial_totals")
    parser.add_argument("--trials", type=int, default=10_000,
                        help="Monte-Carlo trials for rsa_trial_totals")
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions per measurement (best is reported)")
    args = parser.parse_args()

    impls = backends()
    if "compiled" not in impls:
        print("note: compiled extension not built; timing the pure backend only")

    rows = []
    for shape in args.score_shapes.split(","):
        size, n = (int(v) for v in shape.split("/"))
        subsets = math.comb(size, n)
        rows.append((
            f"max_subset_score {size}/{n} ({subsets:,} subsets)",
            score_workload(size, n),
        ))
    rows.append((
        f"rsa_trial_totals pool={args.pool_size} trials={args.trials}",
        trial_workload(args.pool_size, args.trials),
    ))

    header = f"{'workload':<46}{'pure ms':>10}"
    if "compiled" in impls:
        header += f"{'compiled ms':>13}{'speedup':>9}"
    print(header)
    print("-" * len(header))

    for label, workload in rows:
        expected = workload(impls["pure"])
        pure_t = time_call(lambda: workload(impls["pure"]), args.repeat)
        line = f"{label:<46}{fmt_ms(pure_t)}"
        if "compiled" in impls:
            got = workload(impls["compiled"])
            if got != expected:
                raise SystemExit(f"backend mismatch on {label}: {got!r} != {expected!r}")
            comp_t = time_call(lambda: workload(impls["compiled"]), args.repeat)
            line += f"{fmt_ms(comp_t):>13}{pure_t / comp_t:>8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
