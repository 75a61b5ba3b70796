#!/usr/bin/env python3
"""Generate a benchmark corpus and sweep solver methods over it.

Desk-scale defaults: 10 instances per (class, order, density) cell, orders
4-10 for the quantum-backed methods.  The full-scale protocol (30 instances,
orders up to 14, classical methods only beyond 12) is reachable with flags:

    python scripts/run_benchmark.py --count 30 --n-max 14 \
        --methods colgen-exact,colgen-greedy,colgen-sa,greedy-exact
"""

import argparse
import os

from atomcolor.bench import METHODS, generate_instances, run_bench


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="bench_out")
    parser.add_argument("--count", type=int, default=10,
                        help="instances per cell")
    parser.add_argument("--n-min", type=int, default=4)
    parser.add_argument("--n-max", type=int, default=10)
    parser.add_argument("--densities", default="0.2,0.5,0.8")
    parser.add_argument("--methods",
                        default="colgen-exact,colgen-quantum,"
                                "greedy-exact,greedy-quantum",
                        help="comma list from: " + ",".join(METHODS))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--noise", choices=["none", "spam"], default="none")
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()

    corpus = os.path.join(args.out_dir, "corpus")
    densities = [float(d) for d in args.densities.split(",")]
    for cls in ("ud", "nonud"):
        for n in range(args.n_min, args.n_max + 1):
            for dens in densities:
                generate_instances(cls, n, dens, args.count,
                                   seed=args.seed + n, out_dir=corpus)
    print(f"corpus written to {corpus}")

    methods = [m.strip() for m in args.methods.split(",")]
    out_prefix = os.path.join(args.out_dir, "results")
    results, rows = run_bench(os.path.join(corpus, "manifest.json"), methods,
                              seed=args.seed, out_prefix=out_prefix,
                              noise=(args.noise == "spam"),
                              workers=args.workers)
    failures = sum(r["status"] != "ok" for r in results)
    print(f"{len(results)} runs ({failures} failures) -> {out_prefix}.csv")
    for row in rows:
        print(f"  {row['class']:>5} n={row['n']:>2} d={row['density']:.1f} "
              f"{row['method']:<16} iters {row['mean_iterations']:>6.2f} "
              f"gap {row['mean_gap_percent'] if row['mean_gap_percent'] != '' else '-'}")


if __name__ == "__main__":
    main()
