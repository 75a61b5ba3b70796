"""Command-line interface: instance generation, single solves, benchmark
sweeps, and brute-force reference answers.

All vertex labels in files and printed output are 1-based; exit code 0 on
success, 2 on bad input with a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench, colgen, graphs, oracle
from .greedy import greedy_color
from .pricing import PricerConfig


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


def _fail(message: str, code: int = 2):
    json.dump({"error": message}, sys.stderr)
    sys.stderr.write("\n")
    raise SystemExit(code)


def cmd_generate(args) -> None:
    manifest = bench.generate_instances(args.graph_class, args.n, args.density,
                                        args.count, args.seed, args.out_dir)
    _emit({"out_dir": args.out_dir,
           "instances": [e["file"] for e in manifest["instances"]]})


def _reduced_instance(g, reduce_mode):
    if reduce_mode == "line":
        lg, edge_map = graphs.line_graph(g)
        return lg, edge_map
    if reduce_mode == "complement":
        return graphs.complement(g), None
    return g, None


def cmd_solve(args) -> None:
    try:
        g = graphs.load_graph(args.instance)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        _fail(f"cannot read instance: {exc}")
    target, edge_map = _reduced_instance(g, args.reduce)
    if target.n == 0:
        _fail("reduced instance has no vertices")

    chromatic = None
    if target.n <= oracle.MAX_CHROMATIC_N:
        chromatic = oracle.brute_chromatic(target)[0]

    cfg = PricerConfig(backend=args.pricer, seed=args.seed, shots=args.shots,
                       pulse_duration_us=args.pulse_T_us,
                       noise=(args.noise == "spam"), redesign=args.redesign)
    if args.method == "colgen":
        trace = colgen.run(target, cfg, known_chromatic=chromatic,
                           warm_start=args.warm_start,
                           measure_time=args.timing)
        if args.verbose:
            _print_iteration_table(trace)
        result = trace.to_json_dict()
        if args.trace:
            result["trace"] = [
                {"iteration": rec.index, "rmp_objective": rec.rmp_objective,
                 "duals": rec.duals,
                 "columns_added": [[u + 1 for u in c] for c in rec.columns_added]}
                for rec in trace.iterations]
    else:
        greedy_backend = "quantum" if args.pricer == "quantum" else "exact"
        colors, coloring, iterations = greedy_color(target, greedy_backend, cfg)
        classes: dict[int, list[int]] = {}
        for u, c in enumerate(coloring):
            classes.setdefault(c, []).append(u)
        result = {"colors": colors,
                  "coloring": [[u + 1 for u in classes[c]]
                               for c in sorted(classes)],
                  "iterations": iterations, "lp_value": None}
        if chromatic is not None:
            result["gap_percent"] = colgen.gap_percent(colors, chromatic)

    if chromatic is not None:
        result["known_chromatic"] = chromatic
    if args.reduce == "line":
        result["reduction"] = {
            "kind": "edge-coloring",
            "edge_colors": [
                {"edge": [min(u, v) + 1, max(u, v) + 1], "color": ci + 1}
                for ci, cls in enumerate(result["coloring"])
                for lv in cls for u, v in [edge_map[lv - 1]]],
        }
    elif args.reduce == "complement":
        result["reduction"] = {"kind": "clustering",
                               "clusters": result["coloring"]}
    _emit(result)


def _print_iteration_table(trace) -> None:
    """Worked-example style log: objective, duals, and sets per iteration."""
    print("iter  rmp_obj  duals | generated sets (1-based)", file=sys.stderr)
    for rec in trace.iterations:
        duals = "[" + ", ".join(f"{d:.2f}" for d in rec.duals) + "]"
        cols = " ".join("[" + ",".join(str(u + 1) for u in c) + "]"
                        for c in rec.columns_added) or "none"
        print(f"{rec.index:>4}  {rec.rmp_objective:>7.3f}  {duals} | {cols}",
              file=sys.stderr)


def cmd_bench(args) -> None:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    try:
        results, rows = bench.run_bench(args.manifest, methods, args.seed,
                                        args.out, shots=args.shots,
                                        pulse_t=args.pulse_T_us,
                                        noise=(args.noise == "spam"),
                                        workers=args.workers)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
    failures = sum(r["status"] != "ok" for r in results)
    _emit({"out_csv": f"{args.out}.csv", "out_json": f"{args.out}.json",
           "cells": len(rows), "runs": len(results), "failures": failures})


def cmd_oracle(args) -> None:
    try:
        g = graphs.load_graph(args.instance)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        _fail(f"cannot read instance: {exc}")
    out = {"n": g.n, "edges": g.m}
    if g.n <= oracle.MAX_CHROMATIC_N:
        chi, _ = oracle.brute_chromatic(g)
        out["chromatic"] = chi
    if g.n <= oracle.MAX_ENUM_N:
        out["mis_size"] = oracle.mis_size(g)
    if g.n <= oracle.MAX_FULL_LP_N:
        out["fractional_lp"] = oracle.full_lp_value(g)
    _emit(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atomcolor",
        description="Vertex coloring by column generation with an emulated "
                    "neutral-atom pricing sampler.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a random instance corpus")
    p_gen.add_argument("--class", dest="graph_class", choices=["ud", "nonud"],
                       required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--density", type=float, required=True)
    p_gen.add_argument("--count", type=int, default=10)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out-dir", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_solve = sub.add_parser("solve", help="solve one instance file")
    p_solve.add_argument("instance")
    p_solve.add_argument("--method", choices=["colgen", "greedy"],
                         default="colgen")
    p_solve.add_argument("--pricer", choices=["exact", "greedy", "sa",
                                              "quantum"], default="exact")
    p_solve.add_argument("--redesign", choices=["ar", "aipr", "ar-hdr",
                                                "aipr-hdr"], default="ar-hdr")
    p_solve.add_argument("--noise", choices=["none", "spam"], default="none")
    p_solve.add_argument("--shots", type=int, default=1000)
    p_solve.add_argument("--pulse-T-us", dest="pulse_T_us", type=float,
                         default=4.0)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--warm-start", choices=["classical", "quantum"],
                         default="classical")
    p_solve.add_argument("--reduce", choices=["none", "line", "complement"],
                         default="none")
    p_solve.add_argument("--trace", action="store_true",
                         help="include the per-iteration log")
    p_solve.add_argument("--verbose", "-v", action="store_true",
                         help="print an iteration table to stderr")
    p_solve.add_argument("--timing", action="store_true",
                         help="include wall_ms (non-reproducible bytes)")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="run a benchmark sweep")
    p_bench.add_argument("manifest")
    p_bench.add_argument("--methods", default="colgen-exact,colgen-quantum",
                         help="comma list from: " + ",".join(bench.METHODS))
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--shots", type=int, default=1000)
    p_bench.add_argument("--pulse-T-us", dest="pulse_T_us", type=float,
                         default=4.0)
    p_bench.add_argument("--noise", choices=["none", "spam"], default="none")
    p_bench.add_argument("--workers", type=int, default=None)
    p_bench.add_argument("--out", required=True,
                         help="output prefix for .csv and .json")
    p_bench.set_defaults(func=cmd_bench)

    p_oracle = sub.add_parser("oracle", help="brute-force reference values")
    p_oracle.add_argument("instance")
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
