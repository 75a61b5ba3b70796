"""Instance corpus generation and the benchmark runner.

Instances are JSON graph files plus a manifest recording seeds and, where
the size guard allows, the exact chromatic number.  The bench runner fans
instances out to a worker pool and aggregates per-cell statistics.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import colgen, graphs, oracle
from .greedy import greedy_color
from .pricing import PricerConfig

CHI_GUARD = 14
CSV_COLUMNS = ["class", "n", "density", "method", "instances", "failures",
               "mean_iterations", "ci95_iterations", "mean_gap_percent",
               "ci95_gap_percent", "mean_colors", "optimal_rate"]


def instance_seed(base_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1)[0])


def generate_instances(graph_class: str, n: int, density: float, count: int,
                       seed: int, out_dir) -> dict:
    """Write ``count`` instance files plus a manifest; returns the manifest.

    Repeated calls into the same directory accumulate one combined manifest
    (entries are keyed by file name), so a multi-cell corpus is built by
    generating each cell in turn.
    """
    if graph_class not in ("ud", "nonud"):
        raise ValueError("class must be 'ud' or 'nonud'")
    os.makedirs(out_dir, exist_ok=True)
    entries = []
    for i in range(count):
        s = instance_seed(seed, i)
        if graph_class == "ud":
            g, _ = graphs.gen_unit_disk(n, density, s)
        else:
            g = graphs.gen_gnp(n, density, s)
        name = f"{graph_class}_n{n}_d{int(round(density * 100)):02d}_{i:03d}.json"
        graphs.save_graph(g, os.path.join(out_dir, name))
        entry = {"file": name, "class": graph_class, "n": n,
                 "density": density, "seed": s}
        if n <= CHI_GUARD:
            entry["chromatic"] = oracle.brute_chromatic(g)[0]
        entries.append(entry)

    manifest_path = os.path.join(out_dir, "manifest.json")
    combined = {e["file"]: e for e in entries}
    if os.path.exists(manifest_path):
        with open(manifest_path, encoding="utf-8") as f:
            for e in json.load(f)["instances"]:
                combined.setdefault(e["file"], e)
    manifest = {"seed": seed,
                "instances": [combined[k] for k in sorted(combined)]}
    with open(manifest_path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=1, sort_keys=True)
        f.write("\n")
    return manifest


METHODS = ("colgen-exact", "colgen-greedy", "colgen-sa", "colgen-quantum",
           "greedy-exact", "greedy-quantum")


def run_method(g: graphs.Graph, method: str, seed: int,
               chromatic: int | None, shots: int = 1000,
               pulse_t: float = 4.0, noise: bool = False,
               redesign: str = "ar-hdr") -> dict:
    """One instance, one method; returns colors/iterations/gap."""
    if method.startswith("colgen-"):
        backend = method.split("-", 1)[1]
        cfg = PricerConfig(backend=backend, seed=seed, shots=shots,
                           pulse_duration_us=pulse_t, noise=noise,
                           redesign=redesign)
        trace = colgen.run(g, cfg, known_chromatic=chromatic)
        return {"colors": trace.colors_used,
                "iterations": trace.pricing_iterations,
                "lp_value": trace.lp_value,
                "gap_percent": trace.gap_vs_known}
    if method.startswith("greedy-"):
        backend = method.split("-", 1)[1]
        cfg = PricerConfig(backend="quantum" if backend == "quantum" else "exact",
                           seed=seed, shots=shots, pulse_duration_us=pulse_t,
                           noise=noise)
        colors, _, iterations = greedy_color(g, backend, cfg)
        gap = (colgen.gap_percent(colors, chromatic)
               if chromatic is not None else None)
        return {"colors": colors, "iterations": iterations,
                "lp_value": None, "gap_percent": gap}
    raise ValueError(f"unknown method {method!r}")


def _bench_one(args) -> dict:
    entry, in_dir, method, seed, shots, pulse_t, noise = args
    g = graphs.load_graph(os.path.join(in_dir, entry["file"]))
    out = {"file": entry["file"], "class": entry["class"], "n": entry["n"],
           "density": entry["density"], "method": method}
    try:
        res = run_method(g, method, seed, entry.get("chromatic"),
                         shots=shots, pulse_t=pulse_t, noise=noise)
        out.update(res)
        out["status"] = "ok"
    except Exception as exc:  # record, keep the run going
        out["status"] = "error"
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def mean_ci(values) -> tuple[float, float]:
    """Mean and half-width of the normal 95% confidence interval."""
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        return math.nan, math.nan
    if v.size == 1:
        return float(v[0]), 0.0
    return float(v.mean()), float(1.96 * v.std(ddof=1) / math.sqrt(v.size))


def aggregate(results: list[dict]) -> list[dict]:
    """Collapse per-instance results into per-(class, n, density, method)
    rows; failed instances are counted and excluded from the means."""
    cells: dict[tuple, list[dict]] = {}
    for r in results:
        key = (r["class"], r["n"], r["density"], r["method"])
        cells.setdefault(key, []).append(r)
    rows = []
    for key in sorted(cells):
        cls, n, density, method = key
        bucket = cells[key]
        ok = [r for r in bucket if r["status"] == "ok"]
        mean_it, ci_it = mean_ci([r["iterations"] for r in ok])
        gaps = [r["gap_percent"] for r in ok if r.get("gap_percent") is not None]
        mean_gap, ci_gap = mean_ci(gaps)
        mean_colors, _ = mean_ci([r["colors"] for r in ok])
        optimal = [1.0 if g == 0 else 0.0 for g in gaps]
        rows.append({
            "class": cls, "n": n, "density": density, "method": method,
            "instances": len(bucket), "failures": len(bucket) - len(ok),
            "mean_iterations": round(mean_it, 4),
            "ci95_iterations": round(ci_it, 4),
            "mean_gap_percent": round(mean_gap, 4) if gaps else "",
            "ci95_gap_percent": round(ci_gap, 4) if gaps else "",
            "mean_colors": round(mean_colors, 4),
            "optimal_rate": round(float(np.mean(optimal)), 4) if optimal else "",
        })
    return rows


def run_bench(manifest_path, methods, seed: int, out_prefix,
              shots: int = 1000, pulse_t: float = 4.0, noise: bool = False,
              workers: int | None = None) -> tuple[list[dict], list[dict]]:
    """Run every (instance, method) pair and write CSV + JSON aggregates."""
    in_dir = os.path.dirname(os.path.abspath(manifest_path))
    with open(manifest_path, encoding="utf-8") as f:
        manifest = json.load(f)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r} (choose from {METHODS})")
    jobs = [(entry, in_dir, method, seed, shots, pulse_t, noise)
            for entry in manifest["instances"] for method in methods]
    if workers is None:
        workers = min(os.cpu_count() or 1, 8)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_one, jobs, chunksize=1))
    else:
        results = [_bench_one(j) for j in jobs]
    results.sort(key=lambda r: (r["class"], r["n"], r["density"], r["method"],
                                r["file"]))
    rows = aggregate(results)
    _write_outputs(results, rows, out_prefix)
    return results, rows


def _write_outputs(results, rows, out_prefix) -> None:
    import csv as csv_mod

    with open(f"{out_prefix}.json", "w", encoding="utf-8") as f:
        json.dump({"results": results, "aggregate": rows}, f, indent=1,
                  sort_keys=True)
        f.write("\n")
    with open(f"{out_prefix}.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv_mod.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
