"""Column-generation orchestration: warm start, RMP/pricing loop with
stagnation control, and the final integer solve that yields the coloring.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .graphs import Graph, is_independent_set
from .pricing import (Column, PricerConfig, PricingContext, price,
                      quantum_sample_sets)

IMPROVE_TOL = 1e-9
DEFAULT_STAGNATION_LIMIT = 3


@dataclass
class IterationRecord:
    index: int
    rmp_objective: float
    duals: list[float]
    columns_added: list[tuple[int, ...]]
    backend_stats: dict = field(default_factory=dict)


@dataclass
class RunTrace:
    """Full account of one column-generation run."""

    iterations: list[IterationRecord] = field(default_factory=list)
    lp_value: float = float("nan")
    ilp_value: float = float("nan")
    coloring: list[list[int]] = field(default_factory=list)
    pricing_iterations: int = 0
    termination: str = ""
    columns_total: int = 0
    wall_ms: float | None = None
    gap_vs_known: float | None = None

    @property
    def colors_used(self) -> int:
        return len(self.coloring)

    def objective_sequence(self) -> list[float]:
        return [rec.rmp_objective for rec in self.iterations]

    def to_json_dict(self, one_based: bool = True) -> dict:
        shift = 1 if one_based else 0
        out = {
            "lp_value": self.lp_value,
            "ilp_value": self.ilp_value,
            "colors": self.colors_used,
            "coloring": [[u + shift for u in cls] for cls in self.coloring],
            "pricing_iterations": self.pricing_iterations,
            "termination": self.termination,
            "columns_total": self.columns_total,
            "rmp_objectives": self.objective_sequence(),
        }
        if self.gap_vs_known is not None:
            out["gap_percent"] = self.gap_vs_known
        if self.wall_ms is not None:
            out["wall_ms"] = self.wall_ms
        return out


def warm_start_singletons(g: Graph) -> list[Column]:
    """One column per vertex; always a feasible partition."""
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    return [Column((u,), 1.0) for u in range(g.n)]


def warm_start_quantum(g: Graph, cfg: PricerConfig,
                       context: PricingContext | None = None) -> list[Column]:
    """Sampler-seeded start: every independent set sampled under unit
    weights, plus the singletons that guarantee feasibility."""
    if context is None:
        context = PricingContext.build(g, cfg)
    vmap = {u: u for u in range(g.n)}
    counts, _ = quantum_sample_sets(g, [1.0] * g.n, vmap, cfg, context,
                                    seed=cfg.seed)
    columns = {(u,): 1.0 for u in range(g.n)}
    for s in counts:
        if s and is_independent_set(g, s):
            columns.setdefault(tuple(sorted(s)), float(len(s)))
    return [Column(v, w) for v, w in sorted(columns.items())]


def round_seed(seed: int, iteration: int) -> int:
    """Fresh, reproducible RNG stream per pricing round."""
    return int(np.random.SeedSequence([seed, iteration]).generate_state(1)[0])


def gap_percent(found: int, optimal: int) -> float:
    """Percentage excess of colors used over the optimum."""
    if optimal < 1:
        raise ValueError("optimal must be >= 1")
    return 100.0 * (found - optimal) / optimal


def run(g: Graph, pricer: PricerConfig,
        stagnation_limit: int = DEFAULT_STAGNATION_LIMIT,
        warm_start: str = "classical",
        known_chromatic: int | None = None,
        keep_duals: bool = True,
        measure_time: bool = False) -> RunTrace:
    """Solve the coloring instance by column generation.

    Loop: relax, solve, extract duals, price, add columns.  Stops when a
    pricing round yields nothing, or after ``stagnation_limit`` consecutive
    rounds without objective improvement; then solves the integer program
    over every accumulated column.
    """
    t_start = time.perf_counter()
    context = (PricingContext.build(g, pricer)
               if pricer.backend == "quantum" else None)
    if warm_start == "quantum":
        columns = warm_start_quantum(g, pricer, context)
    else:
        columns = warm_start_singletons(g)

    trace = RunTrace()
    seen = {c.vertices for c in columns}
    prev_obj: float | None = None
    stall = 0
    iteration = 0

    while True:
        iteration += 1
        problem = lp.LpProblem.from_columns(g.n, [c.vertices for c in columns])
        sol = lp.solve(problem)
        if sol.status != "optimal":
            raise RuntimeError("RMP infeasible despite singleton warm start")
        record = IterationRecord(iteration, sol.objective,
                                 list(sol.duals) if keep_duals else [], [])
        trace.iterations.append(record)

        if prev_obj is not None:
            if prev_obj - sol.objective > IMPROVE_TOL:
                stall = 0
            else:
                stall += 1
        prev_obj = sol.objective
        if stall >= stagnation_limit:
            trace.termination = "stagnation"
            trace.pricing_iterations = iteration - 1
            break

        new_cols, stats = price(g, sol.duals, pricer, context=context,
                                known=seen,
                                round_seed=round_seed(pricer.seed, iteration))
        record.backend_stats = stats
        record.columns_added = [c.vertices for c in new_cols]
        if not new_cols:
            trace.termination = "no_columns"
            trace.pricing_iterations = iteration
            break
        columns.extend(new_cols)
        seen.update(c.vertices for c in new_cols)

    trace.lp_value = prev_obj if prev_obj is not None else float("nan")
    trace.columns_total = len(columns)

    ilp_problem = lp.LpProblem.from_columns(g.n, [c.vertices for c in columns])
    selected, ilp_obj = lp.solve_ilp(ilp_problem)
    trace.ilp_value = ilp_obj
    trace.coloring = [sorted(columns[j].vertices) for j in selected]
    if known_chromatic is not None:
        trace.gap_vs_known = gap_percent(trace.colors_used, known_chromatic)
    if measure_time:
        trace.wall_ms = (time.perf_counter() - t_start) * 1e3
    return trace
