"""Iterated-independent-set greedy coloring baseline.

Each round extracts one (maximum or best-sampled) independent set from the
residual graph, assigns it the next color, and deletes it; the round count
equals the number of colors used.
"""

from __future__ import annotations

from .colgen import round_seed
from .embedding import Redesign
from .graphs import Graph, is_independent_set
from .pricing import PricerConfig, PricingContext, mwis_branch_and_bound, \
    quantum_sample_sets


def _residual_graph(g: Graph, alive: list[int]) -> tuple[Graph, dict[int, int]]:
    vmap = {u: i for i, u in enumerate(alive)}
    edges = [(vmap[u], vmap[v]) for u, v in g.edges if u in vmap and v in vmap]
    return Graph.from_edges(len(alive), edges), vmap


def _quantum_round(g: Graph, alive: list[int], cfg: PricerConfig,
                   context: PricingContext, seed: int) -> list[int]:
    """Largest valid sampled set on the residual register (AR reduction of
    the original embedding); falls back to a singleton so a round always
    makes progress."""
    sub, vmap = _residual_graph(g, alive)
    weights = [1.0] * sub.n
    ar_cfg = PricerConfig(backend="quantum", shots=cfg.shots,
                          pulse_duration_us=cfg.pulse_duration_us, dt=cfg.dt,
                          noise=cfg.noise, spam=cfg.spam, seed=cfg.seed,
                          redesign=Redesign.AR, device=cfg.device)
    counts, _ = quantum_sample_sets(sub, weights, vmap, ar_cfg, context, seed)
    best: tuple[int, ...] = ()
    best_count = 0
    for s, c in counts.items():
        if not s or not is_independent_set(g, s):
            continue
        key = (len(s), c, tuple(-u for u in s))
        if key > (len(best), best_count, tuple(-u for u in best)):
            best, best_count = s, c
    if not best:
        return [alive[0]]
    return sorted(best)


def greedy_color(g: Graph, backend: str = "exact",
                 cfg: PricerConfig | None = None) -> tuple[int, list[int], int]:
    """Color by repeatedly removing an independent set.

    Returns (colors used, per-vertex color array, iteration count); the two
    counts coincide by construction.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    if backend not in ("exact", "quantum"):
        raise ValueError(f"unknown greedy backend {backend!r}")
    if cfg is None:
        cfg = PricerConfig(backend="quantum" if backend == "quantum" else "exact")
    context = (PricingContext.build(g, cfg) if backend == "quantum" else None)

    coloring = [-1] * g.n
    alive = list(range(g.n))
    color = 0
    while alive:
        if backend == "exact":
            sub, vmap = _residual_graph(g, alive)
            inv = {i: u for u, i in vmap.items()}
            s, _ = mwis_branch_and_bound(sub, [1.0] * sub.n)
            chosen = sorted(inv[i] for i in s) if s else [alive[0]]
        else:
            chosen = _quantum_round(g, alive, cfg, context,
                                    round_seed(cfg.seed, color + 1))
        for u in chosen:
            coloring[u] = color
        alive = [u for u in alive if u not in set(chosen)]
        color += 1
    return color, coloring, color
