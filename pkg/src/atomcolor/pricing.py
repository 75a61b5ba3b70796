"""Pricing engine for the column-generation loop.

Given the master problem's dual values, builds the positive-dual weighted
subgraph and searches it for independent sets whose total weight beats the
unit column cost, via one of four interchangeable backends: an exact
branch-and-bound, a randomized greedy generator, simulated annealing on the
set's QUBO, or the emulated neutral-atom sampler.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qubo
from .embedding import (DEFAULT_DEVICE, DeviceSpec, Redesign, Register,
                        apply_redesign, build_base_register, omega_bounds)
from .emulator import adiabatic_schedule, apply_spam, evolve, sample
from .graphs import Graph, induced_positive_subgraph, is_independent_set

RC_TOL = 1e-9


@dataclass(frozen=True)
class Column:
    """An independent set packaged as a master-problem variable."""

    vertices: tuple[int, ...]
    weight_at_generation: float

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a column must cover at least one vertex")
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))

    def incidence(self, n: int) -> np.ndarray:
        v = np.zeros(n)
        for u in self.vertices:
            v[u] = 1.0
        return v


@dataclass
class PricerConfig:
    backend: str = "exact"             # exact | greedy | sa | quantum
    tries: int = 1000
    w_min: float = 1.0                 # strict weight threshold
    output_mode: int = 3               # sampler modes 1..4
    redesign: Redesign = Redesign.AR_HDR
    shots: int = 1000
    pulse_duration_us: float = 4.0
    dt: float | None = None
    noise: bool = False
    spam: tuple[float, float, float] = (0.005, 0.03, 0.08)
    seed: int = 0
    device: DeviceSpec = DEFAULT_DEVICE

    def __post_init__(self):
        if self.tries < 1:
            raise ValueError("tries must be >= 1")
        if self.backend not in ("exact", "greedy", "sa", "quantum"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.output_mode not in (1, 2, 3, 4):
            raise ValueError("output_mode must be 1..4")
        self.redesign = Redesign(self.redesign)


@dataclass
class PricingContext:
    """Per-graph state reused across pricing rounds: the full embedding and
    its drive cap (registers are expensive to re-create on hardware, so the
    base layout is built once and only reduced per round)."""

    base_register: Register
    base_omega_max: float

    @staticmethod
    def build(g: Graph, cfg: PricerConfig) -> "PricingContext":
        reg = build_base_register(g, seed=cfg.seed, device=cfg.device)
        _, _, omega_max = omega_bounds(g, reg, cfg.device)
        return PricingContext(reg, omega_max)


def reduced_cost(vertices, duals) -> float:
    """Net objective change per unit of a candidate column: 1 - sum duals."""
    duals = list(duals)
    return 1.0 - sum(duals[u] for u in vertices)


def mwis_branch_and_bound(g: Graph, weights) -> tuple[tuple[int, ...], float]:
    """Exact maximum-weight independent set by bitmask branch and bound.

    Ties between equal-weight optima resolve to the lexicographically
    smallest sorted vertex tuple.  The empty set is allowed, so the result
    weight is never negative.
    """
    weights = [float(w) for w in weights]
    masks = g.adjacency_masks()
    order = sorted(range(g.n), key=lambda u: (-weights[u], u))
    best_set: tuple[int, ...] = ()
    best_w = 0.0

    def dfs(pos: int, avail: int, cur_w: float, cur: list[int]):
        nonlocal best_set, best_w
        remaining = sum(weights[order[i]] for i in range(pos, g.n)
                        if weights[order[i]] > 0 and avail >> order[i] & 1)
        if cur_w + remaining < best_w - 1e-12:
            return
        u = -1
        for i in range(pos, g.n):
            if avail >> order[i] & 1:
                u, pos = order[i], i
                break
        if u < 0:
            cand = tuple(sorted(cur))
            if cur_w > best_w + 1e-12 or (abs(cur_w - best_w) <= 1e-12
                                          and best_set and cand < best_set):
                best_set, best_w = cand, cur_w
            return
        if weights[u] > 0:
            cur.append(u)
            dfs(pos + 1, avail & ~(1 << u) & ~masks[u], cur_w + weights[u], cur)
            cur.pop()
        dfs(pos + 1, avail & ~(1 << u), cur_w, cur)

    dfs(0, (1 << g.n) - 1, 0.0, [])
    return best_set, best_w


def random_greedy_is(g: Graph, weights, w_min: float, tries: int,
                     seed: int) -> list[tuple[int, ...]]:
    """Randomized maximal-set generator: repeatedly pick a surviving vertex
    uniformly, keep it, delete its neighbourhood; keep distinct outcomes
    whose weight exceeds the threshold."""
    if tries < 1:
        raise ValueError("tries must be >= 1")
    weights = [float(w) for w in weights]
    masks = g.adjacency_masks()
    rng = np.random.default_rng(seed)
    out: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for _ in range(tries):
        avail = (1 << g.n) - 1
        picked: list[int] = []
        while avail:
            alive = [u for u in range(g.n) if avail >> u & 1]
            u = alive[int(rng.integers(len(alive)))]
            picked.append(u)
            avail &= ~(1 << u) & ~masks[u]
        cand = tuple(sorted(picked))
        if cand not in seen and sum(weights[u] for u in cand) > w_min:
            seen.add(cand)
            out.append(cand)
    return out


def quantum_sample_sets(g_sub: Graph, weights, vertex_map: dict[int, int],
                        cfg: PricerConfig, context: PricingContext,
                        seed: int) -> tuple[dict[tuple[int, ...], int], dict]:
    """Run the emulated sampler for one pricing round.

    Returns counts per sampled vertex set (original vertex ids, empty set
    included) restricted to valid independent sets of the original graph is
    NOT applied here; callers filter.  Second element carries backend stats.
    """
    reg, omega_geom = apply_redesign(cfg.redesign, context.base_register,
                                     g_sub, weights, vertex_map,
                                     context.base_omega_max, cfg.device)
    stats = {"atoms": reg.size, "omega_max": omega_geom}
    if reg.size == 0:
        return {}, stats
    omega_peak = min(omega_geom, cfg.device.max_omega)
    if omega_peak <= 0:
        omega_peak = cfg.device.default_omega
    stats["omega_drive"] = omega_peak
    schedule = adiabatic_schedule(omega_peak, cfg.pulse_duration_us)
    state = evolve(reg, schedule, dt=cfg.dt)
    shots = sample(state, cfg.shots, seed=seed)
    if cfg.noise:
        eta, eps, eps_p = cfg.spam
        shots = apply_spam(shots, eta, eps, eps_p, seed=seed + 1)
    counts: dict[tuple[int, ...], int] = {}
    for bits, c in shots.counts.items():
        verts = tuple(sorted(reg.atom_to_vertex[a]
                             for a, b in enumerate(bits) if b == "1"))
        counts[verts] = counts.get(verts, 0) + c
    stats["distinct_outcomes"] = len(counts)
    return counts, stats


def _apply_output_mode(counts: dict[tuple[int, ...], int], duals,
                       mode: int, w_min: float) -> list[tuple[int, ...]]:
    """Select sampler outputs: 1 = largest set, 2 = every set, 3 = all sets
    over the weight threshold, 4 = the single most weighted set."""
    sets = [s for s in counts if s]
    if not sets:
        return []
    duals = list(duals)
    weight = lambda s: sum(duals[u] for u in s)
    if mode == 1:
        return [max(sets, key=lambda s: (len(s), counts[s],
                                         tuple(-u for u in s)))]
    if mode == 2:
        return sorted(sets)
    if mode == 3:
        return sorted(s for s in sets if weight(s) > w_min)
    return [max(sets, key=lambda s: (weight(s), counts[s],
                                     tuple(-u for u in s)))]


def price(g: Graph, duals, cfg: PricerConfig,
          context: PricingContext | None = None,
          known: set[tuple[int, ...]] | frozenset = frozenset(),
          round_seed: int | None = None) -> tuple[list[Column], dict]:
    """One pricing round: candidate sets from the configured backend,
    filtered to strictly negative reduced cost, deduplicated, and mapped
    back to original vertex ids.  An empty result signals termination."""
    duals = list(duals)
    if len(duals) != g.n:
        raise ValueError("dual vector length must equal n")
    seed = cfg.seed if round_seed is None else round_seed
    g_sub, vmap = induced_positive_subgraph(g, duals)
    stats: dict = {"backend": cfg.backend, "subgraph_order": g_sub.n}
    if g_sub.n == 0:
        return [], stats
    inverse = {new: old for old, new in vmap.items()}
    weights = list(g_sub.weights)

    candidates: list[tuple[int, ...]]
    if cfg.backend == "exact":
        s, _ = mwis_branch_and_bound(g_sub, weights)
        candidates = [s] if s else []
    elif cfg.backend == "greedy":
        candidates = random_greedy_is(g_sub, weights, cfg.w_min, cfg.tries, seed)
    elif cfg.backend == "sa":
        alpha = sum(abs(w) for w in duals)
        q = qubo.mwis_qubo(g_sub, weights, alpha)
        result = qubo.sa_sample(q, cfg.tries, seed)
        candidates = []
        for bits in result.samples:
            s = tuple(u for u in range(g_sub.n) if bits[u])
            if s and is_independent_set(g_sub, s):
                candidates.append(s)
    else:
        counts, qstats = quantum_sample_sets(g_sub, weights, vmap, cfg,
                                             context or PricingContext.build(g, cfg),
                                             seed)
        stats.update(qstats)
        original_counts: dict[tuple[int, ...], int] = {}
        for s_orig, c in counts.items():
            if s_orig and is_independent_set(g, s_orig):
                original_counts[s_orig] = original_counts.get(s_orig, 0) + c
        sub_counts = {tuple(sorted(vmap[u] for u in s)): c
                      for s, c in original_counts.items()}
        candidates = _apply_output_mode(sub_counts, weights, cfg.output_mode,
                                        cfg.w_min)

    out: list[Column] = []
    taken: set[tuple[int, ...]] = set()
    threshold = max(cfg.w_min, 1.0)
    for s in candidates:
        orig = tuple(sorted(inverse[u] for u in s))
        if orig in known or orig in taken:
            continue
        if not is_independent_set(g, orig):
            continue
        w = sum(duals[u] for u in orig)
        if w <= threshold + RC_TOL:
            continue
        taken.add(orig)
        out.append(Column(orig, w))
    out.sort(key=lambda c: (-c.weight_at_generation, c.vertices))
    stats["columns"] = len(out)
    return out, stats
