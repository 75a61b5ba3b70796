"""Brute-force ground truth for independent sets, chromatic numbers, and the
full (unrestricted) covering LP.  Test oracles only; every operation guards
its input size.
"""

from __future__ import annotations

from .graphs import Graph

MAX_ENUM_N = 20
MAX_CHROMATIC_N = 16
MAX_FULL_LP_N = 14


def enumerate_independent_sets(g: Graph) -> list[tuple[int, ...]]:
    """All nonempty independent sets, canonically sorted."""
    if g.n > MAX_ENUM_N:
        raise ValueError(f"n={g.n} exceeds enumeration guard {MAX_ENUM_N}")
    masks = g.adjacency_masks()
    out = []

    def grow(current: list[int], start: int, blocked: int):
        for u in range(start, g.n):
            if blocked & (1 << u):
                continue
            current.append(u)
            out.append(tuple(current))
            grow(current, u + 1, blocked | masks[u])
            current.pop()

    grow([], 0, 0)
    return sorted(out, key=lambda s: (len(s), s))


def brute_mwis(g: Graph, weights) -> tuple[tuple[int, ...], float]:
    """Maximum-weight independent set by exhaustive enumeration.

    Ties break toward the lexicographically smallest sorted vertex tuple;
    the empty set (weight 0) is a valid answer when all weights are negative.
    """
    if g.n > MAX_ENUM_N:
        raise ValueError(f"n={g.n} exceeds enumeration guard {MAX_ENUM_N}")
    weights = list(weights)
    best_set: tuple[int, ...] = ()
    best_w = 0.0
    for s in enumerate_independent_sets(g):
        w = sum(weights[u] for u in s)
        if w > best_w + 1e-12 or (abs(w - best_w) <= 1e-12 and s < best_set):
            best_set, best_w = s, w
    return best_set, best_w


def _greedy_clique(g: Graph) -> list[int]:
    # Any clique lower-bounds the chromatic number.
    order = sorted(range(g.n), key=lambda u: -len(g.neighbors(u)))
    clique: list[int] = []
    for u in order:
        if all(g.has_edge(u, v) for v in clique):
            clique.append(u)
    return clique


def brute_chromatic(g: Graph) -> tuple[int, list[int]]:
    """Exact chromatic number via iterative deepening over k-colorings."""
    if g.n > MAX_CHROMATIC_N:
        raise ValueError(f"n={g.n} exceeds chromatic guard {MAX_CHROMATIC_N}")
    if g.n == 0:
        return 0, []
    neigh = [sorted(g.neighbors(u)) for u in range(g.n)]
    lb = max(1, len(_greedy_clique(g)))

    def try_k(k: int) -> list[int] | None:
        colors = [-1] * g.n
        order = sorted(range(g.n), key=lambda u: -len(neigh[u]))

        def assign(i: int) -> bool:
            if i == g.n:
                return True
            u = order[i]
            used = {colors[v] for v in neigh[u] if colors[v] >= 0}
            # Symmetry break: allow at most one brand-new color.
            cap = min(k, max([colors[order[j]] for j in range(i)], default=-1) + 2)
            for c in range(cap):
                if c in used:
                    continue
                colors[u] = c
                if assign(i + 1):
                    return True
                colors[u] = -1
            return False

        return colors if assign(0) else None

    for k in range(lb, g.n + 1):
        coloring = try_k(k)
        if coloring is not None:
            return k, coloring
    raise AssertionError("unreachable: n colors always suffice")


def full_lp_value(g: Graph) -> float:
    """Optimum of the covering LP over ALL independent sets (fractional
    chromatic number)."""
    if g.n > MAX_FULL_LP_N:
        raise ValueError(f"n={g.n} exceeds full-LP guard {MAX_FULL_LP_N}")
    from .lp import LpProblem, solve

    cols = enumerate_independent_sets(g)
    problem = LpProblem.from_columns(g.n, cols)
    sol = solve(problem)
    if sol.status != "optimal":
        raise RuntimeError("full LP unexpectedly infeasible")
    return sol.objective


def mis_size(g: Graph) -> int:
    s, _ = brute_mwis(g, [1.0] * g.n)
    return len(s)


def brute_max_clique(g: Graph) -> tuple[int, ...]:
    """Largest clique, lexicographically smallest among maximums."""
    from .graphs import complement

    s, _ = brute_mwis(complement(g), [1.0] * g.n)
    return s


def brute_max_matching(g: Graph) -> int:
    """Maximum matching size by direct search over edge subsets."""
    edges = sorted(g.edges)

    def grow(i: int, used: set[int]) -> int:
        if i == len(edges):
            return 0
        best = grow(i + 1, used)
        u, v = edges[i]
        if u not in used and v not in used:
            best = max(best, 1 + grow(i + 1, used | {u, v}))
        return best

    return grow(0, set())


__all__ = [
    "enumerate_independent_sets",
    "brute_mwis",
    "brute_chromatic",
    "full_lp_value",
    "mis_size",
    "brute_max_clique",
    "brute_max_matching",
]
