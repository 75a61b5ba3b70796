"""Dense two-phase primal simplex for the set-partitioning master problem,
with dual extraction from the optimal basis, plus a depth-first
branch-and-bound solver for the final integer program.

Scope is deliberately narrow: minimize c'y subject to By = 1, y >= 0, with
B a 0/1 incidence matrix.  Instances here have at most ~16 rows and a few
hundred columns, so a dense tableau wins on simplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-10


@dataclass
class LpProblem:
    costs: np.ndarray       # (k,) per-column costs
    incidence: np.ndarray   # (n, k) 0/1, rows = vertices, columns = sets

    @staticmethod
    def from_columns(n: int, columns, costs=None) -> "LpProblem":
        """Build a partitioning problem from vertex-set columns (unit costs)."""
        k = len(columns)
        B = np.zeros((n, k))
        for j, col in enumerate(columns):
            for u in col:
                B[u, j] = 1.0
        c = np.ones(k) if costs is None else np.asarray(costs, dtype=float)
        return LpProblem(c, B)

    @property
    def n_rows(self) -> int:
        return self.incidence.shape[0]

    @property
    def n_cols(self) -> int:
        return self.incidence.shape[1]


@dataclass
class LpSolution:
    primal: np.ndarray
    duals: np.ndarray
    objective: float
    status: str  # "optimal" | "infeasible"


def _pivot(T: np.ndarray, cost: np.ndarray, basis: list[int], row: int, col: int):
    piv = T[row, col]
    T[row] /= piv
    for i in range(T.shape[0]):
        if i != row and abs(T[i, col]) > PIVOT_TOL:
            T[i] -= T[i, col] * T[row]
    if abs(cost[col]) > PIVOT_TOL:
        cost -= cost[col] * T[row]
    basis[row] = col


def _choose_entering(cost, allowed, bland: bool) -> int | None:
    neg = [j for j in allowed if cost[j] < -FEAS_TOL]
    if not neg:
        return None
    if bland:
        return min(neg)
    return min(neg, key=lambda j: (cost[j], j))


def _choose_leaving(T, col, basis, bland: bool) -> int | None:
    rows = []
    for i in range(T.shape[0]):
        if T[i, col] > PIVOT_TOL:
            rows.append((T[i, -1] / T[i, col], i))
    if not rows:
        return None
    best = min(r for r, _ in rows)
    cand = [i for r, i in rows if r <= best + FEAS_TOL]
    if bland:
        return min(cand, key=lambda i: basis[i])
    return cand[0]


def _run_simplex(T, cost, basis, allowed):
    """Iterate to optimality.  Dantzig rule normally; Bland's rule while the
    objective is stalled, which guarantees termination on degenerate
    partitioning instances."""
    stalled = 0
    while True:
        bland = stalled > 0
        col = _choose_entering(cost, allowed, bland)
        if col is None:
            return
        row = _choose_leaving(T, col, basis, bland)
        if row is None:
            raise RuntimeError("unbounded LP; malformed partitioning instance")
        before = cost[-1]
        _pivot(T, cost, basis, row, col)
        stalled = stalled + 1 if abs(cost[-1] - before) <= FEAS_TOL else 0


def solve(problem: LpProblem) -> LpSolution:
    """Two-phase primal simplex; duals are the multipliers of the final basis."""
    B = problem.incidence
    c = np.asarray(problem.costs, dtype=float)
    n, k = B.shape
    if n == 0:
        return LpSolution(np.zeros(k), np.zeros(0), 0.0, "optimal")

    # Tableau columns: k structural, n artificial, 1 rhs.
    T = np.zeros((n, k + n + 1))
    T[:, :k] = B
    T[:, k:k + n] = np.eye(n)
    T[:, -1] = 1.0
    basis = list(range(k, k + n))

    # Phase 1: minimize the artificials' sum.
    cost1 = np.zeros(k + n + 1)
    cost1[:k] = -T[:, :k].sum(axis=0)
    cost1[-1] = -T[:, -1].sum()
    allowed = range(k + n)
    _run_simplex(T, cost1, basis, allowed)
    if -cost1[-1] > 1e-7:
        return LpSolution(np.zeros(k), np.zeros(n), math.inf, "infeasible")

    # Drive any leftover zero-level artificials out of the basis.
    for i in range(n):
        if basis[i] >= k:
            for j in range(k):
                if abs(T[i, j]) > 1e-7:
                    _pivot(T, cost1, basis, i, j)
                    break

    # Phase 2 with the true costs; artificial columns are frozen out.
    cost2 = np.zeros(k + n + 1)
    cost2[:k] = c
    for i, b in enumerate(basis):
        if b < k and abs(cost2[b]) > PIVOT_TOL:
            cost2 -= cost2[b] * T[i]
    _run_simplex(T, cost2, basis, range(k))

    primal = np.zeros(k)
    for i, b in enumerate(basis):
        if b < k:
            primal[b] = T[i, -1]
    objective = float(c @ primal)
    # The artificial block of the tableau is the basis inverse, so the duals
    # are c_B' B^{-1} read straight out of it.
    c_basis = np.array([c[b] if b < k else 0.0 for b in basis])
    duals = c_basis @ T[:, k:k + n]
    return LpSolution(primal, duals, objective, "optimal")


def _greedy_incumbent(problem: LpProblem, lp_primal) -> tuple[list[int], float]:
    """Round an LP solution to a feasible partition, largest y first."""
    B = problem.incidence
    n, k = B.shape
    order = sorted(range(k), key=lambda j: (-lp_primal[j], j))
    covered = np.zeros(n, dtype=bool)
    chosen: list[int] = []
    for j in order:
        col = B[:, j] > 0.5
        if not col.any() or (covered & col).any():
            continue
        chosen.append(j)
        covered |= col
        if covered.all():
            return chosen, float(problem.costs[chosen].sum())
    return [], math.inf


def solve_ilp(problem: LpProblem) -> tuple[list[int], float]:
    """Optimal 0/1 partition over the given columns.

    Depth-first branch and bound: branch on the most fractional variable
    (ties toward the lowest index), y=1 child first, pruning with the LP
    bound.  Costs are integral here, so bounds round up.
    """
    root = solve(problem)
    if root.status != "optimal":
        return [], math.inf

    incumbent, incumbent_obj = _greedy_incumbent(problem, root.primal)
    B = problem.incidence
    n, k = B.shape
    col_masks = []
    for j in range(k):
        mask = 0
        for u in range(n):
            if B[u, j] > 0.5:
                mask |= 1 << u
        col_masks.append(mask)

    def node(fixed_one: list[int], banned: set[int], covered_mask: int,
             offset: float):
        nonlocal incumbent, incumbent_obj
        rows = [u for u in range(n) if not covered_mask & (1 << u)]
        cols = [j for j in range(k)
                if j not in banned and not (col_masks[j] & covered_mask)]
        if not rows:
            if offset < incumbent_obj - FEAS_TOL:
                incumbent, incumbent_obj = list(fixed_one), offset
            return
        if not cols:
            return
        sub = LpProblem(problem.costs[cols], B[np.ix_(rows, cols)])
        sol = solve(sub)
        if sol.status != "optimal":
            return
        bound = offset + sol.objective
        if math.ceil(bound - 1e-6) >= incumbent_obj - FEAS_TOL:
            return
        frac = [(abs(sol.primal[i] - round(sol.primal[i])), i)
                for i in range(len(cols))]
        gap, idx = max(frac, key=lambda t: (t[0], -t[1]))
        if gap <= 1e-6:
            chosen = fixed_one + [cols[i] for i in range(len(cols))
                                  if sol.primal[i] > 0.5]
            obj = offset + sol.objective
            if obj < incumbent_obj - FEAS_TOL:
                incumbent, incumbent_obj = chosen, obj
            return
        j = cols[idx]
        node(fixed_one + [j], banned, covered_mask | col_masks[j],
             offset + float(problem.costs[j]))
        node(fixed_one, banned | {j}, covered_mask, offset)

    node([], set(), 0, 0.0)
    return sorted(incumbent), incumbent_obj
