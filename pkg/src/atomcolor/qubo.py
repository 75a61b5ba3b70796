"""QUBO builders for the weighted-independent-set and coloring objectives,
Ising conversion, and a Metropolis simulated-annealing sampler.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph


@dataclass
class QuboMatrix:
    """Symmetric QUBO with linear terms on the diagonal.

    A constant offset is carried alongside the matrix so that penalty
    expansions with constant terms (e.g. (1 - sum x)^2) evaluate exactly.
    """

    q: np.ndarray
    offset: float = 0.0

    @property
    def size(self) -> int:
        return self.q.shape[0]

    def energy(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.q @ x) + self.offset

    def brute_minimum(self) -> tuple[np.ndarray, float]:
        """Exhaustive minimizer; guard rails for test-sized instances only."""
        if self.size > 22:
            raise ValueError("brute_minimum limited to 22 variables")
        best_x, best_e = None, np.inf
        for bits in range(1 << self.size):
            x = np.array([(bits >> i) & 1 for i in range(self.size)], dtype=float)
            e = self.energy(x)
            if e < best_e - 1e-12:
                best_x, best_e = x, e
        return best_x, best_e


def mwis_qubo(g: Graph, weights, alpha: float) -> QuboMatrix:
    """-sum(w_u x_u) plus an alpha penalty per violated edge."""
    if alpha <= 0:
        raise ValueError("penalty alpha must be positive")
    weights = np.asarray(list(weights), dtype=float)
    q = np.zeros((g.n, g.n))
    np.fill_diagonal(q, -weights)
    for u, v in g.edges:
        q[u, v] += alpha / 2.0
        q[v, u] += alpha / 2.0
    return QuboMatrix(q)


def mvcp_qubo(g: Graph, colors: int, alpha_c: float, alpha_a: float,
              alpha_p: float, alpha_o: float) -> QuboMatrix:
    """Coloring QUBO over variables x_uc (vertex u gets color c) then y_c
    (color c in use); n*|C| + |C| variables in total.

    Encodes four penalty blocks: exactly-one color per vertex, no equal
    colors across an edge, coupling x_uc -> y_c, and the color-count
    objective.
    """
    if colors < 1:
        raise ValueError("need at least one color")
    n, C = g.n, colors
    size = n * C + C
    q = np.zeros((size, size))
    xv = lambda u, c: u * C + c
    yv = lambda c: n * C + c
    offset = 0.0

    # (1 - sum_c x_uc)^2 = 1 - sum_c x_uc + 2 sum_{c<c'} x_uc x_uc'
    offset += alpha_c * n
    for u in range(n):
        for c in range(C):
            q[xv(u, c), xv(u, c)] += -alpha_c
            for c2 in range(c + 1, C):
                q[xv(u, c), xv(u, c2)] += alpha_c
                q[xv(u, c2), xv(u, c)] += alpha_c

    for u, v in g.edges:
        for c in range(C):
            q[xv(u, c), xv(v, c)] += alpha_a / 2.0
            q[xv(v, c), xv(u, c)] += alpha_a / 2.0

    # x_uc^2 - x_uc y_c
    for u in range(n):
        for c in range(C):
            q[xv(u, c), xv(u, c)] += alpha_p
            q[xv(u, c), yv(c)] += -alpha_p / 2.0
            q[yv(c), xv(u, c)] += -alpha_p / 2.0

    for c in range(C):
        q[yv(c), yv(c)] += alpha_o

    return QuboMatrix(q, offset)


def qubo_to_ising(qubo: QuboMatrix) -> tuple[np.ndarray, np.ndarray, float]:
    """Energy-preserving change of variables x = (s + 1) / 2.

    Returns couplings J (upper triangle populated), fields h, and the
    constant offset, under E(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i
    + offset.
    """
    q = qubo.q
    size = qubo.size
    diag = np.diag(q)
    off = q - np.diag(diag)
    J = np.triu(off + off.T, k=1) / 4.0
    h = diag / 2.0 + off.sum(axis=1) / 2.0
    const = qubo.offset + diag.sum() / 2.0 + np.triu(off + off.T, k=1).sum() / 4.0
    return J, h, float(const)


def ising_energy(J: np.ndarray, h: np.ndarray, offset: float, s) -> float:
    s = np.asarray(s, dtype=float)
    return float(s @ J @ s + h @ s + offset)


@dataclass
class SaResult:
    samples: list[tuple[int, ...]]   # bit tuples, best energy first
    energies: list[float]

    def best(self) -> tuple[tuple[int, ...], float]:
        return self.samples[0], self.energies[0]


def sa_sample(qubo: QuboMatrix, tries: int, seed: int,
              sweeps_per_var: int = 100) -> SaResult:
    """Independent single-spin-flip Metropolis anneals, vectorized across
    tries.

    Geometric temperature ladder from T0 = max |Q entry| down to 1e-3 * T0
    over ``sweeps_per_var * size`` sweeps; one sweep visits every variable
    once (the visit order is shared across tries, the accept draws are not).
    Outputs are deduplicated and sorted by energy.
    """
    if tries < 1:
        raise ValueError("tries must be >= 1")
    q = qubo.q
    size = qubo.size
    if size == 0:
        return SaResult([()], [qubo.offset])
    rng = np.random.default_rng(seed)
    t0 = float(np.abs(q).max())
    if t0 == 0.0:
        t0 = 1.0
    n_sweeps = sweeps_per_var * size
    temps = t0 * (1e-3) ** (np.arange(n_sweeps) / max(1, n_sweeps - 1))

    qz = q.copy()
    np.fill_diagonal(qz, 0.0)
    diag = np.diag(q).copy()

    x = rng.integers(0, 2, size=(tries, size)).astype(np.float64)
    # Local field f_i = Q_ii + 2 sum_{j != i} Q_ij x_j; flipping i changes the
    # energy by (1 - 2 x_i) f_i.
    f = diag[None, :] + 2.0 * x @ qz

    for sweep in range(n_sweeps):
        beta = 1.0 / temps[sweep]
        for k in rng.permutation(size):
            de = (1.0 - 2.0 * x[:, k]) * f[:, k]
            accept = (de <= 0.0) | (rng.random(tries) < np.exp(
                -beta * np.clip(de, 0.0, 700.0 / beta)))
            delta = np.where(accept, 1.0 - 2.0 * x[:, k], 0.0)
            x[:, k] += delta
            f += 2.0 * delta[:, None] * qz[k][None, :]

    energies = np.einsum("ti,ij,tj->t", x, q, x) + qubo.offset
    seen: dict[tuple[int, ...], float] = {}
    for t in range(tries):
        bits = tuple(int(b) for b in x[t])
        if bits not in seen:
            seen[bits] = float(energies[t])
    ordered = sorted(seen.items(), key=lambda kv: (kv[1], kv[0]))
    return SaResult([b for b, _ in ordered], [e for _, e in ordered])
