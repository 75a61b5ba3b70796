"""Register geometry: force-directed layout, device-constraint scaling,
weight-driven vertex-atom remapping, drive-amplitude bounds, and the four
register/pulse redesign strategies used by the quantum pricing backend.

Positions are in micrometres; interaction strengths in rad/us.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graphs import Graph


@dataclass(frozen=True)
class DeviceSpec:
    """Hardware envelope for register validation.

    The interaction coefficient corresponds to a high-lying Rydberg level of
    a neutral-atom machine; spacing and extent limits follow public device
    specifications.
    """

    min_distance_um: float = 4.0
    max_radius_um: float = 50.0
    c6: float = 5.42e6           # rad * us^-1 * um^6
    default_omega: float = 10.0  # rad/us, used for single-atom registers
    max_omega: float = 12.57     # rad/us drive ceiling (~2pi x 2 MHz)


DEFAULT_DEVICE = DeviceSpec()

LAYOUT_SCALE_UM = 40.0  # unit-layout coordinates to micrometres


def pipeline_area(n: int) -> float:
    """Layout area used when embedding pricing registers.

    Chosen so that typical edge lengths land a little above the device's
    minimum spacing after the 40 um scale-up: deep enough in the blockade
    regime for a 4 us sweep to be adiabatic, far enough apart to keep the
    interaction spread (and hence the integrator step count) manageable as
    the register grows.
    """
    spacing_um = 6.5 + 0.35 * max(0, n - 4)
    k = spacing_um / LAYOUT_SCALE_UM
    return n * k * k


@dataclass(frozen=True)
class Register:
    """Atom positions plus the atom -> original-vertex mapping.

    Entries of ``atom_to_vertex`` may be None for trap sites that carry no
    vertex (only synthetic registers have those).
    """

    positions: np.ndarray                 # (m, 2) um
    atom_to_vertex: tuple[int | None, ...]
    c6: float = DEFAULT_DEVICE.c6

    def __post_init__(self):
        object.__setattr__(self, "positions",
                           np.asarray(self.positions, dtype=float))
        if self.positions.ndim != 2 or self.positions.shape[1] != 2:
            raise ValueError("positions must be (m, 2)")
        if len(self.atom_to_vertex) != len(self.positions):
            raise ValueError("atom_to_vertex length mismatch")
        mapped = [v for v in self.atom_to_vertex if v is not None]
        if len(mapped) != len(set(mapped)):
            raise ValueError("atom_to_vertex must be injective")

    @property
    def size(self) -> int:
        return len(self.positions)

    def centroid(self) -> np.ndarray:
        return self.positions.mean(axis=0)

    def distance(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.positions[i] - self.positions[j]))

    def interaction(self, i: int, j: int) -> float:
        return self.c6 * self.distance(i, j) ** -6

    def blockade_radius(self, omega: float) -> float:
        return (self.c6 / omega) ** (1.0 / 6.0)

    def vertex_atom(self, vertex: int) -> int:
        for a, v in enumerate(self.atom_to_vertex):
            if v == vertex:
                return a
        raise KeyError(f"vertex {vertex} not on register")

    def validate(self, device: DeviceSpec = DEFAULT_DEVICE) -> None:
        m = self.size
        for i in range(m):
            for j in range(i + 1, m):
                if self.distance(i, j) < device.min_distance_um - 1e-9:
                    raise ValueError(
                        f"atoms {i},{j} closer than {device.min_distance_um} um")
        radii = np.linalg.norm(self.positions - self.centroid(), axis=1)
        if m and radii.max() > device.max_radius_um + 1e-9:
            raise ValueError("register exceeds maximum radius")

    def to_json_dict(self) -> dict:
        return {
            "positions_um": [[float(x), float(y)] for x, y in self.positions],
            "atom_to_vertex": list(self.atom_to_vertex),
        }

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_json_dict(), f, indent=1)
            f.write("\n")


def fr_layout(g: Graph, iterations: int = 50, area: float = 1.0,
              seed: int = 0) -> np.ndarray:
    """Fruchterman-Reingold layout in the plane.

    Repulsion k^2/d acts between all pairs, attraction d^2/k along edges,
    with k = sqrt(area / n); per-step displacement is capped by a linearly
    cooling temperature.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    if g.n == 1:
        return np.zeros((1, 2))
    rng = np.random.default_rng(seed)
    side = float(np.sqrt(area))
    pos = rng.random((g.n, 2)) * side
    k = np.sqrt(area / g.n)
    t0 = 0.1 * side
    edge_idx = np.array(sorted(g.edges)) if g.edges else np.zeros((0, 2), int)
    # frame with slack around the seeded square: tight clipping piles
    # mutually repelling vertices into the corners
    lo, hi = -side / 2.0, 1.5 * side

    for it in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        # repulsive: k^2 / d away from every other vertex
        disp = (delta / dist[..., None] * (k * k / dist)[..., None]).sum(axis=1)
        # attractive: d^2 / k along each edge
        for u, v in edge_idx:
            d = pos[u] - pos[v]
            norm = max(float(np.linalg.norm(d)), 1e-9)
            pull = d / norm * (norm * norm / k)
            disp[u] -= pull
            disp[v] += pull
        temp = t0 * (1.0 - it / iterations)
        lengths = np.maximum(np.linalg.norm(disp, axis=1), 1e-12)
        caps = np.minimum(lengths, temp)
        pos = pos + disp / lengths[:, None] * caps[:, None]
        pos = np.clip(pos, lo, hi)
    return pos


def layout_residual(g: Graph, pos: np.ndarray, area: float = 1.0) -> float:
    """Summed magnitude of the net force on each vertex; zero at equilibrium."""
    n = len(pos)
    k = np.sqrt(area / max(n, 1))
    net = np.zeros((n, 2))
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            d = pos[u] - pos[v]
            norm = max(float(np.linalg.norm(d)), 1e-9)
            net[u] += d / norm * (k * k / norm)
    for u, v in g.edges:
        d = pos[u] - pos[v]
        norm = max(float(np.linalg.norm(d)), 1e-9)
        pull = d / norm * (norm * norm / k)
        net[u] -= pull
        net[v] += pull
    return float(np.linalg.norm(net, axis=1).sum())


def scale_to_device(positions, device: DeviceSpec = DEFAULT_DEVICE,
                    atom_to_vertex=None) -> Register:
    """Scale unit-layout positions by 40 um, then rescale globally once if
    the minimum-spacing constraint is violated."""
    pos = np.asarray(positions, dtype=float) * LAYOUT_SCALE_UM
    m = len(pos)
    if atom_to_vertex is None:
        atom_to_vertex = tuple(range(m))
    if m >= 2:
        dmin = min(float(np.linalg.norm(pos[i] - pos[j]))
                   for i in range(m) for j in range(i + 1, m))
        if dmin < 1e-9:
            raise ValueError("degenerate layout: coincident atom positions")
        if dmin < device.min_distance_um:
            pos = pos * (device.min_distance_um / dmin)
    reg = Register(pos, tuple(atom_to_vertex), device.c6)
    radii = np.linalg.norm(reg.positions - reg.centroid(), axis=1)
    if m and radii.max() > device.max_radius_um + 1e-9:
        raise ValueError("layout cannot satisfy spacing and radius together")
    return reg


PIPELINE_FR_ITERATIONS = 150
PIPELINE_LAYOUT_RESTARTS = 12
LAYOUT_WINDOW_GOAL = 1.3  # non-edge/edge distance ratio that ends the search


def interaction_budget(n: int) -> float:
    """Cap on the summed pair interaction of a pricing register, in rad/us.

    The integrator's step count scales with this total, its per-step cost
    with 2^n, so the allowance shrinks as registers grow.  Within the cap a
    register is made as tight (strongly blockaded) as possible.
    """
    if n <= 8:
        return 1200.0
    if n == 9:
        return 900.0
    return 700.0


def _layout_window(g: Graph, pos: np.ndarray) -> float:
    """Unit-disk fidelity of a layout: closest non-edge over longest edge.

    Above 1 the graph has a disk realization at this layout; the larger the
    ratio, the wider the usable drive window."""
    edge_d, nonedge_d = [], []
    for v in range(g.n):
        for u in range(v):
            d = float(np.linalg.norm(pos[u] - pos[v]))
            (edge_d if (u, v) in g.edges else nonedge_d).append(d)
    if not edge_d or not nonedge_d:
        return float("inf")
    return min(nonedge_d) / max(edge_d)


def build_base_register(g: Graph, seed: int,
                        device: DeviceSpec = DEFAULT_DEVICE) -> Register:
    """Embed a whole graph for pricing.

    Takes the best of several force-layout restarts (widest edge/non-edge
    distance window), then chooses the physical scale: tight enough that the
    drive ceiling blockades every edge, loose enough that non-edges stay
    free, subject to the device spacing floor and the per-order interaction
    budget that bounds integration cost.
    """
    best_pos, best_q = None, -1.0
    for trial in range(PIPELINE_LAYOUT_RESTARTS):
        trial_seed = int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])
        pos = fr_layout(g, PIPELINE_FR_ITERATIONS, pipeline_area(g.n),
                        seed=trial_seed)
        q = _layout_window(g, pos)
        if q > best_q:
            best_pos, best_q = pos, q
        if q >= LAYOUT_WINDOW_GOAL:
            break
    pos = best_pos
    if g.n >= 2:
        d2 = np.array([np.linalg.norm(pos[i] - pos[j])
                       for i in range(g.n) for j in range(i + 1, g.n)])
        if d2.min() < 1e-9:
            raise ValueError("degenerate layout: coincident vertices")
        s_dev = device.min_distance_um / float(d2.min())
        total_u = float((device.c6 * d2 ** -6).sum())
        s_cost = (total_u / interaction_budget(g.n)) ** (1.0 / 6.0)
        s = max(s_dev, s_cost)
        oc_u, od_u, _ = omega_bounds(g, Register(pos, tuple(range(g.n)),
                                                 device.c6), device)
        if oc_u > 0 and od_u > 0:
            # centre the drive ceiling in the geometric window so edges sit
            # inside the blockade radius and non-edges outside it
            s_mid = (np.sqrt(oc_u * od_u) / device.max_omega) ** (1.0 / 6.0)
            s = max(s, s_mid)
        # the register extent is a hard device limit; give up window margin
        # (and accept extra integration cost) rather than overflow it
        spread = float(np.linalg.norm(pos - pos.mean(axis=0), axis=1).max())
        if spread > 0:
            s_rad = 0.98 * device.max_radius_um / spread
            if s_rad < s_dev - 1e-12:
                raise ValueError("layout cannot fit the device envelope")
            s = min(s, s_rad)
        pos = pos * (s / LAYOUT_SCALE_UM)
    return scale_to_device(pos, device)


def remap_vertices(g_prime: Graph, reg: Register, weights) -> Register:
    """Reassign vertices to trap positions, heavy vertices spread apart.

    Vertices sorted by descending weight (ties toward the lower id);
    non-positive weights are dropped.  The heaviest vertex takes the
    position farthest from the register centroid, each following vertex the
    free position maximizing the minimum distance to those already placed.
    Unused trap sites are removed.
    """
    weights = list(weights)
    if len(weights) != g_prime.n:
        raise ValueError("weights length must match subgraph order")
    order = sorted((u for u in range(g_prime.n) if weights[u] > 0),
                   key=lambda u: (-weights[u], u))
    if len(order) > reg.size:
        raise ValueError("register has fewer atoms than positive-weight vertices")
    if not order:
        return Register(np.zeros((0, 2)), (), reg.c6)

    center = reg.centroid()
    free = list(range(reg.size))
    assignment: dict[int, int] = {}

    first = max(free, key=lambda a: (float(np.linalg.norm(reg.positions[a] - center)), -a))
    assignment[order[0]] = first
    free.remove(first)
    for u in order[1:]:
        taken = list(assignment.values())
        best = max(free, key=lambda a: (min(
            float(np.linalg.norm(reg.positions[a] - reg.positions[b]))
            for b in taken), -a))
        assignment[u] = best
        free.remove(best)

    kept = sorted(assignment)  # output atoms ordered by vertex id
    pos = np.array([reg.positions[assignment[u]] for u in kept])
    return Register(pos, tuple(kept), reg.c6)


def omega_bounds(g: Graph, reg: Register,
                 device: DeviceSpec = DEFAULT_DEVICE) -> tuple[float, float, float]:
    """(omega_c, omega_d, omega_max) from the register geometry.

    omega_c is the weakest interaction across an edge, omega_d the strongest
    across a non-edge; the drive cap is their maximum.  Degenerate cases:
    a complete graph has no non-edges (omega_d = 0), an edgeless graph no
    edges (omega_c = 0); a single atom falls back to the device default.
    """
    verts = [v for v in reg.atom_to_vertex if v is not None]
    if g.n > len(verts) or any(u not in verts for u in range(g.n)):
        raise ValueError("register must cover every graph vertex")
    if g.n <= 1:
        return device.default_omega, device.default_omega, device.default_omega
    atom_of = {v: a for a, v in enumerate(reg.atom_to_vertex) if v is not None}
    edge_u, nonedge_u = [], []
    for v in range(g.n):
        for u in range(v):
            val = reg.c6 * reg.distance(atom_of[u], atom_of[v]) ** -6
            (edge_u if (u, v) in g.edges else nonedge_u).append(val)
    omega_c = min(edge_u) if edge_u else 0.0
    omega_d = max(nonedge_u) if nonedge_u else 0.0
    omega_max = max(omega_c, omega_d)
    return omega_c, omega_d, omega_max


class Redesign(str, Enum):
    AR = "ar"
    AIPR = "aipr"
    AR_HDR = "ar-hdr"
    AIPR_HDR = "aipr-hdr"

    @property
    def permutes(self) -> bool:
        return self in (Redesign.AIPR, Redesign.AIPR_HDR)

    @property
    def redesigns_drive(self) -> bool:
        return self in (Redesign.AR_HDR, Redesign.AIPR_HDR)


def apply_redesign(strategy: Redesign, base: Register, g_prime: Graph,
                   weights, vertex_map: dict[int, int], base_omega_max: float,
                   device: DeviceSpec = DEFAULT_DEVICE) -> tuple[Register, float]:
    """Reduce the base register for a pricing call and choose its drive cap.

    ``g_prime``/``weights`` describe the positive-dual subgraph, and
    ``vertex_map`` sends original vertex ids to subgraph ids.  AR keeps the
    surviving atoms in place; AIPR additionally reassigns vertices to trap
    positions (over all base positions, per the remapping rule).  The -HDR
    variants recompute the drive cap on the reduced register, the others
    keep the base value.
    """
    strategy = Redesign(strategy)
    weights = list(weights)
    inverse = {new: old for old, new in vertex_map.items()}
    if strategy.permutes:
        sub = remap_vertices(g_prime, base, weights)
    else:
        keep = [(a, vertex_map[v]) for a, v in enumerate(base.atom_to_vertex)
                if v is not None and v in vertex_map and weights[vertex_map[v]] > 0]
        pos = base.positions[[a for a, _ in keep]] if keep else np.zeros((0, 2))
        sub = Register(pos, tuple(nv for _, nv in keep), base.c6)
    if strategy.redesigns_drive and sub.size > 0:
        survivors = sorted(v for v in sub.atom_to_vertex if v is not None)
        if len(survivors) == g_prime.n:
            _, _, omega = omega_bounds(g_prime, sub, device)
        else:
            # some subgraph vertices were dropped; bound on the induced part
            relabel = {v: i for i, v in enumerate(survivors)}
            edges = [(relabel[u], relabel[v]) for u, v in g_prime.edges
                     if u in relabel and v in relabel]
            shrunk = Graph.from_edges(len(survivors), edges)
            induced = Register(sub.positions,
                               tuple(relabel[v] for v in sub.atom_to_vertex),
                               sub.c6)
            _, _, omega = omega_bounds(shrunk, induced, device)
    else:
        omega = base_omega_max
    # report atoms in original vertex ids
    remapped = tuple(inverse[v] if v is not None else None
                     for v in sub.atom_to_vertex)
    return Register(sub.positions, remapped, sub.c6), omega
