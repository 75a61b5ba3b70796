"""State-vector emulation of a driven Rydberg register.

The Hamiltonian acting on m atoms is

    H(t) = Omega(t) sum_u sigma^x_u - Delta(t) sum_u n_u
           + sum_{u<v} U_uv n_u n_v,      U_uv = C6 / d_uv^6

with hbar = 1 and no implicit 1/2 on the drive term, so a single resonant
atom oscillates as P1(t) = sin^2(Omega t).  Basis states are ordered by
bitstring value with bit u = 1 meaning atom u is in the Rydberg state.

Time integration is fixed-step RK4 on i dpsi/dt = H(t) psi with the state
renormalized every step; the kernel is JIT-compiled since step counts reach
tens of thousands for strongly interacting registers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .embedding import Register

MAX_ATOMS = 16
SCHEDULE_RAMP_FRACTION = 0.15
DEFAULT_DURATION_US = 4.0
STEP_PHASE_BUDGET = 0.05   # max |H| * dt
NORM_DRIFT_ABORT = 1e-4


class IntegrationError(RuntimeError):
    """Raised when the integrator loses more norm per step than tolerated."""


@dataclass(frozen=True)
class PulseSchedule:
    """Piecewise-linear drive amplitude and detuning over [0, T]."""

    duration: float
    omega_points: tuple[tuple[float, float], ...]
    delta_points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        if abs(self.omega(0.0)) > 1e-12 or abs(self.omega(self.duration)) > 1e-12:
            raise ValueError("drive must start and end at zero")
        if any(v < 0 for _, v in self.omega_points):
            raise ValueError("drive amplitude must stay non-negative")
        if not (self.delta(0.0) < 0.0 < self.delta(self.duration)):
            raise ValueError("detuning must sweep from negative to positive")

    def omega(self, t: float) -> float:
        ts, vs = zip(*self.omega_points)
        return float(np.interp(t, ts, vs))

    def delta(self, t: float) -> float:
        ts, vs = zip(*self.delta_points)
        return float(np.interp(t, ts, vs))

    def max_omega(self) -> float:
        return max(v for _, v in self.omega_points)

    def max_abs_delta(self) -> float:
        return max(abs(v) for _, v in self.delta_points)


def adiabatic_schedule(omega_max: float,
                       duration: float = DEFAULT_DURATION_US,
                       final_detuning: float | None = None) -> PulseSchedule:
    """Ramp-hold-ramp drive with a linear detuning sweep.

    The drive rises to its cap over the first 15% of the window and falls
    over the last 15%; the detuning runs from -omega_max to +omega_max/2 so
    the final Hamiltonian rewards excitation below the blockade scale.  The
    endpoint is adjustable: on registers whose weakest edge interaction sits
    at omega_max itself, the default endpoint makes that edge's doubly
    excited state degenerate with the ground manifold, and a lower value
    restores the gap.
    """
    if omega_max <= 0 or duration <= 0:
        raise ValueError("omega_max and duration must be positive")
    if final_detuning is None:
        final_detuning = omega_max / 2.0
    if final_detuning <= 0:
        raise ValueError("final detuning must be positive")
    r = SCHEDULE_RAMP_FRACTION * duration
    omega_pts = ((0.0, 0.0), (r, omega_max),
                 (duration - r, omega_max), (duration, 0.0))
    delta_pts = ((0.0, -omega_max), (duration, final_detuning))
    return PulseSchedule(duration, omega_pts, delta_pts)


@dataclass
class QuantumState:
    """Normalized complex amplitudes over the 2^m computational basis."""

    amplitudes: np.ndarray
    n_atoms: int

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def probability_of(self, bits: str) -> float:
        idx = sum(1 << u for u, b in enumerate(bits) if b == "1")
        return float(abs(self.amplitudes[idx]) ** 2)


@dataclass
class SampleSet:
    """Measurement outcomes as bitstring -> count."""

    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts must sum to shots")

    def excited_sets(self) -> dict[tuple[int, ...], int]:
        """Counts keyed by the tuple of excited atom indices."""
        out: dict[tuple[int, ...], int] = {}
        for bits, c in self.counts.items():
            key = tuple(u for u, b in enumerate(bits) if b == "1")
            out[key] = out.get(key, 0) + c
        return out


def bitstring_of(index: int, m: int) -> str:
    return "".join("1" if index >> u & 1 else "0" for u in range(m))


@dataclass
class HamiltonianAction:
    """Matrix-free H(Omega, Delta) application for a fixed register."""

    interactions: np.ndarray   # (2^m,) pair-interaction energy per basis state
    excitations: np.ndarray    # (2^m,) excitation count per basis state
    n_atoms: int

    def apply(self, psi: np.ndarray, omega: float, delta: float) -> np.ndarray:
        out = (self.interactions - delta * self.excitations) * psi
        if omega != 0.0:
            tensor = psi.reshape((2,) * self.n_atoms)
            for u in range(self.n_atoms):
                out += omega * np.flip(tensor, axis=self.n_atoms - 1 - u).reshape(-1)
        return out

    def matrix(self, omega: float, delta: float) -> np.ndarray:
        """Dense matrix, for small-register checks only."""
        dim = 1 << self.n_atoms
        h = np.diag(self.interactions - delta * self.excitations).astype(complex)
        for b in range(dim):
            for u in range(self.n_atoms):
                h[b ^ (1 << u), b] += omega
        return h

    def norm_bound(self, omega: float, delta: float) -> float:
        diag = self.interactions - delta * self.excitations
        return float(np.abs(diag).max() + self.n_atoms * abs(omega))


def build_hamiltonian_action(reg: Register) -> HamiltonianAction:
    """Precompute the diagonal data of the register Hamiltonian."""
    m = reg.size
    if m > MAX_ATOMS:
        raise ValueError(f"{m} atoms exceeds the {MAX_ATOMS}-atom limit")
    dim = 1 << m
    inter = np.zeros(dim)
    pair_u = []
    for i in range(m):
        for j in range(i + 1, m):
            pair_u.append((i, j, reg.interaction(i, j)))
    states = np.arange(dim)
    n_exc = np.zeros(dim)
    for u in range(m):
        n_exc += (states >> u) & 1
    for i, j, u_ij in pair_u:
        both = ((states >> i) & 1) & ((states >> j) & 1)
        inter += u_ij * both
    return HamiltonianAction(inter, n_exc.astype(float), m)


@njit(cache=True)
def _rk4_loop(psi, inter, n_exc, m, om_t, om_v, de_t, de_v, duration, dt,
              drift_abort):  # pragma: no cover - exercised via evolve()
    dim = psi.shape[0]
    n_steps = int(np.ceil(duration / dt))
    h = duration / n_steps
    k = np.empty(dim, dtype=np.complex128)
    tmp = np.empty(dim, dtype=np.complex128)
    acc = np.empty(dim, dtype=np.complex128)
    max_drift = 0.0

    for step in range(n_steps):
        t = step * h
        for stage in range(4):
            if stage == 0:
                ts = t
                for b in range(dim):
                    tmp[b] = psi[b]
            elif stage == 1 or stage == 2:
                ts = t + 0.5 * h
                for b in range(dim):
                    tmp[b] = psi[b] + 0.5 * h * k[b]
            else:
                ts = t + h
                for b in range(dim):
                    tmp[b] = psi[b] + h * k[b]
            omega = np.interp(ts, om_t, om_v)
            delta = np.interp(ts, de_t, de_v)
            for b in range(dim):
                k[b] = (inter[b] - delta * n_exc[b]) * tmp[b]
            if omega != 0.0:
                for u in range(m):
                    mask = 1 << u
                    for b in range(dim):
                        k[b] += omega * tmp[b ^ mask]
            for b in range(dim):
                k[b] *= -1j
            if stage == 0:
                for b in range(dim):
                    acc[b] = k[b]
            elif stage == 3:
                for b in range(dim):
                    acc[b] += k[b]
            else:
                for b in range(dim):
                    acc[b] += 2.0 * k[b]
        nrm2 = 0.0
        for b in range(dim):
            psi[b] += (h / 6.0) * acc[b]
            nrm2 += psi[b].real * psi[b].real + psi[b].imag * psi[b].imag
        nrm = np.sqrt(nrm2)
        drift = abs(nrm - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > drift_abort:
            return max_drift, step + 1, 1
        inv = 1.0 / nrm
        for b in range(dim):
            psi[b] *= inv
    return max_drift, n_steps, 0


@dataclass
class EvolutionTrace:
    times: list[float] = field(default_factory=list)
    omegas: list[float] = field(default_factory=list)
    deltas: list[float] = field(default_factory=list)
    top_probs: list[list[tuple[str, float]]] = field(default_factory=list)

    def dump_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["t_us", "omega", "delta"]
                            + [f"p{i}" for i in range(8)])
            for t, om, de, probs in zip(self.times, self.omegas, self.deltas,
                                        self.top_probs):
                row = [f"{t:.6f}", f"{om:.6f}", f"{de:.6f}"]
                row += [f"{b}:{p:.6f}" for b, p in probs]
                writer.writerow(row)


def auto_timestep(action: HamiltonianAction, schedule: PulseSchedule) -> float:
    bound = action.norm_bound(schedule.max_omega(), -schedule.max_abs_delta())
    bound = max(bound, action.norm_bound(schedule.max_omega(),
                                         schedule.max_abs_delta()))
    if bound <= 0.0:
        return schedule.duration
    return min(STEP_PHASE_BUDGET / bound, schedule.duration)


def evolve(reg: Register, schedule: PulseSchedule, dt: float | None = None,
           trace: EvolutionTrace | None = None,
           trace_points: int = 50) -> QuantumState:
    """Integrate from the all-ground state to t = T.

    ``dt`` defaults to 0.05 / max||H||, keeping the per-step phase small; a
    norm loss beyond 1e-4 in a single step aborts with IntegrationError.
    """
    action = build_hamiltonian_action(reg)
    m = reg.size
    if m == 0:
        return QuantumState(np.ones(1, dtype=complex), 0)
    if dt is None:
        dt = auto_timestep(action, schedule)
    if dt <= 0:
        raise ValueError("dt must be positive")

    om_t = np.array([t for t, _ in schedule.omega_points])
    om_v = np.array([v for _, v in schedule.omega_points])
    de_t = np.array([t for t, _ in schedule.delta_points])
    de_v = np.array([v for _, v in schedule.delta_points])

    psi = np.zeros(1 << m, dtype=np.complex128)
    psi[0] = 1.0

    if trace is None:
        drift, _, status = _rk4_loop(psi, action.interactions, action.excitations,
                                     m, om_t, om_v, de_t, de_v,
                                     schedule.duration, dt, NORM_DRIFT_ABORT)
        if status != 0:
            raise IntegrationError(f"norm drift {drift:.2e} exceeded tolerance")
        return QuantumState(psi, m)

    # Traced runs integrate in chunks so intermediate states can be logged.
    n_chunks = max(1, trace_points)
    chunk = schedule.duration / n_chunks
    t_done = 0.0
    for i in range(n_chunks):
        seg = min(chunk, schedule.duration - t_done)
        # shifted breakpoints put this chunk's local clock at the right
        # place on the absolute schedule
        drift, _, status = _rk4_loop(psi, action.interactions, action.excitations,
                                     m, om_t - t_done, om_v, de_t - t_done, de_v,
                                     seg, dt, NORM_DRIFT_ABORT)
        if status != 0:
            raise IntegrationError(f"norm drift {drift:.2e} exceeded tolerance")
        t_done += seg
        probs = np.abs(psi) ** 2
        top = np.argsort(probs)[::-1][:8]
        trace.times.append(t_done)
        trace.omegas.append(schedule.omega(t_done))
        trace.deltas.append(schedule.delta(t_done))
        trace.top_probs.append([(bitstring_of(int(b), m), float(probs[b]))
                                for b in top])
    return QuantumState(psi, m)


def evolve_constant(reg: Register, omega: float, delta: float, duration: float,
                    dt: float | None = None) -> QuantumState:
    """Integrate under fixed drive parameters (physics checks, not pulses)."""
    action = build_hamiltonian_action(reg)
    m = reg.size
    if m == 0:
        return QuantumState(np.ones(1, dtype=complex), 0)
    if dt is None:
        bound = action.norm_bound(omega, delta)
        dt = STEP_PHASE_BUDGET / bound if bound > 0 else duration
    flat = np.array([0.0, duration])
    psi = np.zeros(1 << m, dtype=np.complex128)
    psi[0] = 1.0
    drift, _, status = _rk4_loop(psi, action.interactions, action.excitations,
                                 m, flat, np.array([omega, omega]),
                                 flat, np.array([delta, delta]),
                                 duration, dt, NORM_DRIFT_ABORT)
    if status != 0:
        raise IntegrationError(f"norm drift {drift:.2e} exceeded tolerance")
    return QuantumState(psi, m)


def sample(state: QuantumState, shots: int = 1000, seed: int = 0) -> SampleSet:
    """Draw i.i.d. measurements from |psi|^2."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(probs), size=shots, p=probs)
    counts: dict[str, int] = {}
    for idx in draws:
        bits = bitstring_of(int(idx), state.n_atoms)
        counts[bits] = counts.get(bits, 0) + 1
    return SampleSet(counts, shots)


def apply_spam(samples: SampleSet, eta: float = 0.005, eps: float = 0.03,
               eps_prime: float = 0.08, seed: int = 0) -> SampleSet:
    """Post-process ideal outcomes with preparation and readout errors.

    Per atom and shot: with probability eta the atom was never prepared and
    reads as ground before measurement errors; then 0 flips to 1 with
    probability eps (false positive) and 1 flips to 0 with probability
    eps_prime (false negative).
    """
    for p in (eta, eps, eps_prime):
        if not 0.0 <= p <= 1.0:
            raise ValueError("probabilities must lie in [0, 1]")
    if not samples.counts:
        return SampleSet({}, samples.shots)
    m = len(next(iter(samples.counts)))
    rng = np.random.default_rng(seed)
    rows = []
    for bits, c in sorted(samples.counts.items()):
        row = [1 if b == "1" else 0 for b in bits]
        rows.extend([row] * c)
    mat = np.array(rows, dtype=np.int8)
    bad_prep = rng.random(mat.shape) < eta
    mat = np.where(bad_prep, 0, mat)
    flips_up = rng.random(mat.shape) < eps
    flips_down = rng.random(mat.shape) < eps_prime
    mat = np.where(mat == 0, flips_up.astype(np.int8), (~flips_down).astype(np.int8))
    counts: dict[str, int] = {}
    for row in mat:
        bits = "".join("1" if b else "0" for b in row)
        counts[bits] = counts.get(bits, 0) + 1
    return SampleSet(counts, samples.shots)
