import numpy as np
import pytest

from atomcolor.embedding import Register, scale_to_device
from atomcolor.emulator import (EvolutionTrace, IntegrationError,
                                PulseSchedule, QuantumState, SampleSet,
                                adiabatic_schedule, apply_spam,
                                build_hamiltonian_action,
                                evolve, evolve_constant, sample)
from atomcolor.graphs import worked_example_graph, gen_unit_disk, is_independent_set


def pair_register(distance_um):
    return Register(np.array([[0.0, 0.0], [distance_um, 0.0]]), (0, 1))


class TestPulseSchedule:
    def test_adiabatic_endpoints(self):
        s = adiabatic_schedule(10.0, 4.0)
        assert s.omega(0.0) == 0.0 and s.omega(4.0) == 0.0
        assert s.delta(0.0) == -10.0 and s.delta(4.0) == 5.0

    def test_plateau(self):
        s = adiabatic_schedule(10.0, 4.0)
        assert s.omega(2.0) == pytest.approx(10.0)

    def test_detuning_strictly_increasing(self):
        s = adiabatic_schedule(3.0, 4.0)
        ts = np.linspace(0, 4.0, 50)
        ds = [s.delta(t) for t in ts]
        assert all(b > a for a, b in zip(ds, ds[1:]))

    def test_rejects_nonzero_drive_at_edges(self):
        with pytest.raises(ValueError):
            PulseSchedule(1.0, ((0.0, 1.0), (1.0, 0.0)),
                          ((0.0, -1.0), (1.0, 1.0)))

    def test_rejects_bad_detuning_sweep(self):
        with pytest.raises(ValueError):
            PulseSchedule(1.0, ((0.0, 0.0), (0.5, 1.0), (1.0, 0.0)),
                          ((0.0, 1.0), (1.0, 2.0)))


class TestHamiltonian:
    def test_single_atom_diagonal(self):
        act = build_hamiltonian_action(pair_register(8.0))
        h = build_hamiltonian_action(
            Register(np.array([[0.0, 0.0]]), (0,))).matrix(0.0, 0.7)
        assert h[0, 0] == 0.0
        assert h[1, 1] == pytest.approx(-0.7)

    def test_two_atom_double_excitation_energy(self):
        reg = pair_register(6.0)
        u = reg.interaction(0, 1)
        h = build_hamiltonian_action(reg).matrix(0.0, 1.3)
        assert h[3, 3] == pytest.approx(-2 * 1.3 + u)

    def test_drive_couples_single_flips(self):
        h = build_hamiltonian_action(pair_register(9.0)).matrix(0.5, 0.0)
        assert h[0, 1] == pytest.approx(0.5)
        assert h[0, 3] == 0.0  # double flips are not direct couplings

    def test_hermitian(self):
        reg = Register(np.array([[0.0, 0.0], [7.0, 0.0], [3.0, 6.0]]),
                       (0, 1, 2))
        h = build_hamiltonian_action(reg).matrix(1.1, -0.4)
        assert np.allclose(h, h.conj().T, atol=1e-12)

    def test_action_matches_matrix(self):
        reg = Register(np.array([[0.0, 0.0], [7.0, 0.0], [3.0, 6.0]]),
                       (0, 1, 2))
        act = build_hamiltonian_action(reg)
        rng = np.random.default_rng(0)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert np.allclose(act.apply(psi, 1.1, -0.4),
                           act.matrix(1.1, -0.4) @ psi)

    def test_atom_limit(self):
        with pytest.raises(ValueError):
            build_hamiltonian_action(
                Register(np.array([[8.0 * i, 0.0] for i in range(17)]),
                         tuple(range(17))))


class TestEvolve:
    def test_rabi_oscillation(self):
        reg = Register(np.array([[0.0, 0.0]]), (0,))
        omega = 0.9
        for t in np.linspace(0.2, 3.0, 20):
            psi = evolve_constant(reg, omega, 0.0, float(t))
            p1 = abs(psi.amplitudes[1]) ** 2
            assert p1 == pytest.approx(np.sin(omega * t) ** 2, abs=1e-4)

    def test_blockade_suppression(self):
        reg = pair_register(6.0)
        u = reg.interaction(0, 1)
        omega = u / 50.0
        sched = adiabatic_schedule(omega, 4.0)
        psi = evolve(reg, sched)
        assert psi.probability_of("11") <= 0.01

    def test_zero_drive_is_identity(self):
        reg = pair_register(9.0)
        psi = evolve_constant(reg, 0.0, 0.0, 2.0, dt=1e-3)
        assert abs(psi.amplitudes[0]) ** 2 == pytest.approx(1.0, abs=1e-9)

    def test_norm_conserved(self):
        reg = pair_register(7.0)
        psi = evolve(reg, adiabatic_schedule(5.0, 2.0))
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-6)

    def test_energy_constant_under_static_hamiltonian(self):
        reg = Register(np.array([[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]]),
                       (0, 1, 2))
        act = build_hamiltonian_action(reg)
        h = act.matrix(2.0, 1.0)
        psis = [evolve_constant(reg, 2.0, 1.0, t) for t in (0.5, 1.0, 2.0)]
        energies = [float(np.real(p.amplitudes.conj() @ h @ p.amplitudes))
                    for p in psis]
        ref = max(abs(e) for e in energies) or 1.0
        assert max(energies) - min(energies) <= 1e-5 * ref + 1e-8

    def test_adiabatic_mass_grows_with_duration(self, worked_ud_register):
        from atomcolor.embedding import omega_bounds
        g = worked_example_graph()
        _, _, omega = omega_bounds(g, worked_ud_register)
        mis_states = []
        for b in range(32):
            s = [u for u in range(5) if b >> u & 1]
            if len(s) == 3 and is_independent_set(g, s):
                mis_states.append(b)
        masses = []
        for t_us in (1.0, 2.0, 4.0, 8.0):
            psi = evolve(worked_ud_register, adiabatic_schedule(omega, t_us))
            fractions = []
            for seed in range(5):
                shots = sample(psi, 1000, seed=seed)
                hit = sum(c for bits, c in shots.counts.items()
                          if int(bits[::-1], 2) in mis_states)
                fractions.append(hit / 1000)
            masses.append(np.mean(fractions))
        assert all(b >= a - 1e-9 for a, b in zip(masses, masses[1:])), masses

    def test_norm_abort_signalling(self):
        reg = pair_register(6.0)
        sched = adiabatic_schedule(reg.interaction(0, 1), 1.0)
        with pytest.raises(IntegrationError):
            evolve(reg, sched, dt=0.2)  # grossly oversized step

    def test_trace_dump(self, tmp_path):
        reg = pair_register(8.0)
        trace = EvolutionTrace()
        evolve(reg, adiabatic_schedule(4.0, 1.0), trace=trace, trace_points=10)
        out = tmp_path / "trace.csv"
        trace.dump_csv(out)
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 11 and lines[0].startswith("t_us,omega,delta")


class TestSampling:
    def test_pure_state_sampling(self):
        psi = QuantumState(np.array([0, 0, 1.0, 0], dtype=complex), 2)
        shots = sample(psi, shots=50, seed=1)
        assert shots.counts == {"01": 50}

    def test_uniform_superposition_concentration(self):
        psi = QuantumState(np.array([1.0, 1.0], dtype=complex) / np.sqrt(2), 1)
        shots = sample(psi, shots=10000, seed=5)
        sigma = np.sqrt(10000 * 0.25)
        assert abs(shots.counts["0"] - 5000) <= 3 * sigma

    def test_single_shot(self):
        psi = QuantumState(np.ones(4, dtype=complex) / 2.0, 2)
        shots = sample(psi, shots=1, seed=0)
        assert shots.shots == 1 and sum(shots.counts.values()) == 1

    def test_deterministic(self):
        psi = QuantumState(np.ones(8, dtype=complex) / np.sqrt(8), 3)
        assert sample(psi, 100, seed=4).counts == sample(psi, 100, seed=4).counts

    def test_excited_sets(self):
        s = SampleSet({"110": 3, "001": 2}, 5)
        assert s.excited_sets() == {(0, 1): 3, (2,): 2}


class TestSpam:
    def test_identity_at_zero_noise(self):
        s = SampleSet({"0101": 40, "1100": 60}, 100)
        out = apply_spam(s, 0.0, 0.0, 0.0, seed=2)
        assert out.counts == s.counts

    def test_full_false_positive_flips_zeros(self):
        s = SampleSet({"000": 10}, 10)
        out = apply_spam(s, 0.0, 1.0, 0.0, seed=3)
        assert out.counts == {"111": 10}

    def test_false_negative_rate(self):
        shots = 100_000
        s = SampleSet({"1": shots}, shots)
        out = apply_spam(s, 0.0, 0.0, 0.08, seed=7)
        zeros = out.counts.get("0", 0)
        sigma = np.sqrt(shots * 0.08 * 0.92)
        assert abs(zeros - 0.08 * shots) <= 3 * sigma

    def test_bad_prep_forces_ground_then_readout(self):
        shots = 50_000
        s = SampleSet({"1": shots}, shots)
        out = apply_spam(s, 1.0, 0.0, 0.0, seed=9)
        assert out.counts == {"0": shots}

    def test_shot_count_preserved(self):
        s = SampleSet({"10": 30, "01": 70}, 100)
        out = apply_spam(s, 0.2, 0.1, 0.1, seed=11)
        assert out.shots == 100 and sum(out.counts.values()) == 100

    def test_rejects_bad_probability(self):
        s = SampleSet({"0": 1}, 1)
        with pytest.raises(ValueError):
            apply_spam(s, 1.5, 0.0, 0.0)


class TestBlockadeSubspace:
    def test_ud_registers_sample_independent_sets(self):
        # Noiseless sampling of disk-embedded graphs stays on independent
        # sets of the embedded graph.  The sweep must be slow on the scale
        # of the drive and the final detuning must leave the weakest edge
        # gapped, hence the long window and the lowered endpoint.
        from atomcolor.embedding import omega_bounds
        from atomcolor.emulator import build_hamiltonian_action
        done = 0
        seed = 0
        while done < 4 and seed < 30:
            g, pos = gen_unit_disk(6, 0.4, seed)
            seed += 1
            dmin = min(np.linalg.norm(pos[i] - pos[j])
                       for i in range(6) for j in range(i + 1, 6))
            if dmin * 40 < 4.0:
                continue
            reg = scale_to_device(pos)
            _, _, omega = omega_bounds(g, reg)
            duration = max(4.0, 32 * np.pi / omega)
            steps = duration * build_hamiltonian_action(reg).norm_bound(
                omega, omega) / 0.05
            if steps > 1.2e6:
                continue
            psi = evolve(reg, adiabatic_schedule(omega, duration,
                                                 final_detuning=omega / 6))
            shots = sample(psi, 1000, seed=seed)
            good = sum(c for bits, c in shots.counts.items()
                       if is_independent_set(
                           g, [u for u, b in enumerate(bits) if b == "1"]))
            assert good / 1000 >= 0.95
            done += 1
        assert done == 4
