"""Strang splitting solver, WKB initial data and discrete conservation laws."""
import numpy as np
import pytest

from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.solver.conservation import energy, mass
from oscillatory_dmd.solver.dtos.grid import PotentialSpec, SpatialGrid
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix
from oscillatory_dmd.solver.dtos.solver_config import SolverConfig
from oscillatory_dmd.solver.dtos.wkb_spec import WkbSpec
from oscillatory_dmd.solver.strang import simulate, strang_step
from oscillatory_dmd.solver.wkb import wkb_from_config, wkb_initial
from tests.conftest import forward_wave_initial, random_complex


def free_config(grid, eps=1.0, potential=None, tau_e=0.1, steps=1, **kwargs):
    return SolverConfig(grid=grid, eps=eps, potential=potential or PotentialSpec.constant(0.0), tau_e=tau_e,
                        steps=steps, **kwargs)


class TestWkb:

    def test_unit_density_zero_phase(self):
        grid = SpatialGrid(0.0, 1.0, 8)
        spec = WkbSpec(n0=lambda x: np.ones_like(x), s0=lambda x: np.zeros_like(x), eps=0.1)
        np.testing.assert_array_equal(wkb_initial(spec, grid), np.ones(8, dtype=np.complex128))

    def test_gaussian_profile_values(self):
        grid = SpatialGrid(0.0, 2.0, 200)
        u = forward_wave_initial(grid, 1e-2)
        peak = int(np.argmin(np.abs(grid.points - 1.0)))
        quarter = int(np.argmin(np.abs(grid.points - 0.5)))
        assert abs(np.abs(u[peak]) - 1.0) <= 1e-12
        assert np.abs(u[quarter]) ** 2 == pytest.approx(np.exp(-12.5), rel=1e-10)

    def test_phase_shift_by_period_is_invisible(self):
        grid = SpatialGrid(0.0, 1.0, 16)
        eps = 0.1
        base = WkbSpec(n0=lambda x: np.ones_like(x), s0=lambda x: x ** 2, eps=eps)
        shifted = WkbSpec(n0=lambda x: np.ones_like(x), s0=lambda x: x ** 2 + 2 * np.pi * eps, eps=eps)
        np.testing.assert_allclose(wkb_initial(shifted, grid), wkb_initial(base, grid), atol=1e-12)

    def test_negative_density_rejected(self):
        grid = SpatialGrid(0.0, 1.0, 8)
        spec = WkbSpec(n0=lambda x: x - 0.5, s0=lambda x: np.zeros_like(x), eps=0.1)
        with pytest.raises(ValidationError):
            wkb_initial(spec, grid)

    def test_unknown_profile_rejected(self):
        with pytest.raises(ValidationError):
            wkb_from_config({"density": "triangle"}, SpatialGrid(0.0, 1.0, 8), 0.1)


class TestStrangStep:

    def test_single_fourier_mode_is_exact(self):
        grid = SpatialGrid(0.0, 2 * np.pi, 16)
        eps, tau_e = 0.5, 0.1
        u = np.exp(1j * grid.points)
        cfg = free_config(grid, eps=eps, tau_e=tau_e)
        np.testing.assert_allclose(strang_step(u, cfg), np.exp(-0.5j * eps * tau_e) * u, atol=1e-12)

    def test_constant_potential_gives_global_phase(self):
        grid = SpatialGrid(0.0, 1.0, 16)
        eps, tau_e, c = 0.2, 0.05, 3.0
        cfg = free_config(grid, eps=eps, potential=PotentialSpec.constant(c), tau_e=tau_e)
        u = np.full(16, 0.7 + 0.1j)
        np.testing.assert_allclose(strang_step(u, cfg), np.exp(-1j * tau_e * c / eps) * u, atol=1e-12)

    def test_preserves_norm(self, rng):
        grid = SpatialGrid(-1.0, 1.0, 64)
        cfg = free_config(grid, eps=0.05, potential=PotentialSpec.harmonic(10.0), tau_e=0.01, beta=0.05)
        u = random_complex(rng, 64)
        assert np.linalg.norm(strang_step(u, cfg)) == pytest.approx(np.linalg.norm(u), rel=1e-13)

    def test_odd_grid_rejected(self):
        cfg = free_config(SpatialGrid(0.0, 1.0, 15))
        with pytest.raises(ValidationError):
            strang_step(np.ones(15), cfg)

    def test_length_mismatch_rejected(self):
        cfg = free_config(SpatialGrid(0.0, 1.0, 16))
        with pytest.raises(ValidationError):
            strang_step(np.ones(8), cfg)


class TestSimulate:

    def test_zero_steps_returns_initial_state(self):
        grid = SpatialGrid(0.0, 1.0, 8)
        u0 = np.arange(8) + 1j
        snapshots = simulate(u0, free_config(grid, steps=0))
        assert snapshots.data.shape == (8, 1)
        np.testing.assert_array_equal(snapshots.column(0), u0)

    def test_forward_wave_shape(self, forward_wave):
        assert forward_wave.data.shape == (200, 100)
        assert forward_wave.tau == pytest.approx(1e-2)

    def test_downsampled_shape(self):
        grid = SpatialGrid(0.0, 1.0, 1000)
        cfg = SolverConfig(grid=grid, eps=1e-2, potential=PotentialSpec.harmonic(10.0), tau_e=1e-3, steps=790,
                           downsample_time=10, downsample_space=4)
        u0 = wkb_initial(wkb_from_config({"width": 25.0}, grid, cfg.eps), grid)
        snapshots = simulate(u0, cfg)
        assert snapshots.data.shape == (250, 80)
        assert snapshots.tau == pytest.approx(1e-2)
        assert snapshots.grid.h == pytest.approx(4e-3)
        np.testing.assert_array_equal(snapshots.column(0), u0[3::4])

    def test_stride_must_divide_steps(self):
        cfg = free_config(SpatialGrid(0.0, 1.0, 8), steps=5, downsample_time=2)
        with pytest.raises(ValidationError):
            simulate(np.ones(8), cfg)

    def test_stride_must_divide_grid(self):
        cfg = free_config(SpatialGrid(0.0, 1.0, 8), steps=2, downsample_space=3)
        with pytest.raises(ValidationError):
            simulate(np.ones(8), cfg)

    def test_mass_and_energy_constant_along_forward_wave(self, forward_wave, forward_wave_config):
        cfg = forward_wave_config
        masses = [mass(forward_wave.column(k), forward_wave.grid) for k in range(forward_wave.columns)]
        energies = [energy(forward_wave.column(k), forward_wave.grid, cfg.eps, cfg.potential)
                    for k in range(forward_wave.columns)]
        assert max(abs(m - masses[0]) for m in masses) <= 1e-12 * masses[0]
        assert max(abs(e - energies[0]) for e in energies) <= 1e-8 * abs(energies[0])

    def test_second_order_in_time(self):
        grid = SpatialGrid(0.0, 2 * np.pi, 64)
        potential = PotentialSpec.tabulated(np.cos(grid.points))
        u0 = np.exp(-2 * (grid.points - np.pi) ** 2).astype(np.complex128)

        def terminal(tau_e):
            steps = int(round(1.0 / tau_e))
            return simulate(u0, free_config(grid, potential=potential, tau_e=tau_e, steps=steps)).column(-1)

        reference = terminal(0.1 / 8)
        coarse = np.linalg.norm(terminal(0.1) - reference)
        fine = np.linalg.norm(terminal(0.05) - reference)
        assert np.log2(coarse / fine) >= 1.8

    def test_spectral_accuracy_in_space(self):
        def terminal(n):
            grid = SpatialGrid(0.0, 2 * np.pi, n)
            potential = PotentialSpec.tabulated(np.cos(grid.points))
            u0 = np.exp(-2 * (grid.points - np.pi) ** 2).astype(np.complex128)
            return simulate(u0, free_config(grid, potential=potential, tau_e=0.01, steps=50)).column(-1)

        reference = terminal(128)
        error_16 = np.max(np.abs(terminal(16) - reference[7::8]))
        error_32 = np.max(np.abs(terminal(32) - reference[3::4]))
        assert error_32 <= error_16 / 10


class TestTabulatedPotential:

    @pytest.fixture
    def trap(self):
        grid = SpatialGrid(0.0, 1.0, 64)
        tabulated = SolverConfig(grid=grid, eps=5e-2, potential=PotentialSpec.tabulated(10.0 * grid.points ** 2),
                                 tau_e=1e-3, steps=20, downsample_time=2, downsample_space=2)
        u0 = wkb_initial(wkb_from_config({"width": 25.0}, grid, tabulated.eps), grid)
        return tabulated, u0

    def test_matches_analytic_harmonic_trap(self, trap):
        tabulated, u0 = trap
        harmonic = SolverConfig(grid=tabulated.grid, eps=tabulated.eps, potential=PotentialSpec.harmonic(10.0),
                                tau_e=1e-3, steps=20, downsample_time=2, downsample_space=2)
        np.testing.assert_array_equal(simulate(u0, tabulated).data, simulate(u0, harmonic).data)

    def test_subsample_keeps_coarse_grid_points(self):
        potential = PotentialSpec.tabulated(np.arange(8.0))
        np.testing.assert_array_equal(potential.subsample(2).values, [1.0, 3.0, 5.0, 7.0])
        np.testing.assert_array_equal(potential.subsample(4).values, [3.0, 7.0])
        assert potential.subsample(1) is potential
        with pytest.raises(ValidationError):
            potential.subsample(3)

    def test_analytic_potentials_are_unchanged_by_subsampling(self):
        harmonic = PotentialSpec.harmonic(3.0)
        assert harmonic.subsample(4) is harmonic

    def test_energy_on_downsampled_snapshots(self, trap):
        tabulated, u0 = trap
        snapshots = simulate(u0, tabulated)
        assert snapshots.grid.n == 32
        potential = tabulated.potential_on(snapshots.grid)
        np.testing.assert_allclose(potential.evaluate(snapshots.grid), 10.0 * snapshots.grid.points ** 2,
                                   rtol=1e-12)
        energies = [energy(snapshots.column(k), snapshots.grid, tabulated.eps, potential)
                    for k in range(snapshots.columns)]
        expected = energy(snapshots.column(0), snapshots.grid, tabulated.eps, PotentialSpec.harmonic(10.0))
        assert energies[0] == pytest.approx(expected, rel=1e-12)
        assert np.all(np.isfinite(energies))

    def test_potential_on_rejects_foreign_grid(self, trap):
        tabulated, _ = trap
        with pytest.raises(ValidationError):
            tabulated.potential_on(SpatialGrid(0.0, 2.0, 32))
        with pytest.raises(ValidationError):
            tabulated.potential_on(SpatialGrid(0.0, 1.0, 24))


class TestConservation:

    def test_mass_of_ones(self):
        assert mass(np.ones(10), SpatialGrid(0.0, 1.0, 10)) == pytest.approx(1.0, abs=1e-15)

    def test_mass_of_zero(self):
        assert mass(np.zeros(10), SpatialGrid(0.0, 1.0, 10)) == 0.0

    def test_energy_of_constant_state_is_potential_times_mass(self):
        grid = SpatialGrid(0.0, 1.0, 10)
        u = np.ones(10, dtype=np.complex128)
        assert energy(u, grid, 0.1, PotentialSpec.constant(4.0)) == pytest.approx(4.0 * mass(u, grid), rel=1e-12)

    def test_kinetic_energy_of_plane_wave(self):
        grid = SpatialGrid(0.0, 2 * np.pi, 64)
        eps, xi = 0.3, 3
        u = np.exp(1j * xi * grid.points)
        expected = 0.5 * eps ** 2 * xi ** 2 * 2 * np.pi
        assert energy(u, grid, eps, PotentialSpec.constant(0.0)) == pytest.approx(expected, rel=1e-12)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            mass(np.ones(3), SpatialGrid(0.0, 1.0, 4))


class TestSnapshotMatrix:

    def test_window_rebases(self):
        snapshots = SnapshotMatrix(data=np.arange(12).reshape(3, 4), tau=0.5)
        window = snapshots.window(1, 2)
        np.testing.assert_array_equal(window.data, np.arange(12).reshape(3, 4)[:, 1:3])
        assert window.m == 1

    def test_window_out_of_range(self):
        snapshots = SnapshotMatrix(data=np.ones((3, 4)), tau=0.5)
        with pytest.raises(ValidationError):
            snapshots.window(3, 2)

    def test_grid_row_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            SnapshotMatrix(data=np.ones((3, 4)), tau=0.5, grid=SpatialGrid(0.0, 1.0, 4))

    def test_nonpositive_tau_rejected(self):
        with pytest.raises(ValidationError):
            SnapshotMatrix(data=np.ones((3, 4)), tau=0.0)
