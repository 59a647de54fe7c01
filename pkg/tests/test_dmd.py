"""CN-DMD, SI-DMD, classical DMD, piDMD and delay embedding."""
import numpy as np
import pytest

from oscillatory_dmd.dmd.classical import classical_trajectory, fit_classical, frequencies, predict_classical
from oscillatory_dmd.dmd.dispatch import fit_model, method_name, predict_trajectory
from oscillatory_dmd.dmd.dtos.models import DelayEmbedding, ReducedHermitianModel, Scheme
from oscillatory_dmd.dmd.embedding import delay_embed, unembed
from oscillatory_dmd.dmd.pidmd import fit_pidmd, pidmd_trajectory, predict_pidmd
from oscillatory_dmd.dmd.spectral import principal_log, spectral_factors, stable_power, stable_power_table
from oscillatory_dmd.dmd.structured import (
    build_cn_matrices,
    build_si_matrices,
    discretized_energy,
    fit_structured,
    predict_block,
    predict_parallel,
    predict_structured,
    structured_trajectory,
)
from oscillatory_dmd.errors import (
    DegenerateDataError,
    LargeProblemWarning,
    NonUniqueSolutionWarning,
    UndefinedFrequencyWarning,
    ValidationError,
)
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix
from tests.conftest import cn_recurrence, random_complex, random_unitary


def single_mode(theta=0.1, n=4, columns=21, tau=0.01, seed=3):
    rng = np.random.default_rng(seed)
    v = random_complex(rng, n)
    v /= np.linalg.norm(v)
    data = v[:, None] * np.exp(1j * theta * np.arange(columns))[None, :]
    return SnapshotMatrix(data=data, tau=tau), v


def hermitian_trajectory(tau=0.1, columns=21, seed=5):
    """CN data of a rank-3 Hermitian operator in C^10, plus a constant component in its null space."""
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(random_complex(rng, 10, 4))
    a = (q[:, :3] * np.array([3.0, -5.0, 8.0])) @ q[:, :3].conj().T
    x0 = q @ np.array([1.0, 0.5 + 0.5j, -0.7, 0.3])
    return SnapshotMatrix(data=cn_recurrence(a, x0, tau, columns - 1), tau=tau), a


class TestAugmentedMatrices:

    def test_cn_two_snapshots(self):
        snapshots = SnapshotMatrix(data=np.array([[1.0, 0.0], [0.0, 1.0]]), tau=0.5)
        x1, x2 = build_cn_matrices(snapshots)
        np.testing.assert_allclose(x1, [[0.5], [0.5]], atol=1e-15)
        np.testing.assert_allclose(x2, [[-2j], [2j]], atol=1e-15)

    def test_cn_constant_data_gives_zero_differences(self):
        snapshots = SnapshotMatrix(data=np.ones((3, 5)), tau=0.1)
        _, x2 = build_cn_matrices(snapshots)
        np.testing.assert_array_equal(x2, np.zeros((3, 4)))

    def test_shapes(self, rng):
        snapshots = SnapshotMatrix(data=random_complex(rng, 250, 80), tau=0.01)
        assert build_cn_matrices(snapshots)[0].shape == (250, 79)
        assert build_si_matrices(snapshots)[0].shape == (250, 78)

    def test_si_period_two(self, rng):
        v = random_complex(rng, 3)
        signs = (-1.0) ** np.arange(6)
        snapshots = SnapshotMatrix(data=v[:, None] * signs[None, :], tau=0.1)
        x1, x2 = build_si_matrices(snapshots)
        np.testing.assert_allclose(x2, np.zeros((3, 4)), atol=1e-15)
        np.testing.assert_allclose(x1, v[:, None] * -signs[None, 1:5], atol=1e-15)

    def test_too_few_snapshots(self):
        with pytest.raises(ValidationError):
            build_si_matrices(SnapshotMatrix(data=np.ones((2, 2)), tau=0.1))
        with pytest.raises(ValidationError):
            build_cn_matrices(SnapshotMatrix(data=np.ones((2, 1)), tau=0.1))


class TestSpectral:

    def test_zero_eigenvalue_gives_unit_factor(self):
        for scheme in Scheme:
            np.testing.assert_array_equal(spectral_factors(np.array([0.0]), 0.3, scheme), [1.0])

    def test_cn_quarter_turn(self):
        tau = 0.25
        np.testing.assert_allclose(spectral_factors(np.array([2 / tau]), tau, Scheme.CN), [-1j], atol=1e-15)

    def test_unit_modulus(self, rng):
        eigenvalues = rng.standard_normal(1000) * 100
        for scheme in Scheme:
            d = spectral_factors(eigenvalues, 0.01, scheme)
            assert np.max(np.abs(np.abs(d) - 1)) <= 1e-14

    def test_principal_log_branch(self):
        np.testing.assert_allclose(principal_log(np.array([-1.0])), [1j * np.pi], atol=1e-15)
        np.testing.assert_allclose(principal_log(np.array([complex(-1.0, -0.0)])), [1j * np.pi], atol=1e-15)

    def test_stable_power_simple_values(self):
        np.testing.assert_array_equal(stable_power(np.array([1.0]), 7), [1.0])
        np.testing.assert_allclose(stable_power(np.array([-1j]), 4), [1.0], atol=1e-14)
        np.testing.assert_array_equal(stable_power(np.array([0.0, 2.0]), 0), [1.0, 1.0])
        np.testing.assert_array_equal(stable_power(np.array([0.0]), 3), [0.0])

    def test_stable_power_matches_repeated_multiplication(self, rng):
        d = np.exp(1j * rng.uniform(-np.pi, np.pi, 20))
        repeated = np.ones(20, dtype=np.complex128)
        for _ in range(1000):
            repeated *= d
        np.testing.assert_allclose(stable_power(d, 1000), repeated, atol=1e-12)

    def test_stable_power_stays_on_unit_circle(self, rng):
        d = spectral_factors(rng.standard_normal(50) * 50, 0.01, Scheme.CN)
        assert np.max(np.abs(np.abs(stable_power(d, 10 ** 6)) - 1)) <= 1e-14

    def test_power_table_columns(self):
        d = np.array([1j, -1.0])
        table = stable_power_table(d, [0, 1, 2])
        np.testing.assert_allclose(table, [[1, 1j, -1], [1, -1, 1]], atol=1e-15)
        assert stable_power_table(d, []).shape == (2, 0)


class TestStructured:

    def test_single_mode_eigenvalue_and_long_prediction(self):
        theta, tau = 0.1, 0.01
        snapshots, v = single_mode(theta=theta, tau=tau)
        model = fit_structured(snapshots, Scheme.CN)
        assert model.rank == 1
        expected = -(2 / tau) * np.tan(theta / 2)
        assert model.eigenvalues[0] == pytest.approx(expected, rel=1e-8)
        np.testing.assert_allclose(predict_structured(model, v, steps=500), np.exp(500j * theta) * v, atol=1e-10)

    def test_single_mode_si(self):
        theta, tau = 0.1, 0.01
        snapshots, v = single_mode(theta=theta, tau=tau)
        model = fit_structured(snapshots, Scheme.SI)
        assert model.eigenvalues[0] == pytest.approx(-np.tan(theta) / tau, rel=1e-8)
        np.testing.assert_allclose(predict_structured(model, v, v * np.exp(1j * theta), 301),
                                   np.exp(301j * theta) * v, atol=1e-10)

    def test_constant_data_is_stationary(self):
        snapshots = SnapshotMatrix(data=np.ones((3, 6)), tau=0.1)
        model = fit_structured(snapshots, Scheme.CN)
        np.testing.assert_array_equal(model.eigenvalues, [0.0])
        np.testing.assert_array_equal(model.d, [1.0])
        np.testing.assert_allclose(predict_structured(model, np.ones(3), steps=1000), np.ones(3), atol=1e-12)

    def test_rank_zero_predicts_identity(self):
        model = fit_structured(SnapshotMatrix(data=np.zeros((3, 5)), tau=0.1), Scheme.CN)
        assert model.rank == 0
        x0 = np.array([1.0, 2.0, 3.0j])
        np.testing.assert_allclose(predict_structured(model, x0, steps=17), x0, atol=0)

    def test_zero_steps_returns_copy(self, toy):
        snapshots, _ = toy
        model = fit_structured(snapshots, Scheme.CN)
        x0 = snapshots.column(0)
        result = predict_structured(model, x0, steps=0)
        np.testing.assert_array_equal(result, x0)
        assert result is not x0

    def test_si_odd_step_needs_second_state(self, toy):
        snapshots, _ = toy
        model = fit_structured(snapshots, Scheme.SI)
        with pytest.raises(ValidationError):
            predict_structured(model, snapshots.column(0), steps=3)
        with pytest.raises(ValidationError):
            predict_block(model, snapshots.column(0), steps=3)

    def test_negative_steps_rejected(self, toy):
        model = fit_structured(toy[0], Scheme.CN)
        with pytest.raises(ValidationError):
            predict_structured(model, toy[0].column(0), steps=-1)

    def test_reproduces_exact_cn_training_data(self):
        snapshots, _ = hermitian_trajectory()
        model = fit_structured(snapshots, Scheme.CN)
        pred = structured_trajectory(model, snapshots.column(0), steps=snapshots.m)
        assert np.linalg.norm(pred - snapshots.data) <= 1e-8 * np.linalg.norm(snapshots.data)

    def test_recovers_operator_on_data_range(self):
        snapshots, a = hermitian_trajectory()
        model = fit_structured(snapshots, Scheme.CN, tol=1e-10)
        x = snapshots.data
        np.testing.assert_allclose(model.apply_operator(x), a @ x, atol=1e-8 * np.linalg.norm(a @ x))

    @pytest.mark.parametrize("scheme", list(Scheme))
    def test_block_single_and_parallel_agree(self, toy, scheme):
        snapshots, _ = toy
        model = fit_structured(snapshots, scheme)
        x0, x1 = snapshots.column(0), snapshots.column(1)
        block = predict_block(model, x0, x1, 40)
        single = np.column_stack([predict_structured(model, x0, x1, k) for k in range(1, 41)])
        parallel = predict_parallel(model, x0, x1, 40, num_threads=3, chunk_size=4)
        np.testing.assert_allclose(block, single, atol=1e-12)
        np.testing.assert_array_equal(parallel, single)

    def test_trajectory_modes(self, toy):
        snapshots, _ = toy
        model = fit_structured(snapshots, Scheme.CN)
        x0 = snapshots.column(0)
        block = structured_trajectory(model, x0, steps=10)
        assert block.shape == (32, 11)
        np.testing.assert_array_equal(block[:, 0], x0)
        for mode in ("single", "parallel"):
            np.testing.assert_allclose(structured_trajectory(model, x0, steps=10, mode=mode), block, atol=1e-12)
        with pytest.raises(ValidationError):
            structured_trajectory(model, x0, steps=10, mode="warp")

    def test_toy_prediction_beyond_training(self, toy):
        snapshots, factors = toy
        model = fit_structured(snapshots, Scheme.CN)
        pred = predict_structured(model, snapshots.column(0), steps=200)
        truth = factors.phi @ (factors.b * factors.eigenvalues ** 200)
        assert np.linalg.norm(pred - truth) <= 1e-8 * np.linalg.norm(truth)

    def test_mass_conserved_over_long_horizon(self, rng):
        snapshots, _ = hermitian_trajectory()
        model = fit_structured(snapshots, Scheme.CN)
        x0 = random_complex(rng, 10)
        assert np.linalg.norm(predict_structured(model, x0, steps=10 ** 4)) == pytest.approx(
            np.linalg.norm(x0), rel=1e-12)

    def test_si_streams_conserve_their_own_mass(self, toy, rng):
        model = fit_structured(toy[0], Scheme.SI)
        x0, x1 = random_complex(rng, 32), 2 * random_complex(rng, 32)
        pred = predict_block(model, x0, x1, 9)
        norms = np.linalg.norm(pred, axis=0)
        np.testing.assert_allclose(norms[1::2], np.linalg.norm(x0), rtol=1e-12)
        np.testing.assert_allclose(norms[0::2], np.linalg.norm(x1), rtol=1e-12)

    def test_energy_conserved_along_prediction(self):
        snapshots, _ = hermitian_trajectory()
        model = fit_structured(snapshots, Scheme.CN)
        pred = structured_trajectory(model, snapshots.column(0), steps=500)
        energies = np.array([discretized_energy(model, pred[:, k]) for k in range(pred.shape[1])])
        assert np.max(np.abs(energies - energies[0])) <= 1e-10 * abs(energies[0])

    def test_discretized_energy_values(self, toy):
        model = fit_structured(toy[0], Scheme.CN)
        assert discretized_energy(model, model.u[:, 2]) == pytest.approx(model.eigenvalues[2], rel=1e-12)
        outside = toy[0].column(0) - model.u @ (model.u.conj().T @ toy[0].column(0))
        assert abs(discretized_energy(model, outside)) <= 1e-12

    def test_unit_modulus_is_enforced(self):
        with pytest.raises(ValidationError):
            ReducedHermitianModel(u=np.eye(2, 1), eigenvalues=np.zeros(1), d=np.array([1.1]), tau=0.1,
                                  scheme=Scheme.CN)


class TestClassical:

    def test_constant_data(self):
        snapshots = SnapshotMatrix(data=np.ones((3, 6)), tau=0.1)
        model = fit_classical(snapshots)
        assert model.rank == 1
        assert abs(model.eigenvalues[0] - 1) <= 1e-12
        np.testing.assert_allclose(predict_classical(model, 10 ** 6), np.ones(3), atol=1e-8)

    def test_geometric_growth(self, rng):
        v = random_complex(rng, 4)
        data = v[:, None] * 2.0 ** np.arange(10)[None, :]
        model = fit_classical(SnapshotMatrix(data=data, tau=1.0))
        assert model.eigenvalues[0] == pytest.approx(2.0, rel=1e-10)

    def test_toy_eigenvalues_and_modes(self, toy):
        snapshots, factors = toy
        model = fit_classical(snapshots)
        assert model.rank == 5
        expected = factors.eigenvalues[np.argsort(np.angle(factors.eigenvalues))]
        found = model.eigenvalues[np.argsort(np.angle(model.eigenvalues))]
        np.testing.assert_allclose(found, expected, atol=1e-8)
        for j in range(5):
            mode = model.phi[:, j] / np.linalg.norm(model.phi[:, j])
            i = int(np.argmin(np.abs(factors.eigenvalues - model.eigenvalues[j])))
            assert abs(np.vdot(factors.phi[:, i], mode)) == pytest.approx(1.0, abs=1e-8)

    def test_unit_eigenvalues_have_real_frequencies(self, toy):
        model = fit_classical(toy[0])
        assert np.max(np.abs(model.omega.imag)) <= 1e-8

    def test_reproduces_training_data(self, toy):
        snapshots, _ = toy
        model = fit_classical(snapshots)
        pred = classical_trajectory(model, snapshots.m)
        assert np.linalg.norm(pred - snapshots.data) <= 1e-8 * np.linalg.norm(snapshots.data)
        np.testing.assert_allclose(predict_classical(model, 0), model.phi @ model.b)

    def test_reprojects_new_initial_state(self, toy):
        snapshots, factors = toy
        model = fit_classical(snapshots)
        x0 = factors.phi @ np.ones(5)
        pred = classical_trajectory(model, 3, x0=x0)
        np.testing.assert_allclose(pred[:, 3], factors.phi @ factors.eigenvalues ** 3, atol=1e-8)

    def test_rank_zero_is_degenerate(self):
        with pytest.raises(DegenerateDataError):
            fit_classical(SnapshotMatrix(data=np.zeros((3, 4)), tau=0.1))

    def test_zero_eigenvalue_frequency(self):
        with pytest.warns(UndefinedFrequencyWarning):
            omega = frequencies(np.array([0.0, 1.0]), 1.0)
        assert np.isnan(omega[0])
        assert omega[1] == 0


class TestPidmd:

    def test_recovers_unitary_from_krylov_data(self, rng):
        q = random_unitary(rng, 4)
        x = np.empty((4, 13), dtype=np.complex128)
        x[:, 0] = random_complex(rng, 4)
        for k in range(12):
            x[:, k + 1] = q @ x[:, k]
        model = fit_pidmd(SnapshotMatrix(data=x, tau=0.1))
        np.testing.assert_allclose(model.operator, q, atol=1e-8)

    def test_constant_data_fixed_point(self):
        x0 = np.array([0.6, 0.8j])
        snapshots = SnapshotMatrix(data=np.tile(x0[:, None], (1, 10)), tau=0.1)
        with pytest.warns(NonUniqueSolutionWarning):
            model = fit_pidmd(snapshots)
        np.testing.assert_allclose(model.operator @ x0, x0, atol=1e-10)

    def test_prediction_preserves_norm(self, rng):
        x = random_complex(rng, 5, 12)
        model = fit_pidmd(SnapshotMatrix(data=x, tau=0.1))
        x0 = random_complex(rng, 5)
        np.testing.assert_array_equal(predict_pidmd(model, x0, 0), x0)
        assert np.linalg.norm(predict_pidmd(model, x0, 50)) == pytest.approx(np.linalg.norm(x0), rel=1e-12)
        np.testing.assert_allclose(pidmd_trajectory(model, x0, 5)[:, 5], predict_pidmd(model, x0, 5), atol=1e-13)

    def test_large_problem_warns(self, rng):
        with pytest.warns(LargeProblemWarning):
            fit_pidmd(SnapshotMatrix(data=random_complex(rng, 4, 8), tau=0.1), warn_dim=2)


class TestDispatch:

    @pytest.mark.parametrize("method", ["cn", "si", "classical", "pidmd"])
    def test_every_method_round_trips_its_name(self, toy, method):
        snapshots, _ = toy
        model = fit_model(snapshots, method)
        assert method_name(model) == method
        pred = predict_trajectory(model, snapshots.column(0), snapshots.column(1), 12)
        assert pred.shape == (32, 13)

    def test_unknown_method(self, toy):
        with pytest.raises(ValidationError):
            fit_model(toy[0], "exact")


class TestDelayEmbedding:

    def test_depth_one_is_identity(self, toy):
        assert delay_embed(toy[0], 1) is toy[0]

    def test_shapes(self):
        snapshots = SnapshotMatrix(data=np.arange(6).reshape(2, 3), tau=0.1)
        embedded = delay_embed(snapshots, 2)
        assert embedded.data.shape == (4, 2)
        np.testing.assert_array_equal(embedded.data[:, 0], [0, 3, 1, 4])
        assert embedded.embedding_depth == 2

    def test_depth_beyond_data_rejected(self):
        snapshots = SnapshotMatrix(data=np.ones((2, 3)), tau=0.1)
        with pytest.raises(ValidationError):
            delay_embed(snapshots, 3)

    def test_unembed_recovers_states(self, toy):
        snapshots, _ = toy
        embedded = delay_embed(snapshots, 4)
        recovered = unembed(embedded.data, DelayEmbedding(depth=4, base_dim=32))
        np.testing.assert_array_equal(recovered, snapshots.data)

    def test_embedded_cn_prediction(self, toy):
        snapshots, factors = toy
        embedded = delay_embed(snapshots, 3)
        model = fit_structured(embedded, Scheme.CN)
        pred = unembed(structured_trajectory(model, embedded.column(0), steps=30),
                       DelayEmbedding(depth=3, base_dim=32))
        truth = factors.phi @ (factors.b[:, None] * factors.eigenvalues[:, None] ** np.arange(33)[None, :])
        assert np.linalg.norm(pred - truth) <= 1e-8 * np.linalg.norm(truth)
