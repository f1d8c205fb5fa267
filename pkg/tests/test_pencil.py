import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superres.errors import EmptyEstimateError
from superres.fourier import MeasurementModel, NoiseSpec, SparseSignal, atom_matrix, measure
from superres.pencil import (
    PencilConfig,
    denoise,
    grid_frequency,
    pencil_frequencies,
    pencil_pair,
    pencil_recover,
)
from superres.subspace import build_hankel


def noiseless_measurement(n, m, L, support, amplitudes):
    signal = SparseSignal(n, tuple(support), tuple(amplitudes))
    model = MeasurementModel(n, m, L)
    return signal, model, measure(signal, model, NoiseSpec(0.0))


class TestPencilPair:
    def test_two_by_two(self):
        Y = np.array([[1.0, 2.0], [3.0, 4.0]])
        ybar, yunder = pencil_pair(Y)
        assert np.array_equal(ybar, [[3.0, 4.0]])
        assert np.array_equal(yunder, [[1.0, 2.0]])

    def test_shifted_row_identity(self):
        rng = np.random.default_rng(0)
        Y = rng.standard_normal((5, 8))
        ybar, yunder = pencil_pair(Y)
        assert ybar.shape == yunder.shape == (4, 8)
        for i in range(4):
            assert np.array_equal(ybar[i], Y[i + 1])
            assert np.array_equal(yunder[i], Y[i])

    def test_single_row_rejected(self):
        with pytest.raises(ValueError):
            pencil_pair(np.ones((1, 4)))

    def test_atom_eigenrelation(self):
        # for a rank-1 Hankel from one atom, Ybar = exp(2 pi i k/n) * Yunder
        model = MeasurementModel(64, 20, 6)
        y = atom_matrix(model, [5])[:, 0]
        ybar, yunder = pencil_pair(build_hankel(y, 6))
        z = np.exp(2j * np.pi * 5 / 64)
        np.testing.assert_allclose(ybar, z * yunder, rtol=1e-12)


class TestDenoise:
    def test_noiseless_is_identity(self):
        rng = np.random.default_rng(1)
        M = rng.standard_normal((6, 9)) + 1j * rng.standard_normal((6, 9))
        assert denoise(M, 0.0, 6, 1.0) is M

    def test_small_singular_value_removed(self):
        # threshold 1e-3*sqrt(40 ln 40) = 0.0121 kills the 1e-6 direction
        rng = np.random.default_rng(2)
        U, _ = np.linalg.qr(rng.standard_normal((8, 2)) + 1j * rng.standard_normal((8, 2)))
        V, _ = np.linalg.qr(rng.standard_normal((10, 2)) + 1j * rng.standard_normal((10, 2)))
        M = (U * [1.0, 1e-6]) @ V.conj().T
        out = denoise(M, 1e-3, 40, 1.0)
        s = np.linalg.svd(out, compute_uv=False)
        assert np.sum(s > 1e-9) == 1
        assert s[0] == pytest.approx(1.0, rel=1e-9)

    def test_everything_below_threshold(self):
        M = 1e-9 * np.ones((4, 5), dtype=complex)
        out = denoise(M, 1e-3, 40, 1.0)
        assert np.all(out == 0)

    def test_bad_constant(self):
        with pytest.raises(ValueError):
            denoise(np.ones((3, 3)), 1e-3, 10, 0.0)


class TestGridFrequency:
    def test_left_inverse_of_atom_phase(self):
        n = 1000
        for k in range(-n // 2, n // 2):
            assert grid_frequency(np.exp(2j * np.pi * k / n), n) == k

    @given(st.sampled_from([8, 16, 64, 256]), st.data())
    def test_left_inverse_other_grids(self, n, data):
        k = data.draw(st.integers(-n // 2, n // 2 - 1))
        assert grid_frequency(np.exp(2j * np.pi * k / n), n) == k

    def test_wraps_into_range(self):
        # arg near +pi maps to the negative edge of the grid
        assert grid_frequency(np.exp(1j * np.pi * 0.9999), 8) == -4


class TestPencilFrequencies:
    def test_single_spike(self):
        _, model, y = noiseless_measurement(64, 16, 5, [9], [1.0 - 0.5j])
        assert pencil_frequencies(y, model) == [9]

    def test_adjacent_pair(self):
        _, model, y = noiseless_measurement(
            1000, 120, 40, [100, 101], [2 ** -0.5, -(2 ** -0.5)])
        assert pencil_frequencies(y, model) == [100, 101]

    def test_no_spurious_indices(self):
        # structural zero eigenvalues are rejected by the magnitude band
        rng = np.random.default_rng(3)
        support = sorted(int(v) for v in np.sort(rng.choice(256, 4, replace=False)) - 128)
        amps = rng.standard_normal(4) + 1j * rng.standard_normal(4) + (0.5 + 0.5j)
        _, model, y = noiseless_measurement(256, 30, 10, support, amps)
        assert pencil_frequencies(y, model) == support

    def test_zero_signal_fails_cleanly(self):
        model = MeasurementModel(64, 16, 5)
        with pytest.raises(EmptyEstimateError):
            pencil_frequencies(np.zeros(16, dtype=complex), model)

    @settings(max_examples=20)
    @given(st.integers(2, 6), st.integers(0, 2**32 - 1))
    def test_noiseless_exactness(self, sparsity, seed):
        # valid pencil needs at least sparsity+1 Hankel rows and
        # sparsity columns
        rng = np.random.default_rng(seed)
        n = int(rng.choice([64, 128, 256]))
        m = int(rng.integers(2 * sparsity + 2, min(n, 36)))
        L = int(rng.integers(sparsity + 1, m - sparsity + 2))
        support = sorted(int(v) for v in np.sort(rng.choice(n, sparsity, replace=False)) - n // 2)
        amps = rng.standard_normal(sparsity) + 1j * rng.standard_normal(sparsity)
        amps = np.where(np.abs(amps) < 0.3, amps + 0.7, amps)
        _, model, y = noiseless_measurement(n, m, L, support, amps)
        assert pencil_frequencies(y, model) == support

    def test_minimal_rows_match_general(self):
        # the minimal pencil (sparsity+1 Hankel rows, i.e. Prony's method)
        # agrees with a generic choice of L
        rng = np.random.default_rng(7)
        for _ in range(5):
            sparsity = int(rng.integers(2, 6))
            n, m = 128, int(rng.integers(2 * sparsity + 4, 40))
            support = sorted(
                int(v) for v in np.sort(rng.choice(n, sparsity, replace=False)) - n // 2)
            amps = rng.standard_normal(sparsity) + 1j * rng.standard_normal(sparsity) + 1.0
            signal = SparseSignal(n, tuple(support), tuple(amps))
            general = MeasurementModel(n, m, max(sparsity + 1, m // 3))
            minimal = MeasurementModel(n, m, sparsity + 1)
            y = measure(signal, general, NoiseSpec(0.0))
            assert (pencil_frequencies(y, minimal)
                    == pencil_frequencies(y, general)
                    == support)


class TestPencilRecover:
    def test_noiseless_exact(self):
        signal, model, y = noiseless_measurement(
            256, 24, 8, [-100, 3, 40], [1.0, -2.0j, 0.5 + 0.5j])
        result = pencil_recover(y, model)
        assert result.support == signal.support
        rel = np.linalg.norm(result.coefficients - signal.dense())
        assert rel < 1e-8 * np.linalg.norm(signal.dense())

    def test_residual_self_consistent(self):
        signal, model, y = noiseless_measurement(
            256, 24, 8, [-100, 3, 40], [1.0, -2.0j, 0.5 + 0.5j])
        result = pencil_recover(y, model)
        recon = atom_matrix(model, list(result.support)) @ result.coefficients[
            np.asarray(result.support) + 128]
        assert result.residual == pytest.approx(
            np.linalg.norm(y.values - recon), abs=1e-10)

    def test_zero_signal_raises(self):
        model = MeasurementModel(64, 16, 5)
        with pytest.raises(EmptyEstimateError):
            pencil_recover(np.zeros(16, dtype=complex), model)

    def test_noisy_adjacent_pair(self):
        signal = SparseSignal(1000, (100, 101), (2 ** -0.5, -(2 ** -0.5)))
        model = MeasurementModel(1000, 120, 40)
        y = measure(signal, model, NoiseSpec(10 ** -3.5, 11))
        result = pencil_recover(y, model, 10 ** -3.5)
        assert result.support == (100, 101)


class TestPencilConfig:
    def test_band_must_straddle_one(self):
        with pytest.raises(ValueError):
            PencilConfig(magnitude_band=(1.1, 1.3))
        with pytest.raises(ValueError):
            PencilConfig(magnitude_band=(0.5, 0.9))
        with pytest.raises(ValueError):
            PencilConfig(denoise_constant=-1.0)
