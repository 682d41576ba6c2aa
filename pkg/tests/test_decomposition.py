import numpy as np
import pytest

from conftest import make_grid, make_group
from ramanqc.decomposition import (
    DecompositionConfig,
    band_label,
    decompose_baseline,
    defect_summary,
    load_effects,
    write_effects,
)
from ramanqc.errors import IngestionError, InsufficientDataError
from ramanqc.wavelet import haar_decompose, haar_reconstruct, pad_to_pow2


class TestHaar:
    def test_perfect_reconstruction(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=64)
        details, approx = haar_decompose(x, 3)
        assert np.allclose(haar_reconstruct(details, approx), x, atol=1e-12)

    def test_orthonormal_energy(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=32)
        details, approx = haar_decompose(x, 5)
        energy = sum(float(d @ d) for d in details) + float(approx @ approx)
        assert energy == pytest.approx(float(x @ x), rel=1e-12)

    def test_padding_round_trip(self):
        x = np.arange(12.0)
        padded, n = pad_to_pow2(x)
        assert len(padded) == 16 and n == 12
        assert np.array_equal(padded[:12], x)


class TestDecomposeBaseline:
    def test_identical_profiles(self):
        grid = make_grid(32)
        p = np.linspace(1, 5, 32)
        group = make_group(grid, 1, [p, p, p])
        effects = decompose_baseline(group)
        assert np.allclose(effects.fixed, p)
        assert np.allclose(effects.normal, 0.0, atol=1e-12)
        assert np.allclose(effects.defective, 0.0)
        assert np.allclose(effects.noise, 0.0, atol=1e-12)

    def test_spike_routed_to_defective(self):
        rng = np.random.default_rng(2)
        grid = make_grid(64)
        base = np.full(64, 100.0)
        rows = [base + rng.normal(0, 1.0, 64) for _ in range(6)]
        rows[2] = rows[2].copy()
        rows[2][40] += 1000.0
        effects = decompose_baseline(make_group(grid, 1, rows))
        # the spike is absorbed by observation 3's defective profile
        assert abs(effects.defective[2, 40]) > 500.0
        assert abs(effects.fixed[40] - 100.0) < 10.0
        for j in (0, 1, 3, 4, 5):
            assert np.max(np.abs(effects.defective[j])) < 50.0

    def test_reconstruction_identity(self):
        rng = np.random.default_rng(3)
        grid = make_grid(48)  # not a power of two: exercises padding
        rows = [rng.random(48) * 100 for _ in range(4)]
        effects = decompose_baseline(make_group(grid, 1, rows))
        assert np.allclose(effects.reconstruct(), np.vstack(rows), atol=1e-9)

    def test_single_profile_rejected(self):
        grid = make_grid(16)
        with pytest.raises(InsufficientDataError):
            decompose_baseline(make_group(grid, 1, [np.ones(16)]))

    def test_subthreshold_residuals_stay_out_of_defective(self):
        # pure noise: the universal threshold lets through at most a few
        # borderline coefficients, and nothing of spike-like magnitude
        rng = np.random.default_rng(4)
        grid = make_grid(128)
        base = np.full(128, 500.0)
        rows = [base + rng.normal(0, 1.0, 128) for _ in range(8)]
        effects = decompose_baseline(make_group(grid, 1, rows))
        assert np.count_nonzero(effects.defective) / effects.defective.size < 0.05
        assert np.max(np.abs(effects.defective)) < 6.0

    def test_observation_permutation_equivariance(self):
        rng = np.random.default_rng(5)
        grid = make_grid(32)
        rows = [rng.random(32) * 10 for _ in range(5)]
        effects = decompose_baseline(make_group(grid, 1, rows))
        perm = [3, 0, 4, 1, 2]
        permuted = decompose_baseline(make_group(grid, 1, [rows[k] for k in perm]))
        assert np.allclose(permuted.fixed, effects.fixed)
        assert np.allclose(permuted.normal, effects.normal[perm])
        assert np.allclose(permuted.defective, effects.defective[perm])
        assert np.allclose(permuted.noise, effects.noise[perm])


class TestEffectsIO:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(6)
        grid = make_grid(32)
        groups = [make_group(grid, i, [rng.random(32) * 100 for _ in range(3)])
                  for i in range(1, 4)]
        effects = [decompose_baseline(g) for g in groups]
        path = tmp_path / "effects.csv"
        write_effects(effects, path)
        loaded = load_effects(path)
        assert len(loaded) == 3
        for original, reloaded in zip(effects, loaded):
            assert np.allclose(reloaded.fixed, original.fixed)
            assert np.allclose(reloaded.normal, original.normal)
            assert np.allclose(reloaded.defective, original.defective)
            assert np.allclose(reloaded.noise, original.noise)

    def test_empty_defective_column_defaults_to_zero(self, tmp_path):
        path = tmp_path / "effects.csv"
        path.write_text(
            "sample,observation,shift,fixed,normal,defective\n"
            "1,1,100.0,5.0,0.1,\n1,1,200.0,6.0,0.2,\n")
        effects = load_effects(path)
        assert np.array_equal(effects[0].defective, np.zeros((1, 2)))

    def test_missing_fixed_column(self, tmp_path):
        path = tmp_path / "effects.csv"
        path.write_text("sample,observation,shift,normal\n1,1,100.0,0.1\n")
        with pytest.raises(IngestionError, match="fixed"):
            load_effects(path)


class TestDefectSummary:
    def _effects_with_defective(self, defective):
        grid = make_grid(64, 100.0, 1700.0)
        rng = np.random.default_rng(7)
        rows = [np.full(64, 10.0) + rng.normal(0, 0.1, 64) for _ in range(2)]
        effects = decompose_baseline(make_group(grid, 2, rows))
        return effects, grid

    def test_all_zero_defective(self):
        effects, _ = self._effects_with_defective(None)
        assert defect_summary(effects, 0.0) == []

    def test_band_labels(self):
        assert band_label(150.0) == "RBM"
        assert band_label(1300.0) == "D-band"
        assert band_label(1580.0) == "G-band"
        assert band_label(1480.0) == "between D and G"
        assert band_label(900.0) == "other"

    def test_g_band_spike_reported(self):
        grid = make_grid(512, 100.0, 1700.0)
        rng = np.random.default_rng(8)
        base = np.full(512, 50.0)
        rows = [base + rng.normal(0, 1.0, 512) for _ in range(4)]
        spike_at = int(np.argmin(np.abs(grid.values - 1580.0)))
        rows[1] = rows[1].copy()
        rows[1][spike_at] += 500.0
        effects = decompose_baseline(make_group(grid, 1, rows))
        entries = defect_summary(effects, threshold=100.0)
        assert len(entries) == 1
        j, band, magnitude = entries[0]
        assert j == 2
        assert band == "G-band"
        assert magnitude > 100.0

    def test_between_band_spike(self):
        grid = make_grid(512, 100.0, 1700.0)
        rng = np.random.default_rng(9)
        base = np.full(512, 50.0)
        rows = [base + rng.normal(0, 1.0, 512) for _ in range(4)]
        spike_at = int(np.argmin(np.abs(grid.values - 1480.0)))
        rows[0] = rows[0].copy()
        rows[0][spike_at] += 500.0
        effects = decompose_baseline(make_group(grid, 1, rows))
        entries = defect_summary(effects, threshold=100.0)
        assert [(j, band) for j, band, _ in entries] == [(1, "between D and G")]
