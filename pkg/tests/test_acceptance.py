"""Acceptance gate: one pass/fail line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
print. Each criterion is a standalone test; tolerances are pinned inline.
"""

import json
import time

import numpy as np
import pytest

from case_study import (
    DISSIMILARITY,
    INCONSISTENCY_THRESHOLD,
    MAX_INTENSITY_DIFF,
    OVERALL_QUALITY,
)
from conftest import make_dataset, write_spectra_csv
from ramanqc.cli import main
from ramanqc.consistency import (
    ConsistencyFeatures,
    build_features,
    inconsistency_index,
    mmc_cluster,
)
from ramanqc.decomposition import decompose_baseline
from ramanqc.design import is_latin_hypercube, maximin_lhd, random_lhd
from ramanqc.charts import cusum, estimate_in_control, ewma
from ramanqc.quality import overall_quality, rank_and_flag
from ramanqc.similarity import SimilarityParams, dissimilarity, weighted_similarity
from ramanqc.spectra import RamanProfile, SampleGroup, ShiftGrid
from ramanqc.uniformity import similarity_matrix, uniformity_index
from test_similarity import naive_similarity


def check(criterion, ok):
    print(f"{'PASS' if ok else 'FAIL'} {criterion}")
    assert ok, criterion


def reference_index():
    rows = np.column_stack([MAX_INTENSITY_DIFF, DISSIMILARITY])
    result = mmc_cluster(ConsistencyFeatures.from_rows(rows))
    return result, inconsistency_index(result, shape=5.0, scale=2.0)


class TestCriterion1:
    def test_reference_clustering_reproduction(self):
        reference_index()  # warm up the solver imports before timing
        start = time.perf_counter()
        result, index = reference_index()
        elapsed = time.perf_counter() - start
        C = index.values
        flagged = [i + 1 for i, label in enumerate(result.labels) if label > 0]

        ok = flagged == [9, 10]
        # ascending order 1 <= 8 <= 7 <= 6 <= 2 <= 5 <= {3,4} < 9 < 10
        chain = [C[0], C[7], C[6], C[5], C[1], C[4]]
        ok &= bool(np.all(np.diff(chain) >= -1e-12))
        ok &= abs(C[2] - C[3]) < 0.01 and min(C[2], C[3]) >= C[4] - 1e-12
        ok &= max(C[2], C[3]) < C[8] < C[9]
        ok &= abs(C[8] - 0.68565) <= 0.15
        ok &= abs(C[9] - 0.99989) <= 0.05
        ok &= abs(index.threshold - INCONSISTENCY_THRESHOLD) <= 0.10
        ok &= elapsed < 1.0
        check("criterion 1: reference ten-sample clustering "
              f"(C9={C[8]:.5f}, C10={C[9]:.5f}, "
              f"threshold={index.threshold:.5f}, {elapsed * 1e3:.0f} ms)", ok)


class TestCriterion2:
    def test_chart_signal_pattern(self):
        # full-series baseline estimation reproduces the reference values
        # exactly; it is the estimator the acceptance run uses
        mu_d, s_d = estimate_in_control(MAX_INTENSITY_DIFF)
        mu_D, s_D = estimate_in_control(DISSIMILARITY)
        tabular = cusum(MAX_INTENSITY_DIFF, mu_d, s_d, k=0.5, h=5.0)
        smooth = ewma(DISSIMILARITY, mu_D, s_D, weight=0.2, width=3.0)
        ok = tabular.signals == (10,)
        ok &= smooth.signals == (2,)
        check("criterion 2: cumulative-sum signal only at sample 10, "
              "smoothed-chart signal at sample 2", ok)

    @pytest.mark.xfail(
        strict=True,
        reason="no estimator fed only samples 1-8 yields this signal "
               "pattern: the first-series sigma it implies puts the "
               "cumulative sum over its limit at sample 9 already, while "
               "the second-series sigma is too wide for any signal at "
               "sample 2 (see the decisions ledger)")
    def test_chart_signal_pattern_prefix_estimation(self):
        mu_d, s_d = estimate_in_control(MAX_INTENSITY_DIFF, baseline=8)
        mu_D, s_D = estimate_in_control(DISSIMILARITY, baseline=8)
        tabular = cusum(MAX_INTENSITY_DIFF, mu_d, s_d, k=0.5, h=5.0)
        smooth = ewma(DISSIMILARITY, mu_D, s_D, weight=0.2, width=3.0)
        assert tabular.signals == (10,)
        assert smooth.signals == (2,)


class TestCriterion3:
    def test_reference_score_flagging(self):
        # the source decomposition tool is unavailable, so the criterion
        # runs in its downgraded form: the published per-material overall
        # scores are pushed through the flagging stage unchanged
        expected = {"raw": {2, 5}, "acid": {2, 5}, "functionalized": {2, 4}}
        ok = True
        for material, scores in OVERALL_QUALITY.items():
            report = rank_and_flag([1, 2, 3, 4, 5], np.array(scores),
                                   np.zeros(5), w1=1.0, q_threshold=0.5)
            flagged = {s.sample_index for s in report.samples if s.low_quality}
            ok &= flagged == expected[material]
        check("criterion 3: reference scores flag raw {2,5}, acid {2,5}, "
              "functionalized {2,4} (downgraded: external effects "
              "unavailable)", ok)

    def test_overall_rank_from_external_effects(self):
        pytest.skip("externally decomposed effects for the ten-sample run "
                    "are not distributed with this repository; the overall "
                    "rank assertion applies only to that input")


class TestCriterion4:
    def test_similarity_oracle_suite(self):
        rng = np.random.default_rng(2024)
        checked = 0
        ok = True
        while checked < 1000:
            n = int(rng.integers(5, 33))
            lag = int(rng.integers(1, 5))
            a = rng.random(n) * rng.choice([0.1, 1.0, 100.0])
            b = rng.random(n)
            params = SimilarityParams(lag)
            s = weighted_similarity(a, b, params)
            ok &= abs(s - naive_similarity(a, b, lag)) < 1e-9
            ok &= abs(weighted_similarity(a, a, params) - 1.0) < 1e-12
            scale = float(rng.uniform(0.01, 50.0))
            ok &= abs(weighted_similarity(a * scale, b, params) - s) < 1e-9
            ok &= 0.0 <= dissimilarity(a, b, params) <= 1.0
            checked += 1
        check(f"criterion 4: {checked} random profiles match the "
              "triple-loop oracle (1e-9), self-similarity 1 (1e-12), "
              "scale-invariant (1e-9), dissimilarity in [0,1]", ok)


class TestCriterion5:
    def test_index_property_suite(self):
        result, index = reference_index()
        C = index.values
        ok = bool(np.all((C >= 0.0) & (C < 1.0)))
        ok &= int(np.sum(C == 0.0)) == 1
        for label, value in zip(result.labels, C):
            ok &= (label > 0) == (value > index.threshold)

        identical = np.tile(np.linspace(1, 4, 16), (4, 1))
        ok &= uniformity_index(similarity_matrix(identical)) == pytest.approx(
            0.0, abs=1e-12)

        rng = np.random.default_rng(5)
        profiles = rng.random((5, 16))
        base = uniformity_index(similarity_matrix(profiles))
        for _ in range(4):
            perm = rng.permutation(5)
            ok &= uniformity_index(
                similarity_matrix(profiles[perm])) == pytest.approx(
                    base, abs=1e-12)

        for _ in range(100):
            c, u, w1 = rng.random(3)
            ok &= overall_quality(c, u, w1) == w1 * c + (1 - w1) * u
        ok &= overall_quality(0.5, 0.2, 0.3) == pytest.approx(0.29, abs=1e-15)
        check("criterion 5: index ranges, exactly-one-zero, label/threshold "
              "coherence, uniformity invariances, exact convex combination, "
              "0.3*0.5+0.7*0.2=0.29", ok)


class TestCriterion6:
    def test_reconstruction_and_spike_capture(self):
        rng = np.random.default_rng(6)
        grid_values = np.linspace(100.0, 1700.0, 64)
        grid = ShiftGrid(grid_values)

        recon_ok = True
        for _ in range(20):
            rows = [rng.random(64) * 200 for _ in range(4)]
            group = SampleGroup(1, tuple(
                RamanProfile(grid, r, 1, j + 1) for j, r in enumerate(rows)))
            effects = decompose_baseline(group)
            recon_ok &= bool(np.allclose(
                effects.reconstruct(), np.vstack(rows), atol=1e-9))

        captured = 0
        trials = 200
        sigma = 1.0
        for _ in range(trials):
            base = np.full(64, 100.0)
            rows = [base + rng.normal(0, sigma, 64) for _ in range(4)]
            j = int(rng.integers(4))
            x = int(rng.integers(64))
            amplitude = float(rng.uniform(20.0, 60.0)) * sigma
            rows[j] = rows[j].copy()
            rows[j][x] += amplitude
            group = SampleGroup(1, tuple(
                RamanProfile(grid, r, 1, m + 1) for m, r in enumerate(rows)))
            effects = decompose_baseline(group)
            if abs(effects.defective[j, x]) >= 0.5 * amplitude:
                captured += 1
        rate = captured / trials
        ok = recon_ok and rate >= 0.99
        check("criterion 6: components sum back within 1e-9; "
              f">=20-sigma spikes captured in {rate:.1%} of {trials} trials",
              ok)


class TestCriterion7:
    def test_space_filling_design_suite(self):
        rng = np.random.default_rng(7)
        ok = True
        for n, dims in [(4, 1), (10, 2), (16, 3), (64, 2)]:
            seed = int(rng.integers(1000))
            plan = maximin_lhd(n, dims, iters=300, seed=seed)
            ok &= is_latin_hypercube(plan.points)
            start = random_lhd(n, dims, np.random.default_rng((seed, 0)))
            diff = start[:, None, :] - start[None, :, :]
            pre = np.sqrt((diff ** 2).sum(-1))[np.triu_indices(n, k=1)].min()
            ok &= plan.score >= pre
        two = maximin_lhd(2, dims=2, iters=50, seed=0)
        ok &= abs(two.score - np.sqrt(0.5)) < 1e-9
        check("criterion 7: Latin projection for all plans, search never "
              "below its random start, two-point optimum 0.70711 (1e-9)", ok)


class TestCriterion8:
    def test_byte_identical_cli_reports(self, tmp_path):
        spectra = tmp_path / "spectra.csv"
        write_spectra_csv(
            make_dataset(n_samples=6, n_obs=4, seed=3, shifted_samples=(6,)),
            spectra)
        blobs = []
        for name in ("first", "second"):
            out = tmp_path / name
            main(["assess", "--input", str(spectra), "--out", str(out)])
            blobs.append((out / "report.json").read_bytes())
        ok = blobs[0] == blobs[1] and len(blobs[0]) > 0
        json.loads(blobs[0])  # well-formed
        check("criterion 8: repeated CLI runs emit byte-identical JSON", ok)
