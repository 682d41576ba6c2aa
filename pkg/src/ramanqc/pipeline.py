"""End-to-end assessment: effects -> indices -> report."""

from __future__ import annotations

import numpy as np

from .config import RunConfig
from .consistency import build_features, inconsistency_index, mmc_cluster
from .decomposition import DecomposedEffects, decompose_baseline, defect_summary
from .errors import DegenerateGeometryError, InsufficientDataError
from .quality import QualityReport, rank_and_flag
from .similarity import SimilarityParams
from .spectra import Dataset
from .uniformity import uniformity


def effects_from_dataset(dataset: Dataset) -> list[DecomposedEffects]:
    """Run the baseline decomposer over every sample group."""
    return [decompose_baseline(group) for group in dataset.samples]


def assess(effects: list[DecomposedEffects], ideal: np.ndarray,
           config: RunConfig = RunConfig(),
           provenance: dict | None = None) -> QualityReport:
    """Compute inconsistency, uniformity, and composite quality per sample.

    `ideal` is the reference fixed-effect profile the consistency features
    compare against. When every sample matches the ideal exactly the
    clustering has nothing to separate; that degenerate case maps to all
    indices zero rather than an error.
    """
    if not effects:
        raise InsufficientDataError("no decomposed effects to assess")
    params = SimilarityParams(config.lag_window, config.mean_center)
    sample_indices = [e.sample_index for e in effects]
    n = len(effects)

    features = build_features(
        ideal, [e.fixed for e in effects], params, tuple(sample_indices))
    try:
        mmc = mmc_cluster(features, C=config.svm_c, balance=config.balance)
        index = inconsistency_index(mmc, config.shape, config.scale)
        c_values = index.values
        labels = mmc.labels
        delta = index.threshold
    except DegenerateGeometryError:
        c_values = np.zeros(n)
        labels = -np.ones(n)
        delta = None

    # mutual similarity runs over the denoised observation profiles
    # (fixed + normal); spikes and noise are already split off
    u_values = np.array([
        uniformity(e.sample_index, e.fixed[None, :] + e.normal, params).value
        for e in effects
    ])

    defective = {
        e.sample_index for e in effects
        if defect_summary(e, config.defect_threshold)
    }
    threshold = config.delta_override if config.delta_override is not None else delta
    return rank_and_flag(
        sample_indices, c_values, u_values,
        labels=labels,
        inconsistency_threshold=threshold,
        defective_samples=defective,
        w1=config.w1,
        q_threshold=config.q_threshold,
        u_threshold=config.u_threshold,
        parameters={
            "lag_window": config.lag_window,
            "shape": config.shape,
            "scale": config.scale,
            "svm_c": config.svm_c,
        },
        provenance=provenance,
    )
