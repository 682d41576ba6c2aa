"""Within-sample uniformity from mutual similarities of normal effects."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError
from .similarity import SimilarityParams, weighted_similarity


@dataclass(frozen=True)
class UniformityResult:
    sample_index: int
    matrix: np.ndarray      # (n_obs, n_obs) mutual similarities, unit diagonal
    row_means: np.ndarray
    value: float            # lower is more uniform


def _pair_similarity(a: np.ndarray, b: np.ndarray, params: SimilarityParams) -> float:
    # All-zero normal effects arise from perfectly uniform samples: treat
    # zero-vs-zero as identical (1) and zero-vs-signal as disjoint (0)
    # instead of failing on the undefined normalization.
    a_zero = not np.any(a)
    b_zero = not np.any(b)
    if a_zero or b_zero:
        return 1.0 if (a_zero and b_zero) else 0.0
    return weighted_similarity(a, b, params)


def similarity_matrix(normal_effects: np.ndarray,
                      params: SimilarityParams = SimilarityParams()) -> np.ndarray:
    """Mutual weighted similarities between a sample's normal effects.

    Input rows are the per-observation normal-effect profiles. The matrix
    is symmetric with unit diagonal.
    """
    profiles = np.asarray(normal_effects, dtype=float)
    n_obs = profiles.shape[0]
    if n_obs < 2:
        raise InsufficientDataError(
            f"uniformity needs >= 2 observations, got {n_obs}"
        )
    S = np.ones((n_obs, n_obs))
    for j in range(n_obs):
        for k in range(j + 1, n_obs):
            S[j, k] = S[k, j] = _pair_similarity(profiles[j], profiles[k], params)
    return S


def uniformity_index(S: np.ndarray, include_diagonal: bool = True) -> float:
    """Mean row-wise sample standard deviation of the similarity matrix.

    U = (1/n) sum_j sqrt( sum_k (S_jk - mean_j)^2 / (n - 1) ), with the
    k-sum running over the full row including k = j. Zero iff every row is
    constant (identical observations); bounded by 1 for matrices with
    entries in [0, 1].

    include_diagonal=False drops the k = j term from each row (a
    sensitivity-study variant, not the reported definition).
    """
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    if S.ndim != 2 or S.shape[1] != n:
        raise ValueError(f"similarity matrix must be square, got {S.shape}")
    if n < 2:
        raise ValueError("sample standard deviation undefined for n < 2")
    if include_diagonal:
        return float(np.std(S, axis=1, ddof=1).mean())
    off = S[~np.eye(n, dtype=bool)].reshape(n, n - 1)
    if n < 3:
        raise ValueError("off-diagonal variant needs >= 3 observations")
    return float(np.std(off, axis=1, ddof=1).mean())


def uniformity(sample_index: int, normal_effects: np.ndarray,
               params: SimilarityParams = SimilarityParams(),
               include_diagonal: bool = True) -> UniformityResult:
    """Similarity matrix plus index for one sample's normal effects."""
    S = similarity_matrix(normal_effects, params)
    return UniformityResult(
        sample_index=sample_index,
        matrix=S,
        row_means=S.mean(axis=1),
        value=uniformity_index(S, include_diagonal),
    )
