"""Weighted cross-correlation similarity between spectral profiles.

The kernel shared by the consistency and uniformity indices. Lags are
integer grid steps, correlations are plain sums with zero padding outside
the support, and lag weights follow a triangular window of half-width l.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedNormalizationError


@dataclass(frozen=True)
class SimilarityParams:
    """Lag window half-width l (grid steps); lags run over |r| <= l - 1.

    mean_center subtracts each profile's mean before correlating. Off by
    default: centering can create negative lobes and break the [0, 1]
    dissimilarity range for count data.
    """

    l: int = 2
    mean_center: bool = False

    def __post_init__(self):
        if self.l < 1:
            raise ValueError(f"lag window half-width must be >= 1, got {self.l}")


def cross_correlation(a: np.ndarray, b: np.ndarray, r: int) -> float:
    """Sum of a(x) * b(x + r) over all x where both indices are in range."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"profile lengths differ: {a.shape} vs {b.shape}")
    n = len(a)
    if abs(r) >= n:
        raise ValueError(f"|lag| must be < profile length {n}, got {r}")
    if r >= 0:
        return float(np.dot(a[: n - r], b[r:]))
    return float(np.dot(a[-r:], b[: n + r]))


def _windowed_sum(a: np.ndarray, b: np.ndarray, l: int) -> float:
    total = 0.0
    for r in range(-(l - 1), l):
        total += (1.0 - abs(r) / l) * cross_correlation(a, b, r)
    return total


def weighted_similarity(a: np.ndarray, b: np.ndarray,
                        params: SimilarityParams = SimilarityParams()) -> float:
    """Triangular-window weighted cross-correlation similarity.

    S = sum_r w_r c_ab(r) / sqrt(sum_r w_r c_aa(r) * sum_r w_r c_bb(r))
    with w_r = 1 - |r|/l over |r| <= l - 1. Equals 1 for identical
    profiles; lies in [0, 1] for non-negative profiles.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"profile lengths differ: {a.shape} vs {b.shape}")
    if params.l >= len(a):
        raise ValueError(
            f"lag window half-width {params.l} must be < profile length {len(a)}"
        )
    if params.mean_center:
        a = a - a.mean()
        b = b - b.mean()
    saa = _windowed_sum(a, a, params.l)
    sbb = _windowed_sum(b, b, params.l)
    if saa <= 0.0 or sbb <= 0.0:
        raise UndefinedNormalizationError(
            "similarity normalization undefined: a profile has no signal "
            "within the lag window"
        )
    return _windowed_sum(a, b, params.l) / np.sqrt(saa * sbb)


def dissimilarity(a: np.ndarray, b: np.ndarray,
                  params: SimilarityParams = SimilarityParams()) -> float:
    """(S_aa + S_bb - 2 S_ab) / 2, which reduces to 1 - S_ab.

    0 for identical profiles, 1 for profiles with no overlap inside the
    lag window, in between otherwise (for non-negative inputs).
    """
    return 1.0 - weighted_similarity(a, b, params)
