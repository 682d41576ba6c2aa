"""Orthonormal Haar transform used by the baseline decomposer.

Small and self-contained on purpose: the decomposer only needs an exact
orthogonal transform with perfect reconstruction, and Haar keeps the
coefficient routing easy to reason about.
"""

from __future__ import annotations

import numpy as np

_SQRT2 = np.sqrt(2.0)


def pad_to_pow2(x: np.ndarray) -> tuple[np.ndarray, int]:
    """Symmetrically reflect-pad to the next power of two; returns (padded, n)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    target = 1 << (n - 1).bit_length()
    if target == n:
        return x.copy(), n
    pad = target - n
    # reflect off the right edge; for very short inputs fall back to wrapping
    tail = x[::-1]
    while len(tail) < pad:
        tail = np.concatenate([tail, x, x[::-1]])
    return np.concatenate([x, tail[:pad]]), n


def haar_decompose(x: np.ndarray, levels: int) -> tuple[list[np.ndarray], np.ndarray]:
    """Multi-level Haar analysis: returns ([d1 (finest), d2, ...], approx)."""
    a = np.asarray(x, dtype=float)
    if len(a) & (len(a) - 1):
        raise ValueError(f"length must be a power of two, got {len(a)}")
    details = []
    for _ in range(levels):
        if len(a) < 2:
            break
        even, odd = a[0::2], a[1::2]
        details.append((even - odd) / _SQRT2)
        a = (even + odd) / _SQRT2
    return details, a


def haar_reconstruct(details: list[np.ndarray], approx: np.ndarray) -> np.ndarray:
    """Inverse of haar_decompose."""
    a = np.asarray(approx, dtype=float)
    for d in reversed(details):
        out = np.empty(2 * len(a))
        out[0::2] = (a + d) / _SQRT2
        out[1::2] = (a - d) / _SQRT2
        a = out
    return a


def default_levels(n: int) -> int:
    """Decompose down to an approximation of length ~8."""
    return max(1, int(np.log2(n)) - 3)
