"""Between-sample inconsistency: features, max-margin clustering, index.

Per-sample features are (d_i, D_i): the absolute peak-intensity difference
and the weighted cross-correlation dissimilarity between the sample's
fixed effect and the ideal profile. A two-class max-margin clustering over
the standardized features separates consistent from inconsistent samples,
and the signed margin distances are squashed through a Weibull CDF into a
[0, 1) inconsistency index with a decision threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, InsufficientDataError
from .similarity import SimilarityParams, dissimilarity


@dataclass(frozen=True)
class ConsistencyFeatures:
    """Raw and standardized (d_i, D_i) rows for samples 1..N."""

    sample_indices: tuple[int, ...]
    raw: np.ndarray            # (N, 2): column 0 = d, column 1 = D
    standardized: np.ndarray   # per-column z-score; constant columns -> 0
    column_mean: np.ndarray
    column_scale: np.ndarray   # population stdev; 1.0 recorded for constant columns

    @classmethod
    def from_rows(cls, raw: np.ndarray,
                  sample_indices: tuple[int, ...] | None = None) -> "ConsistencyFeatures":
        raw = np.asarray(raw, dtype=float)
        if raw.ndim != 2 or raw.shape[1] != 2:
            raise ValueError(f"expected an (N, 2) feature matrix, got {raw.shape}")
        if raw.shape[0] < 4:
            raise InsufficientDataError(
                f"clustering needs at least 4 samples, got {raw.shape[0]}"
            )
        mean = raw.mean(axis=0)
        scale = raw.std(axis=0)            # population stdev; see standardization note
        constant = scale == 0.0
        safe_scale = np.where(constant, 1.0, scale)
        standardized = (raw - mean) / safe_scale
        standardized[:, constant] = 0.0
        if sample_indices is None:
            sample_indices = tuple(range(1, raw.shape[0] + 1))
        return cls(tuple(sample_indices), raw, standardized, mean, safe_scale)


def build_features(ideal: np.ndarray, fixed_profiles: list[np.ndarray],
                   params: SimilarityParams = SimilarityParams(),
                   sample_indices: tuple[int, ...] | None = None) -> ConsistencyFeatures:
    """Feature rows z_i = (d_i, D_i) against the ideal profile.

    d_i = |max(ideal) - max(fixed_i)| restores the peak mean-shift signal
    that the similarity normalization dilutes; D_i is the lag-window
    dissimilarity.
    """
    if ideal is None:
        raise InsufficientDataError("an ideal profile is required to build features")
    ideal = np.asarray(ideal, dtype=float)
    rows = np.array([
        [abs(ideal.max() - np.asarray(mu, dtype=float).max()),
         dissimilarity(ideal, mu, params)]
        for mu in fixed_profiles
    ])
    return ConsistencyFeatures.from_rows(rows, sample_indices)


@dataclass(frozen=True)
class MmcResult:
    labels: np.ndarray          # eta in {-1, +1}, -1 = consistent
    weights: np.ndarray         # w, 2-vector in standardized feature space
    offset: float               # b
    decision_values: np.ndarray  # tau_i = |w.z_i + b| / ||w||
    converged: bool
    iterations: int
    diagnostics: str = ""


def _fit_svm(Z: np.ndarray, y: np.ndarray, C: float) -> tuple[np.ndarray, float]:
    """Exact soft-margin linear SVM for fixed labels, as a convex QP.

    minimize ||w||^2 + 2C sum(xi)  s.t.  y_i (w.z_i + b) >= 1 - xi_i, xi >= 0.
    """
    import cvxpy as cp

    n = len(y)
    w = cp.Variable(Z.shape[1])
    b = cp.Variable()
    xi = cp.Variable(n, nonneg=True)
    problem = cp.Problem(
        cp.Minimize(cp.sum_squares(w) + 2.0 * C * cp.sum(xi)),
        [cp.multiply(y, Z @ w + b) >= 1.0 - xi],
    )
    problem.solve(solver=cp.CLARABEL)
    if problem.status not in ("optimal", "optimal_inaccurate"):
        raise DegenerateGeometryError(f"SVM subproblem failed: {problem.status}")
    return np.asarray(w.value, dtype=float), float(b.value)


def _repair_balance(f: np.ndarray, labels: np.ndarray, balance: int) -> np.ndarray:
    """Flip the lowest-confidence points until the class-balance bound holds."""
    labels = labels.copy()
    order = np.argsort(np.abs(f))
    k = 0
    while abs(int(labels.sum())) > balance and k < len(order):
        idx = order[k]
        majority = 1.0 if labels.sum() > 0 else -1.0
        if labels[idx] == majority:
            labels[idx] = -majority
        k += 1
    return labels


def _kmeans2_init(Z: np.ndarray) -> np.ndarray:
    """Two-means with deterministic farthest-pair seeding; labels in {-1, +1}."""
    diff = Z[:, None, :] - Z[None, :, :]
    dist = np.sqrt((diff ** 2).sum(-1))
    i, j = np.unravel_index(int(np.argmax(dist)), dist.shape)
    centers = np.array([Z[i], Z[j]])
    assign = None
    for _ in range(100):
        d2 = ((Z[:, None, :] - centers[None, :, :]) ** 2).sum(-1)
        new_assign = d2.argmin(axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for k in range(2):
            if np.any(assign == k):
                centers[k] = Z[assign == k].mean(axis=0)
    return np.where(assign == 0, -1.0, 1.0)


def mmc_cluster(features: ConsistencyFeatures, C: float = 1000.0,
                balance: int | None = None, max_iterations: int = 100,
                init_labels: np.ndarray | None = None) -> MmcResult:
    """Iterative max-margin clustering of the standardized feature rows.

    Alternates between an exact fixed-label SVM fit and relabeling by the
    sign of the decision function, starting from a deterministic two-means
    partition, until the labels stabilize. Signs are canonicalized so the
    cluster with the smaller mean standardized-feature norm is -1
    (consistent).
    """
    Z = features.standardized
    n = Z.shape[0]
    if balance is None:
        balance = n - 2
    if np.max(np.abs(Z - Z[0])) < 1e-12:
        raise DegenerateGeometryError(
            "all feature rows are identical; no cluster structure to separate"
        )
    labels = _kmeans2_init(Z) if init_labels is None else np.asarray(init_labels, float)
    labels = _repair_balance(np.zeros(n), labels, balance)

    converged = False
    iterations = 0
    w = np.zeros(Z.shape[1])
    b = 0.0
    for iterations in range(1, max_iterations + 1):
        w, b = _fit_svm(Z, labels, C)
        f = Z @ w + b
        new_labels = np.where(f >= 0.0, 1.0, -1.0)
        new_labels = _repair_balance(f, new_labels, balance)
        if np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels

    diagnostics = ""
    if not converged:
        diagnostics = f"labels did not stabilize within {max_iterations} iterations"
    if abs(int(labels.sum())) > balance:
        converged = False
        diagnostics = (f"class balance |sum(labels)| = {abs(int(labels.sum()))} "
                       f"exceeds bound {balance} at termination")

    # canonical orientation: the tighter cluster is the consistent one
    norms = np.linalg.norm(Z, axis=1)
    pos, neg = labels == 1.0, labels == -1.0
    if pos.any() and neg.any() and norms[pos].mean() < norms[neg].mean():
        labels, w, b = -labels, -w, -b

    tau = np.abs(Z @ w + b) / np.linalg.norm(w)
    return MmcResult(labels, w, b, tau, converged, iterations, diagnostics)


@dataclass(frozen=True)
class InconsistencyIndex:
    values: np.ndarray          # C_i in [0, 1)
    threshold: float            # decision-surface threshold Delta
    shape: float                # rho
    scale: float                # lambda
    signed_distances: np.ndarray  # s_i = eta_i * tau_i


def inconsistency_index(mmc: MmcResult, shape: float = 5.0,
                        scale: float = 2.0) -> InconsistencyIndex:
    """Weibull-CDF transform of the signed margin distances.

    s_i = eta_i * tau_i (negative on the consistent side), m = min s_i:
    C_i = 1 - exp(-((s_i - m)/scale)^shape), so the most consistent sample
    scores exactly 0 and C grows monotonically toward 1 across the margin.
    The threshold Delta = 1 - exp(-((-m)/scale)^shape) is the index value
    of a point sitting on the decision surface.
    """
    if shape <= 1.0:
        raise ValueError(f"shape parameter must be > 1, got {shape}")
    if scale <= 0.0:
        raise ValueError(f"scale parameter must be > 0, got {scale}")
    s = mmc.labels * mmc.decision_values
    m = float(s.min())
    values = 1.0 - np.exp(-(((s - m) / scale) ** shape))
    threshold = 1.0 - np.exp(-(((-m) / scale) ** shape)) if m < 0.0 else 0.0
    return InconsistencyIndex(values, threshold, shape, scale, s)
