"""Maximin Latin hypercube designs for measurement-point placement."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class SamplingPlan:
    points: np.ndarray   # (n, dims) in [0, 1]^dims, stratum-centered per axis
    score: float         # minimum pairwise Euclidean distance
    seed: int

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dims(self) -> int:
        return self.points.shape[1]


def _min_pairwise_distance(points: np.ndarray) -> float:
    if len(points) < 2:
        return float("inf")
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff ** 2).sum(-1))
    return float(dist[np.triu_indices(len(points), k=1)].min())


def is_latin_hypercube(points: np.ndarray) -> bool:
    """Each axis projection puts exactly one point per stratum [(t-1)/n, t/n)."""
    n = len(points)
    strata = np.floor(points * n).astype(int)
    strata = np.clip(strata, 0, n - 1)
    return all(len(set(strata[:, axis])) == n for axis in range(points.shape[1]))


def random_lhd(n: int, dims: int, rng: np.random.Generator) -> np.ndarray:
    """Independent per-axis permutations, points at stratum centers."""
    return np.column_stack([
        (rng.permutation(n) + 0.5) / n for _ in range(dims)
    ])


def maximin_lhd(n: int, dims: int = 2, iters: int = 2000,
                seed: int = 0, restarts: int = 1) -> SamplingPlan:
    """Maximin Latin hypercube via swap-based hill climbing.

    Starts from a random LHD and proposes coordinate swaps between two
    points on one axis, accepting only strict improvements of the minimum
    pairwise distance; the LHD projection property is preserved by
    construction. Deterministic for a given seed. With restarts > 1 the
    best plan wins (score, then lexicographic point order).
    """
    if n < 1 or dims < 1:
        raise ValueError("n and dims must be >= 1")
    best: SamplingPlan | None = None
    for restart in range(restarts):
        rng = np.random.default_rng((seed, restart))
        points = random_lhd(n, dims, rng)
        score = _min_pairwise_distance(points)
        if n >= 2:
            for _ in range(iters):
                axis = int(rng.integers(dims))
                i, j = rng.choice(n, size=2, replace=False)
                points[i, axis], points[j, axis] = points[j, axis], points[i, axis]
                new_score = _min_pairwise_distance(points)
                if new_score > score:
                    score = new_score
                else:
                    points[i, axis], points[j, axis] = points[j, axis], points[i, axis]
        candidate = SamplingPlan(points, score, seed)
        if best is None or (candidate.score, (-candidate.points).ravel().tolist()) > (
                best.score, (-best.points).ravel().tolist()):
            best = candidate
    return best


def write_plan(plan: SamplingPlan, path: str | Path, sample_index: int = 1) -> None:
    """Emit the plan as a positions CSV (sample,observation,u,v for 2-D)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if plan.dims == 2:
            writer.writerow(["sample", "observation", "u", "v"])
        else:
            writer.writerow(["sample", "observation"] +
                            [f"x{d + 1}" for d in range(plan.dims)])
        for j, point in enumerate(plan.points, start=1):
            writer.writerow([sample_index, j] + [repr(float(c)) for c in point])
