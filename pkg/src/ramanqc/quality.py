"""Composite quality score, ranking, flags, and report assembly."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


def overall_quality(consistency: float, uniformity: float, w1: float = 0.3) -> float:
    """Convex combination Q = w1 * C + (1 - w1) * U; lower is better."""
    if not 0.0 <= w1 <= 1.0:
        raise ValueError(f"weight w1 must lie in [0, 1], got {w1}")
    return w1 * consistency + (1.0 - w1) * uniformity


@dataclass(frozen=True)
class SampleAssessment:
    sample_index: int
    inconsistency: float
    uniformity: float
    quality: float
    inconsistent: bool
    nonuniform: bool
    defective: bool
    low_quality: bool


@dataclass(frozen=True)
class QualityReport:
    samples: tuple[SampleAssessment, ...]
    ranking: tuple[int, ...]             # sample indices, best (lowest Q) first
    parameters: dict
    provenance: dict = field(default_factory=dict)
    inconsistency_threshold: float | None = None

    def any_low_quality(self) -> bool:
        return any(s.low_quality for s in self.samples)

    def to_dict(self) -> dict:
        return {
            "samples": [
                {
                    "sample": s.sample_index,
                    "inconsistency": s.inconsistency,
                    "uniformity": s.uniformity,
                    "quality": s.quality,
                    "flags": {
                        "inconsistent": s.inconsistent,
                        "nonuniform": s.nonuniform,
                        "defective": s.defective,
                        "low_quality": s.low_quality,
                    },
                }
                for s in self.samples
            ],
            "ranking": list(self.ranking),
            "inconsistency_threshold": self.inconsistency_threshold,
            "parameters": self.parameters,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [
            f"{'sample':>6} {'inconsistency':>14} {'uniformity':>11} "
            f"{'quality':>8}  flags"
        ]
        for s in self.samples:
            flags = ",".join(name for name, on in [
                ("inconsistent", s.inconsistent), ("nonuniform", s.nonuniform),
                ("defective", s.defective), ("low_quality", s.low_quality)] if on)
            lines.append(
                f"{s.sample_index:>6} {s.inconsistency:>14.5f} "
                f"{s.uniformity:>11.5f} {s.quality:>8.5f}  {flags or '-'}"
            )
        lines.append("ranking (best to worst): " +
                     ", ".join(str(i) for i in self.ranking))
        return "\n".join(lines)


def rank_and_flag(sample_indices: list[int],
                  inconsistency: np.ndarray,
                  uniformity: np.ndarray,
                  *,
                  labels: np.ndarray | None = None,
                  inconsistency_threshold: float | None = None,
                  defective_samples: set[int] = frozenset(),
                  w1: float = 0.3,
                  q_threshold: float = 0.5,
                  u_threshold: float = 0.5,
                  parameters: dict | None = None,
                  provenance: dict | None = None) -> QualityReport:
    """Assemble the per-sample report: Q scores, ascending ranking, flags.

    Ties in Q break toward the lower sample index. low_quality is
    Q > q_threshold; inconsistent comes from the clustering labels when
    given, otherwise from C > inconsistency_threshold.
    """
    inconsistency = np.asarray(inconsistency, dtype=float)
    uniformity = np.asarray(uniformity, dtype=float)
    q = np.array([overall_quality(c, u, w1)
                  for c, u in zip(inconsistency, uniformity)])

    assessments = []
    for pos, idx in enumerate(sample_indices):
        if labels is not None:
            inconsistent = bool(labels[pos] > 0)
        elif inconsistency_threshold is not None:
            inconsistent = bool(inconsistency[pos] > inconsistency_threshold)
        else:
            inconsistent = False
        assessments.append(SampleAssessment(
            sample_index=idx,
            inconsistency=float(inconsistency[pos]),
            uniformity=float(uniformity[pos]),
            quality=float(q[pos]),
            inconsistent=inconsistent,
            nonuniform=bool(uniformity[pos] > u_threshold),
            defective=idx in defective_samples,
            low_quality=bool(q[pos] > q_threshold),
        ))

    order = sorted(range(len(sample_indices)),
                   key=lambda pos: (q[pos], sample_indices[pos]))
    params = {"w1": w1, "q_threshold": q_threshold, "u_threshold": u_threshold}
    if parameters:
        params.update(parameters)
    return QualityReport(
        samples=tuple(assessments),
        ranking=tuple(sample_indices[pos] for pos in order),
        parameters=params,
        provenance=provenance or {},
        inconsistency_threshold=inconsistency_threshold,
    )
