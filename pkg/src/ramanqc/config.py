"""Run configuration: case-study defaults, JSON round-trip, config hash."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path


@dataclass
class RunConfig:
    """Pipeline parameters. Defaults match the reference case study."""

    lag_window: int = 2            # similarity lag half-width l
    shape: float = 5.0             # Weibull shape rho
    scale: float = 2.0             # Weibull scale lambda
    w1: float = 0.3                # consistency weight in the composite score
    q_threshold: float = 0.5       # composite score flag level
    u_threshold: float = 0.5       # uniformity flag level
    svm_c: float = 1000.0          # SVM regularization
    balance: int | None = None     # class-balance bound (None -> N - 2)
    delta_override: float | None = None  # frozen inconsistency threshold
    defect_threshold: float = 0.0  # defective-profile magnitude flag level
    mean_center: bool = False
    # control charts
    cusum_k: float = 0.5
    cusum_h: float = 5.0
    ewma_weight: float = 0.2
    ewma_width: float = 3.0
    chart_baseline: int | None = None  # in-control prefix length (None -> all)

    @classmethod
    def from_json(cls, path: str | Path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]
